import pytest

from artiscene.fixtures import generate_scene


@pytest.fixture(scope="session")
def room():
    """The canonical seed-0 synthetic scene, shared read-only."""
    return generate_scene(0)
