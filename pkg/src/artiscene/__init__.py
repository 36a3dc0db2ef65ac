"""artiscene: annotated indoor-scene meshes to simulation-ready articulated
scene descriptions.

The package is organized by pipeline stage:

* ``geometry``: meshes, point clouds, PLY I/O, downsampling, decimation,
  plane fitting
* ``segmentation``: graph-based mesh oversegmentation and segmentation
  agreement
* ``annotation``: the part/articulation data model, heuristics that propose
  annotations, connectivity validation and dataset statistics
* ``usd``: a strict text scene-description format with joints and fixtures
* ``kinematics``: joint transforms, scene posing and object placement
* ``evaluation``: losses, articulated detection metrics and reports
* ``cli``: the ``artiscene`` command-line entry point
"""

__version__ = "0.1.0"
