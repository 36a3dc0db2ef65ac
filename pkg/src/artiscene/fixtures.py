"""Deterministic synthetic scenes with known ground truth.

A generated scene is a boxy room holding a cabinet (hinged door with a
handle, sliding drawer), a bed with a densely sampled top surface, and a
ceiling light that proposes as a fixture. Every quantity derives from the
seed, so two runs with the same seed produce identical bytes on disk.

The module also exposes the small procedural meshes the test-suite and the
demo scripts share (subdivided cube, icosphere, noisy planar cloud).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .annotation.model import (
    Articulation,
    Fixture,
    ObjectInstance,
    PartSegment,
    SceneAnnotation,
)
from .annotation.suggest import propose_fixtures
from .evaluation.instances import GtInstance, InstancePrediction
from .geometry import TriMesh, unit

# box corner i has coordinates (x[i>>2 & 1], y[i>>1 & 1], z[i & 1])
_BOX_FACES = np.array([
    [0, 1, 3], [0, 3, 2],  # -x
    [4, 6, 7], [4, 7, 5],  # +x
    [0, 4, 5], [0, 5, 1],  # -y
    [2, 3, 7], [2, 7, 6],  # +y
    [0, 2, 6], [0, 6, 4],  # -z
    [1, 5, 7], [1, 7, 3],  # +z
], dtype=np.int64)


class _SceneBuilder:
    def __init__(self):
        self.vertices: list[list[float]] = []
        self.faces: list[list[int]] = []

    def add_mesh(self, verts: np.ndarray, faces: np.ndarray) -> tuple[range, range]:
        v0, f0 = len(self.vertices), len(self.faces)
        self.vertices.extend(np.asarray(verts, float).tolist())
        self.faces.extend((np.asarray(faces, np.int64) + v0).tolist())
        return range(v0, len(self.vertices)), range(f0, len(self.faces))

    def add_box(self, center, size) -> tuple[range, range]:
        c = np.asarray(center, float)
        h = 0.5 * np.asarray(size, float)
        corners = np.array([
            [c[0] + (1 if i & 4 else -1) * h[0],
             c[1] + (1 if i & 2 else -1) * h[1],
             c[2] + (1 if i & 1 else -1) * h[2]] for i in range(8)
        ])
        return self.add_mesh(corners, _BOX_FACES)

    def build(self) -> TriMesh:
        return TriMesh(np.asarray(self.vertices, float),
                       np.asarray(self.faces, np.int64))


def grid_patch(x0, x1, y0, y1, z, nx: int, ny: int) -> tuple[np.ndarray, np.ndarray]:
    """Triangulated horizontal rectangle with (nx+1)(ny+1) vertices."""
    xs = np.linspace(x0, x1, nx + 1)
    ys = np.linspace(y0, y1, ny + 1)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    verts = np.column_stack([gx.ravel(), gy.ravel(), np.full(gx.size, float(z))])
    faces = []
    for i in range(nx):
        for j in range(ny):
            a = i * (ny + 1) + j
            b = a + (ny + 1)
            faces.append([a, b, b + 1])
            faces.append([a, b + 1, a + 1])
    return verts, np.asarray(faces, np.int64)


def cube_mesh(n: int = 4, side: float = 1.0) -> TriMesh:
    """Axis-aligned cube, each face an n x n grid, shared edge vertices."""
    if n < 1:
        raise ValueError("n must be at least 1")
    h = side / 2.0
    ticks = np.linspace(-h, h, n + 1)
    index: dict[tuple[float, float, float], int] = {}
    verts: list[tuple[float, float, float]] = []
    faces: list[list[int]] = []

    def vid(p) -> int:
        key = (round(float(p[0]), 12), round(float(p[1]), 12), round(float(p[2]), 12))
        if key not in index:
            index[key] = len(verts)
            verts.append(key)
        return index[key]

    # (fixed axis, sign); u/v axes chosen so the winding faces outward
    for axis, sign in ((0, -1), (0, 1), (1, -1), (1, 1), (2, -1), (2, 1)):
        u_axis, v_axis = [a for a in range(3) if a != axis]
        for i in range(n):
            for j in range(n):
                quad = []
                for du, dv in ((0, 0), (1, 0), (1, 1), (0, 1)):
                    p = [0.0, 0.0, 0.0]
                    p[axis] = sign * h
                    p[u_axis] = ticks[i + du]
                    p[v_axis] = ticks[j + dv]
                    quad.append(vid(p))
                a, b, c, d = quad
                if sign > 0:
                    faces.append([a, b, c])
                    faces.append([a, c, d])
                else:
                    faces.append([a, c, b])
                    faces.append([a, d, c])
    return TriMesh(np.asarray(verts, float), np.asarray(faces, np.int64))


def icosphere(subdivisions: int = 3, radius: float = 1.0) -> TriMesh:
    """Geodesic sphere from a subdivided icosahedron (20 * 4^s faces)."""
    phi = (1.0 + np.sqrt(5.0)) / 2.0
    raw = np.array([
        [-1, phi, 0], [1, phi, 0], [-1, -phi, 0], [1, -phi, 0],
        [0, -1, phi], [0, 1, phi], [0, -1, -phi], [0, 1, -phi],
        [phi, 0, -1], [phi, 0, 1], [-phi, 0, -1], [-phi, 0, 1],
    ], dtype=float)
    verts = [v / np.linalg.norm(v) for v in raw]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    for _ in range(subdivisions):
        cache: dict[tuple[int, int], int] = {}

        def midpoint(a: int, b: int) -> int:
            key = (a, b) if a < b else (b, a)
            if key not in cache:
                m = verts[a] + verts[b]
                verts.append(m / np.linalg.norm(m))
                cache[key] = len(verts) - 1
            return cache[key]

        nxt = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            nxt += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = nxt
    return TriMesh(radius * np.asarray(verts), np.asarray(faces, np.int64))


def noisy_plane_cloud(seed: int, n: int = 600, sigma: float = 0.002,
                      normal=(0.0, 0.0, 1.0), offset: float = 0.0,
                      n_outliers: int = 60) -> np.ndarray:
    """Points on the plane normal . p = offset with Gaussian off-plane noise
    plus uniform volumetric outliers."""
    rng = np.random.default_rng(seed)
    nrm = unit(np.asarray(normal, float))
    # in-plane basis
    helper = np.array([1.0, 0.0, 0.0])
    if abs(nrm[0]) > 0.9:
        helper = np.array([0.0, 1.0, 0.0])
    u = unit(np.cross(nrm, helper))
    v = np.cross(nrm, u)
    uv = rng.uniform(-1.0, 1.0, size=(n, 2))
    pts = offset * nrm + uv[:, :1] * u + uv[:, 1:] * v
    pts = pts + rng.normal(0.0, sigma, size=(n, 1)) * nrm
    out = offset * nrm + rng.uniform(-1.0, 1.0, size=(n_outliers, 3))
    return np.vstack([pts, out])


@dataclass(frozen=True)
class SceneFixture:
    """A generated scene and every ground-truth view of it."""

    mesh: TriMesh
    annotation: SceneAnnotation
    gt_instances: tuple[GtInstance, ...]
    predictions: tuple[InstancePrediction, ...]
    door_axis_line: tuple[tuple[float, float, float], tuple[float, float, float]]


def _vertex_mask(builder_range: range, faces: np.ndarray) -> tuple[int, ...]:
    used = np.unique(faces[list(builder_range)].reshape(-1))
    return tuple(int(i) for i in used)


def generate_scene(seed: int = 0) -> SceneFixture:
    """Build the canonical synthetic room for this seed."""
    rng = np.random.default_rng(seed)
    b = _SceneBuilder()

    room_w, room_d, room_h = 4.0, 4.0, 2.5
    _, floor_f = b.add_box((room_w / 2, room_d / 2, -0.05), (room_w, room_d, 0.1))
    # dense walking surface and ceiling underside so nearest-vertex queries
    # (fixture attachment, plane fits) see more than 8 box corners
    fg_v, fg_f = grid_patch(0.0, room_w, 0.0, room_d, 0.0, 32, 32)
    _, floor_grid_f = b.add_mesh(fg_v, fg_f)
    _, ceil_f = b.add_box((room_w / 2, room_d / 2, room_h + 0.05), (room_w, room_d, 0.1))
    cg_v, cg_f = grid_patch(0.0, room_w, 0.0, room_d, room_h, 32, 32)
    _, ceil_grid_f = b.add_mesh(cg_v, cg_f[:, ::-1])
    _, ww_f = b.add_box((-0.05, room_d / 2, room_h / 2), (0.1, room_d, room_h))
    _, we_f = b.add_box((room_w + 0.05, room_d / 2, room_h / 2), (0.1, room_d, room_h))
    _, ws_f = b.add_box((room_w / 2, -0.05, room_h / 2), (room_w, 0.1, room_h))
    _, wn_f = b.add_box((room_w / 2, room_d + 0.05, room_h / 2), (room_w, 0.1, room_h))

    # cabinet against the south wall, jittered along it
    cx = 1.0 + rng.uniform(-0.2, 0.2)
    cy = 0.45
    body_w, body_d, body_h = 0.6, 0.5, 1.0
    _, body_f = b.add_box((cx, cy, body_h / 2), (body_w, body_d, body_h))

    front_y = cy + body_d / 2
    door_w, door_t, door_h = 0.56, 0.02, 0.44
    door_c = (cx, front_y + door_t / 2, 0.72)
    door_v, door_f = b.add_box(door_c, (door_w, door_t, door_h))
    # hinge down the door's left vertical edge: box corners sit on this line
    hinge_x = door_c[0] - door_w / 2
    hinge_y = door_c[1] - door_t / 2
    door_origin = (hinge_x, hinge_y, door_c[2])

    handle_c = (cx + 0.22, front_y + door_t + 0.02, 0.72)
    handle_v, handle_f = b.add_box(handle_c, (0.03, 0.04, 0.12))

    drawer_c = (cx, front_y + door_t / 2, 0.3)
    drawer_v, drawer_f = b.add_box(drawer_c, (door_w, door_t, 0.4))
    drawer_axis = (0.0, 1.0, 0.0)

    # bed along the east side with a densely sampled horizontal top
    bx = 3.0
    by = 2.2 + rng.uniform(-0.2, 0.2)
    bed_w, bed_d, bed_h = 1.6, 1.1, 0.5
    _, bed_base_f = b.add_box((bx, by, bed_h / 2), (bed_w, bed_d, bed_h))
    top_v, top_faces = grid_patch(bx - bed_w / 2, bx + bed_w / 2,
                                  by - bed_d / 2, by + bed_d / 2,
                                  bed_h, 8, 6)
    _, bed_top_f = b.add_mesh(top_v, top_faces)

    # ceiling light flush against the ceiling
    lx = 2.0 + rng.uniform(-0.1, 0.1)
    _, light_f = b.add_box((lx, 2.0, room_h - 0.04), (0.3, 0.3, 0.08))

    mesh = b.build()
    faces_arr = mesh.faces

    def part(pid, label, *franges, **kw):
        indices = tuple(i for r in franges for i in r)
        return PartSegment(id=pid, label=label, face_indices=indices, **kw)

    door_art = Articulation(motion_type="rotation", axis=(0.0, 0.0, 1.0),
                            origin=door_origin, range=(0.0, 110.0))
    drawer_art = Articulation(motion_type="translation", axis=drawer_axis,
                              range=(0.0, 0.35))
    objects = (
        ObjectInstance(id="floor", label="floor",
                       parts=(part("floor_slab", "floor", floor_f, floor_grid_f),)),
        ObjectInstance(id="ceiling", label="ceiling",
                       parts=(part("ceiling_slab", "ceiling", ceil_f, ceil_grid_f),)),
        ObjectInstance(id="wall_w", label="wall",
                       parts=(part("wall_w_s", "wall", ww_f),)),
        ObjectInstance(id="wall_e", label="wall",
                       parts=(part("wall_e_s", "wall", we_f),)),
        ObjectInstance(id="wall_s", label="wall",
                       parts=(part("wall_s_s", "wall", ws_f),)),
        ObjectInstance(id="wall_n", label="wall",
                       parts=(part("wall_n_s", "wall", wn_f),)),
        ObjectInstance(id="cabinet_1", label="cabinet", mass=30.0, parts=(
            part("cabinet_1_body", "cabinet body", body_f),
            part("cabinet_1_door", "door", door_f, role="movable",
                 parent_part="cabinet_1_body", articulation=door_art),
            part("cabinet_1_handle", "handle", handle_f, role="interactable",
                 parent_part="cabinet_1_door", interactable_for="cabinet_1_door"),
            part("cabinet_1_drawer", "drawer", drawer_f, role="movable",
                 parent_part="cabinet_1_body", articulation=drawer_art),
        )),
        ObjectInstance(id="bed_1", label="bed", mass=55.0, parts=(
            part("bed_1_base", "bed frame", bed_base_f),
            part("bed_1_top", "mattress", bed_top_f,
                 parent_part="bed_1_base"),
        )),
        ObjectInstance(id="light_1", label="ceiling light", mass=2.5,
                       parts=(part("light_1_body", "ceiling light", light_f),)),
    )
    scene = SceneAnnotation(scene_id=f"synthetic_{seed}", objects=objects)
    fixtures = tuple(propose_fixtures(scene, mesh))
    scene = SceneAnnotation(scene_id=scene.scene_id, objects=objects,
                            fixtures=fixtures)

    gt = (
        GtInstance(mask=_vertex_mask(door_f, faces_arr), motion_type="rotation",
                   axis=door_art.axis, origin=door_art.origin, label="door"),
        GtInstance(mask=_vertex_mask(drawer_f, faces_arr), motion_type="translation",
                   axis=drawer_art.axis, label="drawer"),
    )
    preds = tuple(
        InstancePrediction(mask=g.mask, confidence=1.0, motion_type=g.motion_type,
                           axis=g.axis, origin=g.origin)
        for g in gt
    )
    axis_line = (door_origin, (0.0, 0.0, 1.0))
    return SceneFixture(mesh=mesh, annotation=scene, gt_instances=gt,
                        predictions=preds, door_axis_line=axis_line)


def write_fixture_files(out_dir, seed: int = 0) -> dict[str, str]:
    """Write scene.ply, annotation.json, gt.json and pred.json for a seed.

    Returns a name-to-path map. Identical seeds produce identical bytes.
    """
    from pathlib import Path

    from .annotation.model import save_annotation
    from .evaluation.instances import save_gt_instances, save_predictions
    from .geometry import save_ply

    fx = generate_scene(seed)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "scene": out / "scene.ply",
        "annotation": out / "annotation.json",
        "gt": out / "gt.json",
        "pred": out / "pred.json",
    }
    paths["scene"].write_bytes(save_ply(fx.mesh))
    paths["annotation"].write_bytes(save_annotation(fx.annotation))
    sid = fx.annotation.scene_id
    paths["gt"].write_text(save_gt_instances(sid, fx.gt_instances))
    paths["pred"].write_text(save_predictions(sid, fx.predictions))
    return {name: str(p) for name, p in paths.items()}
