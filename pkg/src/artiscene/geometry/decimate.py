"""Quadric-error-metric mesh decimation by iterative edge collapse.

Each vertex carries the sum of squared-distance quadrics of its incident face
planes; an edge collapse merges the two quadrics and places the merged vertex
at the minimizer of the combined error. Collapses that would pinch the
surface (link condition), flip a surviving face, or move a boundary are
skipped, so the output can stop above the requested face count. In that case
a DecimationWarning is issued and the best reachable mesh is returned.
"""

from __future__ import annotations

import heapq
import warnings

import numpy as np

from .core import GeometryError, TriMesh


class DecimationWarning(UserWarning):
    """Target face count could not be reached without breaking topology."""


def _vertex_quadrics(verts: np.ndarray, faces: np.ndarray) -> np.ndarray:
    quadrics = np.zeros((len(verts), 4, 4))
    cross = np.cross(verts[faces[:, 1]] - verts[faces[:, 0]],
                     verts[faces[:, 2]] - verts[faces[:, 0]])
    norms = np.linalg.norm(cross, axis=1)
    for f, (a, b, c) in enumerate(faces):
        if norms[f] < 1e-30:
            continue
        n = cross[f] / norms[f]
        plane = np.array([n[0], n[1], n[2], -float(n @ verts[a])])
        k = np.outer(plane, plane)
        quadrics[a] += k
        quadrics[b] += k
        quadrics[c] += k
    return quadrics


def _quadric_cost(q: np.ndarray, p: np.ndarray) -> float:
    h = np.array([p[0], p[1], p[2], 1.0])
    return max(0.0, float(h @ q @ h))


def _optimal_point(q: np.ndarray, fallbacks: list[np.ndarray]) -> tuple[np.ndarray, float]:
    a = q[:3, :3]
    b = -q[:3, 3]
    det = float(np.linalg.det(a))
    if abs(det) > 1e-10:
        p = np.linalg.solve(a, b)
        if np.all(np.isfinite(p)):
            return p, _quadric_cost(q, p)
    best_p, best_c = None, np.inf
    for p in fallbacks:
        c = _quadric_cost(q, p)
        if c < best_c:
            best_p, best_c = p, c
    return best_p, best_c


def quadric_decimate(mesh: TriMesh, target_faces: int) -> TriMesh:
    """Collapse edges in order of quadric error until at most ``target_faces``
    faces remain. Returns the input unchanged when it is already small enough."""
    if target_faces < 4:
        raise GeometryError("target_faces must be at least 4")
    if mesh.n_faces <= target_faces:
        return mesh

    verts = mesh.vertices.copy()
    colors = None if mesh.vertex_colors is None else mesh.vertex_colors.copy()
    faces = [list(f) for f in mesh.faces.tolist()]
    face_alive = [True] * len(faces)
    vert_alive = [True] * len(verts)
    vert_faces: list[set[int]] = [set() for _ in range(len(verts))]
    for fi, (a, b, c) in enumerate(faces):
        vert_faces[a].add(fi)
        vert_faces[b].add(fi)
        vert_faces[c].add(fi)

    edge_faces: dict[tuple[int, int], int] = {}
    for a, b, c in faces:
        for u, v in ((a, b), (b, c), (a, c)):
            key = (u, v) if u < v else (v, u)
            edge_faces[key] = edge_faces.get(key, 0) + 1
    boundary = [False] * len(verts)
    for (u, v), count in edge_faces.items():
        if count == 1:
            boundary[u] = True
            boundary[v] = True

    quadrics = _vertex_quadrics(verts, mesh.faces)
    version = [0] * len(verts)
    n_alive = len(faces)

    def neighbors(u: int) -> set[int]:
        out = set()
        for fi in vert_faces[u]:
            out.update(faces[fi])
        out.discard(u)
        return out

    def edge_entry(u: int, v: int):
        """Heap entry (cost, u, v, placement, versions) or None when the
        collapse is not allowed."""
        if u > v:
            u, v = v, u
        bu, bv = boundary[u], boundary[v]
        key_is_boundary = edge_faces.get((u, v), 0) == 1
        q = quadrics[u] + quadrics[v]
        if bu and bv:
            if not key_is_boundary:
                return None  # collapsing would pinch two boundary loops together
            p, cost = min(((verts[u], _quadric_cost(q, verts[u])),
                           (verts[v], _quadric_cost(q, verts[v]))), key=lambda t: t[1])
        elif bu:
            p, cost = verts[u], _quadric_cost(q, verts[u])
        elif bv:
            p, cost = verts[v], _quadric_cost(q, verts[v])
        else:
            p, cost = _optimal_point(q, [0.5 * (verts[u] + verts[v]), verts[u], verts[v]])
        return (cost, u, v, p, version[u], version[v])

    heap = []
    seen = set()
    for a, b, c in faces:
        for u, v in ((a, b), (b, c), (a, c)):
            key = (u, v) if u < v else (v, u)
            if key in seen:
                continue
            seen.add(key)
            entry = edge_entry(*key)
            if entry is not None:
                cost, uu, vv, p, s0, s1 = entry
                heapq.heappush(heap, (cost, uu, vv, s0, s1, tuple(p)))

    def collapse_ok(u: int, v: int, p: np.ndarray) -> bool:
        shared = vert_faces[u] & vert_faces[v]
        if not shared:
            return False
        apexes = set()
        for fi in shared:
            for w in faces[fi]:
                if w != u and w != v:
                    apexes.add(w)
        if (neighbors(u) & neighbors(v)) != apexes:
            return False  # link condition: extra common neighbors pinch the mesh
        for fi in (vert_faces[u] | vert_faces[v]) - shared:
            tri = faces[fi]
            before = [verts[w] for w in tri]
            after = [p if w in (u, v) else verts[w] for w in tri]
            n0 = np.cross(before[1] - before[0], before[2] - before[0])
            n1 = np.cross(after[1] - after[0], after[2] - after[0])
            if np.linalg.norm(n1) < 1e-30 or float(n0 @ n1) <= 0.0:
                return False  # collapse would flip or squash this face
        return True

    while n_alive > target_faces and heap:
        cost, u, v, s0, s1, p = heapq.heappop(heap)
        if not (vert_alive[u] and vert_alive[v]):
            continue
        if version[u] != s0 or version[v] != s1:
            continue
        p = np.asarray(p)
        if not collapse_ok(u, v, p):
            continue

        shared = vert_faces[u] & vert_faces[v]
        verts[u] = p
        if colors is not None:
            colors[u] = 0.5 * (colors[u] + colors[v])
        quadrics[u] = quadrics[u] + quadrics[v]
        boundary[u] = boundary[u] or boundary[v]
        vert_alive[v] = False
        for fi in shared:
            face_alive[fi] = False
            n_alive -= 1
            for w in faces[fi]:
                vert_faces[w].discard(fi)
        for fi in list(vert_faces[v]):
            tri = faces[fi]
            faces[fi] = [u if w == v else w for w in tri]
            vert_faces[u].add(fi)
        vert_faces[v] = set()
        version[u] += 1
        version[v] += 1

        for w in sorted(neighbors(u)):
            entry = edge_entry(u, w)
            if entry is not None:
                c2, uu, vv, p2, t0, t1 = entry
                heapq.heappush(heap, (c2, uu, vv, t0, t1, tuple(p2)))

    if n_alive > target_faces:
        warnings.warn(
            DecimationWarning(
                f"decimation stopped at {n_alive} faces, target {target_faces} "
                "not reachable without breaking topology"
            )
        )

    referenced = set()
    for fi, alive in enumerate(face_alive):
        if alive:
            referenced.update(faces[fi])
    keep = sorted(referenced)
    remap = {old: new for new, old in enumerate(keep)}
    out_faces = [[remap[w] for w in faces[fi]]
                 for fi, alive in enumerate(face_alive) if alive]
    out_colors = None if colors is None else colors[keep]
    return TriMesh(verts[keep], np.asarray(out_faces, dtype=np.int64).reshape(-1, 3),
                   out_colors)
