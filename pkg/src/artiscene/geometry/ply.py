"""ASCII PLY triangle-mesh reader and writer.

Only the ASCII variant is supported on purpose: scene fixtures are kept
diffable and the reader stays a dependency-free line parser. The writer emits
coordinates with ``repr`` so every binary64 value survives a round trip.
"""

from __future__ import annotations

import numpy as np

from .core import GeometryError, TriMesh

_COORD_TYPES = {"float", "float32", "double", "float64"}
_COLOR_TYPES = {"uchar", "uint8", "char", "int8", "short", "ushort", "int", "uint",
                "int16", "uint16", "int32", "uint32"}


class PlyParseError(GeometryError):
    """PLY parse failure; the message names the 1-based line."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _decode(data: bytes) -> list[str]:
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError as exc:
        raise PlyParseError(1, f"not an ASCII file ({exc.reason})") from None
    return text.split("\n")


def load_ply(data: bytes) -> TriMesh:
    """Parse an ASCII PLY file with vertex x/y/z (plus optional red/green/blue
    integer colors in 0..255) and triangular faces."""
    lines = _decode(data)
    pos = 0

    def take(expected: str | None = None) -> str:
        nonlocal pos
        if pos >= len(lines):
            raise PlyParseError(len(lines), "unexpected end of file")
        line = lines[pos].rstrip("\r")
        pos += 1
        if expected is not None and line != expected:
            raise PlyParseError(pos, f"expected {expected!r}, got {line!r}")
        return line

    take("ply")
    fmt = take()
    if fmt != "format ascii 1.0":
        if fmt.startswith("format binary"):
            raise PlyParseError(pos, "binary PLY is not supported, use ASCII")
        raise PlyParseError(pos, f"unsupported format line {fmt!r}")

    n_vertex = n_face = None
    has_colors = False
    current = None
    vertex_props: list[str] = []
    while True:
        line = take()
        if line == "end_header":
            break
        fields = line.split()
        if not fields:
            raise PlyParseError(pos, "blank line inside header")
        if fields[0] == "comment":
            continue
        if fields[0] == "element":
            if len(fields) != 3:
                raise PlyParseError(pos, f"malformed element line {line!r}")
            name, count = fields[1], fields[2]
            if not count.isdigit():
                raise PlyParseError(pos, f"element count must be an integer, got {count!r}")
            if name == "vertex":
                if n_vertex is not None:
                    raise PlyParseError(pos, "duplicate vertex element")
                n_vertex = int(count)
            elif name == "face":
                if n_face is not None:
                    raise PlyParseError(pos, "duplicate face element")
                n_face = int(count)
            else:
                raise PlyParseError(pos, f"unsupported element {name!r}")
            current = name
        elif fields[0] == "property":
            if current == "vertex":
                if len(fields) != 3:
                    raise PlyParseError(pos, f"malformed vertex property {line!r}")
                ptype, pname = fields[1], fields[2]
                expected_order = ["x", "y", "z", "red", "green", "blue"]
                slot = len(vertex_props)
                if slot >= len(expected_order) or pname != expected_order[slot]:
                    raise PlyParseError(
                        pos,
                        f"unsupported vertex property {pname!r} "
                        "(expected x, y, z, then optional red, green, blue)",
                    )
                if pname in ("x", "y", "z") and ptype not in _COORD_TYPES:
                    raise PlyParseError(pos, f"coordinate property must be float, got {ptype!r}")
                if pname in ("red", "green", "blue") and ptype not in _COLOR_TYPES:
                    raise PlyParseError(pos, f"color property must be integer, got {ptype!r}")
                vertex_props.append(pname)
            elif current == "face":
                if len(fields) != 5 or fields[1] != "list":
                    raise PlyParseError(pos, f"face property must be a list, got {line!r}")
                if fields[4] not in ("vertex_indices", "vertex_index"):
                    raise PlyParseError(pos, f"unsupported face property {fields[4]!r}")
            else:
                raise PlyParseError(pos, "property before any element")
        else:
            raise PlyParseError(pos, f"malformed header line {line!r}")

    if n_vertex is None or n_face is None:
        raise PlyParseError(pos, "header must declare vertex and face elements")
    if vertex_props[:3] != ["x", "y", "z"]:
        raise PlyParseError(pos, "vertex element must declare x, y, z")
    if len(vertex_props) == 6:
        has_colors = True
    elif len(vertex_props) != 3:
        raise PlyParseError(pos, "colors need all of red, green, blue")

    width = 6 if has_colors else 3
    verts = np.zeros((n_vertex, 3))
    colors = np.zeros((n_vertex, 3)) if has_colors else None
    for i in range(n_vertex):
        fields = take().split()
        if len(fields) != width:
            raise PlyParseError(pos, f"expected {width} vertex values, got {len(fields)}")
        try:
            values = [float(f) for f in fields[:3]]
        except ValueError:
            raise PlyParseError(pos, f"bad vertex coordinate in {fields[:3]}") from None
        verts[i] = values
        if has_colors:
            try:
                rgb = [int(f) for f in fields[3:]]
            except ValueError:
                raise PlyParseError(pos, f"bad color value in {fields[3:]}") from None
            if min(rgb) < 0 or max(rgb) > 255:
                raise PlyParseError(pos, f"color out of range 0..255: {rgb}")
            colors[i] = rgb

    faces = np.zeros((n_face, 3), dtype=np.int64)
    for i in range(n_face):
        fields = take().split()
        if not fields:
            raise PlyParseError(pos, "blank face line")
        if fields[0] != "3":
            raise PlyParseError(pos, f"only triangular faces are supported, got arity {fields[0]!r}")
        if len(fields) != 4:
            raise PlyParseError(pos, f"expected 3 face indices, got {len(fields) - 1}")
        try:
            idx = [int(f) for f in fields[1:]]
        except ValueError:
            raise PlyParseError(pos, f"bad face index in {fields[1:]}") from None
        for j in idx:
            if j < 0 or j >= n_vertex:
                raise PlyParseError(pos, f"face index {j} out of range [0, {n_vertex})")
        faces[i] = idx

    while pos < len(lines):
        if lines[pos].strip():
            raise PlyParseError(pos + 1, f"unexpected content after last face: {lines[pos]!r}")
        pos += 1

    try:
        return TriMesh(verts, faces, None if colors is None else colors / 255.0)
    except GeometryError as exc:
        raise PlyParseError(len(lines), str(exc)) from None


def save_ply(mesh: TriMesh) -> bytes:
    """Serialize to ASCII PLY. Colors are quantized to 0..255 integers; the
    red/green/blue properties are omitted entirely for uncolored meshes."""
    has_colors = mesh.vertex_colors is not None
    out = [
        "ply",
        "format ascii 1.0",
        f"element vertex {mesh.n_vertices}",
        "property double x",
        "property double y",
        "property double z",
    ]
    if has_colors:
        out += ["property uchar red", "property uchar green", "property uchar blue"]
    out += [
        f"element face {mesh.n_faces}",
        "property list uchar int vertex_indices",
        "end_header",
    ]
    if has_colors:
        rgb = np.rint(mesh.vertex_colors * 255.0).astype(np.int64)
        for (x, y, z), (r, g, b) in zip(mesh.vertices.tolist(), rgb.tolist()):
            out.append(f"{x!r} {y!r} {z!r} {r} {g} {b}")
    else:
        for x, y, z in mesh.vertices.tolist():
            out.append(f"{x!r} {y!r} {z!r}")
    for a, b, c in mesh.faces.tolist():
        out.append(f"3 {a} {b} {c}")
    return ("\n".join(out) + "\n").encode("ascii")
