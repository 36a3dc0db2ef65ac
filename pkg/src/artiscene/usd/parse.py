"""Strict recursive-descent parser for the text scene-description format.

The grammar is intentionally small: a fixed header, a parenthesized metadata
block, then a tree of ``def Schema "Name" { ... }`` blocks holding typed
attribute assignments. Indentation is exactly four spaces per nesting level.
Errors carry 1-based line and column of the offending character.
"""

from __future__ import annotations

from .model import (
    ATTR_SPECS,
    ATTR_TYPES,
    SCHEMAS,
    TYPE_FLOAT,
    TYPE_INT_ARRAY,
    TYPE_POINT3,
    TYPE_POINT3_ARRAY,
    TYPE_REL,
    TYPE_STRING,
    TYPE_VECTOR3,
    Prim,
    PrimAttribute,
    UsdError,
    UsdStage,
    valid_prim_name,
    validate_stage,
)


class UsdaParseError(UsdError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class _Cursor:
    """Tracks position inside one line for value parsing."""

    __slots__ = ("text", "pos", "line", "base_col")

    def __init__(self, text: str, line: int, base_col: int):
        self.text = text
        self.pos = 0
        self.line = line
        self.base_col = base_col

    def error(self, message: str):
        raise UsdaParseError(self.line, self.base_col + self.pos, message)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, token: str):
        if not self.text.startswith(token, self.pos):
            self.error(f"expected {token!r}")
        self.pos += len(token)

    def at_end(self) -> bool:
        return self.pos >= len(self.text)


def _parse_real(cur: _Cursor) -> float:
    start = cur.pos
    allowed = "+-0123456789.eE"
    while not cur.at_end() and cur.peek() in allowed:
        cur.pos += 1
    token = cur.text[start:cur.pos]
    if not token:
        cur.error("expected a number")
    try:
        return float(token)
    except ValueError:
        cur.pos = start
        cur.error(f"malformed number {token!r}")


def _parse_int(cur: _Cursor) -> int:
    start = cur.pos
    if cur.peek() in "+-":
        cur.pos += 1
    while not cur.at_end() and cur.peek().isdigit():
        cur.pos += 1
    token = cur.text[start:cur.pos]
    try:
        return int(token)
    except ValueError:
        cur.pos = start
        cur.error(f"malformed integer {token!r}")


def _parse_tuple3(cur: _Cursor) -> tuple[float, float, float]:
    cur.take("(")
    a = _parse_real(cur)
    cur.take(", ")
    b = _parse_real(cur)
    cur.take(", ")
    c = _parse_real(cur)
    cur.take(")")
    return (a, b, c)


def _parse_quoted(cur: _Cursor) -> str:
    cur.take('"')
    out = []
    while True:
        ch = cur.peek()
        if ch == "":
            cur.error("unterminated string")
        if ch == '"':
            cur.pos += 1
            return "".join(out)
        if ch == "\\":
            cur.pos += 1
            esc = cur.peek()
            if esc not in ('"', "\\"):
                cur.error(f"unsupported escape \\{esc}")
            out.append(esc)
            cur.pos += 1
        else:
            out.append(ch)
            cur.pos += 1


def _parse_value(cur: _Cursor, type_name: str):
    if type_name == TYPE_FLOAT:
        return _parse_real(cur)
    if type_name in (TYPE_VECTOR3, TYPE_POINT3):
        return _parse_tuple3(cur)
    if type_name == TYPE_STRING:
        return _parse_quoted(cur)
    if type_name == TYPE_REL:
        cur.take("<")
        start = cur.pos
        while not cur.at_end() and cur.peek() != ">":
            cur.pos += 1
        path = cur.text[start:cur.pos]
        cur.take(">")
        if not path.startswith("/"):
            cur.pos = start
            cur.error("relationship path must be absolute")
        return path
    if type_name == TYPE_INT_ARRAY:
        cur.take("[")
        items = []
        if cur.peek() != "]":
            items.append(_parse_int(cur))
            while cur.peek() == ",":
                cur.take(", ")
                items.append(_parse_int(cur))
        cur.take("]")
        return tuple(items)
    if type_name == TYPE_POINT3_ARRAY:
        cur.take("[")
        items = []
        if cur.peek() != "]":
            items.append(_parse_tuple3(cur))
            while cur.peek() == ",":
                cur.take(", ")
                items.append(_parse_tuple3(cur))
        cur.take("]")
        return tuple(items)
    raise AssertionError(type_name)


class _Parser:
    def __init__(self, text: str):
        self.lines = text.split("\n")
        self.index = 0  # 0-based next line
        self.rel_sites: list[tuple[int, int, str, str]] = []  # line, col, path, owner

    def error(self, message: str, column: int = 1):
        raise UsdaParseError(self.index, column, message)

    def peek_line(self) -> str | None:
        return self.lines[self.index] if self.index < len(self.lines) else None

    def next_line(self) -> str:
        line = self.peek_line()
        if line is None:
            raise UsdaParseError(len(self.lines), 1, "unexpected end of file")
        self.index += 1
        return line

    def expect_exact(self, expected: str):
        line = self.next_line()
        if line != expected:
            self.error(f"expected {expected!r}, got {line!r}")

    def strip_indent(self, line: str, level: int) -> str:
        pad = "    " * level
        if not line.startswith(pad) or line[len(pad):len(pad) + 1] == " ":
            self.error(f"expected indentation of {4 * level} spaces")
        return line[len(pad):]

    def parse(self) -> UsdStage:
        self.expect_exact("#usda 1.0")
        self.expect_exact("(")
        default_prim = None
        meters = None
        up_axis = None
        while True:
            line = self.next_line()
            if line == ")":
                break
            body = self.strip_indent(line, 1)
            if body.startswith("defaultPrim = "):
                cur = _Cursor(body[len("defaultPrim = "):], self.index,
                              5 + len("defaultPrim = "))
                default_prim = _parse_quoted(cur)
                if not cur.at_end():
                    cur.error("trailing content after metadata value")
            elif body.startswith("metersPerUnit = "):
                token = body[len("metersPerUnit = "):]
                if not token.isdigit():
                    self.error(f"malformed metersPerUnit {token!r}",
                               5 + len("metersPerUnit = "))
                meters = int(token)
            elif body.startswith("upAxis = "):
                cur = _Cursor(body[len("upAxis = "):], self.index, 5 + len("upAxis = "))
                up_axis = _parse_quoted(cur)
                if not cur.at_end():
                    cur.error("trailing content after metadata value")
            else:
                self.error(f"unknown layer metadata {body!r}", 5)
        if meters is None or up_axis is None:
            self.error("metadata block must set metersPerUnit and upAxis")

        roots = []
        while True:
            line = self.peek_line()
            if line is None or line == "":
                break
            root_line = self.index + 1
            root = self.parse_prim(0)
            if any(r.name == root.name for r in roots):
                raise UsdaParseError(root_line, 1,
                                     f"duplicate root prim name {root.name!r}")
            roots.append(root)
        # only blank padding may remain
        while (line := self.peek_line()) is not None:
            if line != "":
                self.error(f"unexpected content {line!r}")
            self.index += 1

        stage = UsdStage(root_prims=roots, default_prim=default_prim,
                         meters_per_unit=meters, up_axis=up_axis)
        return stage

    def parse_prim(self, level: int) -> Prim:
        header = self.strip_indent(self.next_line(), level)
        if not header.startswith("def "):
            self.error(f"expected a prim definition, got {header!r}", 4 * level + 1)
        cur = _Cursor(header[len("def "):], self.index, 4 * level + 1 + len("def "))
        schema_start = cur.pos
        while not cur.at_end() and cur.peek() != " ":
            cur.pos += 1
        schema = cur.text[schema_start:cur.pos]
        if schema not in SCHEMAS:
            cur.pos = schema_start
            cur.error(f"unknown prim schema {schema!r}")
        cur.take(" ")
        name = _parse_quoted(cur)
        if not cur.at_end():
            cur.error("trailing content after prim name")
        if not valid_prim_name(name):
            self.error(f"invalid prim name {name!r}", 4 * level + 1)
        def_line = self.index

        brace = self.strip_indent(self.next_line(), level)
        if brace != "{":
            self.error("expected '{' on its own line", 4 * level + 1)

        prim = Prim(name, schema)
        closing = "    " * level + "}"
        while True:
            line = self.peek_line()
            if line is None:
                raise UsdaParseError(len(self.lines), 1,
                                     f"unclosed prim {name!r} (opened at line {def_line})")
            if line == closing:
                self.index += 1
                break
            body = self.strip_indent(line, level + 1) if line.strip() else ""
            if body.startswith("def "):
                child_line = self.index + 1
                child = self.parse_prim(level + 1)
                if prim.child(child.name) is not None:
                    raise UsdaParseError(child_line, 4 * (level + 1) + 1,
                                         f"duplicate child name {child.name!r} under {name!r}")
                prim.children.append(child)
            else:
                self.index += 1
                self.parse_attribute(body, prim, level + 1)
        return prim

    def parse_attribute(self, body: str, prim: Prim, level: int):
        col0 = 4 * level + 1
        cur = _Cursor(body, self.index, col0)
        custom = False
        if body.startswith("custom "):
            custom = True
            cur.take("custom ")
        type_name = None
        for t in sorted(ATTR_TYPES, key=len, reverse=True):
            token = "rel" if t == TYPE_REL else t
            if cur.text.startswith(token + " ", cur.pos):
                type_name = t
                cur.pos += len(token) + 1
                break
        if type_name is None:
            cur.error("expected an attribute type")
        name_start = cur.pos
        while not cur.at_end() and cur.peek() not in (" ",):
            cur.pos += 1
        attr_name = cur.text[name_start:cur.pos]
        if not attr_name:
            cur.error("expected an attribute name")
        cur.take(" = ")
        value_col = cur.base_col + cur.pos
        value = _parse_value(cur, type_name)
        if not cur.at_end():
            cur.error("trailing content after attribute value")
        if attr_name in prim.attributes:
            self.error(f"duplicate attribute {attr_name!r}", col0)
        spec = ATTR_SPECS.get(attr_name)
        if spec is None:
            self.error(f"unknown attribute {attr_name!r}", col0)
        if type_name != spec[0] or custom != spec[1]:
            self.error(
                f"attribute {attr_name!r} must be declared "
                f"{'custom ' if spec[1] else ''}{spec[0]}", col0,
            )
        prim.attributes[attr_name] = PrimAttribute(type_name, value, custom)
        if type_name == TYPE_REL:
            self.rel_sites.append((self.index, value_col, value, attr_name))


def parse_usda(text: str) -> UsdStage:
    """Parse and validate; inverse of ``emit_usda`` on valid stages."""
    parser = _Parser(text)
    stage = parser.parse()

    paths = {path for path, _ in stage.iter_prims()}
    for line, col, target, attr_name in parser.rel_sites:
        if target not in paths:
            raise UsdaParseError(line, col,
                                 f"relationship {attr_name!r} targets missing prim {target}")
    try:
        validate_stage(stage)
    except UsdError as exc:
        raise UsdaParseError(1, 1, f"invalid stage: {exc}") from None
    return stage
