"""Series definition files (JSON) with line/column diagnostics."""
from __future__ import annotations

import json
from typing import Any, Dict, List, Optional, Tuple

from .arith import QuadElement, parse_element
from .errors import SchemaError
from .series import DiffOperator, PRecurrence, SeriesHandle, ode_to_recurrence, verify_annihilation

Path = Tuple[Any, ...]

_WS = " \t\n\r"
_scalar = json.JSONDecoder()


def _skip(text: str, i: int) -> int:
    while i < len(text) and text[i] in _WS:
        i += 1
    return i


def _parse(text: str, i: int, path: Path, pos: Dict[Path, int]):
    i = _skip(text, i)
    pos[path] = i
    if i >= len(text):
        raise json.JSONDecodeError("unexpected end of input", text, i)
    ch = text[i]
    if ch == "{":
        out = {}
        i = _skip(text, i + 1)
        if text[i:i + 1] == "}":
            return out, i + 1
        while True:
            i = _skip(text, i)
            if text[i:i + 1] != '"':
                raise json.JSONDecodeError("expected a string key", text, i)
            key, i = _scalar.raw_decode(text, i)
            i = _skip(text, i)
            if text[i:i + 1] != ":":
                raise json.JSONDecodeError("expected ':'", text, i)
            out[key], i = _parse(text, i + 1, path + (key,), pos)
            i = _skip(text, i)
            if text[i:i + 1] == ",":
                i += 1
                continue
            if text[i:i + 1] == "}":
                return out, i + 1
            raise json.JSONDecodeError("expected ',' or '}'", text, i)
    if ch == "[":
        out = []
        i = _skip(text, i + 1)
        if text[i:i + 1] == "]":
            return out, i + 1
        while True:
            val, i = _parse(text, i, path + (len(out),), pos)
            out.append(val)
            i = _skip(text, i)
            if text[i:i + 1] == ",":
                i += 1
                continue
            if text[i:i + 1] == "]":
                return out, i + 1
            raise json.JSONDecodeError("expected ',' or ']'", text, i)
    return _scalar.raw_decode(text, i)


def _line_col(text: str, offset: int) -> Tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


class _Doc:
    def __init__(self, text: str, source: str):
        self.text = text
        self.source = source
        self.pos: Dict[Path, int] = {}
        try:
            self.data, end = _parse(text, 0, (), self.pos)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{source}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
        if _skip(text, end) != len(text):
            line, col = _line_col(text, _skip(text, end))
            raise SchemaError(f"{source}:{line}:{col}: trailing data after the JSON value")

    def fail(self, path: Path, msg: str):
        p = path
        while p not in self.pos and p:
            p = p[:-1]
        line, col = _line_col(self.text, self.pos.get(p, 0))
        where = "/".join(str(x) for x in path) or "<root>"
        raise SchemaError(f"{self.source}:{line}:{col}: {where}: {msg}")


def _element(doc: _Doc, path: Path, value, d: Optional[int]):
    if isinstance(value, int) and not isinstance(value, bool):
        value = str(value)
    if not isinstance(value, str):
        doc.fail(path, "expected a field element string")
    try:
        x = parse_element(value)
    except SchemaError as exc:
        doc.fail(path, str(exc))
    if isinstance(x, QuadElement):
        if d is None:
            doc.fail(path, "quadratic element in a series over Q")
        if x.d != d:
            doc.fail(path, f"element lives in Q(sqrt({x.d})), field is Q(sqrt({d}))")
    return x


def _poly_list(doc: _Doc, path: Path, value, d):
    if not isinstance(value, list) or not value:
        doc.fail(path, "expected a nonempty list of polynomials")
    out = []
    for i, row in enumerate(value):
        if not isinstance(row, list):
            doc.fail(path + (i,), "expected a coefficient list (lowest degree first)")
        out.append([_element(doc, path + (i, j), c, d) for j, c in enumerate(row)])
    return out


def series_from_dict(data: dict, source: str = "<series>", text: Optional[str] = None) -> SeriesHandle:
    """Build a series from an already parsed definition."""
    if text is None:
        text = json.dumps(data, indent=1)
    doc = _Doc(text, source)
    return _build(doc)


def _build(doc: _Doc) -> SeriesHandle:
    data = doc.data
    if not isinstance(data, dict):
        doc.fail((), "top level must be an object")
    known = {"name", "field", "operator", "recurrence", "initial"}
    for key in data:
        if key not in known:
            doc.fail((key,), f"unknown key {key!r}")
    name = data.get("name")
    if not isinstance(name, str) or not name:
        doc.fail(("name",), "name must be a nonempty string")
    field = data.get("field", {"type": "Q"})
    if not isinstance(field, dict) or field.get("type") not in ("Q", "quadratic"):
        doc.fail(("field",), 'field must be {"type":"Q"} or {"type":"quadratic","d":int}')
    d = None
    if field["type"] == "quadratic":
        d = field.get("d")
        if not isinstance(d, int) or isinstance(d, bool):
            doc.fail(("field", "d"), "d must be an integer")
        try:
            QuadElement(0, 1, d)
        except (ValueError, SchemaError) as exc:
            doc.fail(("field", "d"), str(exc))
    if "operator" not in data and "recurrence" not in data:
        doc.fail((), "need an operator or a recurrence")
    init = data.get("initial")
    if not isinstance(init, list):
        doc.fail(("initial",), "initial must be a list of field element strings")
    initial = [_element(doc, ("initial", i), x, d) for i, x in enumerate(init)]

    L = None
    if "operator" in data:
        op = data["operator"]
        if not isinstance(op, dict) or "A" not in op:
            doc.fail(("operator",), 'operator must be {"A": [...]}')
        rows = _poly_list(doc, ("operator", "A"), op["A"], d)
        try:
            L = DiffOperator(rows)
        except SchemaError as exc:
            doc.fail(("operator", "A"), str(exc))
    rec = None
    if "recurrence" in data:
        r = data["recurrence"]
        if not isinstance(r, dict) or "B" not in r:
            doc.fail(("recurrence",), 'recurrence must be {"B": [...], "offset": int}')
        offset = r.get("offset", 0)
        if not isinstance(offset, int) or isinstance(offset, bool) or offset < 0:
            doc.fail(("recurrence", "offset"), "offset must be a nonnegative integer")
        rows = _poly_list(doc, ("recurrence", "B"), r["B"], d)
        try:
            rec = PRecurrence(rows, offset)
        except SchemaError as exc:
            doc.fail(("recurrence", "B"), str(exc))
    if rec is None:
        rec = ode_to_recurrence(L)
    s = SeriesHandle(rec, initial, name=name, d=d, operator=L)
    if L is not None and "recurrence" in data:
        N = max(L.p + L.delta, 40)
        if not verify_annihilation(s, L, N):
            doc.fail(("recurrence",), "recurrence and operator define different series")
    return s


def load_series_text(text: str, source: str = "<series>") -> SeriesHandle:
    return _build(_Doc(text, source))


def load_series(path: str) -> SeriesHandle:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SchemaError(f"{path}: cannot read: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise SchemaError(f"{path}: not valid UTF-8") from None
    return load_series_text(text, path)


def read_index_file(path: str) -> List[int]:
    """One nonnegative integer per line; blank lines and ``#`` comments are skipped."""
    out = []
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise SchemaError(f"{path}: cannot read: {exc.strerror}") from None
    for k, line in enumerate(lines, 1):
        t = line.split("#", 1)[0].strip()
        if not t:
            continue
        try:
            v = int(t)
        except ValueError:
            raise SchemaError(f"{path}:{k}:1: not an integer: {t!r}") from None
        if v < 0:
            raise SchemaError(f"{path}:{k}:1: index must be nonnegative")
        out.append(v)
    return out
