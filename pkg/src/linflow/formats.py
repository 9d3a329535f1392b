"""Matrix document parsing and emission.

Text format: one matrix row per line, whitespace-separated entries;
complex entries as "a+bi" / "a-bi" tokens ("i", "-i", "2i" also accepted).
JSON format: {"field": "real"|"complex", "rows": [[...]]} with complex
entries as two-element [re, im] arrays.  Inline literals like
"[[0,-1],[1,0]]" or "[i]" are accepted wherever a path is expected.
"""

import hashlib
import json
import os
import re

import numpy as np

from .errors import InputFormatError
from .linalg import as_matrix

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_REAL_RE = re.compile(rf"^[+-]?{_NUM}$")
_IMAG_RE = re.compile(rf"^(?P<body>[+-]?(?:{_NUM})?)[iI]$")
_BOTH_RE = re.compile(rf"^(?P<real>[+-]?{_NUM})(?P<body>[+-](?:{_NUM})?)[iI]$")


def _imag_value(body):
    if body in ("", "+"):
        return 1.0
    if body == "-":
        return -1.0
    return float(body)


def parse_scalar(token):
    """Parse one entry token; returns (value, is_complex)."""
    tok = token.strip()
    if not tok:
        raise InputFormatError("empty entry token")
    if _REAL_RE.match(tok):
        return float(tok), False
    m = _IMAG_RE.match(tok)
    if m:
        return complex(0.0, _imag_value(m.group("body"))), True
    m = _BOTH_RE.match(tok)
    if m:
        return complex(float(m.group("real")), _imag_value(m.group("body"))), True
    raise InputFormatError(f"cannot parse entry {token!r}")


def format_scalar(value, field):
    if field == "real":
        return repr(float(np.real(value)))
    z = complex(value)
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"


def parse_matrix_text(text, field=None):
    """Parse the line-per-row text format; returns (array, field)."""
    rows = []
    any_complex = False
    for ln, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        row = []
        for col, token in enumerate(stripped.split(), start=1):
            try:
                value, is_c = parse_scalar(token)
            except InputFormatError as exc:
                raise InputFormatError(f"line {ln}, column {col}: {exc}") from None
            any_complex = any_complex or is_c
            row.append(value)
        rows.append(row)
    if not rows:
        raise InputFormatError("no matrix rows found")
    width = len(rows[0])
    for ln, row in enumerate(rows, start=1):
        if len(row) != width:
            raise InputFormatError(
                f"row {ln} has {len(row)} entries, expected {width}"
            )
    out_field = field or ("complex" if any_complex else "real")
    if any_complex and out_field == "real":
        raise InputFormatError("complex entries present but field=real requested")
    return as_matrix(np.array(rows, dtype=complex if out_field == "complex" else float)), out_field


def emit_matrix_text(a, field=None):
    field = field or ("complex" if np.iscomplexobj(a) else "real")
    lines = []
    for row in np.atleast_2d(a):
        lines.append(" ".join(format_scalar(v, field) for v in row))
    return "\n".join(lines) + "\n"


def matrix_to_document(a):
    """JSON-ready document for a matrix."""
    if np.iscomplexobj(a):
        rows = [[[float(v.real), float(v.imag)] for v in row] for row in a]
        return {"field": "complex", "rows": rows}
    return {"field": "real", "rows": [[float(v) for v in row] for row in a]}


def document_to_matrix(doc, field=None):
    if not isinstance(doc, dict) or "rows" not in doc:
        raise InputFormatError("matrix document must be an object with 'rows'")
    doc_field = doc.get("field", "real")
    if doc_field not in ("real", "complex"):
        raise InputFormatError(f"unknown field {doc_field!r}")
    out_field = field or doc_field
    rows = doc["rows"]
    if not isinstance(rows, list) or not rows:
        raise InputFormatError("'rows' must be a non-empty array")
    parsed = []
    width = None
    for ln, row in enumerate(rows, start=1):
        if not isinstance(row, list):
            raise InputFormatError(f"row {ln} is not an array")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise InputFormatError(f"row {ln} has {len(row)} entries, expected {width}")
        out_row = []
        for col, v in enumerate(row, start=1):
            if isinstance(v, (int, float)):
                out_row.append(float(v))
            elif isinstance(v, list) and len(v) == 2:
                out_row.append(complex(float(v[0]), float(v[1])))
            else:
                raise InputFormatError(
                    f"row {ln}, column {col}: entries are numbers or [re, im] pairs"
                )
        parsed.append(out_row)
    any_complex = any(isinstance(v, complex) for row in parsed for v in row)
    if any_complex and out_field == "real":
        raise InputFormatError("complex entries present but field=real requested")
    dtype = complex if (out_field == "complex" or any_complex) else float
    return as_matrix(np.array(parsed, dtype=dtype)), ("complex" if dtype is complex else "real")


def _parse_inline(literal, field=None):
    """Parse bracketed inline literals such as [[0,-1],[1,0]] or [i]."""
    body = literal.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise InputFormatError("inline matrix must be bracketed")
    inner = body[1:-1].strip()
    if inner.startswith("["):  # nested rows
        if not inner.endswith("]"):
            raise InputFormatError("unbalanced brackets in inline matrix")
        row_strs = re.split(r"\]\s*,\s*\[", inner[1:-1])
    else:
        row_strs = [inner]
    text = "\n".join(" ".join(r.split(",")) for r in row_strs)
    return parse_matrix_text(text, field)


def load_matrix(source, field=None):
    """Load a matrix from a path (text or .json) or an inline literal.

    Returns (array, field, canonical_text) where canonical_text feeds the
    input digest.
    """
    if source.strip().startswith("["):
        a, fld = _parse_inline(source, field)
    elif os.path.exists(source):
        with open(source, "r", encoding="utf-8") as fh:
            content = fh.read()
        if source.endswith(".json"):
            try:
                doc = json.loads(content)
            except json.JSONDecodeError as exc:
                raise InputFormatError(f"{source}: invalid JSON ({exc})") from None
            a, fld = document_to_matrix(doc, field)
        else:
            try:
                a, fld = parse_matrix_text(content, field)
            except InputFormatError as exc:
                raise InputFormatError(f"{source}: {exc}") from None
    else:
        raise InputFormatError(f"no such file: {source}")
    return a, fld, emit_matrix_text(a, fld)


def digest(canonical_text):
    return hashlib.sha256(canonical_text.encode("utf-8")).hexdigest()
