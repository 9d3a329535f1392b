"""Canonical class descriptors, representative generators, and the
hard-coded catalogs of 2x2 classes.

A topological descriptor is (stable dim, unstable dim, normalized central
structure); a smooth descriptor is the normalized full structure.
Normalization scales the spectrum by 1/max|eigenvalue| whenever it is not
nilpotent, rounds to 9 decimals, and sorts eigenvalues by decreasing real
then imaginary part with block sizes descending, which makes descriptors
hashable and comparison exact at desk scale.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError
from .linalg import DEFAULT_TOL, as_matrix, field_of, require_square
from .spectral import build_jordan_matrix, JordanStructure, jordan_structure, scu_split
from .equivalence import realify

_ROUND = 9


def _normalize_blocks(blocks):
    """Scale so the largest eigenvalue modulus is 1 (when nonzero), then
    quantize and sort: returns a hashable tuple of ((re, im), sizes)."""
    if not blocks:
        return ()
    top = max(abs(lam) for lam, _ in blocks)
    scale = 1.0 / top if top > 0 else 1.0
    out = []
    for lam, sizes in blocks:
        z = lam * scale
        re = round(z.real, _ROUND) + 0.0  # normalize -0.0
        im = round(z.imag, _ROUND) + 0.0
        out.append(((re, im), tuple(sorted(sizes, reverse=True))))
    out.sort(key=lambda e: (-e[0][0], -e[0][1], e[1]))
    return tuple(out)


@dataclass(frozen=True)
class ClassDescriptor:
    """Hashable complete invariant of a topological or smooth class."""

    relation: str
    field: str
    dim_s: int
    dim_u: int
    central_structure: tuple
    full_structure: tuple = None


def descriptor(a, relation, tol=DEFAULT_TOL):
    """Canonical class descriptor of the flow generated by ``a``."""
    if relation not in ("topological", "smooth"):
        raise ValueError(f"unknown relation {relation!r}")
    a = as_matrix(a)
    require_square(a)
    fld = field_of(a)
    st = jordan_structure(a, tol)
    if fld == "real":
        dim_s = sum(st.real_dim_of(l, s) for l, s in st.blocks if l.real < 0)
        dim_u = sum(st.real_dim_of(l, s) for l, s in st.blocks if l.real > 0)
        central = [(l, s) for l, s in st.blocks if l.real == 0]
    else:
        split = scu_split(a, tol)
        dim_s, dim_u = split.dim_s, split.dim_u
        central_restriction = np.conj(split.basis_c.T) @ a @ split.basis_c
        central = jordan_structure(realify(central_restriction), tol).blocks
    if relation == "topological":
        return ClassDescriptor(
            relation=relation,
            field=fld,
            dim_s=dim_s,
            dim_u=dim_u,
            central_structure=_normalize_blocks(central),
        )
    return ClassDescriptor(
        relation=relation,
        field=fld,
        dim_s=dim_s,
        dim_u=dim_u,
        central_structure=_normalize_blocks(central),
        full_structure=_normalize_blocks(st.blocks),
    )


def _structure_from_key(key, field):
    blocks = tuple(
        sorted(
            (
                (complex(re, im), tuple(sorted(sizes, reverse=True)))
                for (re, im), sizes in key
            ),
            key=lambda p: (-abs(p[0]), -p[0].real, -p[0].imag),
        )
    )
    dim = sum(
        (2 if field == "real" and lam.imag != 0 else 1) * sum(sizes)
        for lam, sizes in blocks
    )
    return JordanStructure(field=field, dim=dim, blocks=blocks)


def representative(d):
    """A generator whose descriptor equals ``d``: minus/plus identity on
    the stable/unstable dimensions and a Jordan realization of the
    central (or, for smooth descriptors, the full) structure."""
    if d.relation == "smooth":
        st = _structure_from_key(d.full_structure, d.field)
        return build_jordan_matrix(st)
    if d.field == "real":
        st = _structure_from_key(d.central_structure, "real")
        central = build_jordan_matrix(st)
    else:
        central = _complex_central_representative(d.central_structure)
    n_s, n_u = d.dim_s, d.dim_u
    n_c = central.shape[0]
    n = n_s + n_c + n_u
    out = np.zeros((n, n), dtype=central.dtype if n_c else (
        np.complex128 if d.field == "complex" else np.float64))
    out[:n_s, :n_s] = -np.eye(n_s)
    out[n_s : n_s + n_c, n_s : n_s + n_c] = central
    out[n_s + n_c :, n_s + n_c :] = np.eye(n_u)
    return out


def _complex_central_representative(key):
    """Complex central generator whose realification has the given
    real-field structure.  Zero blocks must come in pairs per size; a
    conjugate-pair entry of complex size m maps to one complex block."""
    blocks = []
    for (re, im), sizes in key:
        if re != 0:
            raise ShapeError("central structure has an eigenvalue off the axis")
        if im == 0:
            counts = {}
            for m in sizes:
                counts[m] = counts.get(m, 0) + 1
            for m, c in counts.items():
                if c % 2:
                    raise ShapeError(
                        "realified zero blocks must come in pairs per size"
                    )
                blocks.extend([(0.0 + 0.0j, m)] * (c // 2))
        else:
            blocks.extend([(complex(0.0, im), m) for m in sizes])
    n = sum(m for _, m in blocks)
    out = np.zeros((n, n), dtype=np.complex128)
    col = 0
    for lam, m in blocks:
        for i in range(m):
            out[col + i, col + i] = lam
            if i + 1 < m:
                out[col + i, col + i + 1] = 1.0
        col += m
    return out


@dataclass(frozen=True)
class CatalogEntry:
    """One catalog item: either a concrete matrix (with its class label
    for the topological catalog) or a one-parameter family given by a
    builder and a constraint on the parameter."""

    name: str
    matrix: np.ndarray = None
    class_label: int = None
    family: callable = None
    constraint: str = None
    template: str = None

    def sample(self, a):
        if self.family is None:
            raise ValueError(f"{self.name} is not a family entry")
        return self.family(a)


def _m(rows):
    return np.array(rows, dtype=float)


_TOPOLOGICAL_2X2 = (
    ("rotation", [[0, -1], [1, 0]], 0),
    ("zero", [[0, 0], [0, 0]], 1),
    ("shear", [[0, 1], [0, 0]], 2),
    ("semi_unstable", [[0, 0], [0, 1]], 3),
    ("semi_stable", [[0, 0], [0, -1]], 4),
    ("saddle", [[1, 0], [0, -1]], 5),
    ("source", [[1, 0], [0, 1]], 6),
    ("sink", [[-1, 0], [0, -1]], 7),
    ("shear_source", [[1, 1], [0, 1]], 6),
    ("shear_sink", [[-1, -1], [0, -1]], 7),
    ("saddle_stretched", [[-1, 0], [0, 2]], 5),
    ("spiral_source", [[1, -1], [1, 1]], 6),
    ("spiral_sink", [[-1, 1], [-1, -1]], 7),
)

_SMOOTH_SINGLETONS = (
    ("rotation", [[0, -1], [1, 0]]),
    ("zero", [[0, 0], [0, 0]]),
    ("shear", [[0, 1], [0, 0]]),
    ("semi_unstable", [[0, 0], [0, 1]]),
    ("semi_stable", [[0, 0], [0, -1]]),
    ("shear_source", [[1, 1], [0, 1]]),
    ("shear_sink", [[-1, -1], [0, -1]]),
)

_SMOOTH_FAMILIES = (
    ("saddle_family", "[[-1, 0], [0, a]]", lambda a: _m([[-1, 0], [0, a]])),
    ("node_source_family", "[[1, 0], [0, a]]", lambda a: _m([[1, 0], [0, a]])),
    ("node_sink_family", "-[[1, 0], [0, a]]", lambda a: -_m([[1, 0], [0, a]])),
    ("spiral_source_family", "[[1, -a], [a, 1]]", lambda a: _m([[1, -a], [a, 1]])),
    ("spiral_sink_family", "-[[1, -a], [a, 1]]", lambda a: -_m([[1, -a], [a, 1]])),
)


def catalog_2x2(relation):
    """The 2x2 class catalog.

    topological: 13 matrices labeled into the 8 classes (labels 0..7).
    smooth: the 7 singleton representatives plus the five one-parameter
    families, with the parameter emitted symbolically (constraint
    "a in R+"); family members with parameters a and 1/a in the two node
    families represent the same class, so the unique-representative
    convention restricts those two families to 0 < a <= 1.
    """
    if relation == "topological":
        return [
            CatalogEntry(name=n, matrix=_m(rows), class_label=lab)
            for n, rows, lab in _TOPOLOGICAL_2X2
        ]
    if relation == "smooth":
        entries = [
            CatalogEntry(name=n, matrix=_m(rows)) for n, rows in _SMOOTH_SINGLETONS
        ]
        for name, template, fam in _SMOOTH_FAMILIES:
            constraint = "a in R+"
            if name.startswith("node_"):
                constraint = "a in R+ (unique representatives: 0 < a <= 1)"
            entries.append(
                CatalogEntry(
                    name=name, family=fam, constraint=constraint, template=template
                )
            )
        return entries
    raise ValueError(f"unknown relation {relation!r}")
