"""Decision procedures for smooth and topological equivalence of linear
flows, over the real and complex fields.

Smooth equivalence of the flows of A and B holds exactly when A and
alpha*B are similar for some alpha > 0 (over the common field).
Topological equivalence holds exactly when the stable and unstable
dimensions match and the central parts are similar up to a positive
scale; for complex flows the central comparison happens after
realification (the stable/unstable dimensions are compared as complex
dimensions, which realification doubles on both sides alike).

Certificates are conjugating matrices H with H A = alpha B H, assembled
from Jordan bases of both sides; their quality is checked by
:mod:`linflow.witness`, never assumed.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import FieldError
from .linalg import DEFAULT_TOL, as_matrix, field_of, frobenius, realify, require_square
from .rational import _bounded_spectrum, rational_partition
from .spectral import _jordan_basis_any, jordan_structure, scu_split

__all__ = [
    "ScaledSimilarity",
    "Verdict",
    "similar_up_to_scale",
    "smooth_verdict",
    "topological_verdict",
    "bounded_verdict",
    "realify",
]

_ALPHA_DEDUP = 1e-8


@dataclass(frozen=True)
class ScaledSimilarity:
    """Outcome of the similarity-up-to-positive-scale test.

    ``all_scales`` marks the nilpotent case where every alpha > 0 works;
    otherwise ``alphas`` lists the admissible scales found (ascending).
    ``transform`` conjugates: transform @ a = alpha * b @ transform for
    the reported alpha (the smallest admissible, or 1 when all work).
    """

    holds: bool
    alphas: tuple = ()
    all_scales: bool = False
    transform: np.ndarray = None
    alpha: float = None


@dataclass
class Verdict:
    """Equivalence decision with an optional certificate.

    ``certificate`` is the conjugating matrix (for topological verdicts,
    the conjugator of the central restrictions; the restricted central
    generators live in ``details`` so the certificate can be re-verified).
    """

    relation: str
    field: str
    equivalent: bool
    alpha: float = None
    certificate: np.ndarray = None
    reason: str = ""
    details: dict = field(default_factory=dict)


def _structures_match(sa, sb_scaled, atol):
    """One-to-one matching of clusters with equal block-size multisets and
    eigenvalues within ``atol``.  Returns the index pairing or None."""
    if sa.dim != sb_scaled.dim or len(sa.blocks) != len(sb_scaled.blocks):
        return None
    used = [False] * len(sb_scaled.blocks)
    pairing = []
    for i, (lam, sizes) in enumerate(sa.blocks):
        best_j, best_d = None, atol
        for j, (mu, sizes_b) in enumerate(sb_scaled.blocks):
            if used[j] or sizes != sizes_b:
                continue
            d = abs(lam - mu)
            if d <= best_d:
                best_j, best_d = j, d
        if best_j is None:
            return None
        used[best_j] = True
        pairing.append((i, best_j))
    return pairing


def similar_up_to_scale(a, b, tol=DEFAULT_TOL, want_transform=True):
    """Decide whether a and alpha*b are similar for some alpha > 0.

    Candidate scales are spectral-modulus ratios against a largest
    nonzero eigenvalue of ``a``; each candidate is accepted or rejected by
    a full Jordan-structure comparison.  Nilpotent pairs with equal block
    multisets admit every scale (``all_scales``).
    """
    a = as_matrix(a)
    b = as_matrix(b)
    require_square(a)
    require_square(b)
    if field_of(a) != field_of(b):
        raise FieldError("operands live over different scalar fields")
    if a.shape != b.shape:
        return ScaledSimilarity(holds=False)
    sa = jordan_structure(a, tol)
    sb = jordan_structure(b, tol)
    if sa.is_nilpotent and sb.is_nilpotent:
        sizes_a = sorted(s for _, sizes in sa.blocks for s in sizes)
        sizes_b = sorted(s for _, sizes in sb.blocks for s in sizes)
        if sizes_a != sizes_b:
            return ScaledSimilarity(holds=False)
        h = _assemble_transform(a, b, 1.0, tol) if want_transform else None
        return ScaledSimilarity(
            holds=True, alphas=(), all_scales=True, transform=h, alpha=1.0
        )
    if sa.is_nilpotent or sb.is_nilpotent:
        return ScaledSimilarity(holds=False)
    lam0 = next(lam for lam, _ in sa.blocks if lam != 0)  # largest |.| nonzero
    candidates = []
    for mu, _ in sb.blocks:
        if mu == 0:
            continue
        alpha = abs(lam0) / abs(mu)
        if all(abs(alpha - c) > _ALPHA_DEDUP * alpha for c in candidates):
            candidates.append(alpha)
    candidates.sort()
    scale = max(frobenius(a), 1e-300)
    admissible = []
    for alpha in candidates:
        atol = tol.eig_cluster_rel * max(scale, alpha * frobenius(b))
        if _structures_match(sa, sb.scaled(alpha), atol) is not None:
            admissible.append(alpha)
    if not admissible:
        return ScaledSimilarity(holds=False)
    alpha = admissible[0]
    h = _assemble_transform(a, b, alpha, tol) if want_transform else None
    return ScaledSimilarity(
        holds=True, alphas=tuple(admissible), transform=h, alpha=alpha
    )


def _cluster_ranges(st):
    """Column span of each cluster of blocks in the canonical Jordan
    basis layout."""
    ranges = []
    col = 0
    for lam, sizes in st.blocks:
        width = st.real_dim_of(lam, sizes)
        ranges.append(range(col, col + width))
        col += width
    return ranges


def _assemble_transform(a, b, alpha, tol):
    """Conjugator H with H a = alpha b H, from the Jordan bases of a and
    alpha*b with cluster column groups aligned by the eigenvalue pairing."""
    if a.shape[0] == 0:
        return np.zeros_like(a)
    pa, sta = _jordan_basis_any(a, tol)
    pb, stb = _jordan_basis_any(alpha * b, tol)
    atol = tol.eig_cluster_rel * max(frobenius(a), alpha * frobenius(b), 1e-300)
    pairing = _structures_match(sta, stb, atol)
    if pairing is None:
        return None
    ranges_b = _cluster_ranges(stb)
    order = []
    for _, j in pairing:  # pairing follows a's canonical cluster order
        order.extend(ranges_b[j])
    h = pb[:, order] @ np.linalg.inv(pa)
    return _polish_transform(a, b, alpha, h, tol)


def _polish_transform(a, b, alpha, h, tol):
    """Project h onto the numerical nullspace of X -> X a - alpha b X.

    The raw Jordan-basis conjugator carries the eigenvalue-estimate noise
    of both factorizations, which verify_conjugacy amplifies by e^(|t| a);
    the nearest exact intertwiner removes it.  Skipped for large inputs
    (the Sylvester operator is n^2 x n^2) and abandoned when the polished
    matrix loses invertibility.
    """
    n = a.shape[0]
    if n == 0 or n > 16:
        return h
    eye = np.eye(n, dtype=h.dtype)
    sylv = np.kron(a.T, eye) - alpha * np.kron(eye, b)
    try:
        _, sing, vh = np.linalg.svd(sylv)
    except np.linalg.LinAlgError:
        return h
    cutoff = max(sing[0], 1.0) * 1e-7
    null_rows = vh[sing <= cutoff] if sing.size else vh[:0]
    if null_rows.shape[0] == 0:
        return h
    vec = h.reshape(-1, order="F")  # the Kronecker identity is column-major
    polished = (np.conj(null_rows.T) @ (null_rows @ vec)).reshape(n, n, order="F")
    from .linalg import rank as _rank

    if _rank(polished, tol) < n:
        return h
    return polished


def smooth_verdict(a, b, tol=DEFAULT_TOL):
    """Smooth (C1) equivalence: similarity up to a positive scale of the
    generators themselves.  The reported alpha is the smallest admissible
    scale, or 1 when the nilpotent structure admits every scale."""
    a = as_matrix(a)
    b = as_matrix(b)
    require_square(a)
    require_square(b)
    if field_of(a) != field_of(b):
        raise FieldError("operands live over different scalar fields")
    fld = field_of(a)
    if a.shape != b.shape:
        return Verdict(
            relation="smooth",
            field=fld,
            equivalent=False,
            reason=f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}",
        )
    ss = similar_up_to_scale(a, b, tol)
    if not ss.holds:
        return Verdict(
            relation="smooth",
            field=fld,
            equivalent=False,
            reason="no positive scale makes the Jordan structures equal",
        )
    reason = (
        "generators are similar at every positive scale (nilpotent)"
        if ss.all_scales
        else f"generators are similar up to scale alpha={ss.alpha:.12g}"
    )
    return Verdict(
        relation="smooth",
        field=fld,
        equivalent=True,
        alpha=ss.alpha,
        certificate=ss.transform,
        reason=reason,
        details={"alphas": ss.alphas, "all_scales": ss.all_scales},
    )


def _central_restriction(a, split):
    qc = split.basis_c
    return np.conj(qc.T) @ a @ qc


def topological_verdict(a, b, tol=DEFAULT_TOL):
    """Topological (C0) equivalence: stable and unstable dimensions match
    and the central restrictions are similar up to a positive scale.
    Complex inputs compare complex stable/unstable dimensions and the
    realified central restrictions."""
    a = as_matrix(a)
    b = as_matrix(b)
    require_square(a)
    require_square(b)
    if field_of(a) != field_of(b):
        raise FieldError("operands live over different scalar fields")
    fld = field_of(a)
    split_a = scu_split(a, tol)
    split_b = scu_split(b, tol)
    dims_a = (split_a.dim_s, split_a.dim_c, split_a.dim_u)
    dims_b = (split_b.dim_s, split_b.dim_c, split_b.dim_u)
    details = {"dims_a": dims_a, "dims_b": dims_b}
    if split_a.dim_s != split_b.dim_s or split_a.dim_u != split_b.dim_u:
        return Verdict(
            relation="topological",
            field=fld,
            equivalent=False,
            reason=(
                f"stable/unstable dimensions differ: {dims_a[0]}/{dims_a[2]} "
                f"vs {dims_b[0]}/{dims_b[2]}"
            ),
            details=details,
        )
    ca = _central_restriction(a, split_a)
    cb = _central_restriction(b, split_b)
    if fld == "complex":
        ca = realify(ca)
        cb = realify(cb)
    details["central_a"] = ca
    details["central_b"] = cb
    ss = similar_up_to_scale(ca, cb, tol)
    if not ss.holds:
        return Verdict(
            relation="topological",
            field=fld,
            equivalent=False,
            reason=(
                "stable/unstable dimensions match but the central parts are "
                "not similar at any positive scale"
            ),
            details=details,
        )
    details["alphas"] = ss.alphas
    details["all_scales"] = ss.all_scales
    reason = (
        f"stable/unstable dimensions match ({dims_a[0]}/{dims_a[2]}) and the "
        + (
            "central parts are similar at every positive scale"
            if ss.all_scales
            else f"central parts are similar up to scale alpha={ss.alpha:.12g}"
        )
    )
    return Verdict(
        relation="topological",
        field=fld,
        equivalent=True,
        alpha=ss.alpha,
        certificate=ss.transform,
        reason=reason,
        details=details,
    )


def bounded_verdict(a, b, tol=DEFAULT_TOL, qmax=64):
    """Topological verdict specialized to bounded flows, additionally
    reporting the rational-class correspondence (class counts, matched
    periods, and the common period ratio)."""
    a = as_matrix(a)
    b = as_matrix(b)
    _bounded_spectrum(a, tol, "first generator")
    _bounded_spectrum(b, tol, "second generator")
    verdict = topological_verdict(a, b, tol)
    pa = rational_partition(a, tol, qmax)
    pb = rational_partition(b, tol, qmax)
    verdict.details["class_count_a"] = pa.class_count
    verdict.details["class_count_b"] = pb.class_count
    verdict.details["fixed_dims"] = (pa.fixed_dim, pb.fixed_dim)
    if verdict.equivalent and pa.class_count == pb.class_count:
        pairs = []
        for ca, cb in zip(pa.classes, pb.classes):
            ratio = cb.period / ca.period if ca.period else None
            pairs.append(
                {
                    "members_a": ca.members,
                    "members_b": cb.members,
                    "period_a": ca.period,
                    "period_b": cb.period,
                    "period_ratio": ratio,
                }
            )
        verdict.details["class_pairs"] = pairs
        ratios = [p["period_ratio"] for p in pairs if p["period_ratio"]]
        if ratios:
            verdict.details["period_ratio"] = ratios[0]
    return verdict
