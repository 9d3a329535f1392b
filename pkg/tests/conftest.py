"""Shared builders for the test suite: random orthogonal/conditioned
matrices and planted real Jordan structures."""

import numpy as np
import pytest

from linflow import Tolerance, nilpotent_block

# planted-structure menus: absolute separations >= 0.8 so a clustering
# radius of a few percent of the matrix norm cannot merge distinct
# eigenvalues, while still re-merging the eps**(1/m) scatter rings of
# defective blocks (see test_acceptance for the calibration rationale)
FREQS = (1.0, 2.1, 3.3)
HYPER = (-1.2, 1.7)

# clustering radius for recovering planted defective structures; the
# eigenvalue scatter of a size-m nilpotent block under orthogonal
# conjugation grows like eps**(1/m) (about 4e-3 relative at m = 8)
PLANTED_TOL = Tolerance(eig_cluster_rel=2e-2)


def haar_orthogonal(n, rng):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diagonal(r))


def invertible_with_cond(n, cond, rng):
    """Random invertible matrix with condition number exactly ``cond``."""
    if n == 1:
        return np.array([[1.0]])
    u = haar_orthogonal(n, rng)
    v = haar_orthogonal(n, rng)
    sing = np.exp(np.linspace(0.0, np.log(cond), n))
    return u @ np.diag(sing) @ v


def pair_block(s, mc):
    """Real 2mc x 2mc block with eigenvalues +-i s, complex size mc."""
    j = nilpotent_block(mc)
    eye = np.eye(mc)
    return np.block([[j, -s * eye], [s * eye, j]])


def rotations(*freqs):
    """Block-diagonal of 2x2 rotations with the given frequencies."""
    n = 2 * len(freqs)
    out = np.zeros((n, n))
    for i, s in enumerate(freqs):
        out[2 * i, 2 * i + 1] = -s
        out[2 * i + 1, 2 * i] = s
    return out


def block_diag(*mats):
    n = sum(m.shape[0] for m in mats)
    out = np.zeros((n, n))
    ofs = 0
    for m in mats:
        k = m.shape[0]
        out[ofs : ofs + k, ofs : ofs + k] = m
        ofs += k
    return out


def realize_blocks(blocks):
    """Real Jordan matrix for a planted block list, in block order.

    blocks: ('zero', m) | ('pair', s, mc) | ('hyp', lam, m)
    """
    mats = []
    for b in blocks:
        if b[0] == "zero":
            mats.append(nilpotent_block(b[1]))
        elif b[0] == "pair":
            mats.append(pair_block(b[1], b[2]))
        else:
            lam, m = b[1], b[2]
            mats.append(lam * np.eye(m) + nilpotent_block(m))
    return block_diag(*mats)


def random_mixed_structure(rng, max_dim=10):
    """Random planted structure mixing at least two block kinds."""
    while True:
        blocks = []
        budget = int(rng.integers(4, max_dim + 1))
        while budget > 0:
            kind = rng.choice(["zero", "pair", "hyp"])
            if kind == "zero":
                m = int(rng.integers(1, min(8, budget) + 1))
                blocks.append(("zero", m))
                budget -= m
            elif kind == "pair" and budget >= 2:
                mc = int(rng.integers(1, min(4, budget // 2) + 1))
                blocks.append(("pair", float(rng.choice(FREQS)), mc))
                budget -= 2 * mc
            elif kind == "hyp":
                m = int(rng.integers(1, min(3, budget) + 1))
                blocks.append(("hyp", float(rng.choice(HYPER)), m))
                budget -= m
        if len({b[0] for b in blocks}) >= 2:
            return blocks


def planted_central_counts(blocks):
    """{(size, frequency): count} of the central blocks of a plant."""
    counts = {}
    for b in blocks:
        if b[0] == "zero":
            key = (b[1], 0.0)
        elif b[0] == "pair":
            key = (b[2], b[1])
        else:
            continue
        counts[key] = counts.get(key, 0) + 1
    return counts


def match_frequency(s, candidates=(0.0,) + FREQS, atol=0.2):
    for f in candidates:
        if abs(s - f) <= atol:
            return f
    return s


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
