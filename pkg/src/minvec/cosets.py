"""Finite residue models: GL2 over Z/p^m, and the compact support set used by
the distinguished matrix coefficient, materialized as integer matrix arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SizeGuard
from .matgroups import TorusSpec
from .residues import ENUMERATION_BOUND


def gl2_order(p: int, m: int) -> int:
    """|GL2(Z/p^m)|."""
    return p ** (4 * (m - 1)) * (p * p - 1) * (p * p - p)


def gl2_elements(p: int, m: int) -> np.ndarray:
    """All of GL2(Z/p^m) as an (N, 2, 2) int64 array."""
    pm = p**m
    if pm**4 > ENUMERATION_BOUND:
        raise SizeGuard(f"GL2(Z/{p}^{m}) enumeration exceeds the configured bound")
    grid = np.indices((pm, pm, pm, pm)).reshape(4, -1).T
    a, b, c, d = grid.T
    keep = (a * d - b * c) % p != 0
    mats = grid[keep].reshape(-1, 2, 2).astype(np.int64)
    assert len(mats) == gl2_order(p, m)
    return mats


def mat_keys(mats: np.ndarray, pm: int) -> np.ndarray:
    """Injective integer key for matrices mod pm (row-major base-pm digits)."""
    f = mats.reshape(-1, 4) % pm
    return ((f[:, 0] * pm + f[:, 1]) * pm + f[:, 2]) * pm + f[:, 3]


def inverse_table(pm: int, p: int) -> np.ndarray:
    """inv[u] = u^-1 mod pm for units u; 0 elsewhere."""
    inv = np.zeros(pm, dtype=np.int64)
    for u in range(1, pm):
        if u % p != 0:
            inv[u] = pow(u, -1, pm)
    return inv


@dataclass
class KTSupport:
    """The support of the distinguished matrix coefficient inside GL2(Z/p^{2n}):
    the group generated by the torus units and the depth-n upper-triangular
    congruence block, with each element's factorization recorded.
    """

    spec: TorusSpec
    pm: int                 # p^{2n}
    mats: np.ndarray        # (S, 2, 2) matrices mod pm
    torus: np.ndarray       # (S, 2) unit pairs (x, y): the torus factor
    bpart: np.ndarray       # (S, 2) pairs (a, b) mod p^n: factor [[1+p^n a, p^n b], [0, 1]]

    @property
    def size(self) -> int:
        return len(self.mats)

    def density(self):
        from fractions import Fraction
        return Fraction(self.size, gl2_order(self.spec.p, 2 * self.spec.n))


def kt_support(spec: TorusSpec) -> KTSupport:
    """Materialize the support mod p^{2n} as the bijective product
    (torus units mod p^{2n}) x (unipotent-block representatives mod p^n).
    """
    p, n, alpha = spec.p, spec.n, spec.alpha
    pm, pn = p ** (2 * n), p**n
    n_torus = pm * pm - (pm // p) ** 2
    if n_torus * pn * pn > 2 * ENUMERATION_BOUND:
        raise SizeGuard(f"support for (p, n) = ({p}, {n}) exceeds the configured bound")
    xs, ys = np.meshgrid(np.arange(pm), np.arange(pm), indexing="ij")
    unit = (xs % p != 0) | (ys % p != 0)
    tx, ty = xs[unit].astype(np.int64), ys[unit].astype(np.int64)
    t_mats = np.stack([tx, ty, (-alpha * ty) % pm, tx], axis=-1).reshape(-1, 2, 2)

    aa, bb = np.meshgrid(np.arange(pn), np.arange(pn), indexing="ij")
    aa, bb = aa.ravel().astype(np.int64), bb.ravel().astype(np.int64)
    b_mats = np.stack([(1 + pn * aa) % pm, (pn * bb) % pm,
                       np.zeros_like(aa), np.ones_like(aa)], axis=-1).reshape(-1, 2, 2)

    # products t * b over the full grid
    prod = np.einsum("sij,tjk->stik", t_mats, b_mats) % pm
    S = len(t_mats) * len(b_mats)
    mats = prod.reshape(S, 2, 2)
    torus = np.repeat(np.stack([tx, ty], axis=-1), len(b_mats), axis=0)
    bpart = np.tile(np.stack([aa, bb], axis=-1), (len(t_mats), 1))
    keys = mat_keys(mats, pm)
    assert len(np.unique(keys)) == S, "torus x block product failed to be injective"
    return KTSupport(spec, pm, mats, torus, bpart)


def kt_membership_mask(mats: np.ndarray, spec: TorusSpec) -> np.ndarray:
    """Vectorized membership test mod p^{2n} (entries assumed in GL2(Z/p^{2n}))."""
    pn = spec.p**spec.n
    a, b = mats[:, 0, 0], mats[:, 0, 1]
    c, d = mats[:, 1, 0], mats[:, 1, 1]
    return ((a - d) % pn == 0) & ((c + spec.alpha * b) % pn == 0)


def random_gl2(p: int, m: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform random elements of GL2(Z/p^m)."""
    pm = p**m
    out = np.empty((size, 2, 2), dtype=np.int64)
    filled = 0
    while filled < size:
        cand = rng.integers(0, pm, size=(2 * (size - filled) + 8, 2, 2), dtype=np.int64)
        det = (cand[:, 0, 0] * cand[:, 1, 1] - cand[:, 0, 1] * cand[:, 1, 0]) % p
        good = cand[det != 0]
        take = min(len(good), size - filled)
        out[filled:filled + take] = good[:take]
        filled += take
    return out


def random_kt_elements(spec: TorusSpec, size: int, rng: np.random.Generator):
    """Uniform random support elements mod p^{2n}, with their factorizations.

    Returns (mats, torus_pairs, bparts) in the same layout as KTSupport rows.
    """
    p, n, alpha = spec.p, spec.n, spec.alpha
    pm, pn = p ** (2 * n), p**n
    tx = np.empty(size, dtype=np.int64)
    ty = np.empty(size, dtype=np.int64)
    filled = 0
    while filled < size:
        cx = rng.integers(0, pm, size=2 * (size - filled) + 8, dtype=np.int64)
        cy = rng.integers(0, pm, size=len(cx), dtype=np.int64)
        good = (cx % p != 0) | (cy % p != 0)
        take = min(int(good.sum()), size - filled)
        tx[filled:filled + take] = cx[good][:take]
        ty[filled:filled + take] = cy[good][:take]
        filled += take
    aa = rng.integers(0, pn, size=size, dtype=np.int64)
    bb = rng.integers(0, pn, size=size, dtype=np.int64)
    t_mats = np.stack([tx, ty, (-alpha * ty) % pm, tx], axis=-1).reshape(-1, 2, 2)
    b_mats = np.stack([(1 + pn * aa) % pm, (pn * bb) % pm,
                       np.zeros_like(aa), np.ones_like(aa)], axis=-1).reshape(-1, 2, 2)
    mats = np.einsum("sij,sjk->sik", t_mats, b_mats) % pm
    return mats, np.stack([tx, ty], axis=-1), np.stack([aa, bb], axis=-1)
