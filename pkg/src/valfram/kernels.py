"""Batched numpy kernels for corpus-scale checks.

Two independent evaluators live here:

* :class:`BasisEvaluator` evaluates a node on polynomials of bounded degree
  through the standard monomials ``prod phi_i^{j_i}`` of its keys.  The
  nested key expansion of the engine is exactly the expansion in this basis,
  so the value is ``min_d v_p(c_d) + w_d`` with ``c = M g`` for a fixed
  unitriangular integer matrix ``M``.
* :func:`res_vp` computes ``v_p(Res(F, g)) = v_p(det g(C_F))`` from the
  companion matrix ``C_F``, working modulo a power of p.  Residues that vanish
  modulo that power are recomputed exactly with :func:`valfram.poly.resultant`.

Values are returned scaled by an integer ``S`` (a common denominator), with
``INF_SCALED`` standing for +inf.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence

import numpy as np

from .arith import INF, as_rat, vp
from .poly import Poly, _expand, resultant

__all__ = [
    "BasisEvaluator",
    "INF_SCALED",
    "chain_evaluator",
    "poly_matrix",
    "res_vp",
    "truncation_check",
    "vp_array",
]

INF_SCALED = np.int64(2**62)
_SAFE = 2**62


def vp_array(a: np.ndarray, p: int) -> np.ndarray:
    """Elementwise v_p of an int64 array; zeros map to INF_SCALED."""
    a = np.abs(np.asarray(a, dtype=np.int64))
    zero = a == 0
    v = np.zeros(a.shape, dtype=np.int64)
    if p == 2:
        low = a & -a
        nz = ~zero
        v[nz] = np.log2(low[nz].astype(np.float64)).astype(np.int64)
    else:
        a = np.where(zero, 1, a)
        m = a % p == 0
        while m.any():
            v += m
            a = np.where(m, a // p, a)
            m = a % p == 0
    v[zero] = INF_SCALED
    return v


def poly_matrix(polys: Sequence[Poly], width: int) -> np.ndarray:
    out = np.zeros((len(polys), width), dtype=np.int64)
    for i, f in enumerate(polys):
        cs = f.coeffs
        if len(cs) > width:
            raise ValueError("polynomial too long for the batch width")
        out[i, :len(cs)] = cs
    return out


class BasisEvaluator:
    """Evaluate a node with keys ``keys`` and values ``gammas`` on degrees < D."""

    def __init__(self, keys: Sequence[Poly], gammas: Sequence, D: int, p: int) -> None:
        self.p = p
        self.D = D
        gammas = [as_rat(g) for g in gammas]
        self.S = 1
        for g in gammas:
            self.S = lcm(self.S, g.denominator)
        ms = [k.degree for k in keys]
        B = [[Fraction(0)] * D for _ in range(D)]
        w = []
        for d in range(D):
            rem, mono, wd = d, [1], Fraction(0)
            for i in range(len(keys) - 1, -1, -1):
                j, rem = divmod(rem, ms[i])
                for _ in range(j):
                    mono = _mul_list(mono, keys[i].coeffs)
                wd += j * gammas[i]
            for i, c in enumerate(mono):
                B[i][d] = Fraction(c)
            w.append(int(wd * self.S))
        self.w = np.array(w, dtype=np.int64)
        Minv = _unitriangular_inverse(B)
        self._exact = all(c.denominator == 1 for row in Minv for c in row)
        if self._exact:
            self.M = np.array([[int(c) for c in row] for row in Minv], dtype=object)
            self._row_bound = max(sum(abs(int(c)) for c in row) for row in Minv)
            self._Mi = self.M.astype(np.int64) if self._row_bound < _SAFE else None
        else:
            self.M = Minv
            self._Mi = None
        self._keys = list(keys)
        self._gammas = gammas

    def coefficients(self, G: np.ndarray) -> np.ndarray:
        """Standard-monomial coefficients of the rows of G (int64 when safe)."""
        if self._Mi is not None:
            hmax = int(np.abs(G).max()) if G.size else 0
            if hmax * self._row_bound < _SAFE:
                return G @ self._Mi.T
        return None

    def values_scaled(self, G: np.ndarray) -> np.ndarray:
        G = np.asarray(G, dtype=np.int64)
        if G.shape[-1] < self.D:
            G = np.pad(G, [(0, 0)] * (G.ndim - 1) + [(0, self.D - G.shape[-1])])
        C = self.coefficients(G)
        if C is None:
            return self._values_slow(G)
        v = vp_array(C, self.p)
        fin = v != INF_SCALED
        scaled = np.where(fin, v * self.S + self.w, INF_SCALED)
        return scaled.min(axis=-1)

    def _values_slow(self, G: np.ndarray) -> np.ndarray:
        flat = G.reshape(-1, G.shape[-1])
        out = np.empty(flat.shape[0], dtype=np.int64)
        for r, row in enumerate(flat):
            best = None
            for d in range(self.D):
                c = sum(Fraction(self.M[d][k]) * int(row[k]) for k in range(self.D))
                if c:
                    val = vp(c, self.p) * self.S + int(self.w[d])
                    best = val if best is None or val < best else best
            out[r] = INF_SCALED if best is None else best
        return out.reshape(G.shape[:-1])

    def values(self, polys: Sequence[Poly]) -> list:
        sc = self.values_scaled(poly_matrix(polys, self.D))
        return [INF if s == INF_SCALED else Fraction(int(s), self.S) for s in sc]


def _mul_list(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _unitriangular_inverse(B):
    n = len(B)
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    # B is upper unitriangular: back substitution column by column
    for col in range(n):
        for i in range(n - 1, -1, -1):
            s = inv[i][col]
            for k in range(i + 1, n):
                s -= B[i][k] * inv[k][col]
            inv[i][col] = s
    return inv


def chain_evaluator(chain, D: Optional[int] = None) -> BasisEvaluator:
    """Evaluator of v_F (equivalently of rho_F) on polynomials of degree < deg F."""
    n = chain.F.degree
    return BasisEvaluator(chain.keys, chain.gammas, D or n, chain.p)


# resultants --------------------------------------------------------------------------------------


def _modulus(p: int) -> int:
    q = p
    while q * p < 2**29:
        q *= p
    return q


_PERMS: dict[int, list] = {}


def _perms(n: int):
    if n not in _PERMS:
        out = []
        for perm in itertools.permutations(range(n)):
            inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
            out.append((perm, -1 if inv % 2 else 1))
        _PERMS[n] = out
    return _PERMS[n]


def _mult_columns(F_low: np.ndarray, G: np.ndarray, Q: int) -> list:
    """Columns x^j g mod F (j < n) of the matrix g(C_F), reduced modulo Q."""
    n = F_low.shape[-1]
    Fq = (F_low % Q)[:, None, :]
    G = G % Q
    k = G.shape[-1]
    if k > n:
        G = G.copy()
        for j in range(k - 1, n - 1, -1):
            top = G[..., j:j + 1]
            G[..., j - n:j] = (G[..., j - n:j] - top * Fq) % Q
        G = G[..., :n]
    elif k < n:
        G = np.concatenate([G, np.zeros(G.shape[:-1] + (n - k,), dtype=np.int64)], axis=-1)
    cols = [G]
    col = G
    for _ in range(n - 1):
        top = col[..., n - 1:n]
        nxt = np.empty_like(col)
        nxt[..., 0:1] = (-top * Fq[..., 0:1]) % Q
        nxt[..., 1:] = (col[..., :n - 1] - top * Fq[..., 1:]) % Q
        cols.append(nxt)
        col = nxt
    return cols


def _det_mod(cols: list, Q: int) -> np.ndarray:
    """Determinant modulo Q of the matrix with the given columns (entries in [0, Q))."""
    n = len(cols)
    a = lambda i, j: cols[j][..., i]  # noqa: E731
    if n == 1:
        return a(0, 0) % Q
    if n == 2:
        return (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) % Q
    if n == 3:
        t0 = (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) % Q
        t1 = (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) % Q
        t2 = (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0)) % Q
        return (a(0, 0) * t0 % Q - a(0, 1) * t1 % Q + a(0, 2) * t2 % Q) % Q
    if n == 4:
        # Laplace expansion along the first two rows
        det = 0
        for (c1, c2), sign in _PAIRS4:
            o1, o2 = (c for c in range(4) if c not in (c1, c2))
            top = (a(0, c1) * a(1, c2) - a(0, c2) * a(1, c1)) % Q
            bot = (a(2, o1) * a(3, o2) - a(2, o2) * a(3, o1)) % Q
            det = (det + sign * (top * bot % Q)) % Q
        return det
    det = 0
    for perm, sign in _perms(n):
        t = a(0, perm[0])
        for r in range(1, n):
            t = (t * a(r, perm[r])) % Q
        det = (det + sign * t) % Q
    return det


_PAIRS4 = [((0, 1), 1), ((0, 2), -1), ((0, 3), 1), ((1, 2), 1), ((1, 3), -1), ((2, 3), 1)]


def res_vp(F_low: np.ndarray, G: np.ndarray, p: int, fallback: bool = True) -> np.ndarray:
    """v_p(Res(F, g)) for monic F (rows of F_low, low coefficients) and g in G.

    ``F_low`` has shape (NF, n) and ``G`` shape (NF, S, k) for any k.  Zero
    resultants give INF_SCALED.  Entries whose determinant vanishes modulo the
    working power of p are recomputed exactly when ``fallback`` is set, else -1.
    """
    F_low = np.asarray(F_low, dtype=np.int64)
    G = np.asarray(G, dtype=np.int64)
    Q = _modulus(p)
    det = _det_mod(_mult_columns(F_low, G, Q), Q)
    v = vp_array(det, p)
    unknown = det == 0
    if unknown.any():
        v = v.copy()
        for a, b in zip(*np.nonzero(unknown)):
            if not fallback:
                v[a, b] = -1
                continue
            F = Poly([int(c) for c in F_low[a]] + [1])
            g = Poly([int(c) for c in G[a, b]])
            r = resultant(F, g) if not g.is_zero() else 0
            v[a, b] = INF_SCALED if r == 0 else vp(r, p)
    return v


# truncations --------------------------------------------------------------------------------------


def _digit_matrix(g: Poly, L: int) -> tuple[np.ndarray, int]:
    """Matrix T with (T @ f)[s*m + i] = coefficient i of the s-th g-adic digit of f."""
    m = g.degree
    nd = (L - 1) // m + 1
    T = np.zeros((nd * m, L), dtype=object)
    for col in range(L):
        digits = _expand([0] * col + [1], g.coeffs)
        for s, d in enumerate(digits):
            for i, c in enumerate(d):
                T[s * m + i, col] = as_rat(c)
    return T, nd


def truncation_check(chain, g: Poly, samples: int = 1000, seed: int = 0,
                     height: int = 100) -> bool:
    """Sampled multiplicativity of the truncation of v_F by g on random pairs."""
    n = chain.F.degree
    m = g.degree
    if m > n:
        return False
    ev = chain_evaluator(chain)
    rng = np.random.default_rng(seed)
    deg1 = rng.integers(0, n, samples)
    deg2 = rng.integers(0, n, samples)
    f1 = rng.integers(-height, height + 1, (samples, n))
    f2 = rng.integers(-height, height + 1, (samples, n))
    f1[np.arange(n)[None, :] > deg1[:, None]] = 0
    f2[np.arange(n)[None, :] > deg2[:, None]] = 0
    f1[np.arange(samples), deg1] = np.where(f1[np.arange(samples), deg1] == 0, 1,
                                            f1[np.arange(samples), deg1])
    f2[np.arange(samples), deg2] = np.where(f2[np.arange(samples), deg2] == 0, 1,
                                            f2[np.arange(samples), deg2])
    L = 2 * n - 1
    prod = np.zeros((samples, L), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            prod[:, i + j] += f1[:, i] * f2[:, j]
    vg = chain.vF(g)
    if vg is INF:
        return False
    vg_s = int(as_rat(vg) * ev.S)
    T, nd = _digit_matrix(g, L)
    if all(isinstance(c, int) or as_rat(c).denominator == 1 for c in T.flat):
        Ti = np.array([[int(c) for c in row] for row in T], dtype=np.int64)
        bound = int(np.abs(Ti).sum(axis=1).max()) * int(np.abs(prod).max() + 1)
        if bound >= _SAFE:
            return _truncation_check_slow(chain, g, f1, f2)
    else:
        return _truncation_check_slow(chain, g, f1, f2)

    def trunc(rows: np.ndarray) -> np.ndarray:
        rows = np.pad(rows, [(0, 0), (0, L - rows.shape[1])])
        dig = (rows @ Ti.T).reshape(rows.shape[0], nd, m)
        vals = ev.values_scaled(dig)
        s = np.arange(nd, dtype=np.int64)[None, :]
        tot = np.where(vals == INF_SCALED, INF_SCALED, vals + s * vg_s)
        return tot.min(axis=1)

    t1, t2, t12 = trunc(f1), trunc(f2), trunc(prod)
    return bool(np.all(t12 == t1 + t2))


def _truncation_check_slow(chain, g, f1, f2) -> bool:
    from .valuation import truncation

    tr = truncation(chain.leaf, g)
    for a, b in zip(f1, f2):
        pa, pb = Poly([int(c) for c in a]), Poly([int(c) for c in b])
        if tr(pa * pb) != tr(pa) + tr(pb):
            return False
    return True
