"""Corpus-scale checks on top of the numpy kernels.

The corpus holds about 10^5 chains but only a few hundred distinct
signatures (deg F, keys, gammas).  Below degree deg F the valuation v_F is
the last inner node of the chain, so every check that evaluates v_F on
polynomials of degree < deg F is done with one evaluator per signature.
Resultants are always per polynomial.

All functions return plain dicts: counts, a pass flag and up to a few
failure examples.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence

import numpy as np

from .arith import INF, as_rat, format_val
from .chains import MLVChain, build_chains, ramification_invariants
from .kernels import INF_SCALED, BasisEvaluator, res_vp, vp_array
from .poly import Poly

__all__ = [
    "SignatureTable",
    "check_criteria_pairs",
    "check_equivalence_block",
    "check_frames",
    "check_krasner",
    "check_pairs",
    "check_resultant_oracle",
    "check_triples",
    "compare_valuations",
    "engine_pass",
]

_SAFE = 2**62
_MAX_EXAMPLES = 5


def _int_coeffs(f: Poly) -> list[int]:
    cs = [as_rat(c) for c in f.coeffs]
    if any(c.denominator != 1 for c in cs):
        raise ValueError(f"{f} is not integral")
    return [int(c) for c in cs]


class SignatureTable:
    """Stacked basis evaluators for the chains of one prime and one degree."""

    def __init__(self, entries: Sequence, p: int, n: int) -> None:
        self.p = p
        self.n = n
        index: dict = {}
        self.sig_of = np.empty(len(entries), dtype=np.int64)
        for i, e in enumerate(entries):
            self.sig_of[i] = index.setdefault(e.signature, len(index))
        self.signatures = list(index)
        self.evaluators = [BasisEvaluator(list(k), list(g), n, p) for _n, k, g in self.signatures]
        self.S = 1
        for ev in self.evaluators:
            self.S = lcm(self.S, ev.S)
        self._exact = all(ev._Mi is not None for ev in self.evaluators)
        if self._exact:
            self.M = np.stack([ev._Mi for ev in self.evaluators])
            self.row_bound = np.array([ev._row_bound for ev in self.evaluators], dtype=object)
        self.w = np.stack([ev.w * (self.S // ev.S) for ev in self.evaluators])

    def values_scaled(self, sig: np.ndarray, G: np.ndarray) -> np.ndarray:
        """v_F (times S) of G[f, t] under the signature sig[f]; degrees must be < n."""
        G = np.asarray(G, dtype=np.int64)
        if G.shape[-1] < self.n:
            G = np.concatenate([G, np.zeros(G.shape[:-1] + (self.n - G.shape[-1],), np.int64)], -1)
        hmax = int(np.abs(G).max()) if G.size else 0
        if self._exact and max(self.row_bound[np.unique(sig)]) * max(hmax, 1) < _SAFE:
            C = np.einsum("ftk,fdk->ftd", G, self.M[sig])
            v = vp_array(C, self.p)
            w = self.w[sig][:, None, :]
            scaled = np.where(v == INF_SCALED, INF_SCALED, v * self.S + w)
            return scaled.min(axis=-1)
        out = np.empty(G.shape[:-1], dtype=np.int64)
        for f in range(G.shape[0]):
            ev = self.evaluators[sig[f]]
            out[f] = ev.values_scaled(G[f])
            fin = out[f] != INF_SCALED
            out[f][fin] *= self.S // ev.S
        return out


def _fraction(scaled: int, S: int):
    return INF if scaled == INF_SCALED else Fraction(int(scaled), S)


def _by_degree(entries: Sequence) -> dict[int, list[int]]:
    out: dict[int, list[int]] = {}
    for i, e in enumerate(entries):
        out.setdefault(e.F.degree, []).append(i)
    return out


def _f_low(entries: Sequence, idx: Sequence[int]) -> np.ndarray:
    return np.array([_int_coeffs(entries[i].F)[:-1] for i in idx], dtype=np.int64)


def _sample_g(rng: np.random.Generator, keys: list, n: int, T: int, height: int,
              p: int) -> np.ndarray:
    """T polynomials of degree < n: half uniform, half p-adically close to a key multiple."""
    G = rng.integers(-height, height + 1, (T, n))
    deg = rng.integers(0, n, T)
    G[np.arange(n)[None, :] > deg[:, None]] = 0
    lead = G[np.arange(T), deg]
    G[np.arange(T), deg] = np.where(lead == 0, 1, lead)
    half = T // 2
    low_keys = [k for k in keys if len(k) - 1 < n]
    if not low_keys or half == T:
        return G
    R = T - half
    which = rng.integers(0, len(low_keys), R)
    rows = np.zeros((R, n), dtype=np.int64)
    for kk, k in enumerate(low_keys):
        sel = np.nonzero(which == kk)[0]
        if not sel.size:
            continue
        m = len(k) - 1
        qdeg = rng.integers(0, n - m, sel.size)
        q = rng.integers(-3, 4, (sel.size, n - m))
        q[np.arange(n - m)[None, :] > qdeg[:, None]] = 0
        lead = q[np.arange(sel.size), qdeg]
        q[np.arange(sel.size), qdeg] = np.where(lead == 0, 1, lead)
        prod = np.zeros((sel.size, n), dtype=np.int64)
        for i in range(n - m):
            prod[:, i:i + m + 1] += q[:, i:i + 1] * np.asarray(k, dtype=np.int64)[None, :]
        rows[sel] = prod
    shift = p ** rng.integers(1, 7, R)
    rows += rng.integers(-height, height + 1, (R, n)) * shift[:, None]
    G[half:] = rows
    return G


# criterion: resultant oracle --------------------------------------------------------------


def check_resultant_oracle(entries: Sequence, p: int, samples: int = 500, seed: int = 0,
                           height: int = 100, chunk: int = 1000) -> dict:
    """deg(F) * v_F(g) == v_p(Res(F, g)) for ``samples`` random g per entry."""
    rng = np.random.default_rng(seed)
    pairs = bad = positive = 0
    examples = []
    for n, idx in sorted(_by_degree(entries).items()):
        table = SignatureTable([entries[i] for i in idx], p, n)
        for lo in range(0, len(idx), chunk):
            part = idx[lo:lo + chunk]
            sig = table.sig_of[lo:lo + chunk]
            G = np.stack([
                _sample_g(rng, [_int_coeffs(k) for k in entries[i].keys], n, samples, height, p)
                for i in part
            ])
            v = table.values_scaled(sig, G)
            r = res_vp(_f_low(entries, part), G, p)
            fin = v != INF_SCALED
            ok = np.where(fin, n * v == table.S * r, r == INF_SCALED)
            pairs += ok.size
            positive += int(((v > 0) & fin).sum())
            nbad = int((~ok).sum())
            bad += nbad
            for a, b in zip(*np.nonzero(~ok)):
                if len(examples) >= _MAX_EXAMPLES:
                    break
                examples.append({"F": str(entries[part[a]].F), "g": str(Poly([int(c) for c in G[a, b]])),
                                 "vF": format_val(_fraction(v[a, b], table.S)), "vp_res": int(r[a, b])})
    return {"passed": bad == 0, "entries": len(entries), "pairs": pairs, "failures": bad,
            "positive_values": positive, "examples": examples}


# pairs and triples ------------------------------------------------------------------------


def _poly_rows(entries: Sequence, idx: Sequence[int], width: int) -> np.ndarray:
    out = np.zeros((len(idx), width), dtype=np.int64)
    for r, i in enumerate(idx):
        cs = _int_coeffs(entries[i].F)
        out[r, :len(cs)] = cs
    return out


def _reduce_mod(G: np.ndarray, F_low: np.ndarray) -> np.ndarray:
    """Rows of G reduced modulo the monic rows of F (exact int64)."""
    n = F_low.shape[1]
    G = G.copy()
    for j in range(G.shape[1] - 1, n - 1, -1):
        top = G[:, j:j + 1]
        G[:, j - n:j] -= top * F_low
        G[:, j] = 0
    return G[:, :n]


class _PairEngine:
    """u(F, G) from resultants in both directions and from both chains."""

    def __init__(self, entries: Sequence, p: int) -> None:
        self.entries = entries
        self.p = p
        self.tables: dict[int, SignatureTable] = {}
        self.pos: dict[int, tuple[int, int]] = {}
        for n, idx in _by_degree(entries).items():
            t = SignatureTable([entries[i] for i in idx], p, n)
            self.tables[n] = t
            for r, i in enumerate(idx):
                self.pos[i] = (n, int(t.sig_of[r]))
        self.S = lcm(*[t.S for t in self.tables.values()])
        self.L = 144 * self.S

    def vF_scaled(self, i_idx: np.ndarray, j_idx: np.ndarray) -> np.ndarray:
        """v_{F_i}(F_j) / deg F_j, scaled by L (F_j reduced modulo F_i first)."""
        out = np.empty(len(i_idx), dtype=np.int64)
        degs = np.array([self.entries[i].F.degree for i in i_idx])
        for n in np.unique(degs):
            sel = np.nonzero(degs == n)[0]
            ii, jj = i_idx[sel], j_idx[sel]
            Fl = _f_low(self.entries, ii)
            G = _poly_rows(self.entries, jj, 5)
            R = _reduce_mod(G, Fl)
            t = self.tables[int(n)]
            sig = np.array([self.pos[int(i)][1] for i in ii])
            v = t.values_scaled(sig, R[:, None, :])[:, 0]
            dG = np.array([self.entries[j].F.degree for j in jj])
            fin = v != INF_SCALED
            out[sel] = np.where(fin, v * (self.L // t.S) // np.where(fin, dG, 1), INF_SCALED)
        return out

    def res_scaled(self, i_idx: np.ndarray, j_idx: np.ndarray) -> np.ndarray:
        """v_p(det F_j(C_{F_i})) / (deg F_i deg F_j), scaled by L."""
        out = np.empty(len(i_idx), dtype=np.int64)
        degs = np.array([self.entries[i].F.degree for i in i_idx])
        for n in np.unique(degs):
            sel = np.nonzero(degs == n)[0]
            ii, jj = i_idx[sel], j_idx[sel]
            G = _poly_rows(self.entries, jj, 5)[:, None, :]
            r = res_vp(_f_low(self.entries, ii), G, self.p)[:, 0]
            nn = n * np.array([self.entries[j].F.degree for j in jj])
            fin = r != INF_SCALED
            out[sel] = np.where(fin, r * self.L // nn, INF_SCALED)
        return out


def check_pairs(entries: Sequence, p: int, i_idx, j_idx, engine: Optional[_PairEngine] = None) -> dict:
    """Symmetry and chain consistency of u on the given ordered pairs (i != j)."""
    eng = engine or _PairEngine(entries, p)
    i_idx, j_idx = np.asarray(i_idx), np.asarray(j_idx)
    u_ij = eng.res_scaled(i_idx, j_idx)
    u_ji = eng.res_scaled(j_idx, i_idx)
    c_ij = eng.vF_scaled(i_idx, j_idx)
    c_ji = eng.vF_scaled(j_idx, i_idx)
    finite = (u_ij != INF_SCALED) & (u_ji != INF_SCALED)
    sym = u_ij == u_ji
    cons = (c_ij == u_ij) & (c_ji == u_ij)
    ok = finite & sym & cons
    return {"passed": bool(ok.all()), "pairs": len(i_idx), "finite": int(finite.sum()),
            "symmetric": int(sym.sum()), "consistent": int(cons.sum()),
            "examples": _pair_examples(entries, i_idx, j_idx, ~ok), "u": u_ij, "L": eng.L}


def _pair_examples(entries, i_idx, j_idx, mask) -> list:
    return [(str(entries[i].F), str(entries[j].F))
            for i, j in zip(i_idx[mask][:_MAX_EXAMPLES], j_idx[mask][:_MAX_EXAMPLES])]


def check_triples(entries: Sequence, p: int, count: int = 100_000, seed: int = 0) -> dict:
    """Ultrametric axioms on sampled triples: half uniform, half within a degree and signature."""
    rng = np.random.default_rng(seed)
    N = len(entries)
    half = count // 2
    uni = rng.integers(0, N, (half, 3))
    groups: dict = {}
    for i, e in enumerate(entries):
        groups.setdefault(e.signature, []).append(i)
    big = [np.array(g) for g in groups.values() if len(g) >= 3]
    weights = np.array([len(g) for g in big], dtype=float)
    pick = rng.choice(len(big), count - half, p=weights / weights.sum())
    clu = np.stack([rng.choice(big[k], 3, replace=False) for k in pick])
    tri = np.concatenate([uni, clu])
    # identity of indiscernibles on coincident entries, ultrametric on distinct triples
    same = (tri[:, 0] == tri[:, 1]) | (tri[:, 1] == tri[:, 2]) | (tri[:, 0] == tri[:, 2])
    eng = _PairEngine(entries, p)
    diag = np.unique(tri[same].ravel()) if same.any() else np.array([], dtype=np.int64)
    ident_ok = True
    if diag.size:
        ident_ok = bool(np.all(eng.res_scaled(diag, diag) == INF_SCALED))
    T = tri[~same]
    pa = np.concatenate([T[:, [0, 1]], T[:, [1, 2]], T[:, [0, 2]]])
    key = np.sort(pa, axis=1)
    uniq, inv = np.unique(key, axis=0, return_inverse=True)
    inv = inv.ravel()
    pr = check_pairs(entries, p, uniq[:, 0], uniq[:, 1], eng)
    u = pr["u"][inv].reshape(3, -1)
    uFG, uGH, uFH = u[0], u[1], u[2]
    strong = (uFH >= np.minimum(uFG, uGH)) & (uFG >= np.minimum(uFH, uGH)) & (uGH >= np.minimum(uFG, uFH))
    passed = pr["passed"] and ident_ok and bool(strong.all())
    return {"passed": passed, "triples": int(len(tri)), "distinct_triples": int(len(T)),
            "coincident_triples": int(same.sum()), "pairs": pr["pairs"],
            "identity": ident_ok, "symmetric": pr["symmetric"] == pr["pairs"],
            "consistent": pr["consistent"] == pr["pairs"], "strong_triangle": bool(strong.all()),
            "distinct_u_values": int(len(np.unique(pr["u"]))),
            "examples": pr["examples"]}


# equivalence -------------------------------------------------------------------------------


def _wt_scaled(entry, S: int):
    """wt(rho_F) scaled by S, or None for linear F."""
    if not entry.keys:
        return None
    g, m = as_rat(entry.gammas[-1]), entry.keys[-1].degree
    return g * S / m


def check_equivalence_block(entries: Sequence, p: int, idx: Sequence[int],
                            chunk: int = 200) -> dict:
    """All ordered pairs of the block (one degree): criteria agreement and an equivalence relation.

    Criterion (2) uses u from the resultant; criterion (3) evaluates rho_F on F - G.
    """
    idx = list(idx)
    N = len(idx)
    n = entries[idx[0]].F.degree
    if any(entries[i].F.degree != n for i in idx):
        raise ValueError("equivalence blocks must have a single degree")
    E = np.zeros((N, N), dtype=bool)
    disagree = 0
    examples = []
    if n == 1:
        E[:] = True
    else:
        table = SignatureTable([entries[i] for i in idx], p, n)
        S = table.S
        wt = np.array([_wt_scaled(entries[i], n * n * S) for i in idx], dtype=object)
        rows = _poly_rows(entries, idx, n + 1)
        Fl = rows[:, :n]
        for lo in range(0, N, chunk):
            a = np.arange(lo, min(lo + chunk, N))
            # criterion (2): u(F,G) = v_p(det G(C_F)) / n^2 > wt(rho_F)
            G = np.broadcast_to(rows[None, :, :], (len(a), N, n + 1))
            r = res_vp(Fl[a], G, p)
            thr = np.array([int(x) if Fraction(x).denominator == 1 else None for x in wt[a]],
                           dtype=object)
            if any(t is None for t in thr):
                raise AssertionError("scaled weight is not integral")
            thr = thr.astype(np.int64)[:, None]
            crit2 = np.where(r == INF_SCALED, True, r * S > thr)
            # criterion (3): rho_F(F - G) > rho_F(F) = n * wt(rho_F)
            D = rows[a][:, None, :n] - rows[None, :, :n]
            vr = table.values_scaled(table.sig_of[a], D)
            crit3 = np.where(vr == INF_SCALED, True, vr * n > thr)
            E[a] = crit2
            bad = crit2 != crit3
            disagree += int(bad.sum())
            for x, y in zip(*np.nonzero(bad)):
                if len(examples) < _MAX_EXAMPLES:
                    examples.append((str(entries[idx[a[x]]].F), str(entries[idx[y]].F)))
    reflexive = bool(np.all(np.diag(E)))
    symmetric = bool(np.array_equal(E, E.T))
    Ef = E.astype(np.float32)
    transitive = bool(np.all(((Ef @ Ef) > 0) <= E))
    n_classes = _count_classes(E)
    return {"passed": disagree == 0 and reflexive and symmetric and transitive,
            "size": N, "pairs": N * N, "equivalent_pairs": int(E.sum()) - N,
            "disagreements": disagree, "reflexive": reflexive, "symmetric": symmetric,
            "transitive": transitive, "classes": n_classes, "examples": examples}


def check_criteria_pairs(entries: Sequence, p: int, i_idx, j_idx) -> dict:
    """Criteria (2) and (3) agree on the given equal-degree ordered pairs."""
    i_idx, j_idx = np.asarray(i_idx), np.asarray(j_idx)
    degs = np.array([entries[i].F.degree for i in i_idx])
    if np.any(degs != np.array([entries[j].F.degree for j in j_idx])):
        raise ValueError("pairs must have equal degrees")
    disagree, equivalent = 0, 0
    examples = []
    for n in np.unique(degs):
        n = int(n)
        sel = np.nonzero(degs == n)[0]
        if n == 1:
            equivalent += len(sel)
            continue
        ii, jj = i_idx[sel], j_idx[sel]
        sub = sorted(set(ii.tolist()))
        table = SignatureTable([entries[i] for i in sub], p, n)
        pos = {i: r for r, i in enumerate(sub)}
        sig = table.sig_of[[pos[i] for i in ii]]
        S = table.S
        thr = np.array([int(_wt_scaled(entries[i], n * n * S)) for i in ii], dtype=np.int64)
        rows_i = _poly_rows(entries, ii, n + 1)
        rows_j = _poly_rows(entries, jj, n + 1)
        r = res_vp(rows_i[:, :n], rows_j[:, None, :], p)[:, 0]
        crit2 = np.where(r == INF_SCALED, True, r * S > thr)
        vr = table.values_scaled(sig, (rows_i[:, :n] - rows_j[:, :n])[:, None, :])[:, 0]
        crit3 = np.where(vr == INF_SCALED, True, vr * n > thr)
        bad = crit2 != crit3
        disagree += int(bad.sum())
        equivalent += int(crit2.sum())
        for x in np.nonzero(bad)[0][:_MAX_EXAMPLES]:
            examples.append((str(entries[ii[x]].F), str(entries[jj[x]].F)))
    return {"passed": disagree == 0, "pairs": len(i_idx), "equivalent": equivalent,
            "disagreements": disagree, "examples": examples[:_MAX_EXAMPLES]}


def _count_classes(E: np.ndarray) -> int:
    seen = np.zeros(len(E), dtype=bool)
    count = 0
    for i in range(len(E)):
        if not seen[i]:
            seen |= E[i]
            seen[i] = True
            count += 1
    return count


# frames, Krasner, engine pass ----------------------------------------------------------------


def check_frames(entries: Sequence, p: int, grid_height: int = 8, random_draws: int = 1000,
                 height: int = 100, seed: int = 0) -> dict:
    """Fundamental property per signature plus per-entry gammas and member irreducibility."""
    from .okutsu import monic_grid

    rng = random.Random(seed)
    sig_results: dict = {}
    witnesses = []
    grids: dict = {}
    key_irred: dict = {}
    gam_bad = 0
    for n, idx in sorted(_by_degree(entries).items()):
        if n < 2:
            continue
        table = SignatureTable([entries[i] for i in idx], p, n)
        if n - 1 not in grids:
            grids[n - 1] = poly_rows_of(monic_grid(n - 1, grid_height), n)
        grid = grids[n - 1]
        for s, (_n, keys, gammas) in enumerate(table.signatures):
            draws = []
            for _ in range(random_draws):
                d = rng.randint(1, n - 1)
                draws.append([rng.randint(-height, height) for _ in range(d)] + [1] + [0] * (n - 1 - d))
            G = np.concatenate([grid, np.array(draws, dtype=np.int64)])
            v = table.values_scaled(np.array([s]), G[None])[0]
            deg = _row_degrees(G)
            ms = [k.degree for k in keys] + [n]
            bounds = [as_rat(g) / m for g, m in zip(gammas, ms)]
            lvl = np.searchsorted(np.array(ms[1:]), deg, side="right")
            bound_s = np.array([int(b * table.S * 144) for b in bounds], dtype=np.int64)
            ok = (v != INF_SCALED) & (v * 144 <= bound_s[lvl] * deg)
            sig_results[(n, keys, gammas)] = bool(ok.all())
            if not ok.all():
                j = int(np.nonzero(~ok)[0][0])
                witnesses.append({"signature": [str(k) for k in keys],
                                  "g": str(Poly([int(c) for c in G[j]]))})
            for k in keys:
                if k not in key_irred:
                    key_irred[k] = k.degree == 1 or build_chains(k, p).is_irreducible()
        # gammas of every entry from the resultant: v_p(Res(F, phi_i)) == n * gamma_i
        for lo in range(0, len(idx), 2000):
            part = idx[lo:lo + 2000]
            depth = max(len(entries[i].keys) for i in part)
            K = np.zeros((len(part), depth, n), dtype=np.int64)
            want = np.full((len(part), depth), -1, dtype=object)
            for r, i in enumerate(part):
                for j, (k, g) in enumerate(zip(entries[i].keys, entries[i].gammas)):
                    cs = _int_coeffs(k)
                    K[r, j, :len(cs)] = cs
                    want[r, j] = n * as_rat(g)
            got = res_vp(_f_low(entries, part), K, p)
            for r in range(len(part)):
                for j in range(len(entries[part[r]].keys)):
                    if Fraction(int(got[r, j])) != want[r, j]:
                        gam_bad += 1
    members_ok = all(key_irred.values())
    passed = all(sig_results.values()) and gam_bad == 0 and members_ok
    return {"passed": passed, "signatures": len(sig_results),
            "grid_size": {d: len(g) for d, g in grids.items()}, "gamma_failures": gam_bad,
            "members_irreducible": members_ok, "witnesses": witnesses[:_MAX_EXAMPLES]}


def poly_rows_of(polys: Sequence[Poly], width: int) -> np.ndarray:
    out = np.zeros((len(polys), width), dtype=np.int64)
    for r, f in enumerate(polys):
        cs = _int_coeffs(f)
        out[r, :len(cs)] = cs
    return out


def _row_degrees(G: np.ndarray) -> np.ndarray:
    nz = G != 0
    return G.shape[1] - 1 - np.argmax(nz[:, ::-1], axis=1)


def check_krasner(entries: Sequence, p: int) -> dict:
    """Omega(F) from the Taylor coefficients of every F (degree >= 2), with w_r <= Omega.

    Omega is the negated slope of the first side of the lower hull of
    (i, v_F(F^{(i)}/i!)), i >= 1, which starts at i = 1.
    """
    from math import comb

    omegas: dict[int, Fraction] = {}
    bad = []
    for n, idx in sorted(_by_degree(entries).items()):
        if n < 2:
            continue
        table = SignatureTable([entries[i] for i in idx], p, n)
        rows = _poly_rows(entries, idx, n + 1)
        T = np.zeros((len(idx), n, n), dtype=np.int64)  # T[f, i-1] = F^{(i)}/i!
        for i in range(1, n + 1):
            for j in range(i, n + 1):
                T[:, i - 1, j - i] = comb(j, i) * rows[:, j]
        v = table.values_scaled(table.sig_of, T)
        for r, e in enumerate(idx):
            y1 = Fraction(int(v[r, 0]), table.S)
            om = max((y1 - Fraction(int(v[r, j]), table.S)) / j
                     for j in range(1, n) if v[r, j] != INF_SCALED)
            omegas[e] = om
            w_last = as_rat(entries[e].gammas[-1]) / entries[e].keys[-1].degree
            if not w_last <= om:
                bad.append(str(entries[e].F))
    return {"passed": not bad, "checked": len(omegas), "failures": len(bad),
            "examples": bad[:_MAX_EXAMPLES], "omegas": omegas}


def engine_pass(entries: Sequence, p: int, samples: int = 4, seed: int = 0) -> dict:
    """Per-entry checks through the recursive engine.

    For each entry: rebuild the chain, round trip through its frame, (e, f),
    strictly increasing weights, divisibility of the frame degrees, the
    Krasner constant, and ``samples`` engine values compared with the
    resultant oracle.
    """
    from .corpus import _chain_from_steps
    from .okutsu import chain_from_frame, frame_from_chain, krasner_constant, weights

    rng = np.random.default_rng(seed)
    fails: dict[str, list] = {k: [] for k in
                              ("round_trip", "ef", "weights", "divide", "oracle", "krasner")}
    omegas: dict[int, Fraction] = {}
    rebuilt: dict[int, tuple] = {}
    Gs, Fs, vals = [], [], []
    for i, e in enumerate(entries):
        F = e.F
        n = F.degree
        chain = _chain_from_steps(F, p, e.keys, e.gammas)
        ef = ramification_invariants(chain)
        if ef[0] * ef[1] != n:
            fails["ef"].append(str(F))
        ms = chain.degrees + [n]
        if any(b % a for a, b in zip(ms, ms[1:])):
            fails["divide"].append(str(F))
        G = _sample_g(rng, [_int_coeffs(k) for k in chain.keys], n, samples, 100, p)
        for g in G:
            Gs.append(np.pad(g, (0, 4 - n)) if n < 4 else g[:4])
            Fs.append(np.pad(_int_coeffs(F)[:-1], (0, 4 - n)) if n < 4 else _int_coeffs(F)[:-1])
            vals.append((i, n, chain.vF(Poly([int(c) for c in g]))))
        if n < 2:
            continue
        frame = frame_from_chain(chain)
        w = [x for _m, x in weights(frame)]
        if any(not a < b for a, b in zip(w, w[1:])):
            fails["weights"].append(str(F))
        back = chain_from_frame(frame)
        rebuilt[i] = (tuple(back.keys), tuple(back.gammas))
        same = (back.degrees == chain.degrees and back.gammas == chain.gammas
                and back.keys == chain.keys)
        if same:
            for g in G[:2]:
                gp = Poly([int(c) for c in g])
                if back.vF(gp) != chain.vF(gp):
                    same = False
        if not same:
            fails["round_trip"].append(str(F))
        omegas[i] = krasner_constant(chain)
    # engine values against the resultant, grouped by degree
    by_n: dict[int, list[int]] = {}
    for r, (_i, n, _v) in enumerate(vals):
        by_n.setdefault(n, []).append(r)
    for n, rs in by_n.items():
        Fl = np.array([Fs[r][:n] for r in rs], dtype=np.int64)
        G = np.array([Gs[r][:n] for r in rs], dtype=np.int64)[:, None, :]
        res = res_vp(Fl, G, p)[:, 0]
        for r, rv in zip(rs, res):
            i, _n, v = vals[r]
            want = INF if rv == INF_SCALED else Fraction(int(rv), n)
            if v != want:
                fails["oracle"].append(str(entries[i].F))
    return {"passed": not any(fails.values()), "entries": len(entries),
            "oracle_samples": len(vals), "failures": {k: v[:_MAX_EXAMPLES] for k, v in fails.items()},
            "failure_counts": {k: len(v) for k, v in fails.items()}, "omegas": omegas,
            "rebuilt": rebuilt}


def compare_valuations(entries: Sequence, other: Sequence, p: int, samples: int = 500,
                       seed: int = 0, height: int = 100, chunk: int = 1000) -> dict:
    """v_F from two lists of chain data (same F, possibly different keys) on the same samples."""
    rng = np.random.default_rng(seed)
    pairs = bad = 0
    examples = []
    for n, idx in sorted(_by_degree(entries).items()):
        ta = SignatureTable([entries[i] for i in idx], p, n)
        tb = SignatureTable([other[i] for i in idx], p, n)
        for lo in range(0, len(idx), chunk):
            part = idx[lo:lo + chunk]
            G = np.stack([
                _sample_g(rng, [_int_coeffs(k) for k in entries[i].keys], n, samples, height, p)
                for i in part
            ])
            va = ta.values_scaled(ta.sig_of[lo:lo + chunk], G)
            vb = tb.values_scaled(tb.sig_of[lo:lo + chunk], G)
            fa = va != INF_SCALED
            same = np.where(fa, va * tb.S == vb * ta.S, vb == INF_SCALED)
            pairs += same.size
            bad += int((~same).sum())
            for a in np.nonzero(~same.all(axis=1))[0][:_MAX_EXAMPLES - len(examples)]:
                examples.append(str(entries[part[a]].F))
    return {"passed": bad == 0, "pairs": pairs, "failures": bad, "examples": examples}
