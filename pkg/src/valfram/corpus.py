"""Corpus construction: enumerated monic polynomials plus seeds, filtered to Q_p-irreducibles.

Building the corpus is the expensive part of the acceptance suite, so the
retained chains can be stored as plain JSON records (keys and singular
values) and rebuilt cheaply.  The cache key includes a digest of the engine
sources, so a cache written by different code is never reused.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterator, Optional, Sequence

from .arith import INF, InvalidOperand, PBase, format_val, parse_val
from .chains import DEFAULT_SV_BOUND, MLVChain, build_chains
from .poly import Poly
from .residue import FqPoly, ff_factor, prime_field
from .valuation import InductiveVal

__all__ = [
    "CorpusEntry",
    "CorpusSpec",
    "DEFAULT_SEEDS",
    "build_corpus",
    "chain_from_record",
    "chain_to_record",
    "default_cache_dir",
    "eisenstein_seeds",
    "enumerate_monic",
    "filter_irreducible",
    "hensel_split",
]

DEFAULT_SEEDS = (
    "x^2-2",
    "x^2-6",
    "x^2+x+1",
    "(x^2+x+1)^2-2",
    "(x^2+x+1)^2+2",
)


def eisenstein_seeds(p: int) -> list[Poly]:
    """A few Eisenstein polynomials of degree 3 and 4 at p."""
    return [
        Poly([-p, 0, 0, 1]),
        Poly([p, p, 0, 1]),
        Poly([p * (p + 1), 0, p, 1]),
        Poly([-p, 0, 0, 0, 1]),
        Poly([p, 0, p, 0, 1]),
        Poly([p * (p + 1), p * p, 0, p, 1]),
    ]


def enumerate_monic(max_degree: int, height: int) -> Iterator[Poly]:
    """All monic polynomials of degree 1..max_degree with |coefficients| <= height."""
    rng = range(-height, height + 1)
    for d in range(1, max_degree + 1):
        for cs in itertools.product(rng, repeat=d):
            yield Poly(list(reversed(cs)) + [1])


@dataclass(frozen=True)
class CorpusSpec:
    primes: tuple = (2, 3, 5)
    max_degree: int = 4
    height: int = 9
    seeds: tuple = DEFAULT_SEEDS
    sv_bound: int = DEFAULT_SV_BOUND
    eisenstein: bool = True

    def __post_init__(self) -> None:
        if self.max_degree < 1 or self.height < 0:
            raise InvalidOperand("corpus bounds must be positive")
        for p in self.primes:
            PBase(p)

    def key(self) -> str:
        return json.dumps(
            [list(self.primes), self.max_degree, self.height, list(self.seeds),
             self.sv_bound, self.eisenstein],
            sort_keys=True,
        )

    def candidates(self, p: int) -> list[Poly]:
        from .cli import parse_poly

        seen: dict = {}
        for s in self.seeds:
            f = parse_poly(s) if isinstance(s, str) else s
            seen.setdefault(f, None)
        if self.eisenstein:
            for f in eisenstein_seeds(p):
                seen.setdefault(f, None)
        for f in enumerate_monic(self.max_degree, self.height):
            seen.setdefault(f, None)
        return list(seen)


class CorpusEntry:
    """A retained polynomial with its chain data; the chain itself is rebuilt on demand."""

    __slots__ = ("F", "p", "keys", "gammas", "seed", "_chain")

    def __init__(self, F: Poly, p: int, keys, gammas, seed: bool = False, chain=None) -> None:
        self.F = F
        self.p = p
        self.keys = tuple(keys)
        self.gammas = tuple(gammas)
        self.seed = seed
        self._chain = chain

    @property
    def chain(self) -> MLVChain:
        if self._chain is None:
            self._chain = _chain_from_steps(self.F, self.p, self.keys, self.gammas)
        return self._chain

    @property
    def signature(self) -> tuple:
        """(deg F, keys, gammas); v_F below degree deg F depends only on this."""
        return (self.F.degree, self.keys, self.gammas)

    def record(self) -> list:
        return [
            list(self.F.coeffs),
            [[[str(c) for c in k.coeffs], format_val(g)] for k, g in zip(self.keys, self.gammas)],
            self.seed,
        ]

    @classmethod
    def from_record(cls, rec: Sequence, p: int) -> "CorpusEntry":
        keys = [Poly([Fraction(c) for c in k]) for k, _g in rec[1]]
        gammas = [parse_val(g) for _k, g in rec[1]]
        return cls(Poly(rec[0]), p, keys, gammas, bool(rec[2]) if len(rec) > 2 else False)

    def __repr__(self) -> str:
        return f"CorpusEntry({self.F}, p={self.p})"


def _chain_from_steps(F: Poly, p: int, keys, gammas) -> MLVChain:
    steps = list(zip(keys, gammas)) + [(F, INF)]
    if len(steps) == 1:
        steps = [(F, INF)]
    return MLVChain(F, InductiveVal._from_steps(p, steps))


def chain_to_record(chain: MLVChain) -> list:
    return CorpusEntry(chain.F, chain.p, chain.keys, chain.gammas).record()


def chain_from_record(rec: Sequence, p: int) -> MLVChain:
    return CorpusEntry.from_record(rec, p).chain


def hensel_split(F: Poly, p: int) -> bool:
    """True when F mod p has two coprime factors, so F splits over Z_p by Hensel."""
    if F.degree < 2:
        return False
    k = prime_field(p)
    return len(ff_factor(FqPoly.from_ints(k, [int(c) % p for c in F.coeffs]))) > 1


def _source_digest() -> str:
    h = hashlib.sha256()
    here = Path(__file__).resolve().parent
    for name in ("arith.py", "poly.py", "residue.py", "valuation.py", "chains.py", "corpus.py"):
        h.update((here / name).read_bytes())
    return h.hexdigest()[:16]


def default_cache_dir() -> Path:
    env = os.environ.get("VALFRAM_CACHE")
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "valfram"


def _filter_chunk(args) -> list:
    p, sv_bound, polys = args
    out = []
    for F in polys:
        if hensel_split(F, p):
            out.append(None)
            continue
        rep = build_chains(F, p, sv_bound, stop_on_split=True)
        out.append(rep.chain if rep.is_irreducible() else None)
    return out


def filter_irreducible(polys: Sequence[Poly], p: int, sv_bound=DEFAULT_SV_BOUND,
                       jobs: int = 1, chunk: int = 2000) -> list:
    """The certified chain of each polynomial, or None when it is not Q_p-irreducible.

    Polynomials whose reduction has coprime factors are rejected before the
    chain build.  With ``jobs > 1`` chunks run in worker processes; the result
    order always follows the input order.
    """
    parts = [(p, sv_bound, list(polys[i:i + chunk])) for i in range(0, len(polys), chunk)]
    if jobs > 1 and len(parts) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(jobs) as ex:
            done = list(ex.map(_filter_chunk, parts))
    else:
        done = [_filter_chunk(a) for a in parts]
    return [c for part in done for c in part]


def build_corpus(spec: CorpusSpec = CorpusSpec(), cache: Optional[Path] = None,
                 jobs: int = 1,
                 progress: Optional[Callable[[int, int], None]] = None) -> dict[int, list[CorpusEntry]]:
    """The retained (certified Q_p-irreducible) polynomials of the corpus, per prime."""
    path = None
    if cache is not None:
        digest = hashlib.sha256((spec.key() + _source_digest()).encode()).hexdigest()[:16]
        path = Path(cache) / f"corpus-{digest}.json"
        if path.exists():
            data = json.loads(path.read_text())
            return {int(p): [CorpusEntry.from_record(r, int(p)) for r in recs]
                    for p, recs in data.items()}
    from .cli import parse_poly

    out: dict[int, list[CorpusEntry]] = {}
    for p in spec.primes:
        seeds = {parse_poly(s) if isinstance(s, str) else s for s in spec.seeds}
        if spec.eisenstein:
            seeds.update(eisenstein_seeds(p))
        cands = spec.candidates(p)
        chains = filter_irreducible(cands, p, spec.sv_bound, jobs)
        out[p] = [CorpusEntry(F, p, c.keys, c.gammas, F in seeds)
                  for F, c in zip(cands, chains) if c is not None]
        if progress is not None:
            progress(p, len(out[p]))
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        data = {str(p): [e.record() for e in entries] for p, entries in out.items()}
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(data))
        tmp.replace(path)
    return out
