import json

import pytest

from valfram.arith import InvalidOperand
from valfram.chains import build_chains
from valfram.corpus import (
    CorpusEntry,
    CorpusSpec,
    build_corpus,
    chain_from_record,
    chain_to_record,
    eisenstein_seeds,
    enumerate_monic,
    filter_irreducible,
    hensel_split,
)
from valfram.poly import Poly

SMALL = CorpusSpec(primes=(2, 3), max_degree=3, height=2)


def test_enumeration_count():
    polys = list(enumerate_monic(3, 2))
    assert len(polys) == 5 + 25 + 125
    assert len(set(polys)) == len(polys)
    assert all(f.is_monic() for f in polys)


def test_bad_spec():
    with pytest.raises(InvalidOperand):
        CorpusSpec(primes=(4,))
    with pytest.raises(InvalidOperand):
        CorpusSpec(max_degree=0)


def test_hensel_split_agrees_with_chain_search():
    for p in (2, 3, 5):
        for F in enumerate_monic(3, 2):
            if hensel_split(F, p):
                assert not build_chains(F, p).is_irreducible()


def test_eisenstein_seeds_are_kept():
    corpus = build_corpus(SMALL)
    for p, entries in corpus.items():
        kept = {e.F for e in entries}
        for F in eisenstein_seeds(p):
            assert F in kept
        assert all(e.seed for e in entries if e.F in set(eisenstein_seeds(p)))


def test_filter_matches_direct_build():
    cands = list(enumerate_monic(2, 3))
    chains = filter_irreducible(cands, 2)
    for F, ch in zip(cands, chains):
        assert (ch is not None) == build_chains(F, 2).is_irreducible()


def test_filter_parallel_keeps_order():
    cands = list(enumerate_monic(2, 3))
    a = filter_irreducible(cands, 3, chunk=10)
    b = filter_irreducible(cands, 3, jobs=2, chunk=10)
    assert [c is None for c in a] == [c is None for c in b]
    assert [c.keys for c in a if c] == [c.keys for c in b if c]


def test_record_round_trip():
    for p, F in [(2, Poly([-1, 2, 3, 2, 1])), (3, Poly([-3, 0, 0, 1]))]:
        ch = build_chains(F, p).chain
        rec = json.loads(json.dumps(chain_to_record(ch)))
        back = chain_from_record(rec, p)
        assert back.keys == ch.keys and back.gammas == ch.gammas
        assert back.vF(Poly([1, 1])) == ch.vF(Poly([1, 1]))


def test_entry_signature_and_lazy_chain():
    ch = build_chains(Poly([-2, 0, 1]), 2).chain
    e = CorpusEntry(ch.F, 2, ch.keys, ch.gammas)
    assert e.signature == (2, (Poly([0, 1]),), (ch.gammas[0],))
    assert e.chain.leaf == ch.leaf


def test_cache_round_trip(tmp_path):
    first = build_corpus(SMALL, cache=tmp_path)
    files = list(tmp_path.glob("corpus-*.json"))
    assert len(files) == 1
    again = build_corpus(SMALL, cache=tmp_path)
    for p in SMALL.primes:
        assert [e.F for e in first[p]] == [e.F for e in again[p]]
        assert [e.keys for e in first[p]] == [e.keys for e in again[p]]
        assert [e.gammas for e in first[p]] == [e.gammas for e in again[p]]
        assert [e.seed for e in first[p]] == [e.seed for e in again[p]]


def test_cache_key_depends_on_spec(tmp_path):
    build_corpus(SMALL, cache=tmp_path)
    build_corpus(CorpusSpec(primes=(2,), max_degree=2, height=2), cache=tmp_path)
    assert len(list(tmp_path.glob("corpus-*.json"))) == 2
