import os
import time

import pytest

from valfram.corpus import CorpusSpec, build_corpus, default_cache_dir

# criterion number -> (passed, detail); filled by test_acceptance, printed at the end
CRITERIA: dict = {}

_STATE: dict = {}


def corpus_and_time():
    """The acceptance corpus (built once per session, cached on disk) and its build time."""
    if "corpus" not in _STATE:
        t0 = time.perf_counter()
        cache = os.environ.get("VALFRAM_CACHE") or default_cache_dir()
        if os.environ.get("VALFRAM_NO_CACHE"):
            cache = None
        _STATE["corpus"] = build_corpus(CorpusSpec(), cache=cache)
        _STATE["build_seconds"] = time.perf_counter() - t0
    return _STATE["corpus"], _STATE["build_seconds"]


@pytest.fixture(scope="session")
def corpus():
    return corpus_and_time()[0]


@pytest.fixture(scope="session")
def engine_results(corpus):
    from valfram.batch import engine_pass

    return {p: engine_pass(entries, p, seed=p) for p, entries in corpus.items()}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        ok, detail = CRITERIA[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
