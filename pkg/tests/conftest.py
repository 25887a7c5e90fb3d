import random

import pytest

from relevance_sentinel.textprep import TokenDocument


def random_corpus(rng, max_docs=50, max_vocab=200):
    """Random token corpus with at least two non-empty documents."""
    vocab = [f"w{i}" for i in range(rng.randint(2, max_vocab))]
    n = rng.randint(2, max_docs)
    docs = []
    for _ in range(n):
        length = rng.choice([0] + [rng.randint(1, 12)] * 6)
        docs.append([rng.choice(vocab) for _ in range(length)])
    docs[0] = docs[0] or [vocab[0]]
    docs[1] = docs[1] or [vocab[1]]
    return docs


def token_docs(lists, prefix="d"):
    return [TokenDocument(f"{prefix}{i}", tuple(toks)) for i, toks in enumerate(lists)]


@pytest.fixture
def rng():
    return random.Random(1234)


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::" in nodeid and rep.when == "call" or ("test_acceptance.py::" in nodeid and outcome == "error"):
                name = nodeid.split("::")[-1]
                lines.append((name, "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, status in sorted(lines):
            terminalreporter.write_line(f"{status}  {name}")
