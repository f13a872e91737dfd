import pytest

from attachtbl import load_lexicon, parse_sentence
from attachtbl.lexicon import BUNDLED_LEXICON
from attachtbl.corpus import load_corpus
from pathlib import Path

BUNDLED_CORPUS = Path(BUNDLED_LEXICON).with_name("profile_500.grp")

EXAMPLE = "[ng I] [vg had sent] [ng a cup] [ig to {gold=1}] [ng her]"


@pytest.fixture(scope="session")
def lex():
    return load_lexicon()


@pytest.fixture(scope="session")
def bundled_sentences():
    return load_corpus(BUNDLED_CORPUS)


@pytest.fixture
def example_sentence():
    return parse_sentence(EXAMPLE)


# -- acceptance reporting ------------------------------------------------------

_acceptance_results = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): exit criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        number, title = marker.args
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[rep.outcome]
        _acceptance_results.append((number, title, status, item.name))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, status, name in sorted(_acceptance_results, key=lambda r: (r[0], r[3])):
        terminalreporter.write_line(f"[{status}] criterion {number}: {title} ({name})")
