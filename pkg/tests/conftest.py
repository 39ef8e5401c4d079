from pathlib import Path

import pytest

from rqscore import default_lexicon, load_lexicon
from rqscore.synthetic import make_atlas

DATA = Path(__file__).parent / "data"

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call" and not report.failed:
        return
    key = marker.args[0]
    title = marker.args[1]
    passed, seen = _criteria.get(key, (True, title))[0], title
    _criteria[key] = (passed and not report.failed, seen)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_criteria):
        passed, title = _criteria[key]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {key}: {title}")


@pytest.fixture(scope="session")
def lexicon():
    return default_lexicon()


@pytest.fixture(scope="session")
def tiny_lexicon():
    return load_lexicon(DATA / "tiny_lexicon.json")


@pytest.fixture(scope="session")
def atlas():
    return make_atlas(["img1", "img2"], seed=7, jitter=0.0)
