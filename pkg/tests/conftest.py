from __future__ import annotations

import random
import time
from pathlib import Path

import pytest

from paramod.design import Design
from paramod.fileio import import_design
from paramod.generators import affine_plane, hermitian_unital, projective_plane

DATA = Path(__file__).parent / "data"


def shuffled(design: Design, rng: random.Random) -> Design:
    """A random point relabeling, with the block list shuffled too."""
    perm = list(range(design.n))
    rng.shuffle(perm)
    blocks = [[perm[p] for p in b] for b in design.blocks]
    rng.shuffle(blocks)
    return Design(design.n, design.k, tuple(tuple(b) for b in blocks))


def fixture_designs() -> dict[str, Design]:
    return {
        "fano": projective_plane(2),
        "pg3": projective_plane(3),
        "ag3": affine_plane(3),
        "ag4": affine_plane(4),
        "sts13a": import_design(DATA / "sts13_cyclic.txt"),
        "sts13b": import_design(DATA / "sts13_second.txt"),
        "h3": hermitian_unital(3),
    }


@pytest.fixture(scope="session")
def designs() -> dict[str, Design]:
    return fixture_designs()


@pytest.fixture
def fano() -> Design:
    return projective_plane(2)


@pytest.fixture
def ag3() -> Design:
    return affine_plane(3)


@pytest.fixture(scope="session")
def h3() -> Design:
    return hermitian_unital(3)


# acceptance reporting: one line per criterion in the terminal summary

_CRITERIA: dict[str, tuple[str, float]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _CRITERIA[marker.args[0]] = ("PASS" if rep.passed else "FAIL", rep.duration)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_CRITERIA, key=lambda s: int(s.split()[0])):
        status, secs = _CRITERIA[label]
        terminalreporter.write_line(f"{status}  criterion {label}  ({secs:.1f}s)")


@pytest.fixture
def stopwatch():
    start = time.perf_counter()
    return lambda: time.perf_counter() - start
