from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from stromver.forms import FLIPPED, RIGHT_INVARIANT, Coframe, InvariantForm, kaehler_form  # noqa: E402
from stromver.lie import sl2_standard  # noqa: E402
from stromver.scalars import GaussRational  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

small_fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gauss = st.builds(GaussRational, small_fractions, small_fractions)
nonzero_gauss = gauss.filter(bool)


def forms_of_degree(frame: Coframe, degree: int, max_terms: int = 4):
    keys = frame.basis(degree)
    return st.dictionaries(st.sampled_from(keys), gauss, max_size=max_terms).map(lambda t: InvariantForm(frame, t))


@pytest.fixture(scope="session")
def sl2():
    return sl2_standard()


@pytest.fixture(scope="session", params=[RIGHT_INVARIANT, FLIPPED], ids=["default", "flipped"])
def sign(request):
    return request.param


@pytest.fixture(scope="session")
def frame(sl2):
    return Coframe(sl2[0])


@pytest.fixture(scope="session")
def omega(frame, sl2):
    return kaehler_form(frame, sl2[1])


def half() -> Fraction:
    return Fraction(1, 2)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
