import pytest

import deltacalc as dc


def pytest_terminal_summary(terminalreporter):
    # One pass/fail line per acceptance criterion, printed even when all
    # tests pass (plain pytest output hides captured stdout in that case).
    try:
        from test_acceptance import REPORT
    except ImportError:
        return
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in sorted(REPORT):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def bump():
    return dc.bump_delta()


@pytest.fixture(scope="session")
def square():
    return dc.square_delta()


@pytest.fixture(scope="session")
def plus():
    return dc.shifted_delta("+")


@pytest.fixture(scope="session")
def minus():
    return dc.shifted_delta("-")


@pytest.fixture(scope="session")
def mix(plus, minus):
    return dc.mixture(plus, minus)


@pytest.fixture(scope="session")
def conv(bump):
    # Built once per session; the profile tabulation is the expensive part.
    return dc.convolve(bump, bump)


@pytest.fixture(scope="session")
def all_kernels(bump, square, plus, minus, mix, conv):
    return {"bump": bump, "square": square, "plus": plus,
            "minus": minus, "mixture": mix, "convolution": conv}
