import pytest

from growthcertify.extension import ExtensionGroup, GeneratingSet, make_automorphism
from growthcertify.words import parse_word


def aut(rank, images, inverse_images):
    return make_automorphism(
        [parse_word(s, rank) for s in images], [parse_word(s, rank) for s in inverse_images]
    )


@pytest.fixture
def fib():
    """F_2 x| Z with a -> b, b -> ab; T = {t = (1, 1), x = (a, 0)}."""
    E = ExtensionGroup(2, [aut(2, ["b", "ab"], ["bA", "a"])])
    T = GeneratingSet([("t", E.element("", [1])), ("x", E.element("a", [0]))])
    return E, T


@pytest.fixture
def klein():
    """a -> A, b -> B; <a, t> is the Klein-bottle group."""
    E = ExtensionGroup(2, [aut(2, ["A", "B"], ["A", "B"])])
    T = GeneratingSet([("x", E.element("a", [0])), ("t", E.element("", [1]))])
    return E, T


@pytest.fixture
def trivial_action():
    E = ExtensionGroup(2, [aut(2, ["a", "b"], ["a", "b"])])
    T = GeneratingSet([("x", E.element("a", [0])), ("t", E.element("", [1]))])
    return E, T


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
