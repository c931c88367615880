import csv
import io
import json
import math

import pytest

from growthcertify.certify import two_free_certify
from growthcertify.errors import ElementCapExceeded
from growthcertify.extension import ExtensionGroup, GeneratingSet, identity_automorphism
from growthcertify.growth import (
    BallCensus,
    SubadditivityHolds,
    Violation,
    entropy_bounds,
    enumerate_ball,
    subadditivity_check,
)

from checks import census_oracle_mismatches


def free_group():
    E = ExtensionGroup(2, [])
    return E, GeneratingSet([("a", E.element("a")), ("b", E.element("b"))])


def z2():
    E = ExtensionGroup(0, [identity_automorphism(0)] * 2)
    return E, GeneratingSet([("s", E.element("", (1, 0))), ("t", E.element("", (0, 1)))])


def test_census_examples():
    E, T = free_group()
    assert enumerate_ball(E, T, 2).counts == (1, 5, 17)
    assert enumerate_ball(E, T, 6).counts == tuple(2 * 3**n - 1 for n in range(7))
    E, T = z2()
    assert enumerate_ball(E, T, 3).counts == (1, 5, 13, 25)
    assert enumerate_ball(E, T, 6).counts == tuple(2 * n * n + 2 * n + 1 for n in range(7))
    assert enumerate_ball(E, T, 0).counts == (1,)


def test_fibonacci_census(fib):
    E, T = fib
    assert enumerate_ball(E, T, 5).counts == (1, 5, 17, 53, 147, 393)


def test_census_matches_string_oracle():
    assert census_oracle_mismatches(20, seed=41, radius=4) == []


def test_census_is_deterministic(fib):
    E, T = fib
    a = enumerate_ball(E, T, 6)
    b = enumerate_ball(E, T, 6)
    assert a == b and a.to_json() == b.to_json()


def test_free_basis_census(fib):
    E, T = fib
    verdict, _ = two_free_certify(E, T)
    S = GeneratingSet([("u", verdict.u), ("v", verdict.v)])
    census = enumerate_ball(E, S, 6)
    assert census.counts == tuple(2 * 3**n - 1 for n in range(7))


def test_exports(fib):
    E, T = fib
    census = enumerate_ball(E, T, 3)
    rows = list(csv.reader(io.StringIO(census.to_csv())))
    assert rows[0] == ["n", "B_n", "ln(B_n)/n"]
    assert [int(r[1]) for r in rows[1:]] == list(census.counts)
    assert float(rows[2][2]) == pytest.approx(math.log(5))
    data = json.loads(census.to_json())
    assert data["counts"] == list(census.counts)
    assert data["generators"] == ["t", "x"]


def test_cap_reports_partial_census(fib):
    E, T = fib
    with pytest.raises(ElementCapExceeded) as info:
        enumerate_ball(E, T, 10, cap=100)
    partial = info.value.partial
    assert isinstance(partial, BallCensus)
    assert partial.counts == (1, 5, 17, 53)
    assert info.value.radius == 3


def test_cap_from_environment(fib, monkeypatch):
    E, T = fib
    monkeypatch.setenv("GROWTHCERTIFY_CAP", "60")
    with pytest.raises(ElementCapExceeded):
        enumerate_ball(E, T, 6)


def test_entropy_bounds_examples(fib, trivial_action):
    E, T = fib
    verdict, _ = two_free_certify(E, T)
    est = entropy_bounds(E, T, 8, verdict)
    assert est.lower_bound == pytest.approx(math.log(3) / 6)
    assert est.sandwich_holds()
    assert all(x >= 0.1831 for x in est.upper_sequence)

    S = GeneratingSet([("u", verdict.u), ("v", verdict.v)])
    est = entropy_bounds(E, S, 6)
    assert est.upper_sequence == tuple(math.log(2 * 3**n - 1) / n for n in range(1, 7))
    assert est.lower_bound is None

    E, T = trivial_action
    est = entropy_bounds(E, T, 8)
    assert est.lower_bound is None
    assert est.upper_sequence[-1] < est.upper_sequence[0]


def test_subadditivity():
    E, T = free_group()
    assert isinstance(subadditivity_check(enumerate_ball(E, T, 6)), SubadditivityHolds)
    E, T = z2()
    assert subadditivity_check(enumerate_ball(E, T, 6))
    assert subadditivity_check(BallCensus(0, (1,), ("a",)))
    bad = BallCensus(3, (1, 2, 5, 9), ("a",))
    assert subadditivity_check(bad) == Violation(1, 1)
