import random

import pytest

from growthcertify.errors import ExponentCapExceeded, NotCommuting, NotInverse, SpecError
from growthcertify.extension import (
    ExtensionGroup,
    GeneratingSet,
    TrackedRealization,
    apply_power,
    ext_invert,
    ext_multiply,
    identity_automorphism,
    in_kernel,
    make_automorphism,
    project,
)
from growthcertify.words import Word, parse_word

from conftest import aut
from corpus import random_instance, random_word
from oracles import naive_ext_multiply


def W(s, rank=2):
    return parse_word(s, rank)


def random_element(rng, E, max_len=5):
    return E.element(random_word(rng, E.kernel_rank, max_len), tuple(rng.randint(-2, 2) for _ in range(E.d)))


def aut_letters(E):
    return [(tuple(w for w in a.images), tuple(w for w in a.inverse_images)) for a in E.auts]


def test_make_automorphism_examples():
    # Solve on generators: phi(b) = ab gives a = phi(b) phi(a)^-1, so phi^-1(a) = bA.
    phi = aut(2, ["b", "ab"], ["bA", "a"])
    assert phi(W("a")) == W("b")
    assert phi.inverse()(W("a")) == W("bA")
    assert phi(phi.inverse()(W("ab"))) == W("ab")
    assert make_automorphism([W("a"), W("b")], [W("a"), W("b")]) == identity_automorphism(2)
    with pytest.raises(NotInverse):
        make_automorphism([W("aa"), W("b")], [W("a"), W("b")])


def test_wrong_inverse_is_rejected_with_residue():
    with pytest.raises(NotInverse) as info:
        make_automorphism([W("b"), W("ab")], [W("Ba"), W("a")])
    assert info.value.residue is not None


def test_automorphisms_must_commute():
    fib = aut(2, ["b", "ab"], ["bA", "a"])
    swap = aut(2, ["b", "a"], ["b", "a"])
    with pytest.raises(NotCommuting):
        ExtensionGroup(2, [fib, swap])


def test_apply_power_examples(fib):
    E, _ = fib
    assert apply_power(E, [1], W("a")) == W("b")
    assert apply_power(E, [0], W("abAB")) == W("abAB")
    assert apply_power(E, [2], W("a")) == W("ab")
    assert apply_power(E, [-1], apply_power(E, [1], W("abbA"))) == W("abbA")
    with pytest.raises(ExponentCapExceeded):
        apply_power(E, [65], W("a"))


def test_multiply_examples(fib):
    E, _ = fib
    assert ext_multiply(E, E.element("a"), E.element("b")) == E.element("ab")
    assert ext_multiply(E, E.element("", [1]), E.element("a")) == E.element("b", [1])
    x = E.element("abA", [2])
    assert ext_multiply(E, x, ext_invert(E, x)) == E.identity()
    assert ext_multiply(E, ext_invert(E, x), x) == E.identity()


def test_project_and_kernel_examples(fib):
    E, T = fib
    assert project(E.element("ab")) == (0,)
    assert project(E.commutator(T["t"], T["x"])) == (0,)
    assert E.commutator(T["t"], T["x"]) == E.element("bA")
    E2 = ExtensionGroup(2, [identity_automorphism(2), identity_automorphism(2)])
    assert project(E2.element("", (2, -1))) == (2, -1)
    assert in_kernel(E.element("abAB"))
    assert not in_kernel(E.element("a", [1]))
    assert in_kernel(E.identity())


def test_generating_set():
    E = ExtensionGroup(1, [identity_automorphism(1)])
    T = GeneratingSet([("x", E.element("a", (0,))), ("t", E.element("", (1,)))])
    assert T.names == ["x", "t"] and len(T) == 2
    with pytest.raises(SpecError):
        GeneratingSet([])
    with pytest.raises(SpecError):
        GeneratingSet([("x", E.identity()), ("x", E.identity())])


def test_group_axioms_and_oracle_on_corpus():
    """Associativity, projection and naive-substitution agreement on 10^3 triples."""
    rng = random.Random(17)
    inst = random.Random(18)
    for trial in range(1000):
        if trial % 50 == 0:
            E, _ = random_instance(inst)
            auts = aut_letters(E)
        x, y, z = (random_element(rng, E) for _ in range(3))
        xy = E.multiply(x, y)
        assert E.multiply(xy, z) == E.multiply(x, E.multiply(y, z))
        assert project(xy) == tuple(a + b for a, b in zip(project(x), project(y)))
        w, k = naive_ext_multiply(auts, (x.kernel_word.letters, x.shift), (y.kernel_word.letters, y.shift))
        assert (xy.kernel_word.letters, xy.shift) == (w, k)
        assert E.multiply(x, E.invert(x)) == E.identity()


def test_conjugation_restricts_to_kernel_automorphism():
    rng = random.Random(23)
    inst = random.Random(24)
    for _ in range(40):
        E, T = random_instance(inst)
        g = random_element(rng, E)
        gi = E.invert(g)
        for i in range(E.kernel_rank):
            a = E.element(Word((i + 1,), E.kernel_rank), (0,) * E.d)
            c = E.conjugate(a, g)
            assert in_kernel(c)
            assert E.conjugate(c, gi) == a
        for s in T.elements:
            for t in T.elements:
                assert in_kernel(E.commutator(s, t))


def test_tracked_realization_agrees_with_plain_arithmetic():
    rng = random.Random(29)
    inst = random.Random(30)
    for _ in range(30):
        E, T = random_instance(inst)
        R = TrackedRealization(E, T)
        gens = R.generators()
        plain = T.elements
        for _ in range(10):
            body = [rng.choice([1, -1]) * rng.randint(1, len(gens)) for _ in range(rng.randint(0, 6))]
            got = R.eval_word(body, gens)
            want = E.identity()
            for x in body:
                g = plain[abs(x) - 1]
                want = E.multiply(want, g if x > 0 else E.invert(g))
            assert got.value == want
            assert R.evaluate(got.tword) == want
