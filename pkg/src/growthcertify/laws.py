"""Group laws: words in abstract variables, evaluated in any group.

A *realization* is any object with ``identity()``, ``multiply(a, b)`` and
``invert(a)`` whose elements are hashable and compare by value.  Built-in
realizations: :class:`FreeGroupRealization`, :class:`PermutationRealization`,
and :class:`growthcertify.extension.ExtensionGroup`.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import _kernel
from .errors import ArityMismatch, ElementCapExceeded, LawOverflow, MalformedToken
from .words import Word

LAW_LENGTH_CAP = 10**6
TUPLE_CAP = 5 * 10**7


@dataclass(frozen=True)
class GroupLaw:
    """A reduced word in variables x1..x_arity (letter ``i`` is x_i, ``-i`` its inverse).

    ``factors`` remembers ``(outer, inner)`` when the law was built by
    :func:`compose_laws`; the exhaustive checker uses it to evaluate layer
    by layer.  It does not take part in equality.
    """

    arity: int
    body: tuple
    factors: Any = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.arity < 1:
            raise ArityMismatch("a law needs at least one variable")
        if any(x == 0 or abs(x) > self.arity for x in self.body):
            raise ArityMismatch(f"body uses a variable beyond x{self.arity}")

    @property
    def length(self) -> int:
        return len(self.body)

    @property
    def degenerate(self) -> bool:
        """True when the body reduced to the empty word; such a law certifies nothing."""
        return not self.body

    def __str__(self) -> str:
        return format_law(self)


def make_law(body: Sequence[int], arity: int | None = None) -> GroupLaw:
    body = _kernel.free_reduce(tuple(body))
    if arity is None:
        arity = max((abs(x) for x in body), default=1)
    return GroupLaw(arity, body)


COMMUTATOR = GroupLaw(2, (1, 2, -1, -2))


def power_law(n: int, cap: int | None = None) -> GroupLaw:
    """x1^n."""
    cap = LAW_LENGTH_CAP if cap is None else cap
    if abs(n) > cap:
        raise LawOverflow(f"x1^{n} exceeds the law length cap {cap}")
    return GroupLaw(1, (1 if n > 0 else -1,) * abs(n))


_LAW_TOKEN = re.compile(r"\s*([xX])(\d+)(?:\^(-?\d+))?")


def parse_law(text: str, arity: int | None = None) -> GroupLaw:
    """Parse ``x1 x2 X1 X2`` (uppercase = inverse, optional ``^k`` exponents).

    The named constants ``commutator`` and ``metabelian`` are accepted too,
    and ``1`` stands for the empty (trivial) law.
    """
    s = text.strip()
    if s == "commutator":
        return COMMUTATOR
    if s == "metabelian":
        return nested_commutator_law(2)
    if s == "1":
        s = ""
    letters: list[int] = []
    pos = 0
    while pos < len(s):
        if s[pos].isspace():
            pos += 1
            continue
        m = _LAW_TOKEN.match(s, pos)
        if m is None:
            raise MalformedToken(f"cannot parse law token at {s[pos:]!r}")
        var, idx, exp = m.groups()
        i = int(idx)
        if i < 1:
            raise MalformedToken("law variables start at x1")
        e = int(exp) if exp is not None else 1
        sign = (1 if var == "x" else -1) * (1 if e > 0 else -1)
        letters.extend([sign * i] * abs(e))
        pos = m.end()
    law = make_law(letters)
    if arity is not None:
        if arity < law.arity:
            raise ArityMismatch(f"law uses x{law.arity} but arity {arity} was given")
        law = GroupLaw(arity, law.body)
    return law


def format_law(law: GroupLaw) -> str:
    if not law.body:
        return "1"
    tokens = []
    for x, run in itertools.groupby(law.body):
        n = len(list(run))
        tok = f"x{x}" if x > 0 else f"X{-x}"
        tokens.append(tok if n == 1 else f"{tok}^{n}")
    return " ".join(tokens)


# -- realizations -----------------------------------------------------------


class FreeGroupRealization:
    def __init__(self, rank: int):
        self.rank = rank

    def identity(self) -> Word:
        return Word.identity(self.rank)

    def multiply(self, a: Word, b: Word) -> Word:
        return a * b

    def invert(self, a: Word) -> Word:
        return ~a


class PermutationRealization:
    """Permutations of ``range(degree)`` as image tuples; (pq)(i) = p(q(i))."""

    MAX_DEGREE = 8

    def __init__(self, degree: int):
        if not 1 <= degree <= self.MAX_DEGREE:
            raise ValueError(f"degree must lie in 1..{self.MAX_DEGREE}")
        self.degree = degree

    def identity(self) -> tuple:
        return tuple(range(self.degree))

    def multiply(self, p: tuple, q: tuple) -> tuple:
        return tuple(p[i] for i in q)

    def invert(self, p: tuple) -> tuple:
        out = [0] * self.degree
        for i, j in enumerate(p):
            out[j] = i
        return tuple(out)

    def cycle(self, *points: int) -> tuple:
        out = list(range(self.degree))
        for a, b in zip(points, points[1:] + points[:1]):
            out[a] = b
        return tuple(out)


# -- evaluation and constructors --------------------------------------------


def eval_law(law: GroupLaw, values: Sequence, realization) -> Any:
    if len(values) != law.arity:
        raise ArityMismatch(f"law of arity {law.arity} given {len(values)} values")
    fast = getattr(realization, "eval_word", None)
    if fast is not None:
        return fast(law.body, values)
    inverses: dict[int, Any] = {}
    out = realization.identity()
    mul = realization.multiply
    for x in law.body:
        if x > 0:
            out = mul(out, values[x - 1])
        else:
            v = inverses.get(x)
            if v is None:
                v = inverses[x] = realization.invert(values[-x - 1])
            out = mul(out, v)
    return out


def compose_laws(outer: GroupLaw, inner: GroupLaw, cap: int | None = None) -> GroupLaw:
    """Substitute independent copies of ``inner`` for the variables of ``outer``.

    Variable block ``j`` (0-based) of the result is x_{j*m+1}..x_{j*m+m}
    where m is the arity of ``inner``.
    """
    cap = LAW_LENGTH_CAP if cap is None else cap
    if outer.length * inner.length > cap:
        raise LawOverflow(f"composite length bound {outer.length * inner.length} exceeds cap {cap}")
    m = inner.arity
    inv = _kernel.invert_letters(inner.body)
    letters: list[int] = []
    for x in outer.body:
        j = abs(x) - 1
        piece = inner.body if x > 0 else inv
        letters.extend(y + j * m if y > 0 else y - j * m for y in piece)
    return GroupLaw(outer.arity * m, _kernel.free_reduce(letters), factors=(outer, inner))


def finite_index_law(law: GroupLaw, n: int, cap: int | None = None) -> GroupLaw:
    """Law satisfied by any group containing a ``law``-group with index at most n."""
    if n < 1:
        raise ValueError("index bound must be >= 1")
    cap = LAW_LENGTH_CAP if cap is None else cap
    # n! grows fast; stop before computing it past the cap
    f = 1
    for i in range(2, n + 1):
        f *= i
        if f * max(law.length, 1) > cap:
            raise LawOverflow(f"{n}! * {law.length} exceeds the law length cap {cap}")
    return compose_laws(law, power_law(f, cap), cap)


def commutator_of_laws(law: GroupLaw, cap: int | None = None) -> GroupLaw:
    """[law(x1..xm), law(x_{m+1}..x_{2m})]."""
    return compose_laws(COMMUTATOR, law, cap)


def nested_commutator_law(c: int, cap: int | None = None) -> GroupLaw:
    """Derived-length-c law on 2^c variables, of length 4^c."""
    if c < 1:
        raise ValueError("derived length must be >= 1")
    law = COMMUTATOR
    for _ in range(c - 1):
        law = commutator_of_laws(law, cap)
    return law


# -- checking on balls ------------------------------------------------------


@dataclass(frozen=True)
class Holds:
    ball_size: int

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class Counterexample:
    values: tuple

    def __bool__(self) -> bool:
        return False


def ball_elements(realization, generators: Sequence, radius: int, cap: int = 10**6) -> list:
    """Elements of word length <= radius, in breadth-first discovery order.

    Steps are right multiplications by g1, g1^-1, g2, g2^-1, ...
    """
    steps = []
    for g in generators:
        steps.append(g)
        steps.append(realization.invert(g))
    e = realization.identity()
    seen = {e}
    order = [e]
    frontier = [e]
    for r in range(radius):
        nxt = []
        for x in frontier:
            for s in steps:
                y = realization.multiply(x, s)
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    nxt.append(y)
                    if len(seen) > cap:
                        raise ElementCapExceeded(
                            f"ball exceeds {cap} elements at radius {r + 1}", radius=r, partial=order
                        )
        if not nxt:
            break
        frontier = nxt
    return order


def _first_violation(law: GroupLaw, elements: list, realization, tuple_cap: int):
    if law.factors is not None:
        outer, inner = law.factors
        reps: dict[Any, tuple] = {}
        values: list = []
        for block in _tuples(elements, inner.arity, tuple_cap):
            v = eval_law(inner, block, realization)
            if v not in reps:
                reps[v] = block
                values.append(v)
        hit = _first_violation(outer, values, realization, tuple_cap)
        if hit is None:
            return None
        return tuple(x for v in hit for x in reps[v])
    e = realization.identity()
    for t in _tuples(elements, law.arity, tuple_cap):
        if eval_law(law, t, realization) != e:
            return t
    return None


def _tuples(elements: list, arity: int, tuple_cap: int):
    if len(elements) ** arity > tuple_cap:
        raise ElementCapExceeded(f"{len(elements)}^{arity} tuples exceed the tuple cap {tuple_cap}")
    return itertools.product(elements, repeat=arity)


def check_law_on_ball(
    realization,
    generators: Sequence,
    law: GroupLaw,
    radius: int,
    element_cap: int = 10**6,
    tuple_cap: int = TUPLE_CAP,
):
    """Evaluate ``law`` on every tuple drawn from the ball of the given radius.

    Returns :class:`Holds` or the first violating tuple in lexicographic
    order over the breadth-first ball order.  Composite laws are checked
    layer by layer: the set of inner values over all blocks is computed
    once, and the outer law is checked on that set.  This is still
    exhaustive, and it yields the same first counterexample.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    elements = ball_elements(realization, generators, radius, element_cap)
    if law.degenerate:
        return Holds(len(elements))
    hit = _first_violation(law, elements, realization, tuple_cap)
    if hit is None:
        return Holds(len(elements))
    return Counterexample(hit)

