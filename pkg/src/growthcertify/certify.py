"""Certified dichotomy for subgroups of free-by-abelian groups.

Given a finite generating set T of a subgroup of F_n x| Z^d, either find two
words in T of length at most 6 that freely generate a free group, or
certify a group law for <T>.  The law variant replaces commutators by the
values of an arbitrary law of the abelian quotient.  Every verdict is
re-verified before it is returned.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import CapExceeded, QuotientLawFails, VerificationFailed
from .extension import ExtElement, ExtensionGroup, GeneratingSet, TrackedRealization, in_kernel
from .laws import (
    COMMUTATOR,
    GroupLaw,
    check_law_on_ball,
    commutator_of_laws,
    eval_law,
    format_law,
    parse_law,
)
from .stallings import (
    NonAbelianFree,
    Trivial,
    build_graph,
    classify,
    contains,
    free_basis,
    subgroup_rank,
)
from .words import Word, commutes, format_word, parse_word, primitive_root

LN3 = math.log(3)
DEFAULT_VERIFY_RADIUS = 3

# -- expressions over the names of T -----------------------------------------

Expr = tuple  # ((name, +1 | -1), ...)


def reduce_expr(expr) -> Expr:
    out: list = []
    for name, s in expr:
        if out and out[-1] == (name, -s):
            out.pop()
        else:
            out.append((name, s))
    return tuple(out)


def invert_expr(expr) -> Expr:
    return tuple((n, -s) for n, s in reversed(expr))


def format_expr(expr) -> str:
    return " ".join(n if s > 0 else f"{n}^-1" for n, s in expr)


def parse_expr(text: str) -> Expr:
    out = []
    for tok in text.split():
        if tok.endswith("^-1"):
            out.append((tok[:-3], -1))
        else:
            out.append((tok, 1))
    return reduce_expr(out)


def eval_expr(E: ExtensionGroup, T: GeneratingSet, expr) -> ExtElement:
    x = E.identity()
    for name, s in expr:
        g = T[name]
        x = E.multiply(x, g if s > 0 else E.invert(g))
    return x


# -- verdicts ------------------------------------------------------------------


@dataclass(frozen=True)
class FreeBasis:
    u: ExtElement
    v: ExtElement
    u_expr: Expr
    v_expr: Expr

    @property
    def t_length_u(self) -> int:
        return len(self.u_expr)

    @property
    def t_length_v(self) -> int:
        return len(self.v_expr)

    @property
    def max_t_length(self) -> int:
        return max(self.t_length_u, self.t_length_v)

    @property
    def entropy_lower(self) -> float:
        return LN3 / self.max_t_length

    def to_dict(self) -> dict:
        rank = self.u.kernel_word.rank
        return {
            "kind": "FreeBasis",
            "kernel_rank": rank,
            "u": _element_dict(self.u),
            "v": _element_dict(self.v),
            "u_expr": format_expr(self.u_expr),
            "v_expr": format_expr(self.v_expr),
            "t_length_u": self.t_length_u,
            "t_length_v": self.t_length_v,
            "entropy_lower": self.entropy_lower,
        }


@dataclass(frozen=True)
class LawCertificate:
    law: GroupLaw
    structure: str  # Abelian | CyclicByAbelian | MetabelianNormalClosure
    normal_generator: Word | None = None

    def to_dict(self) -> dict:
        return {
            "kind": "LawCertificate",
            "law": law_to_dict(self.law),
            "structure": self.structure,
            "normal_generator": None
            if self.normal_generator is None
            else format_word(self.normal_generator),
            "kernel_rank": None if self.normal_generator is None else self.normal_generator.rank,
        }


Verdict = FreeBasis | LawCertificate


def _element_dict(x: ExtElement) -> dict:
    return {"kernel_word": format_word(x.kernel_word), "shift": list(x.shift)}


def law_to_dict(law: GroupLaw) -> dict:
    d = {
        "arity": law.arity,
        "body": format_law(law),
        "length": law.length,
        "degenerate": law.degenerate,
    }
    if law.factors is not None:
        d["factors"] = [law_to_dict(f) for f in law.factors]
    return d


def law_from_dict(d: dict) -> GroupLaw:
    law = parse_law(d["body"], d["arity"]) if d["body"] != "1" else GroupLaw(d["arity"], ())
    if d.get("factors"):
        outer, inner = (law_from_dict(f) for f in d["factors"])
        law = GroupLaw(law.arity, law.body, factors=(outer, inner))
    return law


def verdict_from_dict(d: dict) -> Verdict:
    if d["kind"] == "FreeBasis":
        rank = d["kernel_rank"]

        def el(e):
            return ExtElement(parse_word(e["kernel_word"], rank), tuple(e["shift"]))

        return FreeBasis(el(d["u"]), el(d["v"]), parse_expr(d["u_expr"]), parse_expr(d["v_expr"]))
    ng = d.get("normal_generator")
    return LawCertificate(
        law_from_dict(d["law"]),
        d["structure"],
        None if ng is None else parse_word(ng, d["kernel_rank"]),
    )


@dataclass
class SearchTrace:
    """Ordered log of the search; :func:`replay` re-runs it and compares."""

    algorithm: str
    law: str
    verify_radius: int
    events: list = field(default_factory=list)

    def log(self, step: str, **data) -> None:
        self.events.append({"step": step, **data})

    def summary(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "law": self.law,
            "verify_radius": self.verify_radius,
            "events": self.events,
        }


# -- verification ------------------------------------------------------------


def verify_free_basis(E: ExtensionGroup, T: GeneratingSet, fb: FreeBasis, max_length: int | None = None) -> None:
    """Raise VerificationFailed unless ``fb`` is a rank-2 free basis inside the kernel."""
    if not (in_kernel(fb.u) and in_kernel(fb.v)):
        raise VerificationFailed("free basis elements must lie in the kernel")
    if eval_expr(E, T, fb.u_expr) != fb.u or eval_expr(E, T, fb.v_expr) != fb.v:
        raise VerificationFailed("T-expressions do not evaluate to the basis elements")
    cls = classify([fb.u.kernel_word, fb.v.kernel_word], E.kernel_rank)
    if not (isinstance(cls, NonAbelianFree) and cls.rank == 2):
        raise VerificationFailed(f"basis folds to {cls.tag}, not a rank-2 free group")
    if max_length is not None and fb.max_t_length > max_length:
        raise VerificationFailed(f"T-length {fb.max_t_length} exceeds the bound {max_length}")


def verify_law(E: ExtensionGroup, T: GeneratingSet, cert: LawCertificate, radius: int) -> bool:
    """Exhaustive check of the certified law on the T-ball of the given radius."""
    R = TrackedRealization(E, T)
    return bool(check_law_on_ball(R, R.generators(), cert.law, radius))


# -- the dichotomy -----------------------------------------------------------


def _quotient_value(law: GroupLaw, shifts: Sequence[tuple], d: int) -> tuple:
    total = [0] * d
    for x in law.body:
        s = shifts[abs(x) - 1]
        sign = 1 if x > 0 else -1
        for i in range(d):
            total[i] += sign * s[i]
    return tuple(total)


def law_values(E: ExtensionGroup, T: GeneratingSet, law: GroupLaw) -> list[tuple[Expr, ExtElement]]:
    """Distinct nontrivial values w_L(t1..tm) over T^m, first-occurrence order.

    Raises QuotientLawFails when some value leaves the kernel.
    """
    names = T.names
    elements = T.elements
    seen = set()
    out = []
    for combo in itertools.product(range(len(names)), repeat=law.arity):
        shifts = [elements[i].shift for i in combo]
        if any(_quotient_value(law, shifts, E.d)):
            raise QuotientLawFails(tuple(names[i] for i in combo))
        value = eval_law(law, [elements[i] for i in combo], E)
        if not in_kernel(value):
            raise VerificationFailed("law value outside the kernel despite a trivial projection")
        if value.kernel_word.is_identity() or value in seen:
            continue
        seen.add(value)
        expr = reduce_expr(
            (names[combo[abs(x) - 1]], 1 if x > 0 else -1) for x in law.body
        )
        out.append((expr, value))
    return out


def _dichotomy(E: ExtensionGroup, T: GeneratingSet, law: GroupLaw, trace: SearchTrace) -> Verdict:
    W = law_values(E, T, law)
    trace.log(
        "W",
        size=len(W),
        values=[[format_expr(e), format_word(x.kernel_word)] for e, x in W],
    )
    cls = classify([x.kernel_word for _, x in W], E.kernel_rank)
    trace.log("classify", tag=cls.tag)
    if isinstance(cls, Trivial):
        return LawCertificate(law, "Abelian")
    if isinstance(cls, NonAbelianFree):
        for (ei, xi), (ej, xj) in itertools.combinations(W, 2):
            if not commutes(xi.kernel_word, xj.kernel_word):
                trace.log("pair", u=format_expr(ei), v=format_expr(ej))
                return FreeBasis(xi, xj, ei, ej)
        raise VerificationFailed("non-cyclic subgroup with pairwise commuting generators")
    a_expr, a = W[0]
    for name, t in T:
        c = E.conjugate(a, t)
        c_expr = reduce_expr(((name, 1),) + a_expr + ((name, -1),))
        ok = commutes(a.kernel_word, c.kernel_word)
        trace.log("conjugate", by=name, commutes=ok)
        if not ok:
            return FreeBasis(a, c, a_expr, c_expr)
    root = primitive_root(a.kernel_word).root_element()
    structure = "CyclicByAbelian" if law == COMMUTATOR else "MetabelianNormalClosure"
    return LawCertificate(commutator_of_laws(law), structure, root)


def _certify(E, T, law, verify_radius, algorithm) -> tuple[Verdict, SearchTrace]:
    trace = SearchTrace(algorithm, format_law(law), verify_radius)
    verdict = _dichotomy(E, T, law, trace)
    if isinstance(verdict, FreeBasis):
        verify_free_basis(E, T, verdict, law.length + 2)
        trace.log("verified", kind="FreeBasis")
        return verdict, trace
    if verify_law(E, T, verdict, verify_radius):
        trace.log("verified", kind="LawCertificate")
        return verdict, trace
    if law == COMMUTATOR:
        raise VerificationFailed(f"law {verdict.law} fails on the radius-{verify_radius} ball")
    # values of a general law on T need not generate its verbal subgroup;
    # the commutator route is always sound for abelian quotients
    trace.log("fallback", reason="law certificate failed re-verification", law=format_law(verdict.law))
    verdict = _dichotomy(E, T, COMMUTATOR, trace)
    if isinstance(verdict, FreeBasis):
        verify_free_basis(E, T, verdict, COMMUTATOR.length + 2)
    elif not verify_law(E, T, verdict, verify_radius):
        raise VerificationFailed(f"law {verdict.law} fails on the radius-{verify_radius} ball")
    trace.log("verified", kind=type(verdict).__name__)
    return verdict, trace


def two_free_certify(
    E: ExtensionGroup, T: GeneratingSet, verify_radius: int = DEFAULT_VERIFY_RADIUS
) -> tuple[Verdict, SearchTrace]:
    """Free basis of T-length <= 6 or a law for <T>, built from commutators of T."""
    return _certify(E, T, COMMUTATOR, verify_radius, "two_free")


def law_certify_general(
    E: ExtensionGroup, T: GeneratingSet, law: GroupLaw, verify_radius: int = DEFAULT_VERIFY_RADIUS
) -> tuple[Verdict, SearchTrace]:
    """Same dichotomy driven by the values of ``law``; bounds |law| and |law| + 2."""
    return _certify(E, T, law, verify_radius, "law_general")


def replay(E: ExtensionGroup, T: GeneratingSet, trace: SearchTrace) -> Verdict:
    """Re-run the search recorded in ``trace``; raise VerificationFailed on divergence."""
    law = parse_law(trace.law) if trace.law != "1" else GroupLaw(1, ())
    if trace.algorithm == "two_free":
        verdict, again = two_free_certify(E, T, trace.verify_radius)
    else:
        verdict, again = law_certify_general(E, T, law, trace.verify_radius)
    if again.events != trace.events:
        raise VerificationFailed("replayed trace diverges from the recorded one")
    return verdict


# -- iterated conjugation chain ----------------------------------------------


@dataclass(frozen=True)
class ChainReport:
    k_stop: int
    class_at_each_level: tuple
    outcome: str  # NonAbelian | StabilizedCyclic | StabilizedTrivial


def iterated_chain(E: ExtensionGroup, T: GeneratingSet, W: Sequence[ExtElement], max_k: int = 4) -> ChainReport:
    """Grow U_k, the subgroup generated by conjugates of W by T-words of length <= k.

    Stops at the first non-abelian level or the first k with U_k = U_{k+1}.
    """
    if max_k < 2:
        raise ValueError("max_k must be >= 2")
    for w in W:
        if not in_kernel(w):
            raise ValueError(f"{w} is not in the kernel")
    rank = E.kernel_rank
    graph = build_graph([w.kernel_word for w in W], rank)
    levels = []
    inverses = [(t, E.invert(t)) for t in T.elements]
    for k in range(max_k + 1):
        r = subgroup_rank(graph)
        levels.append("Trivial" if r == 0 else "InfiniteCyclic" if r == 1 else "NonAbelianFree")
        if r >= 2:
            return ChainReport(k, tuple(levels), "NonAbelian")
        basis = [E.element(b) for b in free_basis(graph)]
        new = []
        for b in basis:
            for t, tinv in inverses:
                new.append(E.conjugate(b, t).kernel_word)
                new.append(E.conjugate(b, tinv).kernel_word)
        if all(contains(graph, w) for w in new):
            return ChainReport(k, tuple(levels), "StabilizedTrivial" if r == 0 else "StabilizedCyclic")
        graph = build_graph([b.kernel_word for b in basis] + new, rank)
    raise CapExceeded(f"chain neither stabilized nor became non-abelian by k = {max_k}")


# -- lifting through homomorphisms ---------------------------------------------


def lift_basis(
    E: ExtensionGroup,
    T: GeneratingSet,
    verdict: FreeBasis,
    homomorphism: Callable[[ExtElement], ExtElement] | None = None,
) -> FreeBasis:
    """Re-express an image free basis over a source generating set with the same names.

    Lifted elements inside the kernel are verified by folding.  Otherwise
    ``homomorphism`` (source -> image) must map them onto the image basis,
    which makes them free by the universal property.
    """
    if not isinstance(verdict, FreeBasis):
        raise TypeError("only FreeBasis verdicts can be lifted")
    missing = {n for n, _ in verdict.u_expr + verdict.v_expr} - set(T.names)
    if missing:
        raise VerificationFailed(f"names {sorted(missing)} absent from the source generating set")
    u = eval_expr(E, T, verdict.u_expr)
    v = eval_expr(E, T, verdict.v_expr)
    lifted = FreeBasis(u, v, verdict.u_expr, verdict.v_expr)
    if in_kernel(u) and in_kernel(v):
        verify_free_basis(E, T, lifted)
    elif homomorphism is None or homomorphism(u) != verdict.u or homomorphism(v) != verdict.v:
        raise VerificationFailed("lifted pair is not verifiably free in the source group")
    return lifted
