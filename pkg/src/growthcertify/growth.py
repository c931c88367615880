"""Exact ball growth in F_n x| Z^d and the entropy sandwich."""
from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass

from . import _kernel
from .errors import ElementCapExceeded
from .extension import ExtensionGroup, GeneratingSet

DEFAULT_CAP = 10**7


def default_cap() -> int:
    env = os.environ.get("GROWTHCERTIFY_CAP")
    return int(env) if env else DEFAULT_CAP


@dataclass(frozen=True)
class BallCensus:
    radius: int
    counts: tuple
    generator_names: tuple = ()

    def to_dict(self) -> dict:
        return {
            "radius": self.radius,
            "counts": list(self.counts),
            "generators": list(self.generator_names),
            "log_ratio": [math.log(b) / n for n, b in enumerate(self.counts) if n > 0],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "B_n", "ln(B_n)/n"])
        for n, b in enumerate(self.counts):
            w.writerow([n, b, "" if n == 0 else repr(math.log(b) / n)])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _moves(E: ExtensionGroup, T: GeneratingSet):
    steps = []
    for x in T.elements:
        for y in (x, E.invert(x)):
            steps.append((y.kernel_word.letters, y.shift))
    d = E.d
    cache: dict[tuple, list] = {}

    def moves_for(shift: tuple) -> list:
        hit = cache.get(shift)
        if hit is None:
            hit = []
            if any(shift):
                imgs, invs = E.power_images(shift)
                for w, k in steps:
                    hit.append(
                        (_kernel.substitute(w, imgs, invs), tuple(shift[i] + k[i] for i in range(d)))
                    )
            else:
                hit = [(w, k) for w, k in steps]
            cache[shift] = hit
        return hit

    return moves_for


def enumerate_ball(E: ExtensionGroup, T: GeneratingSet, radius: int, cap: int | None = None) -> BallCensus:
    """Exact sizes B_0..B_radius of balls in <T> by breadth-first shells.

    Elements are deduplicated by their normal form (reduced kernel word,
    shift).  On overflow the raised ElementCapExceeded carries the census
    up to the last completed radius.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    cap = default_cap() if cap is None else cap
    moves_for = _moves(E, T)
    start = ((), (0,) * E.d)
    seen = {start}
    frontier = [start]
    counts = [1]
    names = tuple(T.names)
    for r in range(1, radius + 1):
        shell, overflow = _kernel.expand_shell(frontier, seen, moves_for, cap)
        if overflow:
            partial = BallCensus(r - 1, tuple(counts), names)
            raise ElementCapExceeded(
                f"more than {cap} elements at radius {r}", radius=r - 1, partial=partial
            )
        counts.append(counts[-1] + len(shell))
        frontier = shell
    return BallCensus(radius, tuple(counts), names)


@dataclass(frozen=True)
class GrowthEstimate:
    upper_sequence: tuple
    lower_bound: float | None = None
    census: BallCensus | None = None

    def sandwich_holds(self) -> bool:
        if self.lower_bound is None:
            return True
        return all(u >= self.lower_bound for u in self.upper_sequence)

    def to_dict(self) -> dict:
        return {
            "upper_sequence": list(self.upper_sequence),
            "lower_bound": self.lower_bound,
            "census": None if self.census is None else self.census.to_dict(),
        }


def entropy_bounds(E: ExtensionGroup, T: GeneratingSet, radius: int, verdict=None, cap: int | None = None) -> GrowthEstimate:
    """ln(B_n)/n for n = 1..radius, plus ln(3)/N from a free-basis verdict."""
    from .certify import FreeBasis

    census = enumerate_ball(E, T, radius, cap)
    upper = tuple(math.log(b) / n for n, b in enumerate(census.counts) if n > 0)
    lower = verdict.entropy_lower if isinstance(verdict, FreeBasis) else None
    return GrowthEstimate(upper, lower, census)


@dataclass(frozen=True)
class SubadditivityHolds:
    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class Violation:
    m: int
    n: int

    def __bool__(self) -> bool:
        return False


def subadditivity_check(census: BallCensus):
    """Check B_{m+n} <= B_m * B_n on every admissible pair (exact integers)."""
    c = census.counts
    for m in range(1, len(c)):
        for n in range(m, len(c) - m):
            if c[m + n] > c[m] * c[n]:
                return Violation(m, n)
    return SubadditivityHolds()
