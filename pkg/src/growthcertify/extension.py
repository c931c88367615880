"""Split extensions F_n x|_Phi Z^d by commuting automorphism tuples.

Elements are pairs ``(w, k)`` with product
``(w1, k1)(w2, k2) = (w1 Phi^k1(w2), k1 + k2)`` where
``Phi^k = phi_1^k_1 ... phi_d^k_d``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import _kernel
from .errors import ExponentCapExceeded, NotCommuting, NotInverse, RankMismatch, SpecError
from .words import Word, format_word

EXPONENT_CAP = 64
APPLY_CACHE_SIZE = 1 << 16
APPLY_CACHE_MAX_WORD = 64


def _images_tuple(words: Sequence[Word], rank: int) -> tuple:
    out = []
    for w in words:
        if w.rank != rank:
            raise RankMismatch(f"image of rank {w.rank} in a rank {rank} automorphism")
        out.append(w.letters)
    return tuple(out)


def _inverses(images: tuple) -> tuple:
    return tuple(_kernel.invert_letters(im) for im in images)


class FreeAutomorphism:
    """An automorphism of F_n given by generator images and verified inverse images."""

    def __init__(self, rank: int, images: tuple, inverse_images: tuple):
        self.rank = rank
        self.images = images
        self.inverse_images = inverse_images
        self._img_inv = _inverses(images)
        self._inv_inv = _inverses(inverse_images)

    def __call__(self, w: Word) -> Word:
        return Word._raw(_kernel.substitute(w.letters, self.images, self._img_inv), self.rank)

    def inverse(self) -> FreeAutomorphism:
        return FreeAutomorphism(self.rank, self.inverse_images, self.images)

    def __eq__(self, other) -> bool:
        return isinstance(other, FreeAutomorphism) and (self.rank, self.images) == (
            other.rank,
            other.images,
        )

    def __hash__(self) -> int:
        return hash((self.rank, self.images))

    def __repr__(self) -> str:
        imgs = ", ".join(format_word(Word._raw(i, self.rank)) or "1" for i in self.images)
        return f"FreeAutomorphism([{imgs}])"


def make_automorphism(images: Sequence[Word], inverse_images: Sequence[Word]) -> FreeAutomorphism:
    """Build an automorphism, checking both compositions fix every generator."""
    n = len(images)
    if len(inverse_images) != n:
        raise ValueError("images and inverse_images must have the same length")
    imgs = _images_tuple(images, n)
    invs = _images_tuple(inverse_images, n)
    phi = FreeAutomorphism(n, imgs, invs)
    for i in range(n):
        g = (i + 1,)
        there = _kernel.substitute(_kernel.substitute(g, imgs, phi._img_inv), invs, phi._inv_inv)
        back = _kernel.substitute(_kernel.substitute(g, invs, phi._inv_inv), imgs, phi._img_inv)
        for res in (there, back):
            if res != g:
                raise NotInverse(i, format_word(Word._raw(res, n)) or "1")
    return phi


def identity_automorphism(rank: int) -> FreeAutomorphism:
    gens = [Word.generator(i, rank) for i in range(rank)]
    return make_automorphism(gens, gens)


@dataclass(frozen=True)
class ExtElement:
    kernel_word: Word
    shift: tuple

    def __str__(self) -> str:
        return f"({format_word(self.kernel_word) or '1'}, {list(self.shift)})"


class ExtensionGroup:
    """F_n x|_Phi Z^d; also a law realization (identity/multiply/invert)."""

    def __init__(self, kernel_rank: int, auts: Sequence[FreeAutomorphism] = (), exponent_cap: int = EXPONENT_CAP):
        self.kernel_rank = kernel_rank
        self.auts = tuple(auts)
        self.d = len(self.auts)
        self.exponent_cap = exponent_cap
        for i, phi in enumerate(self.auts):
            if phi.rank != kernel_rank:
                raise RankMismatch(f"automorphism {i} has rank {phi.rank}, kernel rank is {kernel_rank}")
        for i in range(self.d):
            for j in range(i + 1, self.d):
                a, b = self.auts[i], self.auts[j]
                for g in range(kernel_rank):
                    w = Word.generator(g, kernel_rank)
                    if a(b(w)) != b(a(w)):
                        raise NotCommuting(f"automorphisms {i} and {j} disagree on generator {g}")
        gens = tuple((i + 1,) for i in range(kernel_rank))
        self._single = [{0: gens} for _ in range(self.d)]
        self._power_cache: dict[tuple, tuple] = {(0,) * self.d: (gens, _inverses(gens))}
        self._apply_cache: dict[tuple, tuple] = {}

    # -- powers of Phi ----------------------------------------------------

    def _single_power(self, i: int, k: int) -> tuple:
        cache = self._single[i]
        if k in cache:
            return cache[k]
        phi = self.auts[i]
        step = 1 if k > 0 else -1
        base = phi.images if k > 0 else phi.inverse_images
        j = 0
        while j + step in cache:
            j += step
        cur = cache[j]
        while j != k:
            # phi^(j+1)(g) = phi^j(phi(g))
            cur_inv = _inverses(cur)
            cur = tuple(_kernel.substitute(img, cur, cur_inv) for img in base)
            j += step
            cache[j] = cur
        return cur

    def power_images(self, k: tuple) -> tuple:
        """(images, inverse images) of Phi^k on the generators."""
        hit = self._power_cache.get(k)
        if hit is not None:
            return hit
        if len(k) != self.d:
            raise ValueError(f"shift {k} has the wrong length for d = {self.d}")
        for ki in k:
            if abs(ki) > self.exponent_cap:
                raise ExponentCapExceeded(f"shift {k} exceeds exponent cap {self.exponent_cap}")
        imgs = tuple((i + 1,) for i in range(self.kernel_rank))
        # Phi^k = phi_1^k1 o ... o phi_d^kd; apply the last factor first
        for i in range(self.d):
            if k[i] == 0:
                continue
            p = self._single_power(i, k[i])
            pinv = _inverses(p)
            imgs = tuple(_kernel.substitute(im, p, pinv) for im in imgs)
        hit = (imgs, _inverses(imgs))
        self._power_cache[k] = hit
        return hit

    def _apply(self, k: tuple, letters: tuple) -> tuple:
        if not letters or not any(k):
            return letters
        if len(letters) > APPLY_CACHE_MAX_WORD:
            imgs, invs = self.power_images(k)
            return _kernel.substitute(letters, imgs, invs)
        key = (k, letters)
        hit = self._apply_cache.get(key)
        if hit is None:
            imgs, invs = self.power_images(k)
            hit = _kernel.substitute(letters, imgs, invs)
            if len(self._apply_cache) >= APPLY_CACHE_SIZE:
                self._apply_cache.clear()
            self._apply_cache[key] = hit
        return hit

    def apply_power(self, k: Sequence[int], w: Word) -> Word:
        return Word._raw(self._apply(tuple(k), w.letters), self.kernel_rank)

    # -- group operations -------------------------------------------------

    def element(self, word: Word | str = "", shift: Sequence[int] | None = None) -> ExtElement:
        if isinstance(word, str):
            from .words import parse_word

            word = parse_word(word, self.kernel_rank)
        if word.rank != self.kernel_rank:
            raise RankMismatch(f"kernel word of rank {word.rank}, kernel rank is {self.kernel_rank}")
        shift = tuple(shift) if shift is not None else (0,) * self.d
        if len(shift) != self.d:
            raise ValueError(f"shift {shift} has the wrong length for d = {self.d}")
        return ExtElement(word, shift)

    def identity(self) -> ExtElement:
        return ExtElement(Word.identity(self.kernel_rank), (0,) * self.d)

    def multiply(self, x: ExtElement, y: ExtElement) -> ExtElement:
        w2 = self.apply_power(x.shift, y.kernel_word)
        return ExtElement(x.kernel_word * w2, tuple(a + b for a, b in zip(x.shift, y.shift)))

    def invert(self, x: ExtElement) -> ExtElement:
        neg = tuple(-a for a in x.shift)
        return ExtElement(self.apply_power(neg, ~x.kernel_word), neg)

    def eval_word(self, body: Sequence[int], values: Sequence[ExtElement]) -> ExtElement:
        """Product of ``values[i-1]^(+-1)`` over the signed letters ``i`` of ``body``.

        Each factor contributes Phi^s(w) or Phi^s(w^-1) where s is the
        running shift (before a positive letter, after a negative one), so
        inverses are never formed and exponents stay at prefix-sum size.
        """
        d = self.d
        s = (0,) * d
        out: tuple = ()
        for x in body:
            v = values[abs(x) - 1]
            if x > 0:
                piece = self._apply(s, v.kernel_word.letters)
                s = tuple(s[i] + v.shift[i] for i in range(d))
            else:
                s = tuple(s[i] - v.shift[i] for i in range(d))
                piece = self._apply(s, _kernel.invert_letters(v.kernel_word.letters))
            out = _kernel.concat_reduce(out, piece)
        return ExtElement(Word._raw(out, self.kernel_rank), s)

    def commutator(self, x: ExtElement, y: ExtElement) -> ExtElement:
        return self.multiply(self.multiply(x, y), self.multiply(self.invert(x), self.invert(y)))

    def conjugate(self, x: ExtElement, g: ExtElement) -> ExtElement:
        """g x g^-1."""
        return self.multiply(self.multiply(g, x), self.invert(g))

    def __repr__(self) -> str:
        return f"ExtensionGroup(kernel_rank={self.kernel_rank}, auts={list(self.auts)})"


def ext_multiply(E: ExtensionGroup, x: ExtElement, y: ExtElement) -> ExtElement:
    return E.multiply(x, y)


def ext_invert(E: ExtensionGroup, x: ExtElement) -> ExtElement:
    return E.invert(x)


def apply_power(E: ExtensionGroup, k: Sequence[int], w: Word) -> Word:
    return E.apply_power(k, w)


def project(x: ExtElement) -> tuple:
    return x.shift


def in_kernel(x: ExtElement) -> bool:
    return not any(x.shift)


class GeneratingSet:
    """Ordered, name-tagged generators of a subgroup of an extension group."""

    def __init__(self, items: Sequence[tuple[str, ExtElement]]):
        items = list(items)
        if not items:
            raise SpecError("generators", "generating set must be nonempty")
        names = [n for n, _ in items]
        if len(set(names)) != len(names):
            raise SpecError("generators", f"duplicate generator names in {names}")
        self.items = items

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.items]

    @property
    def elements(self) -> list[ExtElement]:
        return [x for _, x in self.items]

    def __getitem__(self, name: str) -> ExtElement:
        for n, x in self.items:
            if n == name:
                return x
        raise KeyError(name)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __repr__(self) -> str:
        return "GeneratingSet(" + ", ".join(f"{n}={x}" for n, x in self.items) + ")"


class Tracked:
    """A group element paired with a reduced word over a generating set.

    Equality and hashing use the element only.
    """

    __slots__ = ("value", "tword")

    def __init__(self, value: ExtElement, tword: tuple):
        self.value = value
        self.tword = tword

    def __eq__(self, other) -> bool:
        return isinstance(other, Tracked) and self.value == other.value

    def __hash__(self) -> int:
        return hash(self.value)

    def __repr__(self) -> str:
        return f"Tracked({self.value}, {self.tword})"

    def __str__(self) -> str:
        return str(self.value)


class TrackedRealization:
    """Law realization over <T> that keeps every element's T-word.

    Law values are formed as reduced T-words and evaluated once from the
    generator words, so Phi is only ever applied to short generator words at
    exponents bounded by the running shift of the reduced T-word.  Without
    this, intermediate kernel words blow up exponentially for automorphisms
    of exponential growth even when the final value is trivial.
    """

    def __init__(self, group: ExtensionGroup, T: GeneratingSet):
        self.group = group
        self.T = T
        self._gens = T.elements

    def generators(self) -> list[Tracked]:
        return [Tracked(g, (i + 1,)) for i, g in enumerate(self._gens)]

    def evaluate(self, tword: tuple) -> ExtElement:
        E = self.group
        d = E.d
        s = (0,) * d
        out: tuple = ()
        for x in tword:
            g = self._gens[abs(x) - 1]
            if x > 0:
                piece = E._apply(s, g.kernel_word.letters)
                s = tuple(s[i] + g.shift[i] for i in range(d))
            else:
                s = tuple(s[i] - g.shift[i] for i in range(d))
                piece = E._apply(s, _kernel.invert_letters(g.kernel_word.letters))
            out = _kernel.concat_reduce(out, piece)
        return ExtElement(Word._raw(out, E.kernel_rank), s)

    def identity(self) -> Tracked:
        return Tracked(self.group.identity(), ())

    def multiply(self, a: Tracked, b: Tracked) -> Tracked:
        tw = _kernel.concat_reduce(a.tword, b.tword)
        if len(b.tword) <= 1:
            return Tracked(self.group.multiply(a.value, b.value), tw)
        return Tracked(self.evaluate(tw), tw)

    def invert(self, a: Tracked) -> Tracked:
        return Tracked(self.group.invert(a.value), _kernel.invert_letters(a.tword))

    def eval_word(self, body, values) -> Tracked:
        letters = []
        for x in body:
            tw = values[abs(x) - 1].tword
            letters.extend(tw if x > 0 else _kernel.invert_letters(tw))
        tw = _kernel.free_reduce(letters)
        return Tracked(self.evaluate(tw), tw)
