"""Freely reduced words in a free group of finite rank.

Letters are stored as nonzero ints (generator ``i`` is ``i + 1``, its
inverse ``-(i + 1)``); every constructor reduces, so equality of words is
equality of letter tuples.
"""
from __future__ import annotations

import re
from typing import Iterable, NamedTuple

from . import _kernel
from .errors import IdentityHasNoRoot, MalformedToken, RankMismatch, UnknownGenerator

_ALPHABET = "abcdefghijklmnopqrstuvwxyz"


class Letter(NamedTuple):
    generator_index: int
    sign: int


class Word:
    """An element of the free group F_rank in reduced form."""

    __slots__ = ("letters", "rank", "_hash")

    def __init__(self, letters: Iterable[int] = (), rank: int = 2, *, reduced: bool = False):
        letters = tuple(letters)
        for x in letters:
            if x == 0 or abs(x) > rank:
                raise UnknownGenerator(f"letter {x} outside rank {rank}")
        self.letters = letters if reduced else _kernel.free_reduce(letters)
        self.rank = rank
        self._hash = None

    @classmethod
    def _raw(cls, letters: tuple, rank: int) -> Word:
        # trusted constructor: letters already reduced and in range
        w = cls.__new__(cls)
        w.letters = letters
        w.rank = rank
        w._hash = None
        return w

    @classmethod
    def identity(cls, rank: int) -> Word:
        return cls._raw((), rank)

    @classmethod
    def generator(cls, index: int, rank: int, sign: int = 1) -> Word:
        if not 0 <= index < rank:
            raise UnknownGenerator(f"generator {index} outside rank {rank}")
        return cls._raw(((index + 1) * sign,), rank)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        for x in self.letters:
            yield Letter(abs(x) - 1, 1 if x > 0 else -1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return self.rank == other.rank and self.letters == other.letters

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rank, self.letters))
        return self._hash

    def __lt__(self, other: Word) -> bool:
        return shortlex_key(self) < shortlex_key(other)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r}, rank={self.rank})"

    def __str__(self) -> str:
        return format_word(self)

    def __mul__(self, other: Word) -> Word:
        return multiply(self, other)

    def __invert__(self) -> Word:
        return invert(self)

    def __pow__(self, n: int) -> Word:
        return power(self, n)

    def is_identity(self) -> bool:
        return not self.letters


def shortlex_key(w: Word):
    return (len(w.letters), tuple((abs(x), -x) for x in w.letters))


def _check_rank(u: Word, v: Word) -> None:
    if u.rank != v.rank:
        raise RankMismatch(f"rank {u.rank} vs rank {v.rank}")


def multiply(u: Word, v: Word) -> Word:
    _check_rank(u, v)
    return Word._raw(_kernel.concat_reduce(u.letters, v.letters), u.rank)


def invert(u: Word) -> Word:
    return Word._raw(_kernel.invert_letters(u.letters), u.rank)


def power(u: Word, n: int) -> Word:
    if n < 0:
        u, n = invert(u), -n
    out = Word.identity(u.rank)
    for _ in range(n):
        out = multiply(out, u)
    return out


def conjugate(u: Word, g: Word) -> Word:
    """Return g u g^-1."""
    _check_rank(u, g)
    return multiply(multiply(g, u), invert(g))


def commutator(u: Word, v: Word) -> Word:
    """Return [u, v] = u v u^-1 v^-1."""
    _check_rank(u, v)
    return multiply(multiply(u, v), multiply(invert(u), invert(v)))


def commutes(u: Word, v: Word) -> bool:
    return commutator(u, v).is_identity()


def cyclic_reduction(u: Word) -> tuple[Word, Word]:
    """Split u as c r c^-1 with r cyclically reduced; returns (c, r)."""
    x = u.letters
    i, j = 0, len(x) - 1
    while i < j and x[i] == -x[j]:
        i += 1
        j -= 1
    return Word._raw(x[:i], u.rank), Word._raw(x[i : j + 1], u.rank)


class RootDecomposition(NamedTuple):
    root: Word
    exponent: int
    conjugator: Word

    def root_element(self) -> Word:
        """Generator of the maximal cyclic subgroup: conjugator root conjugator^-1."""
        return conjugate(self.root, self.conjugator)


def primitive_root(u: Word) -> RootDecomposition:
    """Write u as conjugator * root**exponent * conjugator^-1 with maximal exponent.

    The root is cyclically reduced and not a proper power.
    """
    if u.is_identity():
        raise IdentityHasNoRoot("the identity has no primitive root")
    c, r = cyclic_reduction(u)
    x = r.letters
    n = len(x)
    for p in range(1, n + 1):
        if n % p == 0 and x[p:] == x[:-p]:
            return RootDecomposition(Word._raw(x[:p], u.rank), n // p, c)
    raise AssertionError("unreachable: the full length is always a period")


_TOKEN = re.compile(r"\s*(?:([a-zA-Z])(?![0-9])|([xX])(\d+))(?:\^(-?\d+))?")


def parse_word(text: str, rank: int) -> Word:
    """Parse the text word format.

    Lowercase letters name generators a, b, c, ...; uppercase letters are
    inverses.  Indexed tokens ``x3`` / ``X3`` (1-based) work for any rank.
    Any token may carry an integer exponent: ``a^-1``, ``b^3``, ``x12^-2``.
    ``1`` and the empty string denote the identity.
    """
    letters: list[int] = []
    s = text.strip()
    if s in ("", "1"):
        return Word.identity(rank)
    pos = 0
    while pos < len(s):
        if s[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(s, pos)
        if m is None or m.end() == pos:
            raise MalformedToken(f"cannot parse {s[pos:]!r} in {text!r}")
        ch, ix_ch, ix, exp = m.groups()
        if ch is not None:
            index = _ALPHABET.index(ch.lower())
            sign = 1 if ch.islower() else -1
        else:
            index = int(ix) - 1
            sign = 1 if ix_ch == "x" else -1
            if index < 0:
                raise MalformedToken(f"generator indices start at 1: {m.group(0)!r}")
        if index >= rank:
            raise UnknownGenerator(f"{m.group(0).strip()!r} needs rank > {index}, have {rank}")
        e = int(exp) if exp is not None else 1
        letters.extend([(index + 1) * sign * (1 if e > 0 else -1)] * abs(e))
        pos = m.end()
    return Word(letters, rank)


def format_word(w: Word) -> str:
    """Inverse of parse_word; the identity formats as the empty string."""
    if w.rank <= 26:
        return "".join(
            _ALPHABET[abs(x) - 1] if x > 0 else _ALPHABET[abs(x) - 1].upper() for x in w.letters
        )
    return " ".join(f"x{x}" if x > 0 else f"X{-x}" for x in w.letters)


def all_words(rank: int, max_length: int):
    """Yield every reduced word of length <= max_length in shortlex order."""
    alphabet = [s * i for i in range(1, rank + 1) for s in (1, -1)]
    layer = [()]
    yield Word._raw((), rank)
    for _ in range(max_length):
        nxt = []
        for w in layer:
            for x in alphabet:
                if w and w[-1] == -x:
                    continue
                nw = w + (x,)
                nxt.append(nw)
                yield Word._raw(nw, rank)
        layer = nxt
