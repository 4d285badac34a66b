"""Braid words in Artin generators, decided exactly through the Artin action.

Letters are signed integers: ``+i`` is sigma_i, ``-i`` its inverse.  The same
encoding is used for free-group words, where ``+j`` is x_j.

Conventions used throughout the package:

* a braid word acts on the free group letter by letter from left to right,
  so ``w . (uv) = (w . u) . v``;
* sigma_i sends x_i -> x_i x_{i+1} x_i^-1 and x_{i+1} -> x_i, fixing the rest;
* conjugation is ``(A)_B = B^-1 A B``;
* permutations compose left to right as well: ``(p * q)(k) = q(p(k))``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Letter = int
FreeKey = tuple[tuple[int, ...], ...]


def _invert_letters(letters: Sequence[int]) -> tuple[int, ...]:
    return tuple(-a for a in reversed(letters))


def _reduce_letters(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for a in letters:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


@dataclass(frozen=True)
class FreeWord:
    rank: int
    letters: tuple[int, ...] = ()
    reduced: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "letters", tuple(self.letters))
        for a in self.letters:
            if a == 0 or abs(a) > self.rank:
                raise ValueError(f"letter {a} outside free group of rank {self.rank}")
        if self.reduced and any(
            x == -y for x, y in zip(self.letters, self.letters[1:])
        ):
            raise ValueError("word flagged reduced but contains a cancelling pair")

    @classmethod
    def generator(cls, rank: int, j: int) -> FreeWord:
        return cls(rank, (j,), True)

    def __mul__(self, other: FreeWord) -> FreeWord:
        if self.rank != other.rank:
            raise ValueError("rank mismatch")
        return FreeWord(self.rank, self.letters + other.letters)

    def inverse(self) -> FreeWord:
        return FreeWord(self.rank, _invert_letters(self.letters), self.reduced)

    def __len__(self) -> int:
        return len(self.letters)


def free_reduce(w: FreeWord) -> FreeWord:
    if w.reduced:
        return w
    return FreeWord(w.rank, _reduce_letters(w.letters), True)


@dataclass(frozen=True)
class Permutation:
    """Bijection of {1..n}; ``images[k-1]`` is the image of k."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "images", tuple(self.images))
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"not a permutation: {self.images}")

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def transposition(cls, n: int, a: int, b: int) -> Permutation:
        images = list(range(1, n + 1))
        images[a - 1], images[b - 1] = b, a
        return cls(tuple(images))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, k: int) -> int:
        return self.images[k - 1]

    def __mul__(self, other: Permutation) -> Permutation:
        # left to right: first self, then other
        return Permutation(tuple(other(self(k)) for k in range(1, self.n + 1)))

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for k, v in enumerate(self.images, start=1):
            inv[v - 1] = k
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.n + 1))

    def support(self) -> frozenset[int]:
        return frozenset(k for k in range(1, self.n + 1) if self(k) != k)

    def is_transposition(self) -> bool:
        return len(self.support()) == 2

    def is_odd(self) -> bool:
        seen = set()
        parity = 0
        for start in range(1, self.n + 1):
            if start in seen:
                continue
            length = 0
            k = start
            while k not in seen:
                seen.add(k)
                k = self(k)
                length += 1
            parity += length - 1
        return parity % 2 == 1

    def cycles(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for start in range(1, self.n + 1):
            if start in seen or self(start) == start:
                continue
            cyc = [start]
            seen.add(start)
            k = self(start)
            while k != start:
                cyc.append(k)
                seen.add(k)
                k = self(k)
            out.append(tuple(cyc))
        return out

    def __str__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)


@dataclass(frozen=True)
class BraidWord:
    n: int
    letters: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "letters", tuple(self.letters))
        if self.n < 1:
            raise ValueError("strand count must be at least 1")
        for a in self.letters:
            if a == 0 or abs(a) > self.n - 1:
                raise ValueError(f"generator index {a} outside 1..{self.n - 1}")

    @classmethod
    def sigma(cls, n: int, i: int, sign: int = 1) -> BraidWord:
        return cls(n, (i * sign,))

    def __mul__(self, other: BraidWord) -> BraidWord:
        if self.n != other.n:
            raise ValueError("strand count mismatch")
        return BraidWord(self.n, self.letters + other.letters)

    def __pow__(self, k: int) -> BraidWord:
        base = self if k >= 0 else self.inverse()
        return BraidWord(self.n, base.letters * abs(k))

    def inverse(self) -> BraidWord:
        return BraidWord(self.n, _invert_letters(self.letters))

    def conjugate(self, by: BraidWord) -> BraidWord:
        """``(self)_by = by^-1 . self . by``."""
        return by.inverse() * self * by

    def __len__(self) -> int:
        return len(self.letters)

    def freely_reduced(self) -> BraidWord:
        """Cancel adjacent s s^-1 pairs (no braid relations used)."""
        return BraidWord(self.n, _reduce_letters(self.letters))

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "word": list(self.letters)})

    @classmethod
    def from_json(cls, text: str | dict) -> BraidWord:
        data = json.loads(text) if isinstance(text, str) else text
        if not isinstance(data, dict) or "n" not in data or "word" not in data:
            raise ValueError('braid JSON needs "n" and "word" fields')
        word = data["word"]
        if not isinstance(word, list) or not all(
            isinstance(a, int) and not isinstance(a, bool) for a in word
        ):
            raise ValueError("word must be a JSON array of signed integers")
        return cls(int(data["n"]), tuple(word))


def permutation_of(b: BraidWord) -> Permutation:
    perm = Permutation.identity(b.n)
    for a in b.letters:
        perm = perm * Permutation.transposition(b.n, abs(a), abs(a) + 1)
    return perm


def _substitute(images: Sequence[tuple[int, ...]], letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for a in letters:
        piece = images[a - 1] if a > 0 else _invert_letters(images[-a - 1])
        for x in piece:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def generator_images(b: BraidWord) -> FreeKey:
    """Images of x_1..x_n under the action of ``b``.

    The action of b = s_1...s_m is phi_{s_m} o ... o phi_{s_1}; precomposing one
    letter at a time only touches two images, so the word is scanned backwards.
    """
    images = [(j,) for j in range(1, b.n + 1)]
    for a in reversed(b.letters):
        i = abs(a)
        xi, xj = images[i - 1], images[i]
        if a > 0:
            images[i - 1] = _reduce_letters(xi + xj + _invert_letters(xi))
            images[i] = xi
        else:
            images[i - 1] = xj
            images[i] = _reduce_letters(_invert_letters(xj) + xi + xj)
    return tuple(images)


def artin_act(b: BraidWord, w: FreeWord) -> FreeWord:
    if w.rank != b.n:
        raise ValueError(f"free word rank {w.rank} does not match strand count {b.n}")
    return FreeWord(w.rank, _substitute(generator_images(b), w.letters), True)


def braid_key(b: BraidWord) -> FreeKey:
    """Complete invariant of ``b`` as a braid (the action is faithful)."""
    return generator_images(b)


def braids_equal(u: BraidWord, v: BraidWord) -> bool:
    if u.n != v.n:
        raise ValueError("strand count mismatch")
    return generator_images(u) == generator_images(v)


def delta_squared(n: int) -> BraidWord:
    if n < 2:
        raise ValueError("full twist needs n >= 2")
    return BraidWord(n, tuple(range(1, n)) * n)


@dataclass(frozen=True)
class HalfTwistWord:
    n: int
    base: int
    conjugator: BraidWord
    declared_geometry: str | None = None
    endpoints: frozenset[int] = field(init=False)

    def __post_init__(self) -> None:
        if self.conjugator.n != self.n:
            raise ValueError("conjugator strand count mismatch")
        if not 1 <= self.base <= self.n - 1:
            raise ValueError(f"base index {self.base} outside 1..{self.n - 1}")
        if self.declared_geometry not in (None, "disjoint", "transversal"):
            raise ValueError(f"unknown geometry tag {self.declared_geometry!r}")
        perm = permutation_of(self.word)
        if not perm.is_transposition():
            raise AssertionError("half-twist permutation image must be a transposition")
        object.__setattr__(self, "endpoints", perm.support())

    @property
    def word(self) -> BraidWord:
        return BraidWord.sigma(self.n, self.base).conjugate(self.conjugator)

    def with_geometry(self, tag: str | None) -> HalfTwistWord:
        return HalfTwistWord(self.n, self.base, self.conjugator, tag)


def half_twist(n: int, base: int, conjugator: BraidWord | None = None,
               declared_geometry: str | None = None) -> HalfTwistWord:
    if conjugator is None:
        conjugator = BraidWord(n)
    return HalfTwistWord(n, base, conjugator, declared_geometry)


def classify_pair(a: HalfTwistWord, b: HalfTwistWord) -> str:
    if a.n != b.n:
        raise ValueError("strand count mismatch")
    shared = a.endpoints & b.endpoints
    if len(shared) == 1:
        return "adjacent"
    if len(shared) == 2:
        # same endpoints; only equal half-twists are classifiable algebraically
        return "needs_geometry"
    tags = {t for t in (a.declared_geometry, b.declared_geometry) if t is not None}
    if len(tags) == 1:
        return tags.pop()
    return "needs_geometry"


def commutator(a: BraidWord, b: BraidWord) -> BraidWord:
    """``[A, B] = A B A^-1 B^-1``."""
    return a * b * a.inverse() * b.inverse()


def triple_relator(a: BraidWord, b: BraidWord) -> BraidWord:
    """``<A, B> = A B A B^-1 A^-1 B^-1``."""
    return a * b * a * b.inverse() * a.inverse() * b.inverse()


def is_trivial(b: BraidWord) -> bool:
    return generator_images(b) == tuple((j,) for j in range(1, b.n + 1))
