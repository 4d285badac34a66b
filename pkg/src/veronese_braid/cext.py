"""Normal forms in central Z/2 extensions of Z^k + (Z/3)^m.

An element is stored as ``x_1^{e_1} ... x_r^{e_r} c^{bit}`` in presentation
order.  All generator commutators are 1 or the central involution c, recorded
in a symmetric 0/1 pairing.  Moving x_j^b left past x_i^a costs
c^{pairing[i][j] * a * b}, which is all the multiplication needs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

INFINITE = 0


@dataclass(frozen=True)
class CExtPresentation:
    names: tuple[str, ...]
    orders: tuple[int, ...]
    pairing: tuple[tuple[int, ...], ...]
    bit_name: str = "c"
    aliases: Mapping[str, "CExtElement"] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        r = len(self.names)
        if len(set(self.names)) != r or self.bit_name in self.names:
            raise ValueError("generator names must be distinct")
        if len(self.orders) != r or len(self.pairing) != r:
            raise ValueError("orders/pairing size mismatch")
        for i in range(r):
            if self.orders[i] not in (INFINITE, 3):
                raise ValueError(f"unsupported order {self.orders[i]} for {self.names[i]}")
            if len(self.pairing[i]) != r:
                raise ValueError("pairing must be square")
            if self.pairing[i][i] != 0:
                raise ValueError(f"pairing diagonal must be 0 ({self.names[i]})")
            for j in range(r):
                if self.pairing[i][j] not in (0, 1):
                    raise ValueError("pairing entries must be 0 or 1")
                if self.pairing[i][j] != self.pairing[j][i]:
                    raise ValueError("pairing must be symmetric")
            if self.orders[i] == 3 and any(self.pairing[i]):
                # [z^3, y] = c^(3p) = c^p would contradict z^3 = 1
                raise ValueError(
                    f"order-3 generator {self.names[i]} must commute with everything"
                )

    @classmethod
    def build(cls, generators: Sequence[tuple[str, int]],
              pairs: Iterable[tuple[str, str]], bit_name: str = "c") -> CExtPresentation:
        names = tuple(g for g, _ in generators)
        index = {g: k for k, g in enumerate(names)}
        mat = [[0] * len(names) for _ in names]
        for a, b in pairs:
            i, j = index[a], index[b]
            mat[i][j] = mat[j][i] = 1
        return cls(names, tuple(o for _, o in generators),
                   tuple(tuple(row) for row in mat), bit_name)

    @classmethod
    def from_json(cls, text: str | dict) -> CExtPresentation:
        data = json.loads(text) if isinstance(text, str) else text
        gens = [(g["name"], 3 if g.get("order") in (3, "3") else INFINITE)
                for g in data["generators"]]
        names = [g for g, _ in gens]
        pairs = []
        for i, j in data.get("pairing", []):
            if isinstance(i, int):
                i, j = names[i], names[j]
            pairs.append((i, j))
        return cls.build(gens, pairs, data.get("bit", "c"))

    def to_json(self) -> dict:
        return {
            "generators": [
                {"name": g, "order": "infinite" if o == INFINITE else 3}
                for g, o in zip(self.names, self.orders)
            ],
            "pairing": [
                [self.names[i], self.names[j]]
                for i in range(len(self.names)) for j in range(i + 1, len(self.names))
                if self.pairing[i][j]
            ],
            "bit": self.bit_name,
        }

    def with_aliases(self, aliases: Mapping[str, "CExtElement"]) -> CExtPresentation:
        merged = dict(self.aliases)
        merged.update(aliases)
        return CExtPresentation(self.names, self.orders, self.pairing, self.bit_name, merged)

    @property
    def rank(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def identity(self) -> CExtElement:
        return CExtElement(self, (0,) * self.rank, 0)

    def gen(self, name: str, power: int = 1) -> CExtElement:
        if name == self.bit_name:
            return CExtElement(self, (0,) * self.rank, power % 2)
        if name in self.aliases:
            return power_of(self.aliases[name], power)
        if name not in self.names:
            raise KeyError(f"unknown generator {name!r}")
        exps = [0] * self.rank
        exps[self.index(name)] = power
        return CExtElement(self, tuple(exps), 0)

    def central(self) -> CExtElement:
        return self.gen(self.bit_name)

    def form(self, u: Sequence[int], v: Sequence[int]) -> int:
        """Symmetric bilinear pairing of two exponent vectors, mod 2."""
        total = 0
        for i, a in enumerate(u):
            if a % 2 == 0:
                continue
            row = self.pairing[i]
            total += sum(row[j] for j, b in enumerate(v) if b % 2)
        return total % 2


@dataclass(frozen=True)
class CExtElement:
    presentation: CExtPresentation = field(repr=False)
    exps: tuple[int, ...]
    bit: int

    def __post_init__(self) -> None:
        p = self.presentation
        if len(self.exps) != p.rank:
            raise ValueError("exponent vector size mismatch")
        object.__setattr__(self, "exps", tuple(
            e % 3 if o == 3 else e for e, o in zip(self.exps, p.orders)))
        object.__setattr__(self, "bit", self.bit % 2)

    @property
    def free_exps(self) -> tuple[int, ...]:
        """Exponents of the infinite-order generators."""
        return tuple(e for e, o in zip(self.exps, self.presentation.orders) if o == INFINITE)

    @property
    def texps(self) -> tuple[int, ...]:
        """Exponents (mod 3) of the order-3 generators."""
        return tuple(e for e, o in zip(self.exps, self.presentation.orders) if o == 3)

    def __mul__(self, other: CExtElement) -> CExtElement:
        return multiply(self.presentation, self, other)

    def inverse(self) -> CExtElement:
        return power(self.presentation, self, -1)

    def __pow__(self, k: int) -> CExtElement:
        return power(self.presentation, self, k)

    def is_identity(self) -> bool:
        return self.bit == 0 and not any(self.exps)

    def is_central_bit(self) -> bool:
        return self.bit == 1 and not any(self.exps)

    def get(self, name: str) -> int:
        return self.exps[self.presentation.index(name)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CExtElement):
            return NotImplemented
        return (self.presentation.names == other.presentation.names
                and self.exps == other.exps and self.bit == other.bit)

    def __hash__(self) -> int:
        return hash((self.presentation.names, self.exps, self.bit))

    def __str__(self) -> str:
        return format_element(self)


def _same(p: CExtPresentation, *xs: CExtElement) -> None:
    for x in xs:
        if x.presentation is not p and (
            x.presentation.names != p.names or x.presentation.pairing != p.pairing
        ):
            raise ValueError("element belongs to a different presentation")


def multiply(p: CExtPresentation, a: CExtElement, b: CExtElement) -> CExtElement:
    _same(p, a, b)
    cross = 0
    # b's x_j must move left past every x_i (i > j) still standing in a
    for j, bj in enumerate(b.exps):
        if bj % 2 == 0:
            continue
        row = p.pairing[j]
        for i in range(j + 1, p.rank):
            if row[i] and a.exps[i] % 2:
                cross += 1
    exps = tuple(x + y for x, y in zip(a.exps, b.exps))
    return CExtElement(p, exps, a.bit + b.bit + cross)


def power(p: CExtPresentation, a: CExtElement, k: int) -> CExtElement:
    _same(p, a)
    if k < 0:
        # a . a^-1 = 1 forces the inverse bit to be bit(a) + q(a)
        q = 0
        for j in range(p.rank):
            if a.exps[j] % 2:
                q += sum(p.pairing[j][i] for i in range(j + 1, p.rank) if a.exps[i] % 2)
        inv = CExtElement(p, tuple(-e for e in a.exps), a.bit + q)
        return power(p, inv, -k)
    result = p.identity()
    base = a
    while k:
        if k & 1:
            result = multiply(p, result, base)
        base = multiply(p, base, base)
        k >>= 1
    return result


def power_of(a: CExtElement, k: int) -> CExtElement:
    return power(a.presentation, a, k)


def commutator(p: CExtPresentation, a: CExtElement, b: CExtElement) -> CExtElement:
    """``[a, b] = a b a^-1 b^-1``."""
    return multiply(p, multiply(p, multiply(p, a, b), power(p, a, -1)), power(p, b, -1))


def eval_word(p: CExtPresentation, word: Iterable[tuple[str, int]]) -> CExtElement:
    result = p.identity()
    for name, e in word:
        if name != p.bit_name and name not in p.names and name not in p.aliases:
            raise KeyError(f"unknown generator {name!r}")
        result = multiply(p, result, p.gen(name, e))
    return result


def ab_image(p: CExtPresentation, a: CExtElement) -> tuple[int, ...]:
    """Image in Z^k + (Z/3)^m: the exponent vector with the bit dropped."""
    _same(p, a)
    return a.exps


def equal_mod_bit(a: CExtElement, b: CExtElement) -> bool:
    return a.exps == b.exps


def element_word(a: CExtElement) -> list[tuple[str, int]]:
    p = a.presentation
    word = [(g, e) for g, e in zip(p.names, a.exps) if e]
    if a.bit:
        word.append((p.bit_name, 1))
    return word


def format_element(a: CExtElement) -> str:
    word = element_word(a)
    if not word:
        return "1"
    parts = []
    # bit written first, the way the identities are usually displayed
    for name, e in sorted(word, key=lambda t: t[0] != a.presentation.bit_name):
        parts.append(name if e == 1 else f"{name}^{e}")
    return " ".join(parts)


def parse_word(text: str) -> list[tuple[str, int]]:
    """Parse ``"c xi1^-1 xi2"`` style words."""
    word = []
    for tok in text.split():
        if tok == "1":
            continue
        name, _, exp = tok.partition("^")
        word.append((name, int(exp) if exp else 1))
    return word
