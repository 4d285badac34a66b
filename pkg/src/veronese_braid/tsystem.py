"""The eight half-twists T_i (i != 4) of the degree-9 configuration.

The adjacency/disjointness table and the polarization ship as JSON.  From the
table alone we recover a transposition for each T_i (a spanning tree on nine
punctures), then a concrete half-twist word in B_9 satisfying every relation
the T_i must satisfy.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterator, Mapping

from .braid_core import (
    BraidWord,
    HalfTwistWord,
    Permutation,
    braid_key,
    braids_equal,
    commutator,
    is_trivial,
    permutation_of,
    triple_relator,
)
from .report import ClaimReport

SCHEMA_VERSION = 1


class UnsatisfiableTable(ValueError):
    def __init__(self, message: str, violated: list[tuple[int, int]]):
        super().__init__(message)
        self.violated = violated


class RealizationNotFound(RuntimeError):
    pass


def _pair(i: int, j: int) -> frozenset[int]:
    return frozenset((i, j))


@dataclass(frozen=True)
class TSystem:
    indices: tuple[int, ...]
    adjacent: frozenset[frozenset[int]]
    disjoint: frozenset[frozenset[int]]
    non_orderly: frozenset[frozenset[int]]
    extra_commutators: tuple[tuple[int, int, int], ...] = ()
    frame: tuple[tuple[int, ...], ...] = ()
    derived: Mapping[int, tuple[int, tuple[int, ...]]] | None = None

    @classmethod
    def from_dict(cls, data: dict) -> TSystem:
        derived = {
            int(k): (v["base"], tuple(v["conjugator"]))
            for k, v in data.get("derived", {}).items()
        }
        return cls(
            indices=tuple(data["indices"]),
            adjacent=frozenset(_pair(*p) for p in data["adjacent"]),
            disjoint=frozenset(_pair(*p) for p in data["disjoint"]),
            non_orderly=frozenset(_pair(*p) for p in data.get("non_orderly", [])),
            extra_commutators=tuple(
                (e["fixed"], e["conjugated"], e["by"])
                for e in data.get("extra_commutators", [])
            ),
            frame=tuple(tuple(f) for f in data.get("frame", [])),
            derived=derived,
        )

    def relation(self, i: int, j: int) -> str:
        """One of 'same', 'disjoint', 'orderly', 'non_orderly'."""
        if i == j:
            return "same"
        p = _pair(i, j)
        if p in self.disjoint:
            return "disjoint"
        if p in self.non_orderly:
            return "non_orderly"
        if p in self.adjacent:
            return "orderly"
        raise KeyError(f"pair {i},{j} is not in the table")

    def is_adjacent(self, i: int, j: int) -> bool:
        return _pair(i, j) in self.adjacent

    def validate(self) -> list[str]:
        problems = []
        all_pairs = {_pair(i, j) for i, j in itertools.combinations(self.indices, 2)}
        if self.adjacent & self.disjoint:
            problems.append(f"pairs both adjacent and disjoint: {sorted(map(sorted, self.adjacent & self.disjoint))}")
        missing = all_pairs - self.adjacent - self.disjoint
        if missing:
            problems.append(f"unclassified pairs: {sorted(map(sorted, missing))}")
        extra = (self.adjacent | self.disjoint) - all_pairs
        if extra:
            problems.append(f"pairs outside the index set: {sorted(map(sorted, extra))}")
        if not self.non_orderly <= self.adjacent:
            problems.append("non-orderly pairs must be adjacent")
        return problems


def load_tsystem(path: str | Path | None = None) -> TSystem:
    if path is None:
        text = resources.files("veronese_braid.data").joinpath("tsystem.json").read_text()
    else:
        text = Path(path).read_text()
    data = json.loads(text)
    if data.get("schema_version", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise ValueError(f"unsupported tsystem schema version {data.get('schema_version')}")
    tsys = TSystem.from_dict(data)
    problems = tsys.validate()
    if problems:
        raise ValueError("; ".join(problems))
    return tsys


# ---------------------------------------------------------------- assignments

Assignment = dict[int, tuple[int, int]]


def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def is_valid_assignment(tsys: TSystem, endpoints: Mapping[int, tuple[int, int]]) -> bool:
    n = len(tsys.indices) + 1
    for i, j in itertools.combinations(tsys.indices, 2):
        shared = len(set(endpoints[i]) & set(endpoints[j]))
        want = 1 if tsys.is_adjacent(i, j) else 0
        if shared != want:
            return False
    parent = list(range(n + 1))
    for i in tsys.indices:
        a, b = endpoints[i]
        if not (1 <= a <= n and 1 <= b <= n) or a == b:
            return False
        ra, rb = _find(parent, a), _find(parent, b)
        if ra == rb:
            return False
        parent[ra] = rb
    return True


def solve_assignment(tsys: TSystem) -> Assignment:
    """Lexicographically least transposition assignment forming a spanning tree.

    Pairs are tried in lex order at every index, so the first complete
    solution is the minimum over all puncture relabelings.
    """
    order = list(tsys.indices)
    n = len(order) + 1
    candidates = list(itertools.combinations(range(1, n + 1), 2))
    chosen: dict[int, tuple[int, int]] = {}
    deepest: list[int] = [0]
    blocked: dict[int, set[int]] = {}

    def consistent(idx: int, pair: tuple[int, int]) -> bool:
        for other, opair in chosen.items():
            shared = len(set(pair) & set(opair))
            want = 1 if tsys.is_adjacent(idx, other) else 0
            if shared != want:
                blocked.setdefault(idx, set()).add(other)
                return False
        return True

    def acyclic(pair: tuple[int, int]) -> bool:
        parent = list(range(n + 1))
        for a, b in list(chosen.values()) + [pair]:
            ra, rb = _find(parent, a), _find(parent, b)
            if ra == rb:
                return False
            parent[ra] = rb
        return True

    def search(k: int) -> bool:
        deepest[0] = max(deepest[0], k)
        if k == len(order):
            return True
        idx = order[k]
        for pair in candidates:
            if consistent(idx, pair) and acyclic(pair):
                chosen[idx] = pair
                if search(k + 1):
                    return True
                del chosen[idx]
        return False

    if not search(0):
        stuck = order[min(deepest[0], len(order) - 1)]
        violated = sorted((stuck, o) for o in blocked.get(stuck, set()))
        raise UnsatisfiableTable(
            f"no spanning-tree assignment: T{stuck} cannot be placed against "
            f"{[f'T{o}' for _, o in violated]}",
            violated,
        )
    return {i: chosen[i] for i in order}


def generated_group_is_symmetric(perms: list[Permutation]) -> bool:
    """Transposition generators of a transitive group generate all of S_n."""
    if not perms:
        return False
    n = perms[0].n
    if not all(p.is_transposition() for p in perms):
        return False
    orbit = {1}
    frontier = [1]
    while frontier:
        k = frontier.pop()
        for p in perms:
            m = p(k)
            if m not in orbit:
                orbit.add(m)
                frontier.append(m)
    return len(orbit) == n and any(p.is_odd() for p in perms)


def assignment_permutations(a: Mapping[int, tuple[int, int]], n: int = 9) -> list[Permutation]:
    return [Permutation.transposition(n, *pair) for pair in a.values()]


def assignment_to_json(a: Mapping[int, tuple[int, int]]) -> str:
    return json.dumps(
        {"schema_version": SCHEMA_VERSION,
         "endpoints": {str(k): list(v) for k, v in sorted(a.items())}},
        sort_keys=True,
    )


def assignment_from_json(text: str) -> Assignment:
    data = json.loads(text)
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError("assignment cache has a different schema version")
    return {int(k): (v[0], v[1]) for k, v in data["endpoints"].items()}


# ---------------------------------------------------------------- realization

def _half_twist_candidates(n: int, pair: tuple[int, int], bound: int) -> Iterator[HalfTwistWord]:
    """Half-twists with the given endpoints, by increasing conjugator length.

    Conjugating letters are restricted to the strands between the endpoints;
    states are deduplicated by braid equality.
    """
    lo, hi = min(pair), max(pair)
    window = range(lo, hi)
    letters = [s * i for i in window for s in (1, -1)]
    seen = set()
    layer = []
    for b in window:
        h = HalfTwistWord(n, b, BraidWord(n))
        key = braid_key(h.word)
        if key not in seen:
            seen.add(key)
            layer.append(h)
    for _depth in range(bound + 1):
        for h in layer:
            if h.endpoints == frozenset(pair):
                yield h
        nxt = []
        for h in layer:
            for a in letters:
                if h.conjugator.letters and h.conjugator.letters[-1] == -a:
                    continue
                g = HalfTwistWord(n, h.base, h.conjugator * BraidWord(n, (a,)))
                key = braid_key(g.word)
                if key not in seen:
                    seen.add(key)
                    nxt.append(g)
        layer = nxt


class _LazyList:
    def __init__(self, it: Iterator[HalfTwistWord]):
        self._it = it
        self._items: list[HalfTwistWord] = []

    def __iter__(self) -> Iterator[HalfTwistWord]:
        k = 0
        while True:
            if k < len(self._items):
                yield self._items[k]
                k += 1
                continue
            try:
                item = next(self._it)
            except StopIteration:
                return
            self._items.append(item)


def _search_order(tsys: TSystem) -> list[int]:
    # follow the frame so neighbouring relations prune early
    order: list[int] = []
    for entry in tsys.frame:
        for k in entry:
            if abs(k) not in order:
                order.append(abs(k))
    order += [i for i in tsys.indices if i not in order]
    return order


def t_relations(tsys: TSystem) -> list[tuple[str, tuple[int, ...]]]:
    """Every relation the T_i satisfy, as words in signed T-indices."""
    rels: list[tuple[str, tuple[int, ...]]] = []
    for i, j in itertools.combinations(tsys.indices, 2):
        if tsys.is_adjacent(i, j):
            rels.append((f"<T{i},T{j}>", (i, j, i, -j, -i, -j)))
        else:
            rels.append((f"[T{i},T{j}]", (i, j, -i, -j)))
    for f, c, b in tsys.extra_commutators:
        conj = (-b, c, b)
        inv = (-b, -c, b)
        rels.append((f"[T{f},T{b}^-1 T{c} T{b}]", (f,) + conj + (-f,) + inv))
    return rels


def _relations_involving(tsys: TSystem, new: int, placed: set[int]):
    for name, word in t_relations(tsys):
        involved = {abs(k) for k in word}
        if new in involved and involved <= placed | {new}:
            yield name, word


def word_in_t(realization: Mapping[int, HalfTwistWord], word: tuple[int, ...], n: int = 9) -> BraidWord:
    out = BraidWord(n)
    for k in word:
        w = realization[abs(k)].word
        out = out * (w if k > 0 else w.inverse())
    return out


def realize_in_B9(tsys: TSystem, assignment: Mapping[int, tuple[int, int]],
                  start_bound: int = 6, max_bound: int = 48) -> dict[int, HalfTwistWord]:
    n = len(tsys.indices) + 1
    order = _search_order(tsys)
    bound = start_bound
    while bound <= max_bound:
        pools = {i: _LazyList(_half_twist_candidates(n, assignment[i], bound)) for i in order}
        chosen: dict[int, HalfTwistWord] = {}

        def search(k: int) -> bool:
            if k == len(order):
                return True
            idx = order[k]
            placed = set(chosen)
            for cand in pools[idx]:
                chosen[idx] = cand
                if all(is_trivial(word_in_t(chosen, w, n))
                       for _, w in _relations_involving(tsys, idx, placed)):
                    if search(k + 1):
                        return True
                del chosen[idx]
            return False

        if search(0):
            return {i: chosen[i].with_geometry("disjoint") for i in tsys.indices}
        bound *= 2
    raise RealizationNotFound(f"no realization with conjugators up to length {max_bound}")


def derived_half_twist(tsys: TSystem, realization: Mapping[int, HalfTwistWord],
                       index: int) -> HalfTwistWord:
    """E.g. T_4 = (T_5)_{T_8^-1 T_7 T_3^-1 T_2}, as a half-twist word."""
    base, conj = tsys.derived[index]
    h = realization[base]
    n = h.n
    return HalfTwistWord(n, h.base, h.conjugator * word_in_t(realization, conj, n),
                         h.declared_geometry)


def replay_claim_4_4(tsys: TSystem, realization: Mapping[int, HalfTwistWord]) -> ClaimReport:
    n = next(iter(realization.values())).n
    trace: list[str] = []
    failures: list[str] = []
    frame = [word_in_t(realization, f, n) for f in tsys.frame]
    labels = [" ".join(f"T{k}" if k > 0 else f"T{-k}^-1" for k in f) for f in tsys.frame]

    for a, b in itertools.combinations(range(len(frame)), 2):
        if b == a + 1:
            ok = braids_equal(frame[a] * frame[b] * frame[a], frame[b] * frame[a] * frame[b])
            kind = "triple"
        else:
            ok = braids_equal(frame[a] * frame[b], frame[b] * frame[a])
            kind = "commute"
        trace.append(f"frame {kind}: ({labels[a]}) ({labels[b]}) -> {'ok' if ok else 'FAIL'}")
        if not ok:
            failures.append(f"{kind}({labels[a]}, {labels[b]})")

    perms = [permutation_of(f) for f in frame]
    chain_ok = all(len(perms[k].support() & perms[k + 1].support()) == 1 for k in range(len(perms) - 1))
    trace.append(f"frame endpoints form a chain: {chain_ok}")
    if not chain_ok:
        failures.append("frame endpoints")

    for name, word in t_relations(tsys):
        ok = is_trivial(word_in_t(realization, word, n))
        trace.append(f"{name} = 1 -> {'ok' if ok else 'FAIL'}")
        if not ok:
            failures.append(name)

    for x, y in ((9, 8), (2, 3)):
        tx, ty = realization[x].word, realization[y].word
        # adjacent half-twists: Y^-1 X Y = X Y X^-1
        swap = braids_equal(tx.conjugate(ty), tx * ty * tx.inverse())
        trace.append(f"T{y}^-1 T{x} T{y} = T{x} T{y} T{x}^-1 -> {'ok' if swap else 'FAIL'}")
        ok = is_trivial(triple_relator(tx, ty))
        trace.append(f"<T{x},T{y}> = 1 -> {'ok' if ok else 'FAIL'}")
        if not (ok and swap):
            failures.append(f"<T{x},T{y}>")

    derived = {
        "endpoints": {f"T{i}": sorted(h.endpoints) for i, h in sorted(realization.items())},
        "words": {f"T{i}": list(h.word.letters) for i, h in sorted(realization.items())},
    }
    if failures:
        trace.append("failed: " + ", ".join(failures))
    return ClaimReport(
        "4.4",
        "FAIL" if failures else "PASS",
        derived,
        "frame relations, <T9,T8> = 1, <T2,T3> = 1, [T1,T2^-1T3T2] = 1, [T5,T8^-1T9T8] = 1",
        trace,
    )


__all__ = [
    "TSystem", "load_tsystem", "solve_assignment", "realize_in_B9", "replay_claim_4_4",
    "generated_group_is_symmetric", "assignment_permutations", "t_relations",
    "word_in_t", "derived_half_twist", "is_valid_assignment", "UnsatisfiableTable",
    "RealizationNotFound", "assignment_to_json", "assignment_from_json", "commutator",
]
