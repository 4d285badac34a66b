"""Acceptance suite: one test per criterion, each printing a single verdict line."""
from __future__ import annotations

import itertools
import random
import time
from contextlib import contextmanager

import pytest

from veronese_braid.action import ActionTable, square_commutators, verify_action_well_defined
from veronese_braid.braid_core import BraidWord, braids_equal, delta_squared, triple_relator
from veronese_braid.cext import CExtElement, commutator, power
from veronese_braid.groups import g0_presentation
from veronese_braid.series import (
    Model,
    assemble_delta,
    compute_series,
    derive_lemma_5_6,
    load_json,
    verify_conjugated_generators,
)
from veronese_braid.snf import det, diagonal, matmul, smith_normal_form
from veronese_braid.tsystem import load_tsystem, realize_in_B9, replay_claim_4_4, solve_assignment

XI_ORDER = (1, 2, 3, 5, 6, 7, 8, 9)


@contextmanager
def criterion(capsys, number, title, limit=None):
    """Time the block and print one PASS/FAIL line for the criterion."""
    start = time.perf_counter()
    outcome = {"ok": False, "note": ""}
    try:
        yield outcome
    finally:
        elapsed = time.perf_counter() - start
        in_time = limit is None or elapsed < limit
        ok = outcome["ok"] and in_time
        bound = f" (limit {limit:g} s)" if limit is not None else ""
        note = f" [{outcome['note']}]" if outcome["note"] else ""
        with capsys.disabled():
            print(f"\nACCEPTANCE {number:>2} {'PASS' if ok else 'FAIL'}: {title}; "
                  f"{elapsed:.3f} s{bound}{note}")
    assert in_time, f"criterion {number} took {elapsed:.2f} s, limit {limit} s"


@pytest.fixture(scope="module")
def stack():
    tsys = load_tsystem()
    assignment = solve_assignment(tsys)
    realization = realize_in_B9(tsys, assignment)
    table = ActionTable(tsys)
    model = Model(tsys, table, realization, assignment)
    return tsys, assignment, realization, table, model


def _random_word(rng, n, length):
    return BraidWord(n, tuple(rng.choice((1, -1)) * rng.randint(1, n - 1) for _ in range(length)))


def test_criterion_01_braid_engine(capsys):
    with criterion(capsys, 1, "Artin relations in B9, full twist central n=2..5, 500 relator insertions", 5) as out:
        n = 9
        for i, j in itertools.combinations(range(1, n), 2):
            si, sj = BraidWord.sigma(n, i), BraidWord.sigma(n, j)
            if j == i + 1:
                assert braids_equal(si * sj * si, sj * si * sj)
            else:
                assert braids_equal(si * sj, sj * si)
        for m in range(2, 6):
            d = delta_squared(m)
            for i in range(1, m):
                s = BraidWord.sigma(m, i)
                assert braids_equal(d * s, s * d)
        rng = random.Random(2024)
        for _ in range(500):
            w = _random_word(rng, n, rng.randint(0, 20))
            i = rng.randint(1, n - 1)
            if rng.random() < 0.5 and i < n - 1:
                rel = triple_relator(BraidWord.sigma(n, i), BraidWord.sigma(n, i + 1))
            else:
                j = rng.choice([k for k in range(1, n) if abs(k - i) > 1])
                a, b = BraidWord.sigma(n, i), BraidWord.sigma(n, j)
                rel = a * b * a.inverse() * b.inverse()
            if rng.random() < 0.5:
                rel = rel.inverse()
            pos = rng.randint(0, len(w))
            v = BraidWord(n, w.letters[:pos] + rel.letters + w.letters[pos:])
            assert braids_equal(w, v)
        out["ok"] = True


def test_criterion_02_tsystem_realization(capsys):
    with criterion(capsys, 2, "T-system assignment and B9 realization of every relation", 60) as out:
        tsys = load_tsystem()
        assignment = solve_assignment(tsys)
        realization = realize_in_B9(tsys, assignment)
        rep = replay_claim_4_4(tsys, realization)
        assert rep.status == "PASS", rep.trace
        t = {i: h.word for i, h in realization.items()}
        c = t[3].conjugate(t[2])
        assert braids_equal(t[1] * c, c * t[1])
        c = t[9].conjugate(t[8])
        assert braids_equal(t[5] * c, c * t[5])
        for x, y in ((9, 8), (2, 3)):
            assert braids_equal(t[x] * t[y] * t[x], t[y] * t[x] * t[y])
        out["ok"] = True


def test_criterion_03_action_well_defined(capsys, stack):
    tsys, _, _, table, _ = stack
    with criterion(capsys, 3, "every T-relation fixes all 8 generators of G0(9)") as out:
        rep = verify_action_well_defined(table, tsys, g0_presentation(tsys))
        out["note"] = rep.status
        assert rep.status == "PASS", rep.derived["failures"]
        out["ok"] = True


def test_criterion_04_square_commutators(capsys, stack):
    tsys, _, _, table, _ = stack
    with criterion(capsys, 4, "[T_k^2, g_j] = c for adjacent, 1 for disjoint and j = k (computed)") as out:
        g0 = g0_presentation(tsys)
        comms = square_commutators(table, g0)
        assert len(comms) == 64
        for (k, j), val in comms.items():
            if k != j and tsys.is_adjacent(k, j):
                assert val.is_central_bit(), (k, j)
            else:
                assert val.is_identity(), (k, j)
        out["ok"] = True


def test_criterion_05_square_ratio_items(capsys, stack):
    *_, model = stack
    with criterion(capsys, 5, "square-ratio items (i)-(viii) match the printed values mod c, bit reported") as out:
        lemma = derive_lemma_5_6(model, load_json("axioms.json"), load_json("reference.json"))
        items = [r for r in lemma.reports if r.claim_id.startswith("5.6.")]
        assert len(items) == 8
        for r in items:
            assert r.status in ("PASS", "PASS_MOD_C"), (r.claim_id, r.derived, r.paper)
            assert any(line.startswith("exact bit") for line in r.trace)
        out["note"] = ", ".join(f"{r.claim_id}={r.status}" for r in items)
        out["ok"] = True


def test_criterion_06_conjugated_generators(capsys, stack):
    *_, model = stack
    with criterion(capsys, 6, "xi4, g4 and the printed intermediate reproduced mod c") as out:
        reps = verify_conjugated_generators(model, load_json("reference.json")["claim_5_8"])
        for r in reps:
            assert r.status in ("PASS", "PASS_MOD_C"), (r.claim_id, r.derived)
        intermediate = [line for line in reps[0].trace if line.startswith("printed intermediate")]
        assert len(intermediate) == 1 and intermediate[0].endswith(("PASS", "PASS_MOD_C"))
        out["note"] = ", ".join(f"{r.claim_id}={r.status}" for r in reps)
        out["ok"] = True


def test_criterion_07_delta(capsys, stack):
    *_, model = stack
    with criterion(capsys, 7, "delta: zeta part, xi exponents, t^9, 5.9 <-> 5.10 substitution") as out:
        axioms, reference = load_json("axioms.json"), load_json("reference.json")
        lemma = derive_lemma_5_6(model, axioms, reference)
        res = assemble_delta(model, lemma.rules, axioms, reference)
        d = res.delta
        assert d.get("t") == 9
        assert tuple(d.get(f"xi{i}") for i in XI_ORDER) == (-7, 2, -12, -10, 2, 4, 6, -2)
        zeta = tuple(d.get(f"zeta{i}") for i in XI_ORDER)
        # zeta1 zeta2 zeta5 zeta6 (zeta7 zeta9)^-1, exponents mod 3
        assert zeta == (1, 1, 0, 1, 1, 2, 0, 2)
        statuses = {r.claim_id: r.status for r in res.reports}
        assert statuses["5.10.subst"] in ("PASS", "PASS_MOD_C")
        assert statuses["5.10"] in ("PASS", "PASS_MOD_C")
        out["note"] = f"5.9={statuses['5.9']}, 5.10={statuses['5.10']}, bit={d.bit}"
        out["ok"] = True


def test_criterion_08_series(capsys, stack):
    tsys, assignment, _, _, model = stack
    axioms, reference = load_json("axioms.json"), load_json("reference.json")
    lemma = derive_lemma_5_6(model, axioms, reference)
    res = assemble_delta(model, lemma.rules, axioms, reference)
    with criterion(capsys, 8, "quotients S9, Z/9, (Z + Z/3)^8, Z/2", 1) as out:
        s = compute_series(res.delta, tsys, assignment, res.s9_image)
        assert s.q1 == "S9"
        assert s.q2.invariant_factors == (9,)
        assert s.q3.free_rank == 8 and s.q3.torsion == (3,) * 8
        assert s.q4.invariant_factors == (2,)
        out["ok"] = True


def test_criterion_09_cext_algebra(capsys, stack):
    *_, model = stack
    p = model.pres
    with criterion(capsys, 9, "10^4 random associativity / inverse / centrality cases, [G,G] = {1,c}", 10) as out:
        rng = random.Random(99)

        def rand():
            exps = tuple(rng.randint(-4, 4) for _ in p.names)
            return CExtElement(p, exps, rng.randint(0, 1))

        c = p.central()
        for _ in range(10_000):
            a, b, e = rand(), rand(), rand()
            assert (a * b) * e == a * (b * e)
        for _ in range(10_000):
            a = rand()
            assert a * a.inverse() == p.identity() == a.inverse() * a
        for _ in range(10_000):
            a, b = rand(), rand()
            assert a * c == c * a
            k = commutator(p, a, b)
            assert k.is_identity() or k.is_central_bit()
        gens = [p.gen(g) for g in p.names]
        values = {commutator(p, x, y) for x in gens for y in gens}
        assert values == {p.identity(), c}
        for i in XI_ORDER:
            z = p.gen(f"zeta{i}")
            assert power(p, z, 3).is_identity()
            assert all(commutator(p, z, x).is_identity() for x in gens)
        out["ok"] = True


def test_criterion_10_snf(capsys):
    with criterion(capsys, 10, "1000 random 6x6 SNFs with unimodular U, V; det identity", 5) as out:
        rng = random.Random(7)
        nonsingular = 0
        for _ in range(1000):
            a = [[rng.randint(-20, 20) for _ in range(6)] for _ in range(6)]
            u, d, v = smith_normal_form(a)
            assert matmul(matmul(u, a), v) == d
            assert abs(det(u)) == 1 and abs(det(v)) == 1
            diag = diagonal(d)
            assert all(d[i][j] == 0 for i in range(6) for j in range(6) if i != j)
            for x, y in zip(diag, diag[1:]):
                assert (y == 0) if x == 0 else (y % x == 0)
            da = det(a)
            if da:
                nonsingular += 1
                prod = 1
                for x in diag:
                    prod *= x
                assert prod == abs(da)
        out["note"] = f"{nonsingular} nonsingular"
        out["ok"] = True
