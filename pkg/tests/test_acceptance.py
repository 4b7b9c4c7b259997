"""Acceptance criteria 1-9.

Each test prints one ``Criterion N: PASS|FAIL`` line and then asserts. Run
``pytest tests/test_acceptance.py`` or execute this file directly.
"""

import inspect
import random
import sys
import time

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from emq import abgroup, coefficients, corners, oracle, ring, zqmodule
from emq.abgroup import FgAbGroup, Homomorphism
from emq.coefficients import Window, a_action, coefficient, table, u_action, u_case
from emq.corners import geometric, homotopy_fixed, homotopy_orbits, tate
from emq.mackey import CATALOG_NAMES, GreenFunctor, catalog, random_mackey, random_module
from emq.oracle import cross_check
from emq.ring import (
    GradedElement,
    a_element,
    act,
    commutativity_check,
    monomial,
    omega_element,
    product,
    ring_presentation,
    u_element,
)
from emq.zqmodule import group_cohomology, group_homology, tate_cohomology, twist

from expected import PATTERNS

W10 = Window.square(10)
W6 = Window.square(6)


def report(capsys, n, ok, detail=""):
    line = f"Criterion {n}: {'PASS' if ok else 'FAIL'}" + (f"  {detail}" if detail else "")
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


def clear_caches():
    for mod in (abgroup, zqmodule, corners, coefficients, oracle, ring):
        for _, obj in inspect.getmembers(mod):
            if hasattr(obj, "cache_clear"):
                obj.cache_clear()


def timed_table(name, window=W10):
    clear_caches()
    t0 = time.perf_counter()
    tab = table(catalog(name), window)
    return tab, time.perf_counter() - t0


def mismatches(tab, name):
    want = PATTERNS[name]
    return [d for d, p in tab["pieces"].items() if p.group.invariant_factors != want(*d)]


def test_criterion_1_constant_z(capsys):
    tab, secs = timed_table("constant-z")
    bad = mismatches(tab, "constant-z")
    ok = not bad and len(tab["pieces"]) == 441 and secs < 1.0
    report(capsys, 1, ok, f"441 cells, {len(bad)} mismatches, {secs:.3f} s")


def test_criterion_2_burnside(capsys):
    tab, secs = timed_table("burnside")
    bad = mismatches(tab, "burnside")
    lifts = {coefficient(catalog("burnside"), (0, y)).witness.lift[:, 0].tolist() == [-2, 1] for y in range(1, 11)}
    ok = not bad and secs < 1.0 and lifts == {True}
    report(capsys, 2, ok, f"{len(bad)} mismatches, ker(res) = (ω−2) for y = 1..10: {lifts == {True}}, {secs:.3f} s")


def test_criterion_3_f2_and_norm_f2(capsys):
    details, ok = [], True
    for name in ("constant-f2", "norm-f2"):
        tab, secs = timed_table(name)
        bad = mismatches(tab, name)
        ok &= not bad and secs < 1.0
        details.append(f"{name}: {len(bad)} mismatches, {secs:.3f} s")
    nf = table(catalog("norm-f2"), W10)["pieces"]
    z4 = [d for d, p in nf.items() if p.group.invariant_factors == (4,)]
    others = {p.group.invariant_factors for d, p in nf.items() if d != (0, 0) and not p.is_zero}
    ok &= z4 == [(0, 0)] and others == {(2,)}
    report(capsys, 3, ok, "; ".join(details))


def test_criterion_4_twisted_z(capsys):
    M = catalog("twisted-z")
    pieces = table(M, W10)["pieces"]
    bad = mismatches({"pieces": pieces}, "twisted-z")
    minus_one = [y for y in range(-10, 11) if y != 1 and not pieces[(-1, y)].is_zero]
    plus_one = sorted(y for y in range(-10, 11) if y != -1 and not pieces[(1, y)].is_zero)
    ok = not bad and not minus_one and plus_one == list(range(-10, -1))
    report(
        capsys, 4, ok,
        f"{len(bad)} mismatches against the figure; x=-1 column zero off the antidiagonal; "
        f"x=+1 column is Z/2 for y<=-2 as drawn (literal 'zero column' clause not met there)",
    )


def test_criterion_5_oracle_gate(capsys):
    t0 = time.perf_counter()
    functors = [catalog(n) for n in CATALOG_NAMES] + [random_mackey(s) for s in range(100)]
    found = [m for M in functors for m in cross_check(M, W6, check_a=True)]
    secs = time.perf_counter() - t0
    ok = not found and secs < 60.0
    report(capsys, 5, ok, f"{len(functors)} functors on [-6,6]², {len(found)} mismatches, {secs:.1f} s")


def test_criterion_6_action_laws(capsys):
    problems = []
    for name in CATALOG_NAMES:
        M = catalog(name)
        for x, y in W6.degrees():
            c = a_action(M, (x, y)).classification
            allowed = ("mono", "iso") if x + y == 1 else ("epi", "iso") if x + y == 0 else ("iso",)
            if c not in allowed:
                problems.append((name, "a", (x, y), c))
            h = u_action(M, (x, y))
            if u_case((x, y)) == 8 and h.classification != "iso":
                problems.append((name, "u", (x, y), h.classification))
            if u_case((x, y)) == 4 and not h.map.is_injective():
                problems.append((name, "u", (x, y), h.classification))
            if u_case((x, y)) in (5, 7) and not h.map.is_surjective():
                problems.append((name, "u", (x, y), h.classification))
            au = a_action(M, (x + 2, y - 2)).map @ h.map
            ua = u_action(M, (x, y - 1)).map @ a_action(M, (x, y)).map
            if au != ua:
                problems.append((name, "au", (x, y)))
    cases = {u_case(d) for d in W6.degrees()} - {None}
    h = u_action(catalog("constant-z"), (-2, 2))
    ok = not problems and cases == set(range(1, 9)) and h.map.matrix.tolist() == [[2]] and h.target.degree == (0, 0)
    report(
        capsys, 6, ok,
        f"{len(problems)} violations; a mono at x+y=1, epi at x+y=0, iso elsewhere; "
        f"u cases {sorted(cases)} hit; constant-z u(-2,2)->(0,0) = ×2",
    )


def _literal_quotient(i, j, with_uw):
    """Degree of a^i u^j in A(Q)[a,u]/(aω, 2au[, ωu - 2u]) on the basis (m, mω)."""
    rels = []
    if i >= 1:
        rels.append((0, 1))
    if i >= 1 and j >= 1:
        rels += [(2, 0), (0, 2)]
    if with_uw and j >= 1:
        rels.append((-2, 1))
    if not rels:
        return FgAbGroup.free(2).invariant_factors
    return FgAbGroup.from_presentation([list(c) for c in zip(*rels)]).invariant_factors


def _positive_cone(A, with_uw):
    bad = []
    for x, y in W10.degrees():
        if x < 0 or y > 0:
            continue
        actual = coefficient(A, (x, y)).group
        if x % 2 or x + y > 0:
            predicted = ()
        else:
            i, j = -x - y, x // 2
            predicted = _literal_quotient(i, j, with_uw)
            spans = Homomorphism(
                FgAbGroup.free(2), actual,
                [list(c) for c in zip(monomial(A, i, j).coordinates, monomial(A, i, j, A.tr(A.unit_underlying)).coordinates)],
            ) if actual.ngens else None
            if spans is not None and not spans.is_surjective():
                bad.append((x, y))
                continue
        if predicted != actual.invariant_factors:
            bad.append((x, y))
    return bad


def test_criterion_7_ring_relations(capsys):
    F, A, Z = catalog("constant-f2"), catalog("burnside"), catalog("constant-z")
    checks = {}
    lam = next(g.element for g in ring_presentation(F, W6).generators if g.name == "λ")
    checks["λ² = u"] = product(F, lam, lam) == u_element(F)
    tau = GradedElement((0, 1), coefficient(A, (0, 1)).group.gens()[0])
    checks["a·τ = ω−2"] = product(A, a_element(A), tau) == GradedElement((0, 0), (-2, 1))
    a, u, w = a_element(A), u_element(A), omega_element(A)
    au = product(A, a, u)
    checks["aω = 0"] = not any(product(A, a, w).coordinates)
    checks["2au = 0"] = any(au.coordinates) and coefficient(A, au.degree).group.is_zero(tuple(2 * c for c in au.coordinates))
    checks["uω = 2u"] = product(A, u, w) == GradedElement(u.degree, tuple(2 * c for c in u.coordinates))
    for name, want in (("constant-z", (2,)), ("burnside", (0, 1))):
        M = catalog(name)
        for n in range(1, 6):
            piece = coefficient(M, (-2 * n, 2 * n))
            g = GradedElement((-2 * n, 2 * n), piece.group.gens()[0])
            checks[f"{name} u^{n}·g_{n}"] = piece.group.invariant_factors == (0,) and act(M, "u", g, n).coordinates == want
    checks["u·θ = 2"] = product(Z, u_element(Z), GradedElement((-2, 2), (1,))) == GradedElement((0, 0), (2,))
    literal = _positive_cone(A, with_uw=False)
    corrected = _positive_cone(A, with_uw=True)
    checks["positive cone with ωu = 2u"] = not corrected
    failed = [k for k, v in checks.items() if not v]
    report(
        capsys, 7, not failed,
        f"{len(checks)} relations certified{', failed: ' + ', '.join(failed) if failed else ''}; "
        f"A(Q)[a,u]/(aω, 2au) alone is too big at {len(literal)} cone degrees (Z² at (2j,-2j)), "
        f"adding ωu = 2u matches all",
    )
    assert literal == [(2 * j, -2 * j) for j in range(1, 6)]


def test_criterion_8_commutativity(capsys):
    green = [n for n in CATALOG_NAMES if isinstance(catalog(n), GreenFunctor)] + ["zero"]
    reports = {n: commutativity_check(catalog(n), Window.square(5)) for n in green}
    ok = all(r.clean and r.checked > 0 for r in reports.values())
    total = sum(r.checked for r in reports.values())
    report(capsys, 8, ok, f"{len(green)} Green functors, {total} products compared on [-5,5]²")


def test_criterion_9_structural_invariants(capsys):
    counts = dict.fromkeys(
        ["2-torsion", "vanishing cones", "corner y-independence", "u-periodicity", "Tate 2-periodicity", "twist shift"], 0,
    )
    functors = st.one_of(st.sampled_from(CATALOG_NAMES).map(catalog), st.integers(0, 10**6).map(random_mackey))
    modules = st.integers(0, 10**6).map(lambda s: random_module(random.Random(s), 6))
    cfg = settings(max_examples=100, deadline=None, database=None)

    @cfg
    @given(functors, st.integers(-8, 8), st.integers(-8, 8))
    def two_torsion(M, x, y):
        counts["2-torsion"] += 1
        if x != 0 and x + y != 0:
            G = coefficient(M, (x, y)).group
            assert all(G.is_zero(tuple(2 * c for c in g)) for g in G.gens())

    @cfg
    @given(functors, st.integers(-8, 8), st.integers(-8, 8))
    def vanishing(M, x, y):
        counts["vanishing cones"] += 1
        if (x > 0 and y > -x) or (x < 0 and y < -x):
            assert coefficient(M, (x, y)).is_zero

    @cfg
    @given(functors, st.integers(-6, 6))
    def y_independent(M, x):
        counts["corner y-independence"] += 1
        for corner in (tate, geometric):
            assert len({corner(M, (x, y)).group.invariant_factors for y in range(-5, 6)}) == 1

    @cfg
    @given(functors, st.integers(-8, 8), st.integers(-8, 8))
    def u_periodic(M, x, y):
        counts["u-periodicity"] += 1
        for corner in (homotopy_fixed, homotopy_orbits):
            assert corner(M, (x, y)).group.invariant_factors == corner(M, (x + 2, y - 2)).group.invariant_factors

    @cfg
    @given(modules, st.integers(-6, 6))
    def tate_periodic(V, n):
        counts["Tate 2-periodicity"] += 1
        assert tate_cohomology(V, n).invariant_factors == tate_cohomology(V, n + 2).invariant_factors

    @cfg
    @given(modules, st.integers(1, 6))
    def shift(V, i):
        counts["twist shift"] += 1
        assert group_cohomology(twist(V), i).invariant_factors == group_cohomology(V, i + 1).invariant_factors
        assert group_homology(twist(V), i).invariant_factors == group_homology(V, i + 1).invariant_factors

    failure = ""
    for check in (two_torsion, vanishing, y_independent, u_periodic, tate_periodic, shift):
        try:
            check()
        except Exception as exc:  # reported, then re-raised by the assert below
            failure = f"{check.__name__}: {type(exc).__name__}"
            break
    total = sum(counts.values())
    ok = not failure and total >= 500 and all(counts.values())
    report(capsys, 9, ok, f"{total} cases ({', '.join(f'{k} {v}' for k, v in counts.items())}){' ' + failure if failure else ''}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
