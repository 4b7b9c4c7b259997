import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from emq.abgroup import Homomorphism, Subquotient, identity, induced_map, kernel_lattice
from emq.coefficients import (
    UnsupportedOperationError,
    Window,
    a_action,
    coefficient,
    epsilon,
    omega_action,
    table,
    u_action,
    u_case,
    underlying_coefficient,
)
from emq.corners import epsilon0, f0, homotopy_fixed, homotopy_orbits
from emq.mackey import CATALOG_NAMES, catalog, random_mackey
from emq.zqmodule import fixed_points_sq

from expected import PATTERNS

W6 = Window.square(6)
FIXTURES = [catalog(n) for n in CATALOG_NAMES]
FUNCTORS = st.one_of(st.sampled_from(CATALOG_NAMES).map(catalog), st.integers(0, 10**6).map(random_mackey))


def f(G):
    return G.invariant_factors


@pytest.mark.parametrize("name", sorted(PATTERNS))
def test_fixture_patterns(name):
    M = catalog(name)
    for d in Window.square(10).degrees():
        assert f(coefficient(M, d).group) == PATTERNS[name](*d), d


def test_dispatch_examples():
    assert f(coefficient(catalog("burnside"), (0, 0)).group) == (0, 0)
    assert f(coefficient(catalog("constant-z"), (-3, 5)).group) == (2,)
    assert f(coefficient(catalog("twisted-z"), (1, -1)).group) == (0,)
    for M in FIXTURES:
        assert coefficient(M, (4, -1)).is_zero


def test_case_tags():
    M = catalog("burnside")
    tags = {
        (0, 0): "origin", (0, 2): "ker_res", (0, -2): "coker_tr", (1, -1): "ker_tr",
        (1, -3): "ker_tr_coinv", (1, 2): "zero", (-1, 1): "coker_res", (-1, 3): "fixed_mod_res",
        (-1, -1): "zero", (3, -5): "hfp_cone", (-3, 1): "ho_cone",
    }
    for d, tag in tags.items():
        assert coefficient(M, d).case_tag == tag


def test_burnside_kernel_of_res_is_omega_minus_two():
    piece = coefficient(catalog("burnside"), (0, 3))
    assert piece.witness.lift[:, 0].tolist() == [-2, 1]


def test_cones_match_corners():
    for M in FIXTURES:
        for d in W6.degrees():
            x, _ = d
            if x >= 2:
                assert f(coefficient(M, d).group) == f(homotopy_fixed(M, d).group)
            if x <= -2:
                assert f(coefficient(M, d).group) == f(homotopy_orbits(M, d).group)


def test_underlying_coefficient():
    M = catalog("burnside")
    assert underlying_coefficient(M, (0, 0)).group == M.V
    assert underlying_coefficient(M, (3, -3)).group == M.V
    assert underlying_coefficient(M, (1, 0)).is_zero()
    assert underlying_coefficient(catalog("constant-z"), (1, -1)).gamma.matrix.tolist() == [[-1]]


@given(FUNCTORS, st.integers(-8, 8), st.integers(-8, 8))
@settings(max_examples=300, deadline=None)
def test_vanishing_cones(M, x, y):
    if (x > 0 and y > -x) or (x < 0 and y < -x):
        assert coefficient(M, (x, y)).is_zero


@given(FUNCTORS, st.integers(-8, 8), st.integers(-8, 8))
@settings(max_examples=300, deadline=None)
def test_two_torsion_off_axes(M, x, y):
    if x != 0 and x + y != 0:
        piece = coefficient(M, (x, y))
        for g in piece.group.gens():
            assert piece.group.is_zero(tuple(2 * c for c in g))


# a


def test_a_examples():
    h = a_action(catalog("constant-z"), (0, 1))
    assert h.source.is_zero and h.classification == "mono"
    h = a_action(catalog("burnside"), (0, 0))
    assert h.classification == "epi" and f(h.target.group) == (0,)
    assert a_action(catalog("constant-f2"), (3, -4)).classification == "iso"
    for M in FIXTURES:
        assert a_action(M, (2, -1)).classification in ("mono", "iso")


def test_a_on_y_axis_is_inclusion_then_projection():
    A = catalog("burnside")
    up = a_action(A, (0, 1)).map
    down = a_action(A, (0, 0)).map
    assert up.matrix.tolist() == [[-2], [1]]
    # projection onto A(Q)/(omega); a^2 tau = a(omega - 2) = -2a
    assert down.classify() == "epi"
    assert down((0, 1)) == (0,)
    assert (down @ up).matrix.tolist() == [[-2]]


@pytest.mark.parametrize("M", FIXTURES, ids=CATALOG_NAMES)
def test_a_classification_by_degree(M):
    for x, y in W6.degrees():
        c = a_action(M, (x, y)).classification
        if x + y == 1:
            assert c in ("mono", "iso")
        elif x + y == 0:
            assert c in ("epi", "iso")
        else:
            assert c == "iso", (x, y)


# u


def _sq_V(M, numerator, denominator=None):
    return Subquotient(M.V, numerator, denominator)


def expected_u(M, d):
    """The map of the u table built from scratch, or None for the iso case."""
    x, y = d
    V, g = M.V, M.gamma.matrix
    one = identity(V.ngens)
    N, D = one + g, one - g
    ker_tr = kernel_lattice(M.tr)
    n_tors = kernel_lattice(Homomorphism(V, V, N))
    fixed = fixed_points_sq(M.underlying).numerator
    case = u_case(d)
    if case == 1:
        return f0(M)
    if case == 2:
        return epsilon0(M)
    if case == 3:
        return induced_map(_sq_V(M, one, M.res.matrix), _sq_V(M, ker_tr), Homomorphism(V, V, D))
    if case == 4:
        return induced_map(_sq_V(M, ker_tr), _sq_V(M, n_tors), Homomorphism.identity(V))
    if case == 5:
        return induced_map(_sq_V(M, one, N), _sq_V(M, one, M.res.matrix), Homomorphism.identity(V))
    if case == 6:
        return induced_map(_sq_V(M, ker_tr, D), _sq_V(M, n_tors, D), Homomorphism.identity(V))
    if case == 7:
        return induced_map(_sq_V(M, fixed, N), _sq_V(M, fixed, M.res.matrix), Homomorphism.identity(V))
    return None


def _shape(h):
    return f(h.kernel()[0]), f(h.cokernel()[0]), f(h.domain), f(h.codomain)


@pytest.mark.parametrize("M", FIXTURES, ids=CATALOG_NAMES)
def test_u_table(M):
    for d in W6.degrees():
        got = u_action(M, d)
        case = u_case(d)
        if case is None:
            continue
        want = expected_u(M, d)
        if want is None:
            assert got.classification == "iso", d
        else:
            assert _shape(got.map) == _shape(want), (d, case)
        if case == 4:
            assert got.map.is_injective()
        if case in (5, 7):
            assert got.map.is_surjective()


@given(st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_u_table_random(seed):
    M = random_mackey(seed)
    for d in Window(-5, 3, -3, 6).degrees():
        want = expected_u(M, d)
        got = u_action(M, d).map
        if want is not None:
            assert _shape(got) == _shape(want), d
        elif u_case(d) == 8:
            assert got.classify() == "iso", d


def test_u_examples():
    h = u_action(catalog("constant-z"), (-2, 2))
    assert h.map.matrix.tolist() == [[2]] and h.target.degree == (0, 0)
    h = u_action(catalog("twisted-z"), (-1, 1))
    assert abs(h.map.matrix[0, 0]) == 2
    assert u_action(catalog("constant-f2"), (1, -1)).classification == "iso"


def test_u_cases():
    assert [u_case(d) for d in [(-2, 2), (0, 0), (-1, 1), (1, -1), (-3, 3), (1, -5), (-3, 7), (5, 0), (-4, 1)]] == [
        1, 2, 3, 4, 5, 6, 7, 8, 8,
    ]
    assert u_case((0, 3)) is None and u_case((-1, 4)) is None


@pytest.mark.parametrize("M", FIXTURES, ids=CATALOG_NAMES)
def test_a_and_u_commute(M):
    for x, y in W6.degrees():
        au = a_action(M, (x + 2, y - 2)).map @ u_action(M, (x, y)).map
        ua = u_action(M, (x, y - 1)).map @ a_action(M, (x, y)).map
        assert au == ua, (x, y)


# omega and epsilon


def test_omega():
    A = catalog("burnside")
    assert omega_action(A, (0, 0)).map.matrix.tolist() == [[0, 0], [1, 2]]
    for M in FIXTURES:
        assert omega_action(M, (0, 3)).map.is_zero()
    assert omega_action(catalog("constant-f2"), (2, -3)).map.is_zero()
    assert omega_action(catalog("constant-z"), (2, -2)).map.matrix.tolist() == [[2]]
    with pytest.raises(UnsupportedOperationError):
        omega_action(catalog("twisted-z"), (0, 0))


def test_epsilon():
    A = catalog("burnside")
    assert epsilon(A, (0, 0)).matrix.tolist() == [[1, 2]]
    Z = catalog("constant-z")
    assert epsilon(Z, (-2, 2)).matrix.tolist() == [[2]]
    assert epsilon(Z, (4, -7)).classify() == "iso"


# tables


def test_table_shape_and_order():
    M = catalog("norm-f2")
    w = Window(-2, 1, -1, 2)
    tab = table(M, w, ("a", "u"))
    assert list(tab["pieces"]) == list(w.degrees())
    assert set(tab["actions"]) == {"a", "u"}
    assert len(tab["pieces"]) == len(w) == 16


def test_table_skips_unsupported_omega():
    tab = table(catalog("twisted-z"), Window.square(1), ("omega",))
    assert (0, 0) not in tab["actions"]["omega"]
    assert len(tab["actions"]["omega"]) == 8


def test_table_threads_agree(monkeypatch):
    M = random_mackey(3)
    w = Window.square(5)
    serial = table(M, w)
    monkeypatch.setenv("EMQ_THREADS", "4")
    parallel = table(M, w)
    assert [p.group for p in serial["pieces"].values()] == [p.group for p in parallel["pieces"].values()]
    assert list(serial["pieces"]) == list(parallel["pieces"])


def test_window_validation():
    with pytest.raises(ValueError):
        Window(2, 1, 0, 0)
    assert (3, 3) in Window.square(3) and (4, 0) not in Window.square(3)
