"""Independent recomputation of the coefficients from cellular complexes.

The sphere ``S^{k sigma}`` has one fixed 0-cell and one free cell in each
dimension ``1..k``.  Its cellular Bredon complexes with coefficients in a
Mackey functor are

    y = k > 0 :  M --res--> V --(1-g)--> V --(1+g)--> V ...     (cochains)
    y = -k < 0:  M <--tr-- V <--(1-g)-- V <--(1+g)-- V ...      (chains)

and the coefficient at ``x + y*sigma`` is ``H^{-x}`` of the first or ``H_x``
of the second.  Only :mod:`emq.abgroup` is used here, on purpose: this module
is a check on the closed forms and must not share their code.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .abgroup import (
    FgAbGroup,
    Homomorphism,
    Subquotient,
    homology_subquotient,
    identity,
    induced_map,
)
from .mackey import MackeyFunctor

__all__ = [
    "SphereComplex",
    "Mismatch",
    "sphere_complex",
    "oracle_coefficient",
    "oracle_subquotient",
    "a_action_oracle",
    "cross_check",
]


@dataclass(frozen=True, eq=False)
class SphereComplex:
    """``terms[0] = M(Q/Q)``, ``terms[1..k] = V``.

    For cochains ``differentials[i]`` is ``d^i: C^i -> C^{i+1}``; for chains
    it is ``d_{i+1}: C_{i+1} -> C_i``.
    """

    k: int
    direction: str
    terms: tuple[FgAbGroup, ...]
    differentials: tuple[Homomorphism, ...]

    def sequence(self) -> list[Homomorphism]:
        """The differentials written left to right as a composable sequence."""
        if self.direction == "cochain":
            return list(self.differentials)
        return list(reversed(self.differentials))

    def homology_subquotient(self, n: int) -> Subquotient | None:
        """(Co)homology at ``C_n`` (or ``C^n``); None when ``n`` is out of range."""
        if not 0 <= n <= self.k:
            return None
        if self.k == 0:
            G = self.terms[0]
            return Subquotient(G, identity(G.ngens))
        seq = self.sequence()
        index = n if self.direction == "cochain" else self.k - n
        return homology_subquotient(seq, index)


def _one_minus_gamma(M: MackeyFunctor) -> Homomorphism:
    G = M.underlying.group
    return Homomorphism(G, G, identity(G.ngens) - M.underlying.gamma.matrix)


def _one_plus_gamma(M: MackeyFunctor) -> Homomorphism:
    G = M.underlying.group
    return Homomorphism(G, G, identity(G.ngens) + M.underlying.gamma.matrix)


@lru_cache(maxsize=None)
def _sphere_complex(M: MackeyFunctor, y: int) -> SphereComplex:
    k = abs(y)
    V = M.underlying.group
    terms = (M.fixed_level,) + (V,) * k
    alternating = [_one_minus_gamma(M), _one_plus_gamma(M)]
    if y >= 0:
        diffs = [M.res] + [alternating[i % 2] for i in range(k - 1)]
        direction = "cochain"
    else:
        diffs = [M.tr] + [alternating[i % 2] for i in range(k - 1)]
        direction = "chain"
    return SphereComplex(k, direction, terms, tuple(diffs[:k]))


def sphere_complex(M: MackeyFunctor, y: int) -> SphereComplex:
    """The cellular complex of ``S^{y sigma}`` (cochains for ``y > 0``, chains for ``y < 0``)."""
    if y == 0:
        raise ValueError("the zero sphere has no differentials; use y != 0")
    return _sphere_complex(M.base, y)


def _complex_for(M: MackeyFunctor, y: int) -> SphereComplex:
    if y == 0:
        return SphereComplex(0, "cochain", (M.fixed_level,), ())
    return _sphere_complex(M, y)


def oracle_subquotient(M: MackeyFunctor, d) -> Subquotient | None:
    x, y = int(d[0]), int(d[1])
    M = M.base
    C = _complex_for(M, y)
    n = -x if C.direction == "cochain" else x
    return C.homology_subquotient(n)


def oracle_coefficient(M: MackeyFunctor, d) -> FgAbGroup:
    sq = oracle_subquotient(M, d)
    return FgAbGroup.trivial() if sq is None else sq.group


def a_action_oracle(M: MackeyFunctor, d) -> Homomorphism:
    """The map induced on (co)homology by the cell inclusion ``S^{(y-1)sigma} -> S^{y sigma}``.

    Both complexes have the same terms in each position, so the map is induced
    by the identity on the common term, or is zero when either side is absent.
    """
    x, y = int(d[0]), int(d[1])
    src = oracle_subquotient(M, (x, y))
    dst = oracle_subquotient(M, (x, y - 1))
    src_group = FgAbGroup.trivial() if src is None else src.group
    dst_group = FgAbGroup.trivial() if dst is None else dst.group
    if src is None or dst is None or src_group.is_trivial() or dst_group.is_trivial():
        return Homomorphism.zero(src_group, dst_group)
    return induced_map(src, dst, Homomorphism.identity(src.ambient))


@dataclass(frozen=True)
class Mismatch:
    degree: tuple[int, int]
    what: str
    oracle: str
    closed_form: str

    def __str__(self) -> str:
        return f"{self.degree} {self.what}: oracle {self.oracle}, closed form {self.closed_form}"


def cross_check(M: MackeyFunctor, window, check_a: bool = False) -> list[Mismatch]:
    """Compare oracle groups (and optionally a-maps) with the closed forms on ``window``.

    The comparison of a-maps is basis free: kernel and cokernel of both maps
    must agree up to isomorphism.
    """
    from .coefficients import a_action, coefficient

    out: list[Mismatch] = []
    for d in window.degrees():
        oracle = oracle_coefficient(M, d)
        closed = coefficient(M, d).group
        if oracle.invariant_factors != closed.invariant_factors:
            out.append(Mismatch(tuple(d), "group", str(oracle), str(closed)))
            continue
        if check_a and (d[0], d[1] - 1) in window:
            h_or = a_action_oracle(M, d)
            h_cf = a_action(M, d).map
            for name, fn in (("a-kernel", lambda h: h.kernel()[0]), ("a-cokernel", lambda h: h.cokernel()[0])):
                g_or, g_cf = fn(h_or), fn(h_cf)
                if g_or.invariant_factors != g_cf.invariant_factors:
                    out.append(Mismatch(tuple(d), name, str(g_or), str(g_cf)))
    return out
