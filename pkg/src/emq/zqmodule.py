"""Modules over the group ring of Q = C2 and their (co)homology.

A module is an abelian group with an involution ``gamma``.  Group cohomology
and homology are read off the 2-periodic complexes

    V --(1-g)--> V --(1+g)--> V --(1-g)--> ...      (cochains)
    ... --(1+g)--> V --(1-g)--> V                   (chains)

and Tate cohomology from the norm ``N = 1 + g``.  Functions ending in
``_sq`` return the answer as a :class:`~emq.abgroup.Subquotient` of ``V`` so
that callers can push elements and maps through it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

from .abgroup import (
    FgAbGroup,
    Homomorphism,
    Subquotient,
    homology_subquotient,
    identity,
    kernel_lattice,
    zeros,
)

__all__ = [
    "ZQModule",
    "twist",
    "fixed_points",
    "coinvariants",
    "norm_torsion",
    "tate_cohomology",
    "group_cohomology",
    "group_homology",
    "fixed_points_sq",
    "coinvariants_sq",
    "norm_torsion_sq",
    "tate_cohomology_sq",
    "group_cohomology_sq",
    "group_homology_sq",
]


@dataclass(frozen=True, eq=False)
class ZQModule:
    group: FgAbGroup
    gamma: Homomorphism

    def __post_init__(self):
        if self.gamma.domain != self.group or self.gamma.codomain != self.group:
            raise ValueError("gamma must be an endomorphism of the group")
        if self.gamma.compose(self.gamma) != Homomorphism.identity(self.group):
            raise ValueError("gamma is not an involution")

    # constructors -----------------------------------------------------------

    @classmethod
    def trivial(cls, G: FgAbGroup) -> "ZQModule":
        return cls(G, Homomorphism.identity(G))

    @classmethod
    def sign(cls, G: FgAbGroup) -> "ZQModule":
        """``G`` with ``gamma = -1``."""
        return cls(G, -Homomorphism.identity(G))

    @classmethod
    def regular(cls, n: int = 0) -> "ZQModule":
        """``(Z/n)[Q]``, or ``Z[Q]`` for ``n = 0``; gamma swaps the two basis vectors."""
        G = FgAbGroup((n, n))
        return cls(G, Homomorphism(G, G, [[0, 1], [1, 0]]))

    @classmethod
    def zero(cls) -> "ZQModule":
        return cls.trivial(FgAbGroup.trivial())

    def direct_sum(self, other: "ZQModule") -> "ZQModule":
        G = self.group.direct_sum(other.group)
        n, m = self.group.ngens, other.group.ngens
        g = zeros(n + m, n + m)
        g[:n, :n] = self.gamma.matrix
        g[n:, n:] = other.gamma.matrix
        return ZQModule(G, Homomorphism(G, G, g))

    # structure maps ---------------------------------------------------------

    @cached_property
    def one(self) -> Homomorphism:
        return Homomorphism.identity(self.group)

    @cached_property
    def norm(self) -> Homomorphism:
        """``N = 1 + gamma``."""
        return self.one + self.gamma

    @cached_property
    def one_minus_gamma(self) -> Homomorphism:
        return self.one - self.gamma

    @cached_property
    def twisted(self) -> "ZQModule":
        """Same group, ``gamma`` replaced by ``-gamma``."""
        return ZQModule(self.group, -self.gamma)

    def is_zero(self) -> bool:
        return self.group.is_trivial()

    def __repr__(self) -> str:
        rows = [list(r) for r in self.gamma.matrix]
        return f"ZQModule({self.group}, gamma={rows})"


def twist(V: ZQModule) -> ZQModule:
    return V.twisted


def _whole(V: ZQModule):
    return identity(V.group.ngens)


@lru_cache(maxsize=None)
def fixed_points_sq(V: ZQModule) -> Subquotient:
    return Subquotient(V.group, kernel_lattice(V.one_minus_gamma))


@lru_cache(maxsize=None)
def coinvariants_sq(V: ZQModule) -> Subquotient:
    return Subquotient(V.group, _whole(V), V.one_minus_gamma.matrix)


@lru_cache(maxsize=None)
def norm_torsion_sq(V: ZQModule) -> Subquotient:
    """Elements killed by the norm."""
    return Subquotient(V.group, kernel_lattice(V.norm))


@lru_cache(maxsize=None)
def _tate_sq(V: ZQModule, parity: int) -> Subquotient:
    if parity == 0:
        return Subquotient(V.group, kernel_lattice(V.one_minus_gamma), V.norm.matrix)
    return Subquotient(V.group, kernel_lattice(V.norm), V.one_minus_gamma.matrix)


def tate_cohomology_sq(V: ZQModule, n: int) -> Subquotient:
    return _tate_sq(V, n % 2)


def _cochain_differential(V: ZQModule, k: int) -> Homomorphism:
    # d^k : C^k -> C^{k+1}
    return V.one_minus_gamma if k % 2 == 0 else V.norm


def _chain_differential(V: ZQModule, k: int) -> Homomorphism:
    # d_k : C_k -> C_{k-1}, k >= 1
    return V.one_minus_gamma if k % 2 == 1 else V.norm


@lru_cache(maxsize=None)
def _cohomology_sq(V: ZQModule, p: int) -> Subquotient:
    # the piece of the periodic cochain complex around C^p
    if p == 0:
        return homology_subquotient([_cochain_differential(V, 0)], 0)
    maps = [_cochain_differential(V, p - 1), _cochain_differential(V, p)]
    return homology_subquotient(maps, 1)


@lru_cache(maxsize=None)
def _homology_sq(V: ZQModule, p: int) -> Subquotient:
    # written left to right: C_{p+1} -> C_p -> C_{p-1}
    if p == 0:
        return homology_subquotient([_chain_differential(V, 1)], 1)
    maps = [_chain_differential(V, p + 1), _chain_differential(V, p)]
    return homology_subquotient(maps, 1)


def _check_degree(p: int) -> None:
    if p < 0:
        raise ValueError(f"degree must be nonnegative, got {p}")


def group_cohomology_sq(V: ZQModule, p: int) -> Subquotient:
    _check_degree(p)
    # the complex is 2-periodic from C^1 on
    return _cohomology_sq(V, p if p <= 2 else 2 - p % 2)


def group_homology_sq(V: ZQModule, p: int) -> Subquotient:
    _check_degree(p)
    return _homology_sq(V, p if p <= 2 else 2 - p % 2)


def fixed_points(V: ZQModule) -> FgAbGroup:
    return fixed_points_sq(V).group


def coinvariants(V: ZQModule) -> FgAbGroup:
    return coinvariants_sq(V).group


def norm_torsion(V: ZQModule) -> FgAbGroup:
    return norm_torsion_sq(V).group


def tate_cohomology(V: ZQModule, n: int) -> FgAbGroup:
    return tate_cohomology_sq(V, n).group


def group_cohomology(V: ZQModule, p: int) -> FgAbGroup:
    return group_cohomology_sq(V, p).group


def group_homology(V: ZQModule, p: int) -> FgAbGroup:
    return group_homology_sq(V, p).group
