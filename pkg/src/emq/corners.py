"""The four corners of the Tate square at coefficient level.

For a Mackey functor with underlying module ``V``:

* homotopy fixed points at ``x + y*sigma`` are ``H^p(Q; V)`` or ``H^p(Q; V~)``
  with ``p = -x - y`` and the twist chosen by the parity of ``y``;
* homotopy orbits are ``H_p(Q; V)`` or ``H_p(Q; V~)`` with ``p = x + y``;
* the Tate corner is ``Hhat^{-x}(Q; V)``;
* geometric fixed points are ``coker(tr)``, ``ker(tr)/(1-g)V``, the Tate
  groups, or zero, according to ``x``.

All pieces carry a subquotient witness inside ``M(Q/Q)`` or ``V``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

from .abgroup import FgAbGroup, Homomorphism, Subquotient, identity, induced_map, kernel_lattice, zeros
from .mackey import MackeyFunctor
from .zqmodule import (
    ZQModule,
    coinvariants_sq,
    fixed_points_sq,
    group_cohomology_sq,
    group_homology_sq,
    tate_cohomology_sq,
)

__all__ = [
    "Degree",
    "CornerPiece",
    "homotopy_fixed",
    "homotopy_orbits",
    "tate",
    "geometric",
    "epsilon0",
    "f0",
    "twisted_module",
    "zero_subquotient",
    "whole",
]

HFP, HO, TATE, GEOM = "hQ", "hQ-orbits", "tQ", "ΦQ"


class Degree(NamedTuple):
    """``x + y*sigma``: ``x`` copies of the trivial and ``y`` of the sign representation."""

    x: int
    y: int

    def shift(self, dx: int, dy: int) -> "Degree":
        return Degree(self.x + dx, self.y + dy)

    def __add__(self, other) -> "Degree":  # type: ignore[override]
        return Degree(self.x + other[0], self.y + other[1])

    def __str__(self) -> str:
        return f"({self.x},{self.y})"


@dataclass(frozen=True, eq=False)
class CornerPiece:
    corner: str
    degree: Degree
    group: FgAbGroup
    formula_tag: str
    witness: Subquotient


@lru_cache(maxsize=None)
def zero_subquotient(G: FgAbGroup) -> Subquotient:
    return Subquotient(G, zeros(G.ngens, 0))


@lru_cache(maxsize=None)
def whole(G: FgAbGroup) -> Subquotient:
    return Subquotient(G, identity(G.ngens))


def twisted_module(V: ZQModule, y: int) -> ZQModule:
    """``V`` for even ``y`` and ``V~`` for odd ``y``."""
    return V if y % 2 == 0 else V.twisted


def _piece(corner: str, d: Degree, tag: str, sq: Subquotient) -> CornerPiece:
    return CornerPiece(corner, Degree(*d), sq.group, tag, sq)


def _coef(y: int) -> str:
    return "V" if y % 2 == 0 else "V~"


def homotopy_fixed(M: MackeyFunctor, d) -> CornerPiece:
    x, y = d
    p = -x - y
    if p < 0:
        return _piece(HFP, d, "zero", zero_subquotient(M.V))
    return _piece(HFP, d, f"H^{p}(Q;{_coef(y)})", group_cohomology_sq(twisted_module(M.underlying, y), p))


def homotopy_orbits(M: MackeyFunctor, d) -> CornerPiece:
    x, y = d
    p = x + y
    if p < 0:
        return _piece(HO, d, "zero", zero_subquotient(M.V))
    return _piece(HO, d, f"H_{p}(Q;{_coef(y)})", group_homology_sq(twisted_module(M.underlying, y), p))


def tate(M: MackeyFunctor, d) -> CornerPiece:
    x, _ = d
    return _piece(TATE, d, f"Hhat^{-x}(Q;V)", tate_cohomology_sq(M.underlying, -x))


@lru_cache(maxsize=None)
def coker_tr_sq(M: MackeyFunctor) -> Subquotient:
    return Subquotient(M.fixed_level, identity(M.fixed_level.ngens), M.tr.matrix)


@lru_cache(maxsize=None)
def ker_tr_sq(M: MackeyFunctor) -> Subquotient:
    return Subquotient(M.V, kernel_lattice(M.tr))


@lru_cache(maxsize=None)
def ker_tr_mod_sq(M: MackeyFunctor) -> Subquotient:
    """``ker(tr) / (1-g)V``, the kernel of ``f0``."""
    return Subquotient(M.V, kernel_lattice(M.tr), M.underlying.one_minus_gamma.matrix)


def geometric(M: MackeyFunctor, d) -> CornerPiece:
    x, _ = d
    if x == 0:
        return _piece(GEOM, d, "coker(tr)", coker_tr_sq(M))
    if x == 1:
        return _piece(GEOM, d, "ker(tr)/(1-γ)V", ker_tr_mod_sq(M))
    if x >= 2:
        return _piece(GEOM, d, f"Hhat^{-x}(Q;V)", tate_cohomology_sq(M.underlying, -x))
    return _piece(GEOM, d, "zero", zero_subquotient(M.V))


def epsilon0(M: MackeyFunctor) -> Homomorphism:
    """``M(Q/Q) -> V^Q``, the corestriction of ``res``."""
    return induced_map(whole(M.fixed_level), fixed_points_sq(M.underlying), M.res)


def f0(M: MackeyFunctor) -> Homomorphism:
    """``V_Q -> M(Q/Q)`` induced by ``tr``."""
    return induced_map(coinvariants_sq(M.underlying), whole(M.fixed_level), M.tr)
