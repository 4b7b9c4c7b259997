"""RO(Q)-graded coefficients of HM and the actions of a, u and omega.

The group at ``x + y*sigma`` is

    x = 0   : ker(res) (y > 0), M(Q/Q) (y = 0), coker(tr) (y < 0)
    x = 1   : ker(tr) (y = -1), ker(tr)/(1-g)V (y < -1), 0 (y > -1)
    x = -1  : V/im(res) (y = 1), V^Q/im(res) (y > 1), 0 (y < 1)
    x >= 2  : homotopy fixed points
    x <= -2 : homotopy orbits

Every piece is a subquotient of a fixed carrier: ``M(Q/Q)`` on the y-axis
and ``V`` elsewhere.  Action maps are induced by explicit maps between
carriers, so their matrices are in the pinned bases of the pieces.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .abgroup import FgAbGroup, Homomorphism, Subquotient, identity, induced_map, kernel_lattice
from .corners import (
    Degree,
    coker_tr_sq,
    homotopy_fixed,
    homotopy_orbits,
    ker_tr_mod_sq,
    ker_tr_sq,
    twisted_module,
    whole,
    zero_subquotient,
)
from .mackey import GreenFunctor, MackeyFunctor
from .zqmodule import ZQModule, fixed_points_sq

__all__ = [
    "CASE_TAGS",
    "GradedPiece",
    "ActionMap",
    "UnsupportedOperationError",
    "Window",
    "coefficient",
    "underlying_coefficient",
    "a_action",
    "u_action",
    "u_case",
    "omega_action",
    "epsilon",
    "table",
]

CASE_TAGS = (
    "origin",
    "ker_res",
    "coker_tr",
    "ker_tr",
    "ker_tr_coinv",
    "coker_res",
    "fixed_mod_res",
    "hfp_cone",
    "ho_cone",
    "zero",
)


class UnsupportedOperationError(NotImplementedError):
    pass


@dataclass(frozen=True, eq=False)
class GradedPiece:
    degree: Degree
    group: FgAbGroup
    case_tag: str
    witness: Subquotient
    carrier: str  # "fixed" or "underlying"

    @property
    def is_zero(self) -> bool:
        return self.group.is_trivial()


@dataclass(frozen=True, eq=False)
class ActionMap:
    actor: str
    source: GradedPiece
    target: GradedPiece
    map: Homomorphism
    classification: str
    rule: str = ""


@dataclass(frozen=True)
class Window:
    """The rectangle ``x0 <= x <= x1``, ``y0 <= y <= y1``."""

    x0: int
    x1: int
    y0: int
    y1: int

    def __post_init__(self):
        if self.x0 > self.x1 or self.y0 > self.y1:
            raise ValueError(f"empty window {self}")

    @classmethod
    def square(cls, r: int) -> "Window":
        return cls(-r, r, -r, r)

    def degrees(self) -> Iterator[Degree]:
        for x in range(self.x0, self.x1 + 1):
            for y in range(self.y0, self.y1 + 1):
                yield Degree(x, y)

    def __contains__(self, d) -> bool:
        return self.x0 <= d[0] <= self.x1 and self.y0 <= d[1] <= self.y1

    def __len__(self) -> int:
        return (self.x1 - self.x0 + 1) * (self.y1 - self.y0 + 1)


# ---------------------------------------------------------------------------
# pieces


@lru_cache(maxsize=None)
def _ker_res_sq(M: MackeyFunctor) -> Subquotient:
    return Subquotient(M.fixed_level, kernel_lattice(M.res))


@lru_cache(maxsize=None)
def _coker_res_sq(M: MackeyFunctor) -> Subquotient:
    return Subquotient(M.V, identity(M.V.ngens), M.res.matrix)


@lru_cache(maxsize=None)
def _fixed_mod_res_sq(M: MackeyFunctor) -> Subquotient:
    return Subquotient(M.V, fixed_points_sq(M.underlying).numerator, M.res.matrix)


def _carrier(x: int) -> str:
    return "fixed" if x == 0 else "underlying"


@lru_cache(maxsize=None)
def _coefficient(M: MackeyFunctor, x: int, y: int) -> GradedPiece:
    d = Degree(x, y)
    if x >= 2:
        sq, tag = homotopy_fixed(M, d).witness, "hfp_cone"
    elif x <= -2:
        sq, tag = homotopy_orbits(M, d).witness, "ho_cone"
    elif x == 0:
        if y > 0:
            sq, tag = _ker_res_sq(M), "ker_res"
        elif y == 0:
            sq, tag = whole(M.fixed_level), "origin"
        else:
            sq, tag = coker_tr_sq(M), "coker_tr"
    elif x == 1:
        if y == -1:
            sq, tag = ker_tr_sq(M), "ker_tr"
        elif y < -1:
            sq, tag = ker_tr_mod_sq(M), "ker_tr_coinv"
        else:
            sq, tag = zero_subquotient(M.V), "zero"
    else:  # x == -1
        if y == 1:
            sq, tag = _coker_res_sq(M), "coker_res"
        elif y > 1:
            sq, tag = _fixed_mod_res_sq(M), "fixed_mod_res"
        else:
            sq, tag = zero_subquotient(M.V), "zero"
    return GradedPiece(d, sq.group, tag, sq, _carrier(x))


def coefficient(M: MackeyFunctor, d) -> GradedPiece:
    return _coefficient(M.base, int(d[0]), int(d[1]))


def underlying_coefficient(M: MackeyFunctor, d) -> ZQModule:
    """The Q/e level at ``d``: ``V`` twisted by the parity of ``y`` on the antidiagonal, else 0."""
    x, y = d
    if x + y != 0:
        return ZQModule.zero()
    return twisted_module(M.underlying, y)


# ---------------------------------------------------------------------------
# action maps


def _zero_hom(src: GradedPiece, dst: GradedPiece) -> Homomorphism:
    return Homomorphism.zero(src.group, dst.group)


def _induced(src: GradedPiece, dst: GradedPiece, f: Homomorphism) -> Homomorphism:
    if src.is_zero or dst.is_zero:
        return _zero_hom(src, dst)
    return induced_map(src.witness, dst.witness, f)


def _action(actor: str, src: GradedPiece, dst: GradedPiece, hom: Homomorphism, rule: str) -> ActionMap:
    return ActionMap(actor, src, dst, hom, hom.classify(), rule)


def _identity_of(M: MackeyFunctor, x: int) -> Homomorphism:
    return Homomorphism.identity(M.fixed_level if x == 0 else M.V)


@lru_cache(maxsize=None)
def _a_action(M: MackeyFunctor, x: int, y: int) -> ActionMap:
    src, dst = _coefficient(M, x, y), _coefficient(M, x, y - 1)
    if src.is_zero or dst.is_zero:
        return _action("a", src, dst, _zero_hom(src, dst), "zero")
    # both pieces are subquotients of the same carrier
    return _action("a", src, dst, _induced(src, dst, _identity_of(M, x)), "identity")


def a_action(M: MackeyFunctor, d) -> ActionMap:
    """Multiplication by ``a`` from ``d`` to ``d - sigma``."""
    return _a_action(M.base, int(d[0]), int(d[1]))


def u_case(d) -> int | None:
    """Which case of the u-multiplication table covers ``d``; None off the table.

    1: (-2,2), 2: origin, 3: (-1,1), 4: (1,-1), 5: (-3,3), 6: x = 1, y < -1,
    7: x = -3, y > 3, 8: x >= 2 or x <= -4.
    """
    x, y = d
    special = {(-2, 2): 1, (0, 0): 2, (-1, 1): 3, (1, -1): 4, (-3, 3): 5}
    if (x, y) in special:
        return special[(x, y)]
    if x == 1 and y < -1:
        return 6
    if x == -3 and y > 3:
        return 7
    if x >= 2 or x <= -4:
        return 8
    return None


@lru_cache(maxsize=None)
def _u_action(M: MackeyFunctor, x: int, y: int) -> ActionMap:
    src, dst = _coefficient(M, x, y), _coefficient(M, x + 2, y - 2)
    if src.is_zero or dst.is_zero:
        return _action("u", src, dst, _zero_hom(src, dst), "zero")
    if x == -2:
        return _action("u", src, dst, _induced(src, dst, M.tr), "transfer")
    if x == -1:
        return _action("u", src, dst, _induced(src, dst, M.underlying.one_minus_gamma), "1-γ")
    if x == 0:
        return _action("u", src, dst, _induced(src, dst, M.res), "restriction")
    return _action("u", src, dst, _induced(src, dst, Homomorphism.identity(M.V)), "identity")


def u_action(M: MackeyFunctor, d) -> ActionMap:
    """Multiplication by ``u`` from ``d`` to ``d + 2 - 2 sigma``."""
    return _u_action(M.base, int(d[0]), int(d[1]))


def omega_action(M: MackeyFunctor, d) -> ActionMap:
    """Multiplication by ``omega`` at ``d``.

    Away from the y-axis omega acts as 2, on the y-axis off the origin as 0,
    and at the origin as multiplication by ``tr(1)``, which needs a product.
    """
    x, y = int(d[0]), int(d[1])
    src = coefficient(M, (x, y))
    if x != 0:
        hom = _induced(src, src, Homomorphism.identity(M.V).scale(2))
        return _action("ω", src, src, hom, "2")
    if y != 0:
        return _action("ω", src, src, _zero_hom(src, src), "zero")
    if not isinstance(M, GreenFunctor):
        raise UnsupportedOperationError("ω at the origin is multiplication by tr(1) and needs a Green functor")
    w = M.tr(M.unit_underlying)
    return _action("ω", src, src, _induced(src, src, M.left_multiplication_fixed(w)), "tr(1)")


# ---------------------------------------------------------------------------
# the map to homotopy fixed points


def _norm_twisted(M: MackeyFunctor, y: int) -> Homomorphism:
    return twisted_module(M.underlying, y).norm


@lru_cache(maxsize=None)
def _epsilon(M: MackeyFunctor, x: int, y: int) -> Homomorphism:
    src = _coefficient(M, x, y)
    dst = homotopy_fixed(M, (x, y)).witness
    if src.is_zero or dst.group.is_trivial():
        return Homomorphism.zero(src.group, dst.group)
    if x >= 1:
        f = Homomorphism.identity(M.V)
    elif x == 0:
        f = M.res
    elif x + y == 0:
        # H_0 -> H^0 on the antidiagonal is the norm of V or V~
        f = _norm_twisted(M, y)
    else:
        return Homomorphism.zero(src.group, dst.group)
    return induced_map(src.witness, dst, f)


def epsilon(M: MackeyFunctor, d) -> Homomorphism:
    """The ring map from the coefficient at ``d`` to the homotopy fixed points at ``d``."""
    return _epsilon(M.base, int(d[0]), int(d[1]))


# ---------------------------------------------------------------------------
# tables


def _threads() -> int:
    try:
        n = int(os.environ.get("EMQ_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, n)


def table(M: MackeyFunctor, window: Window, actions: tuple[str, ...] = ()) -> dict:
    """Coefficients (and optionally action maps) over ``window``.

    Returns ``{"pieces": {degree: GradedPiece}, "actions": {actor: {degree: ActionMap}}}``.
    Cells are independent; ``EMQ_THREADS`` caps the worker count.  Dicts are
    filled in window order regardless of scheduling.
    """
    degrees = list(window.degrees())
    workers = min(_threads(), len(degrees))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            pieces = list(pool.map(lambda d: coefficient(M, d), degrees))
    else:
        pieces = [coefficient(M, d) for d in degrees]
    out: dict = {"pieces": dict(zip(degrees, pieces)), "actions": {}}
    funcs = {"a": a_action, "u": u_action, "omega": omega_action, "ω": omega_action}
    for actor in actions:
        if actor not in funcs:
            raise ValueError(f"unknown actor {actor!r}")
        maps = {}
        for d in degrees:
            try:
                maps[d] = funcs[actor](M, d)
            except UnsupportedOperationError:
                continue
        out["actions"][actor] = maps
    return out
