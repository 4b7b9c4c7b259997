"""Mackey and Green functors for Q = C2.

A Mackey functor is recorded by its two levels, ``M = M(Q/Q)`` and the
module ``V = M(Q/e)``, together with restriction ``res: M -> V`` and transfer
``tr: V -> M``.  A Green functor adds commutative unital products on both
levels, stored as structure-constant tensors: ``product[i, j]`` is the
coordinate vector of ``e_i * e_j``.
"""

from __future__ import annotations

import json
import re
import random
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np

from .abgroup import FgAbGroup, Homomorphism, as_matrix, identity, zeros
from .zqmodule import ZQModule, coinvariants_sq, fixed_points_sq

__all__ = [
    "MackeyFunctor",
    "GreenFunctor",
    "Violation",
    "validate",
    "catalog",
    "CATALOG_NAMES",
    "fixed_point_functor",
    "orbit_functor",
    "direct_sum",
    "zero_functor",
    "random_module",
    "random_mackey",
    "change_basis",
    "loads_mky",
    "load_mky",
    "dumps_mky",
    "MkyParseError",
    "MkyValidationError",
    "data_path",
]


@dataclass(frozen=True, eq=False)
class MackeyFunctor:
    fixed_level: FgAbGroup
    underlying: ZQModule
    res: Homomorphism
    tr: Homomorphism
    name: str = ""

    def __post_init__(self):
        V = self.underlying.group
        if self.res.domain != self.fixed_level or self.res.codomain != V:
            raise ValueError("res must go from the fixed level to the underlying group")
        if self.tr.domain != V or self.tr.codomain != self.fixed_level:
            raise ValueError("tr must go from the underlying group to the fixed level")

    @property
    def V(self) -> FgAbGroup:
        return self.underlying.group

    @property
    def gamma(self) -> Homomorphism:
        return self.underlying.gamma

    @property
    def is_green(self) -> bool:
        return False

    @property
    def base(self) -> "MackeyFunctor":
        return self

    def __repr__(self) -> str:
        label = self.name or "MackeyFunctor"
        return f"<{label}: M={self.fixed_level}, V={self.V}>"


def _tensor(data, n: int, target: int) -> np.ndarray:
    out = np.empty((n, n, target), dtype=object)
    out.fill(0)
    if data is None:
        return out
    arr = data
    for i in range(n):
        for j in range(n):
            vec = arr[i][j]
            if len(vec) != target:
                raise ValueError(f"product entry ({i},{j}) has length {len(vec)}, expected {target}")
            for k in range(target):
                out[i, j, k] = int(vec[k])
    return out


@dataclass(frozen=True, eq=False, kw_only=True, repr=False)
class GreenFunctor(MackeyFunctor):
    product_fixed: np.ndarray
    product_underlying: np.ndarray
    unit_fixed: tuple[int, ...]
    unit_underlying: tuple[int, ...]
    fixed_basis_names: tuple[str, ...] | None = None

    def __post_init__(self):
        super().__post_init__()
        n, m = self.fixed_level.ngens, self.V.ngens
        object.__setattr__(self, "product_fixed", _tensor(self.product_fixed, n, n))
        object.__setattr__(self, "product_underlying", _tensor(self.product_underlying, m, m))
        object.__setattr__(self, "unit_fixed", self.fixed_level.reduce(self.unit_fixed))
        object.__setattr__(self, "unit_underlying", self.V.reduce(self.unit_underlying))

    @property
    def is_green(self) -> bool:
        return True

    @cached_property
    def base(self) -> MackeyFunctor:
        return MackeyFunctor(self.fixed_level, self.underlying, self.res, self.tr, self.name)

    def mul_fixed(self, a, b) -> tuple[int, ...]:
        return _multiply(self.product_fixed, self.fixed_level, a, b)

    def mul_underlying(self, a, b) -> tuple[int, ...]:
        return _multiply(self.product_underlying, self.V, a, b)

    def left_multiplication_fixed(self, a) -> Homomorphism:
        G = self.fixed_level
        cols = [self.mul_fixed(a, e) for e in G.gens()]
        return Homomorphism(G, G, _cols(cols, G.ngens))

    def left_multiplication_underlying(self, a) -> Homomorphism:
        G = self.V
        cols = [self.mul_underlying(a, e) for e in G.gens()]
        return Homomorphism(G, G, _cols(cols, G.ngens))


def _multiply(T: np.ndarray, G: FgAbGroup, a, b) -> tuple[int, ...]:
    n = G.ngens
    out = [0] * n
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            if not bj:
                continue
            c = int(ai) * int(bj)
            for k in range(n):
                out[k] += c * T[i, j, k]
    return G.reduce(out)


def _cols(cols: Sequence[Sequence[int]], n_rows: int) -> np.ndarray:
    out = zeros(n_rows, len(cols))
    for j, c in enumerate(cols):
        for i in range(n_rows):
            out[i, j] = int(c[i])
    return out


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: str

    def __str__(self) -> str:
        return f"{self.axiom}: {self.witness}"


def _gen_name(level: str, i: int) -> str:
    return f"generator {i} of {level}"


def validate(M: MackeyFunctor) -> list[Violation]:
    """All axiom violations of ``M``; an empty list means ``M`` is valid.

    ``im(res)`` lying in the fixed points is the same condition as
    ``gamma o res = res`` and is reported under that name.
    """
    out: list[Violation] = []
    V, Mq = M.V, M.fixed_level
    g, res, tr = M.gamma, M.res, M.tr
    N = M.underlying.norm
    for i, e in enumerate(Mq.gens()):
        r = res(e)
        if g(r) != r:
            out.append(Violation("γ∘res = res (im res ⊆ V^Q)", f"{_gen_name('M(Q/Q)', i)}: res = {r}, γ∘res = {g(r)}"))
    for i, e in enumerate(V.gens()):
        if tr(g(e)) != tr(e):
            out.append(Violation("tr∘γ = tr", f"{_gen_name('V', i)}: tr = {tr(e)}, tr∘γ = {tr(g(e))}"))
        if res(tr(e)) != N(e):
            out.append(Violation("res∘tr ≠ N", f"{_gen_name('V', i)}: res∘tr = {res(tr(e))}, N = {N(e)}"))
    if isinstance(M, GreenFunctor):
        out.extend(_validate_green(M))
    return out


def _check_bilinear(T: np.ndarray, G: FgAbGroup, level: str) -> list[Violation]:
    out = []
    for i, d in enumerate(G.orders):
        if not d:
            continue
        for j in range(G.ngens):
            if not G.is_zero(d * T[i, j, :]) or not G.is_zero(d * T[j, i, :]):
                out.append(Violation(f"product on {level} is well defined", f"generators {i}, {j}"))
    return out


def _validate_ring(mul, G: FgAbGroup, unit, level: str) -> list[Violation]:
    out = []
    gens = G.gens()
    for i, e in enumerate(gens):
        if mul(unit, e) != G.reduce(e):
            out.append(Violation(f"unit on {level}", _gen_name(level, i)))
        for j, f in enumerate(gens):
            if mul(e, f) != mul(f, e):
                out.append(Violation(f"commutativity on {level}", f"generators {i}, {j}"))
            for k, h in enumerate(gens):
                if mul(mul(e, f), h) != mul(e, mul(f, h)):
                    out.append(Violation(f"associativity on {level}", f"generators {i}, {j}, {k}"))
    return out


def _validate_green(M: GreenFunctor) -> list[Violation]:
    Mq, V = M.fixed_level, M.V
    out = _check_bilinear(M.product_fixed, Mq, "M(Q/Q)") + _check_bilinear(M.product_underlying, V, "V")
    if out:
        return out
    out += _validate_ring(M.mul_fixed, Mq, M.unit_fixed, "M(Q/Q)")
    out += _validate_ring(M.mul_underlying, V, M.unit_underlying, "V")
    res, tr, g = M.res, M.tr, M.gamma
    if res(M.unit_fixed) != M.unit_underlying:
        out.append(Violation("res(1) = 1", f"res(1) = {res(M.unit_fixed)}"))
    if g(M.unit_underlying) != M.unit_underlying:
        out.append(Violation("γ(1) = 1", f"γ(1) = {g(M.unit_underlying)}"))
    for i, a in enumerate(Mq.gens()):
        for j, b in enumerate(Mq.gens()):
            if res(M.mul_fixed(a, b)) != M.mul_underlying(res(a), res(b)):
                out.append(Violation("res is multiplicative", f"generators {i}, {j} of M(Q/Q)"))
    for i, x in enumerate(V.gens()):
        for j, y in enumerate(V.gens()):
            if g(M.mul_underlying(x, y)) != M.mul_underlying(g(x), g(y)):
                out.append(Violation("γ is multiplicative", f"generators {i}, {j} of V"))
        for j, a in enumerate(Mq.gens()):
            lhs = tr(M.mul_underlying(x, res(a)))
            rhs = M.mul_fixed(tr(x), a)
            if lhs != rhs:
                out.append(
                    Violation("Frobenius reciprocity tr(x·res a) = tr(x)·a", f"generator {i} of V, generator {j} of M(Q/Q)")
                )
    return out


# ---------------------------------------------------------------------------
# constructions


def _hom(dom: FgAbGroup, cod: FgAbGroup, rows) -> Homomorphism:
    return Homomorphism(dom, cod, as_matrix(rows, (cod.ngens, dom.ngens)))


def fixed_point_functor(V: ZQModule, name: str = "") -> MackeyFunctor:
    """``M(Q/Q) = V^Q`` with ``res`` the inclusion and ``tr`` the norm."""
    fp = fixed_points_sq(V)
    N = V.norm
    tr_cols = [fp.coords(N(e)) for e in V.group.gens()]
    res = Homomorphism(fp.group, V.group, fp.lift)
    tr = Homomorphism(V.group, fp.group, _cols(tr_cols, fp.group.ngens))
    return MackeyFunctor(fp.group, V, res, tr, name or "fixed-point")


def orbit_functor(V: ZQModule, name: str = "") -> MackeyFunctor:
    """``M(Q/Q) = V_Q`` with ``tr`` the projection and ``res`` induced by the norm."""
    co = coinvariants_sq(V)
    N = V.norm
    res_cols = [N(co.lift[:, a]) for a in range(co.group.ngens)]
    res = Homomorphism(co.group, V.group, _cols(res_cols, V.group.ngens))
    return MackeyFunctor(co.group, V, res, co.projection(), name or "orbit")


def zero_functor() -> "GreenFunctor":
    G = FgAbGroup.trivial()
    V = ZQModule.trivial(G)
    return GreenFunctor(
        G, V, Homomorphism.zero(G, G), Homomorphism.zero(G, G), "zero",
        product_fixed=None, product_underlying=None, unit_fixed=(), unit_underlying=(),
    )


def _block(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    out = zeros(A.shape[0] + B.shape[0], A.shape[1] + B.shape[1])
    out[: A.shape[0], : A.shape[1]] = A
    out[A.shape[0]:, A.shape[1]:] = B
    return out


def direct_sum(M1: MackeyFunctor, M2: MackeyFunctor, name: str = "") -> MackeyFunctor:
    Mq = M1.fixed_level.direct_sum(M2.fixed_level)
    U = M1.underlying.direct_sum(M2.underlying)
    res = Homomorphism(Mq, U.group, _block(M1.res.matrix, M2.res.matrix))
    tr = Homomorphism(U.group, Mq, _block(M1.tr.matrix, M2.tr.matrix))
    label = name or f"{M1.name or '?'}+{M2.name or '?'}"
    return MackeyFunctor(Mq, U, res, tr, label)


def change_basis(M: MackeyFunctor, P_fixed: Homomorphism, P_under: Homomorphism,
                 P_fixed_inv: Homomorphism, P_under_inv: Homomorphism) -> MackeyFunctor:
    """Transport ``M`` along automorphisms of both levels."""
    g = P_under.compose(M.gamma).compose(P_under_inv)
    res = P_under.compose(M.res).compose(P_fixed_inv)
    tr = P_fixed.compose(M.tr).compose(P_under_inv)
    return MackeyFunctor(M.fixed_level, ZQModule(M.V, g), res, tr, M.name)


def _random_automorphism(G: FgAbGroup, rng: random.Random, steps: int):
    n = G.ngens
    P, Pi = identity(n), identity(n)
    if n < 2:
        return Homomorphism(G, G, P), Homomorphism(G, G, Pi)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        di, dj = G.orders[i], G.orders[j]
        # e_j -> e_j + c e_i is a map iff d_j * c * e_i = 0
        if di == 0:
            if dj != 0:
                continue
            c = rng.choice([-2, -1, 1, 2])
        else:
            step = di // _gcd(di, dj) if dj else 1
            c = step * rng.randint(1, 3)
        E = identity(n)
        E[i, j] = c
        Ei = identity(n)
        Ei[i, j] = -c
        P = E.dot(P)
        Pi = Pi.dot(Ei)
    return Homomorphism(G, G, P), Homomorphism(G, G, Pi)


def _gcd(a: int, b: int) -> int:
    import math

    return math.gcd(a, b)


def random_module(rng: random.Random, size_bound: int, max_blocks: int = 3) -> ZQModule:
    """A direct sum of trivial, sign and regular blocks with cyclic orders at most ``size_bound``."""
    orders = [0] + list(range(2, max(2, size_bound) + 1))
    V = ZQModule.zero()
    for _ in range(rng.randint(1, max_blocks)):
        n = rng.choice(orders)
        kind = rng.choice(["trivial", "sign", "regular"])
        if kind == "regular":
            block = ZQModule.regular(n)
        else:
            G = FgAbGroup.cyclic(n) if n else FgAbGroup.free(1)
            block = ZQModule.trivial(G) if kind == "trivial" else ZQModule.sign(G)
        V = V.direct_sum(block)
    P, Pi = _random_automorphism(V.group, rng, 3)
    return ZQModule(V.group, P.compose(V.gamma).compose(Pi))


def _cyclic_constant(n: int, res: int, tr: int, name: str) -> MackeyFunctor:
    G = FgAbGroup.cyclic(n) if n else FgAbGroup.free(1)
    return MackeyFunctor(G, ZQModule.trivial(G), _hom(G, G, [[res]]), _hom(G, G, [[tr]]), name)


def random_mackey(seed: int, size_bound: int = 4) -> MackeyFunctor:
    """A valid Mackey functor built as a random direct sum of known-valid pieces.

    Deterministic in ``seed``.  ``size_bound`` caps cyclic orders and the
    number of summands; a bound below 2 leaves only trivial summands and gives
    the zero functor.
    """
    rng = random.Random(seed)
    if size_bound < 2:
        return zero_functor().base
    kinds = ["fixed", "orbit", "catalog", "constant", "fixed-only", "twisted"]
    out: MackeyFunctor | None = None
    for _ in range(rng.randint(1, min(3, size_bound))):
        kind = rng.choice(kinds)
        if kind == "fixed":
            block = fixed_point_functor(random_module(rng, size_bound, 2))
        elif kind == "orbit":
            block = orbit_functor(random_module(rng, size_bound, 2))
        elif kind == "catalog":
            block = catalog(rng.choice(CATALOG_NAMES)).base
        elif kind == "constant":
            n = rng.choice([0] + list(range(2, size_bound + 1)))
            res, tr = rng.choice([(1, 2), (2, 1)])
            block = _cyclic_constant(n, res, tr, "constant")
        elif kind == "fixed-only":
            G = FgAbGroup.cyclic(rng.randint(2, size_bound))
            V = ZQModule.zero()
            block = MackeyFunctor(G, V, Homomorphism.zero(G, V.group), Homomorphism.zero(V.group, G), "fixed-only")
        else:
            n = rng.choice([0] + list(range(2, size_bound + 1)))
            V = ZQModule.sign(FgAbGroup.cyclic(n) if n else FgAbGroup.free(1))
            Z0 = FgAbGroup.trivial()
            block = MackeyFunctor(Z0, V, Homomorphism.zero(Z0, V.group), Homomorphism.zero(V.group, Z0), "twisted")
        out = block if out is None else direct_sum(out, block)
    assert out is not None
    Pf, Pfi = _random_automorphism(out.fixed_level, rng, 3)
    Pu, Pui = _random_automorphism(out.V, rng, 3)
    out = change_basis(out, Pf, Pu, Pfi, Pui)
    return MackeyFunctor(out.fixed_level, out.underlying, out.res, out.tr, f"random:{seed}")


# ---------------------------------------------------------------------------
# catalog


def _green(name, Mq, V, res, tr, pf, pu, uf, uu, names=None) -> GreenFunctor:
    return GreenFunctor(
        Mq, V, res, tr, name,
        product_fixed=pf, product_underlying=pu, unit_fixed=uf, unit_underlying=uu,
        fixed_basis_names=names,
    )


def _constant_z() -> GreenFunctor:
    Z = FgAbGroup.free(1)
    return _green("constant-z", Z, ZQModule.trivial(Z), _hom(Z, Z, [[1]]), _hom(Z, Z, [[2]]),
                  [[[1]]], [[[1]]], (1,), (1,))


def _burnside() -> GreenFunctor:
    A, Z = FgAbGroup.free(2), FgAbGroup.free(1)
    # basis {1, w} with w^2 = 2w
    pf = [[[1, 0], [0, 1]], [[0, 1], [0, 2]]]
    return _green("burnside", A, ZQModule.trivial(Z), _hom(A, Z, [[1, 2]]), _hom(Z, A, [[0], [1]]),
                  pf, [[[1]]], (1, 0), (1,), ("1", "ω"))


def _constant_f2() -> GreenFunctor:
    F = FgAbGroup.cyclic(2)
    return _green("constant-f2", F, ZQModule.trivial(F), _hom(F, F, [[1]]), _hom(F, F, [[0]]),
                  [[[1]]], [[[1]]], (1,), (1,))


def _norm_f2() -> GreenFunctor:
    Z4, F = FgAbGroup.cyclic(4), FgAbGroup.cyclic(2)
    return _green("norm-f2", Z4, ZQModule.trivial(F), _hom(Z4, F, [[1]]), _hom(F, Z4, [[2]]),
                  [[[1]]], [[[1]]], (1,), (1,))


def _twisted_z() -> MackeyFunctor:
    Z0, Z = FgAbGroup.trivial(), FgAbGroup.free(1)
    return MackeyFunctor(Z0, ZQModule.sign(Z), Homomorphism.zero(Z0, Z), Homomorphism.zero(Z, Z0), "twisted-z")


def _fixed_point_zq() -> GreenFunctor:
    Z, Z2 = FgAbGroup.free(1), FgAbGroup.free(2)
    V = ZQModule.regular()
    pu = [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]
    return _green("fixed-point-zq", Z, V, _hom(Z, Z2, [[1], [1]]), _hom(Z2, Z, [[1, 1]]),
                  [[[1]]], pu, (1,), (1, 1))


_BUILDERS = {
    "constant-z": _constant_z,
    "burnside": _burnside,
    "constant-f2": _constant_f2,
    "norm-f2": _norm_f2,
    "twisted-z": _twisted_z,
    "fixed-point-zq": _fixed_point_zq,
}

CATALOG_NAMES: tuple[str, ...] = tuple(_BUILDERS)
_CACHE: dict[str, MackeyFunctor] = {}


def catalog(name: str) -> MackeyFunctor:
    """A built-in functor; Green where a ring structure is known.

    Names: ``constant-z``, ``burnside``, ``constant-f2``, ``norm-f2``,
    ``twisted-z``, ``fixed-point-zq`` (the fixed-point functor of ``Z[Q]``)
    and ``zero``.
    """
    if name == "zero":
        return zero_functor()
    if name not in _BUILDERS:
        raise KeyError(f"unknown Mackey functor {name!r}; known: {', '.join(CATALOG_NAMES + ('zero',))}")
    if name not in _CACHE:
        M = _BUILDERS[name]()
        report = validate(M)
        if report:
            raise AssertionError(f"catalog entry {name} is invalid: {report}")
        _CACHE[name] = M
    return _CACHE[name]


# ---------------------------------------------------------------------------
# .mky files


class MkyParseError(ValueError):
    pass


class MkyValidationError(ValueError):
    def __init__(self, report: list[Violation]):
        self.report = report
        super().__init__("; ".join(str(v) for v in report))


def _mat_rows(A: np.ndarray) -> list[list[int]]:
    return [[int(v) for v in row] for row in A]


def _tensor_rows(T: np.ndarray) -> list:
    return [[[int(v) for v in T[i, j, :]] for j in range(T.shape[1])] for i in range(T.shape[0])]


def dumps_mky(M: MackeyFunctor) -> str:
    data: dict = {
        "name": M.name,
        "fixed_level": {"invariant_factors": list(M.fixed_level.orders)},
        "underlying": {"invariant_factors": list(M.V.orders)},
        "gamma": _mat_rows(M.gamma.matrix),
        "res": _mat_rows(M.res.matrix),
        "tr": _mat_rows(M.tr.matrix),
    }
    if isinstance(M, GreenFunctor):
        data["product_fixed"] = _tensor_rows(M.product_fixed)
        data["product_underlying"] = _tensor_rows(M.product_underlying)
        data["unit_fixed"] = list(M.unit_fixed)
        data["unit_underlying"] = list(M.unit_underlying)
        if M.fixed_basis_names:
            data["fixed_basis_names"] = list(M.fixed_basis_names)
    text = json.dumps(data, indent=2, ensure_ascii=False)
    # keep integer rows on one line
    text = re.sub(r"\[\s*(-?\d+(?:,\s*-?\d+)*)\s*\]", lambda m: "[" + re.sub(r"\s+", " ", m.group(1)) + "]", text)
    return text + "\n"


def _parse(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MkyParseError(f"not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise MkyParseError("top level must be an object")
    return data


def loads_mky(text: str) -> MackeyFunctor:
    """Parse and validate a .mky document."""
    data = _parse(text)
    try:
        Mq = FgAbGroup(tuple(data["fixed_level"]["invariant_factors"]))
        Vg = FgAbGroup(tuple(data["underlying"]["invariant_factors"]))
        gamma = _hom(Vg, Vg, data["gamma"])
        res = _hom(Mq, Vg, data["res"])
        tr = _hom(Vg, Mq, data["tr"])
    except (KeyError, TypeError) as exc:
        raise MkyParseError(f"missing or malformed field: {exc}") from None
    except ValueError as exc:
        raise MkyParseError(str(exc)) from None
    if gamma.compose(gamma) != Homomorphism.identity(Vg):
        raise MkyValidationError([Violation("γ∘γ = 1", f"gamma = {_mat_rows(gamma.matrix)}")])
    name = str(data.get("name", ""))
    U = ZQModule(Vg, gamma)
    green_keys = ("product_fixed", "product_underlying", "unit_fixed", "unit_underlying")
    present = [k for k in green_keys if k in data]
    if present and len(present) != len(green_keys):
        raise MkyParseError(f"incomplete product data: have {present}")
    try:
        if present:
            names = data.get("fixed_basis_names")
            M: MackeyFunctor = GreenFunctor(
                Mq, U, res, tr, name,
                product_fixed=data["product_fixed"], product_underlying=data["product_underlying"],
                unit_fixed=tuple(data["unit_fixed"]), unit_underlying=tuple(data["unit_underlying"]),
                fixed_basis_names=tuple(names) if names else None,
            )
        else:
            M = MackeyFunctor(Mq, U, res, tr, name)
    except (TypeError, IndexError) as exc:
        raise MkyParseError(f"malformed product data: {exc}") from None
    except ValueError as exc:
        raise MkyParseError(str(exc)) from None
    report = validate(M)
    if report:
        raise MkyValidationError(report)
    return M


def load_mky(path: str | Path) -> MackeyFunctor:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise MkyParseError(f"not UTF-8: {exc}") from None
    return loads_mky(text)


def data_path(name: str) -> Path:
    """Path of a shipped .mky file."""
    return Path(__file__).parent / "data" / f"{name}.mky"
