"""Products of graded elements for Green functors.

A product is computed by the first rule that applies:

1. ``origin``: one factor sits at degree 0 and acts through the ring
   ``M(Q/Q)`` (directly on the y-axis, through ``res`` elsewhere);
2. ``monomial``: one factor is ``a^i u^j m`` with ``m`` at the origin, so the
   product is ``a^i u^j (m * other)``, computed with the action maps;
3. ``epsilon``: the map to homotopy fixed points is injective at the target
   degree, so the product is pulled back from the cup product there;
4. ``orbit-module``: the target and one factor lie in the orbit region
   (``x <= -2``) and the other factor maps to ``H^0``, which acts on group
   homology by multiplication in ``V``.

Anything else raises :class:`UnsupportedProductError`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .abgroup import FgAbGroup, Homomorphism, Subquotient, hstack, solve
from .coefficients import (
    Window,
    a_action,
    coefficient,
    epsilon,
    omega_action,
    u_action,
)
from .corners import Degree, homotopy_fixed, twisted_module
from .mackey import GreenFunctor, MackeyFunctor

__all__ = [
    "GradedElement",
    "UnsupportedProductError",
    "CupPairing",
    "hfp_cup_product",
    "element",
    "unit",
    "origin_element",
    "monomial",
    "a_element",
    "u_element",
    "omega_element",
    "basis_elements",
    "act",
    "product",
    "product_rule",
    "CommutativityReport",
    "commutativity_check",
    "Generator",
    "Relation",
    "RingPresentation",
    "ring_presentation",
]


class UnsupportedProductError(ValueError):
    def __init__(self, d1, d2, reason: str = ""):
        self.degrees = (tuple(d1), tuple(d2))
        msg = f"product of degrees {tuple(d1)} and {tuple(d2)} is outside the supported region"
        super().__init__(msg + (f": {reason}" if reason else ""))


@dataclass(frozen=True)
class GradedElement:
    degree: Degree
    coordinates: tuple[int, ...]
    # (i, j, m) when the element is a^i u^j m with m at the origin
    monomial: tuple[int, int, tuple[int, ...]] | None = field(default=None, compare=False)

    def __str__(self) -> str:
        return f"{tuple(self.degree)}:{list(self.coordinates)}"


def _require_green(M) -> GreenFunctor:
    if not isinstance(M, GreenFunctor):
        raise TypeError(f"{M!r} is not a Green functor")
    return M


def element(M: MackeyFunctor, d, coords) -> GradedElement:
    piece = coefficient(M, d)
    if len(coords) != piece.group.ngens:
        raise ValueError(f"piece at {tuple(d)} has {piece.group.ngens} generators, got {len(coords)} coordinates")
    return GradedElement(Degree(*d), piece.group.reduce(coords))


def basis_elements(M: MackeyFunctor, d) -> list[GradedElement]:
    piece = coefficient(M, d)
    return [GradedElement(Degree(*d), g) for g in piece.group.gens()]


def act(M: MackeyFunctor, actor: str, x: GradedElement, times: int = 1) -> GradedElement:
    """Apply multiplication by ``a``, ``u`` or ``omega`` ``times`` times."""
    funcs = {"a": a_action, "u": u_action, "ω": omega_action, "omega": omega_action}
    out = x
    for _ in range(times):
        amap = funcs[actor](M, out.degree)
        out = GradedElement(amap.target.degree, amap.map(out.coordinates))
    return out


def origin_element(M: GreenFunctor, m) -> GradedElement:
    m = M.fixed_level.reduce(m)
    return GradedElement(Degree(0, 0), m, (0, 0, m))


def monomial(M: GreenFunctor, i: int, j: int, m=None) -> GradedElement:
    """``a^i u^j m``; ``m`` defaults to the unit."""
    M = _require_green(M)
    m = M.unit_fixed if m is None else M.fixed_level.reduce(m)
    x = GradedElement(Degree(0, 0), m)
    x = act(M, "u", x, j)
    x = act(M, "a", x, i)
    return GradedElement(x.degree, x.coordinates, (i, j, m))


def unit(M: GreenFunctor) -> GradedElement:
    return monomial(M, 0, 0)


def a_element(M: GreenFunctor) -> GradedElement:
    return monomial(M, 1, 0)


def u_element(M: GreenFunctor) -> GradedElement:
    return monomial(M, 0, 1)


def omega_element(M: GreenFunctor) -> GradedElement:
    M = _require_green(M)
    return origin_element(M, M.tr(M.unit_underlying))


# ---------------------------------------------------------------------------
# cup products in group cohomology


@dataclass(frozen=True, eq=False)
class CupPairing:
    """``H^p(Q; V^s) x H^q(Q; V^t) -> H^{p+q}(Q; V^{s+t})`` on coordinates.

    ``V^s`` is ``V`` for even ``s`` and ``V~`` for odd ``s``.  Cochains in
    every degree are elements of ``V``; with the standard diagonal of the
    periodic resolution the product of ``f`` and ``g`` is ``f * g`` when ``p``
    is even and ``f * g(g)`` (``g`` acting through ``V^t``) when ``p`` is odd.
    """

    M: GreenFunctor
    p: int
    q: int
    s: int
    t: int
    left: Subquotient
    right: Subquotient
    target: Subquotient

    def cochain(self, a, b) -> tuple[int, ...]:
        if self.p % 2 == 1:
            b = twisted_module(self.M.underlying, self.t).gamma(b)
        return self.M.mul_underlying(a, b)

    def __call__(self, f, g) -> tuple[int, ...]:
        a = self.left.representative(f)
        b = self.right.representative(g)
        return self.target.coords(self.cochain(a, b))


def hfp_cup_product(M: GreenFunctor, p: int, q: int, twists: tuple[int, int] = (0, 0)) -> CupPairing:
    from .zqmodule import group_cohomology_sq

    M = _require_green(M)
    if p < 0 or q < 0:
        raise ValueError("cohomological degrees must be nonnegative")
    s, t = twists[0] % 2, twists[1] % 2
    U = M.underlying
    return CupPairing(
        M, p, q, s, t,
        group_cohomology_sq(twisted_module(U, s), p),
        group_cohomology_sq(twisted_module(U, t), q),
        group_cohomology_sq(twisted_module(U, s + t), p + q),
    )


def _hfp_degree(d) -> tuple[int, int]:
    """(cohomological degree, twist parity) of the homotopy fixed points at ``d``."""
    return -d[0] - d[1], d[1] % 2


# ---------------------------------------------------------------------------
# products


def _origin_multiplication(M: GreenFunctor, m, d) -> Homomorphism:
    piece = coefficient(M, d)
    if piece.is_zero:
        return Homomorphism.zero(piece.group, piece.group)
    if piece.carrier == "fixed":
        f = M.left_multiplication_fixed(m)
    else:
        f = M.left_multiplication_underlying(M.res(m))
    from .abgroup import induced_map

    return induced_map(piece.witness, piece.witness, f)


def _by_origin(M: GreenFunctor, alpha: GradedElement, beta: GradedElement) -> GradedElement | None:
    for x, y in ((alpha, beta), (beta, alpha)):
        if tuple(x.degree) == (0, 0):
            h = _origin_multiplication(M, x.coordinates, y.degree)
            return GradedElement(Degree(*y.degree), h(y.coordinates))
    return None


def _by_monomial(M: GreenFunctor, alpha: GradedElement, beta: GradedElement) -> GradedElement | None:
    for x, y in ((alpha, beta), (beta, alpha)):
        if x.monomial is None:
            continue
        i, j, m = x.monomial
        h = _origin_multiplication(M, m, y.degree)
        z = GradedElement(Degree(*y.degree), h(y.coordinates))
        z = act(M, "u", z, j)
        return act(M, "a", z, i)
    return None


@lru_cache(maxsize=None)
def _epsilon_injective(M: GreenFunctor, x: int, y: int) -> bool:
    return epsilon(M, (x, y)).is_injective()


def _preimage(h: Homomorphism, target) -> tuple[int, ...] | None:
    D = h.codomain.presentation
    sol = solve(hstack(h.codomain.ngens, [h.matrix, D]), h.codomain.reduce(target))
    if sol is None:
        return None
    return h.domain.reduce(sol[: h.domain.ngens])


def _by_epsilon(M: GreenFunctor, alpha: GradedElement, beta: GradedElement) -> GradedElement | None:
    t = Degree(alpha.degree[0] + beta.degree[0], alpha.degree[1] + beta.degree[1])
    if not _epsilon_injective(M, t.x, t.y):
        return None
    target = coefficient(M, t)
    if target.is_zero:
        return GradedElement(t, ())
    (p1, s1), (p2, s2) = _hfp_degree(alpha.degree), _hfp_degree(beta.degree)
    e_t = epsilon(M, t)
    if p1 < 0 or p2 < 0:
        h = e_t.codomain.zero()
    else:
        fa = epsilon(M, alpha.degree)(alpha.coordinates)
        fb = epsilon(M, beta.degree)(beta.coordinates)
        h = hfp_cup_product(M, p1, p2, (s1, s2))(fa, fb)
    c = _preimage(e_t, h)
    if c is None:
        raise ArithmeticError(f"cup product at {tuple(t)} is not in the image of ε")
    return GradedElement(t, c)


def _by_orbit_module(M: GreenFunctor, alpha: GradedElement, beta: GradedElement) -> GradedElement | None:
    t = Degree(alpha.degree[0] + beta.degree[0], alpha.degree[1] + beta.degree[1])
    if t.x > -2:
        return None
    for x, y in ((alpha, beta), (beta, alpha)):
        if y.degree[0] > -2 or x.degree[0] + x.degree[1] != 0:
            continue
        fx = epsilon(M, x.degree)(x.coordinates)
        a = homotopy_fixed(M, x.degree).witness.representative(fx)
        b = coefficient(M, y.degree).witness.representative(y.coordinates)
        target = coefficient(M, t)
        return GradedElement(t, target.witness.coords(M.mul_underlying(a, b)))
    return None


_RULES = (
    ("origin", _by_origin),
    ("monomial", _by_monomial),
    ("epsilon", _by_epsilon),
    ("orbit-module", _by_orbit_module),
)


def product_rule(M: GreenFunctor, alpha: GradedElement, beta: GradedElement) -> tuple[str, GradedElement]:
    """The product together with the name of the rule that produced it."""
    M = _require_green(M)
    for name, rule in _RULES:
        out = rule(M, alpha, beta)
        if out is not None:
            return name, out
    raise UnsupportedProductError(alpha.degree, beta.degree, "ε is not injective at the target and no module rule applies")


def product(M: GreenFunctor, alpha: GradedElement, beta: GradedElement) -> GradedElement:
    return product_rule(M, alpha, beta)[1]


# ---------------------------------------------------------------------------
# commutativity


@dataclass
class CommutativityReport:
    checked: int = 0
    unsupported: int = 0
    violations: list[tuple[GradedElement, GradedElement, GradedElement, GradedElement]] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.violations


def commutativity_check(M: GreenFunctor, window: Window) -> CommutativityReport:
    """Check ``xy = yx`` for all pairs of basis elements and of a, u, omega in the window."""
    M = _require_green(M)
    elems = [g for d in window.degrees() for g in basis_elements(M, d)]
    elems += [a_element(M), u_element(M), omega_element(M)]
    report = CommutativityReport()
    for i in range(len(elems)):
        for j in range(i, len(elems)):
            x, y = elems[i], elems[j]
            try:
                xy, yx = product(M, x, y), product(M, y, x)
            except UnsupportedProductError:
                report.unsupported += 1
                continue
            report.checked += 1
            if xy != yx:
                report.violations.append((x, y, xy, yx))
    return report


# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True)
class Generator:
    name: str
    element: GradedElement


@dataclass(frozen=True)
class Relation:
    lhs: str
    rhs: str
    degree: tuple[int, int]
    kind: str

    def __str__(self) -> str:
        return f"{self.lhs} = {self.rhs}"


@dataclass
class RingPresentation:
    functor: str
    window: Window
    generators: list[Generator]
    relations: list[Relation]
    undetermined: list[str]
    ungenerated: list[tuple[int, int]]

    def relation_strings(self) -> list[str]:
        return [str(r) for r in self.relations]

    def to_dict(self) -> dict:
        w = self.window
        return {
            "functor": self.functor,
            "window": [w.x0, w.x1, w.y0, w.y1],
            "generators": [
                {"name": g.name, "degree": list(g.element.degree), "coordinates": list(g.element.coordinates)}
                for g in self.generators
            ],
            "relations": [
                {"relation": str(r), "degree": list(r.degree), "kind": r.kind} for r in self.relations
            ],
            "undetermined_by_epsilon": list(self.undetermined),
            "lower_cone_degrees_not_generated": [list(d) for d in self.ungenerated],
        }

    def to_text(self) -> str:
        w = self.window
        lines = [f"ring of {self.functor} on [{w.x0},{w.x1}]x[{w.y0},{w.y1}]", "generators:"]
        for g in self.generators:
            lines.append(f"  {g.name} in degree {tuple(g.element.degree)} coordinates {list(g.element.coordinates)}")
        lines.append("relations:")
        lines.extend(f"  {r}" for r in self.relations)
        if self.undetermined:
            lines.append("undetermined by ε:")
            lines.extend(f"  {u}" for u in self.undetermined)
        if self.ungenerated:
            lines.append("lower-cone degrees not generated by a^i u^j times the origin, λ and λ3: " + ", ".join(map(str, self.ungenerated)))
        else:
            lines.append("lower cone generated by a^i u^j times the origin, λ and λ3 (where present) on the window")
        return "\n".join(lines) + "\n"


_ODD_GENERATORS = (
    ("λ", (1, -1)),
    ("λ3", (3, -3)),
    ("κ", (-1, 1)),
    ("κ3", (-3, 3)),
    ("τ", (0, 1)),
    ("θ", (-2, 2)),
)


def _power(name: str, k: int) -> str:
    return "" if k == 0 else (name if k == 1 else f"{name}^{k}")


def _monomial_name(i: int, j: int) -> str:
    parts = [p for p in (_power("a", i), _power("u", j)) if p]
    return "·".join(parts) if parts else "1"


def _origin_names(M: GreenFunctor) -> list[tuple[str, tuple[int, ...]]]:
    out = [("1", M.unit_fixed)]
    if M.fixed_basis_names:
        for k, name in enumerate(M.fixed_basis_names):
            e = M.fixed_level.gens()[k]
            if name != "1" and e != M.unit_fixed:
                out.append((name, e))
    return out


def _format_combo(terms: list[tuple[int, str]]) -> str:
    terms = [(c, n) for c, n in terms if c]
    if not terms:
        return "0"
    terms.sort(key=lambda cn: cn[1] == "1")
    out = ""
    for k, (c, n) in enumerate(terms):
        mag = abs(c)
        body = str(mag) if n == "1" else (n if mag == 1 else f"{mag}·{n}")
        if k == 0:
            out = ("−" if c < 0 else "") + body
        else:
            out += (" − " if c < 0 else " + ") + body
    return out


def _express(G: FgAbGroup, target, named: list[tuple[str, tuple[int, ...]]]) -> str | None:
    """Write ``target`` as a short integer combination of named elements."""
    target = G.reduce(target)
    if not any(target):
        return "0"
    coeffs = [c for k in range(1, 5) for c in (k, -k)]
    for r in (1, 2):
        for combo in itertools.combinations(named, r):
            for cs in itertools.product(coeffs, repeat=r):
                v = [0] * G.ngens
                for c, (_, e) in zip(cs, combo):
                    for idx in range(G.ngens):
                        v[idx] += c * e[idx]
                if G.reduce(v) == target:
                    return _format_combo([(c, n) for c, (n, _) in zip(cs, combo)])
    return None


def ring_presentation(M: GreenFunctor, window: Window) -> RingPresentation:
    """Generators in low degrees and relations among them, certified with :func:`product`."""
    M = _require_green(M)
    gens: list[Generator] = [
        Generator("a", a_element(M)),
        Generator("u", u_element(M)),
        Generator("ω", omega_element(M)),
    ]
    for name, d in _ODD_GENERATORS:
        piece = coefficient(M, d)
        if not piece.is_zero:
            gens.append(Generator(name, GradedElement(Degree(*d), piece.group.gens()[0])))

    named: dict[tuple[int, int], list[tuple[str, tuple[int, ...]]]] = {}
    for name, coords in _origin_names(M):
        named.setdefault((0, 0), []).append((name, coords))
    for g in gens[3:] + gens[:2]:
        named.setdefault(tuple(g.element.degree), []).append((g.name, g.element.coordinates))
    for n in range(2, 1 + min(-window.x0, window.y1) // 2):
        piece = coefficient(M, (-2 * n, 2 * n))
        if not piece.is_zero:
            named.setdefault((-2 * n, 2 * n), []).append((f"θ_{n}", piece.group.gens()[0]))
    for i in range(0, 2 * (window.y1 - window.y0) + 1):
        for j in range(0, window.x1 // 2 + 1):
            if i + j < 2:
                continue
            x = monomial(M, i, j)
            if tuple(x.degree) in window and any(x.coordinates):
                named.setdefault(tuple(x.degree), []).append((_monomial_name(i, j), x.coordinates))

    def describe(x: GradedElement, exclude: str = "") -> str:
        pool = [nc for nc in named.get(tuple(x.degree), []) if nc[0] != exclude]
        G = coefficient(M, x.degree).group
        expr = _express(G, x.coordinates, pool)
        return expr if expr is not None else f"{list(x.coordinates)} in {tuple(x.degree)}"

    relations: list[Relation] = []
    undetermined: list[str] = []

    w = gens[2].element
    if any(w.coordinates) and not any(n == "ω" for n, _ in named[(0, 0)]):
        relations.append(Relation("ω", describe(w), (0, 0), "origin"))

    def order_relation(label: str, x: GradedElement) -> None:
        G = coefficient(M, x.degree).group
        k = G.element_order(x.coordinates)
        if any(x.coordinates) and k > 1:
            relations.append(Relation(f"{k}·{label}", "0", tuple(x.degree), "torsion"))

    for g in gens:
        if not any(g.element.coordinates):
            relations.append(Relation(g.name, "0", tuple(g.element.degree), "vanishing"))
        else:
            order_relation(g.name, g.element)

    for gi, gj in itertools.combinations_with_replacement(gens, 2):
        t = (gi.element.degree[0] + gj.element.degree[0], gi.element.degree[1] + gj.element.degree[1])
        if t not in window:
            continue
        lhs = f"{gi.name}^2" if gi is gj else f"{gi.name}·{gj.name}"
        try:
            xy = product(M, gi.element, gj.element)
        except UnsupportedProductError:
            undetermined.append(lhs)
            continue
        # a product that is itself a named monomial, or has no shorter name,
        # defines a new monomial rather than a relation
        full = describe(xy)
        rhs = describe(xy, exclude=lhs)
        if full != lhs and not rhs.startswith("["):
            relations.append(Relation(lhs, rhs, t, "product"))
        order_relation(lhs, xy)

    # antidiagonal generators above the origin: u^n g for the first basis vector g
    for n in range(1, 1 + min(-window.x0, window.y1) // 2):
        d = (-2 * n, 2 * n)
        piece = coefficient(M, d)
        if piece.is_zero:
            continue
        g = GradedElement(Degree(*d), piece.group.gens()[0])
        un = act(M, "u", g, n)
        label = "θ" if n == 1 else f"θ_{n}"
        rel = Relation(f"{_power('u', n)}·{label}", describe(un), (0, 0), "antidiagonal")
        if str(rel) not in {str(r) for r in relations}:
            relations.append(rel)

    ungenerated = _lower_cone_gaps(M, window, gens)
    return RingPresentation(M.name, window, gens, relations, undetermined, ungenerated)


def _lower_cone_gaps(M: GreenFunctor, window: Window, gens: list[Generator]) -> list[tuple[int, int]]:
    """Degrees ``x >= 0, x + y <= 0`` not spanned by ``a^i u^j b``, ``b`` in {M(Q/Q) basis, λ, λ3}."""
    from .abgroup import Subquotient as _SQ, _columns

    seeds = [GradedElement(Degree(0, 0), e) for e in M.fixed_level.gens()]
    seeds += [g.element for g in gens if g.name in ("λ", "λ3")]
    gaps = []
    for d in window.degrees():
        x, y = d
        if x < 0 or x + y > 0:
            continue
        piece = coefficient(M, d)
        if piece.is_zero:
            continue
        cols = []
        for s in seeds:
            sx, sy = s.degree
            dx = x - sx
            if dx < 0 or dx % 2:
                continue
            j = dx // 2
            i = -(y - sy) - 2 * j
            if i < 0:
                continue
            z = act(M, "a", act(M, "u", s, j), i)
            cols.append(z.coordinates)
        G = piece.group
        # spanned iff the quotient by the span is trivial
        quotient = _SQ(G, _columns(G.gens(), G.ngens), _columns(cols, G.ngens)) if cols else None
        if quotient is None or not quotient.group.is_trivial():
            gaps.append((x, y))
    return gaps
