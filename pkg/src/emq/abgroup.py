"""Finitely generated abelian groups, homomorphisms and subquotients.

Every group is stored as a direct sum of cyclic groups ``Z/d_1 + ... + Z/d_n``
where ``d_i = 0`` means a copy of ``Z``.  Elements are integer column vectors
reduced modulo the orders.  Maps act on column vectors, so ``g o f`` has
matrix ``G @ F``.

Integer matrices are numpy arrays with ``dtype=object`` so that entries are
Python ints of arbitrary size.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "as_matrix",
    "identity",
    "zeros",
    "hstack",
    "smith_normal_form",
    "nullspace",
    "solve",
    "FgAbGroup",
    "Homomorphism",
    "Subquotient",
    "kernel",
    "cokernel",
    "image",
    "are_isomorphic",
    "homology_at",
    "homology_subquotient",
    "induced_map",
    "kernel_lattice",
]


# ---------------------------------------------------------------------------
# integer matrices


def as_matrix(rows, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Coerce nested sequences (or an array) to an object-dtype int matrix."""
    if isinstance(rows, np.ndarray) and rows.dtype == object and rows.ndim == 2:
        out = rows.copy()
    else:
        data = [[int(v) for v in row] for row in rows]
        if shape is None:
            n_rows = len(data)
            n_cols = len(data[0]) if data else 0
            shape = (n_rows, n_cols)
        out = np.empty(shape, dtype=object)
        for i, row in enumerate(data):
            if len(row) != shape[1]:
                raise ValueError("ragged matrix")
            for j, v in enumerate(row):
                out[i, j] = v
        if len(data) != shape[0]:
            raise ValueError(f"expected {shape[0]} rows, got {len(data)}")
        return out
    if shape is not None and out.shape != tuple(shape):
        raise ValueError(f"expected shape {shape}, got {out.shape}")
    return out


def zeros(n_rows: int, n_cols: int) -> np.ndarray:
    out = np.empty((n_rows, n_cols), dtype=object)
    out.fill(0)
    return out


def identity(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


def hstack(n_rows: int, blocks: Sequence[np.ndarray]) -> np.ndarray:
    """Horizontal concatenation that copes with zero-column blocks."""
    blocks = [b for b in blocks if b.shape[1]]
    if not blocks:
        return zeros(n_rows, 0)
    return np.concatenate(blocks, axis=1)


def _column(v) -> np.ndarray:
    vals = [int(x) for x in v]
    out = np.empty((len(vals), 1), dtype=object)
    for i, x in enumerate(vals):
        out[i, 0] = x
    return out


def _to_lists(A: np.ndarray) -> list[list[int]]:
    return [[int(v) for v in row] for row in A]


def _from_lists(rows: list[list[int]], n_rows: int, n_cols: int) -> np.ndarray:
    out = zeros(n_rows, n_cols)
    for i in range(n_rows):
        for j in range(n_cols):
            out[i, j] = rows[i][j]
    return out


def _snf_lists(A: list[list[int]], m: int, n: int):
    """Smith normal form on lists: returns (U, U_inv, D, W) with U A W = D."""
    D = [row[:] for row in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    Ui = [[int(i == j) for j in range(m)] for i in range(m)]
    W = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for row in Ui:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in W:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        # row_dst += q * row_src ; inverse tracks col_src -= q * col_dst
        if not q:
            return
        rs, rd = D[src], D[dst]
        for k in range(n):
            if rs[k]:
                rd[k] += q * rs[k]
        us, ud = U[src], U[dst]
        for k in range(m):
            if us[k]:
                ud[k] += q * us[k]
        for row in Ui:
            if row[dst]:
                row[src] -= q * row[dst]

    def add_col(src, dst, q):
        if not q:
            return
        for row in D:
            if row[src]:
                row[dst] += q * row[src]
        for row in W:
            if row[src]:
                row[dst] += q * row[src]

    def negate_row(i):
        D[i] = [-v for v in D[i]]
        U[i] = [-v for v in U[i]]
        for row in Ui:
            row[i] = -row[i]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            row = D[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(t, i)
        if j != t:
            swap_cols(t, j)
        while True:
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(t, i, -(D[i][t] // p))
                    dirty = dirty or bool(D[i][t])
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(t, j, -(D[t][j] // p))
                    dirty = dirty or bool(D[t][j])
            if dirty:
                best = (abs(p), t, t)
                for i in range(t + 1, m):
                    if D[i][t] and abs(D[i][t]) < best[0]:
                        best = (abs(D[i][t]), i, t)
                for j in range(t + 1, n):
                    if D[t][j] and abs(D[t][j]) < best[0]:
                        best = (abs(D[t][j]), t, j)
                _, i, j = best
                if i != t:
                    swap_rows(t, i)
                if j != t:
                    swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) if any(D[i][j] % p for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if D[t][t] < 0:
            negate_row(t)
    return U, Ui, D, W


class _SNF:
    """Smith normal form of a matrix, kept around for repeated solves."""

    __slots__ = ("m", "n", "U", "U_inv", "D", "W", "diag", "rank")

    def __init__(self, A: np.ndarray):
        m, n = A.shape
        U, Ui, D, W = _snf_lists(_to_lists(A), m, n)
        self.m, self.n = m, n
        self.U, self.U_inv, self.D, self.W = U, Ui, D, W
        self.diag = [D[i][i] for i in range(min(m, n))]
        self.rank = sum(1 for d in self.diag if d)

    def solve(self, b: Sequence[int]) -> list[int] | None:
        c = [sum(u * int(x) for u, x in zip(row, b) if u) for row in self.U]
        y = []
        for i in range(self.rank):
            q, r = divmod(c[i], self.diag[i])
            if r:
                return None
            y.append(q)
        if any(c[i] for i in range(self.rank, self.m)):
            return None
        return [sum(self.W[k][i] * y[i] for i in range(self.rank)) for k in range(self.n)]


def smith_normal_form(A) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return unimodular ``U``, ``W`` and diagonal ``D`` with ``U @ A @ W == D``.

    Diagonal entries are nonnegative and each divides the next; zeros come last.
    """
    A = as_matrix(A)
    m, n = A.shape
    U, _, D, W = _snf_lists(_to_lists(A), m, n)
    return _from_lists(U, m, m), _from_lists(D, m, n), _from_lists(W, n, n)


def nullspace(A) -> np.ndarray:
    """Columns form a Z-basis of ``{v : A v = 0}``."""
    A = as_matrix(A)
    m, n = A.shape
    snf = _SNF(A)
    r = snf.rank
    out = zeros(n, n - r)
    for k in range(n):
        for j in range(r, n):
            out[k, j - r] = snf.W[k][j]
    return out


def solve(A, b) -> list[int] | None:
    """An integer solution of ``A x = b`` or None."""
    A = as_matrix(A)
    return _SNF(A).solve(list(b))


# ---------------------------------------------------------------------------
# groups


def _invariant_factors(orders: tuple[int, ...]) -> tuple[int, ...]:
    n = len(orders)
    if n == 0:
        return ()
    D = [[orders[i] if i == j else 0 for j in range(n)] for i in range(n)]
    _, _, D, _ = _snf_lists(D, n, n)
    diag = [D[i][i] for i in range(n)]
    torsion = sorted(d for d in diag if d > 1)
    free = [0] * sum(1 for d in diag if d == 0)
    return tuple(torsion + free)


@dataclass(frozen=True)
class FgAbGroup:
    """``Z/orders[0] + Z/orders[1] + ...`` on its standard generators."""

    orders: tuple[int, ...]
    invariant_factors: tuple[int, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        orders = tuple(int(d) for d in self.orders)
        if any(d < 0 or d == 1 for d in orders):
            raise ValueError(f"cyclic orders must be 0 or >= 2, got {orders}")
        object.__setattr__(self, "orders", orders)
        object.__setattr__(self, "invariant_factors", _invariant_factors(orders))

    @classmethod
    def free(cls, rank: int) -> "FgAbGroup":
        return cls((0,) * rank)

    @classmethod
    def cyclic(cls, n: int) -> "FgAbGroup":
        return cls(() if n == 1 else (n,))

    @classmethod
    def trivial(cls) -> "FgAbGroup":
        return cls(())

    @classmethod
    def from_invariant_factors(cls, factors: Iterable[int]) -> "FgAbGroup":
        return cls(tuple(int(d) for d in factors if int(d) != 1))

    @classmethod
    def from_presentation(cls, R) -> "FgAbGroup":
        """The cokernel of ``R`` on the standard generators of ``Z^rows``."""
        R = as_matrix(R)
        return cokernel(Homomorphism(cls.free(R.shape[1]), cls.free(R.shape[0]), R))[0]

    @property
    def ngens(self) -> int:
        return len(self.orders)

    @property
    def presentation(self) -> np.ndarray:
        """Relation matrix whose cokernel is this group."""
        out = zeros(self.ngens, self.ngens)
        for i, d in enumerate(self.orders):
            out[i, i] = d
        return out

    @property
    def rank(self) -> int:
        return sum(1 for d in self.orders if d == 0)

    def is_trivial(self) -> bool:
        return self.ngens == 0

    def is_finite(self) -> bool:
        return all(self.orders)

    def order(self) -> int | None:
        if not self.is_finite():
            return None
        out = 1
        for d in self.orders:
            out *= d
        return out

    def reduce(self, v) -> tuple[int, ...]:
        vals = [int(x) for x in v]
        if len(vals) != self.ngens:
            raise ValueError(f"element of length {len(vals)} in group with {self.ngens} generators")
        return tuple(x % d if d else x for x, d in zip(vals, self.orders))

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.ngens

    def is_zero(self, v) -> bool:
        return not any(self.reduce(v))

    def gens(self) -> list[tuple[int, ...]]:
        return [tuple(int(i == j) for j in range(self.ngens)) for i in range(self.ngens)]

    def element_order(self, v) -> int:
        """Order of ``v``; 0 if infinite."""
        v = self.reduce(v)
        out = 1
        for x, d in zip(v, self.orders):
            if not x:
                continue
            if d == 0:
                return 0
            k = d // _gcd(x, d)
            out = out * k // _gcd(out, k)
        return out

    def elements(self):
        if not self.is_finite():
            raise ValueError("cannot enumerate an infinite group")
        return itertools.product(*(range(d) for d in self.orders))

    def direct_sum(self, other: "FgAbGroup") -> "FgAbGroup":
        return FgAbGroup(self.orders + other.orders)

    def __str__(self) -> str:
        return format_factors(self.invariant_factors)


def _gcd(a: int, b: int) -> int:
    import math

    return math.gcd(a, b)


def format_factors(factors: Sequence[int]) -> str:
    if not factors:
        return "0"
    parts = []
    for d in factors:
        parts.append("Z" if d == 0 else f"Z/{d}")
    return " + ".join(parts)


def are_isomorphic(G: FgAbGroup, H: FgAbGroup) -> bool:
    return G.invariant_factors == H.invariant_factors


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True, eq=False)
class Homomorphism:
    domain: FgAbGroup
    codomain: FgAbGroup
    matrix: np.ndarray

    def __post_init__(self):
        A = as_matrix(self.matrix, (self.codomain.ngens, self.domain.ngens))
        for i, d in enumerate(self.codomain.orders):
            if d:
                for j in range(A.shape[1]):
                    A[i, j] %= d
        for j, d in enumerate(self.domain.orders):
            if d and not self.codomain.is_zero(d * A[:, j]):
                raise ValueError(
                    f"ill-defined homomorphism: generator {j} has order {d} "
                    f"but its image {tuple(A[:, j])} does not"
                )
        A.flags.writeable = False
        object.__setattr__(self, "matrix", A)

    @classmethod
    def zero(cls, domain: FgAbGroup, codomain: FgAbGroup) -> "Homomorphism":
        return cls(domain, codomain, zeros(codomain.ngens, domain.ngens))

    @classmethod
    def identity(cls, G: FgAbGroup) -> "Homomorphism":
        return cls(G, G, identity(G.ngens))

    def __call__(self, v) -> tuple[int, ...]:
        v = self.domain.reduce(v)
        if not v:
            return self.codomain.zero()
        return self.codomain.reduce(self.matrix @ _column(v)[:, 0])

    def compose(self, first: "Homomorphism") -> "Homomorphism":
        """``self o first``."""
        if first.codomain != self.domain:
            raise ValueError("maps are not composable")
        return Homomorphism(first.domain, self.codomain, _matmul(self.matrix, first.matrix))

    def __matmul__(self, other: "Homomorphism") -> "Homomorphism":
        return self.compose(other)

    def _check_parallel(self, other):
        if self.domain != other.domain or self.codomain != other.codomain:
            raise ValueError("maps have different domain or codomain")

    def __add__(self, other: "Homomorphism") -> "Homomorphism":
        self._check_parallel(other)
        return Homomorphism(self.domain, self.codomain, self.matrix + other.matrix)

    def __sub__(self, other: "Homomorphism") -> "Homomorphism":
        self._check_parallel(other)
        return Homomorphism(self.domain, self.codomain, self.matrix - other.matrix)

    def __neg__(self) -> "Homomorphism":
        return Homomorphism(self.domain, self.codomain, -self.matrix)

    def scale(self, k: int) -> "Homomorphism":
        return Homomorphism(self.domain, self.codomain, self.matrix * int(k))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Homomorphism):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and bool((self.matrix == other.matrix).all())
        )

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.matrix.any() if self.matrix.size else True

    def kernel(self):
        return kernel(self)

    def cokernel(self):
        return cokernel(self)

    def is_injective(self) -> bool:
        return kernel(self)[0].is_trivial()

    def is_surjective(self) -> bool:
        return cokernel(self)[0].is_trivial()

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def classify(self) -> str:
        """One of ``iso``, ``mono``, ``epi``, ``other``."""
        mono, epi = self.is_injective(), self.is_surjective()
        if mono and epi:
            return "iso"
        if mono:
            return "mono"
        if epi:
            return "epi"
        return "other"

    def __repr__(self) -> str:
        rows = [list(r) for r in self.matrix]
        return f"Homomorphism({self.domain} -> {self.codomain}, {rows})"


def _matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if A.shape[1] == 0:
        return zeros(A.shape[0], B.shape[1])
    return A.dot(B)


# ---------------------------------------------------------------------------
# subquotients


def kernel_lattice(f: Homomorphism) -> np.ndarray:
    """Columns span ``{v in Z^n : f(v) = 0}`` in domain coordinates."""
    n, k = f.domain.ngens, f.codomain.ngens
    block = hstack(k, [f.matrix, -f.codomain.presentation])
    basis = nullspace(block)
    return basis[:n, :]


class Subquotient:
    """``(numerator + R) / (denominator + R)`` inside ``G = Z^n / R``.

    ``numerator`` and ``denominator`` are matrices whose columns are elements
    of ``G``; the denominator must lie in the numerator modulo ``R``.  The
    result is presented by invariant-factor style generators: ``group`` is
    the abstract group, ``lift`` has the chosen representatives of its
    generators as columns, and :meth:`coords` maps a representative back.
    """

    def __init__(self, ambient: FgAbGroup, numerator, denominator=None):
        n = ambient.ngens
        S = as_matrix(numerator) if not isinstance(numerator, np.ndarray) else numerator
        if S.shape[0] != n:
            S = as_matrix(S, (n, S.shape[1]))
        T = zeros(n, 0) if denominator is None else denominator
        if not isinstance(T, np.ndarray):
            T = as_matrix(T)
        if T.shape[0] != n:
            raise ValueError("denominator has wrong number of rows")
        self.ambient = ambient
        self.numerator = S
        self.denominator = T
        s = S.shape[1]
        R = ambient.presentation

        # solver for "v = S c mod R"
        self._num_solver = _SNF(hstack(n, [S, R]))
        self._s = s

        rel_block = hstack(n, [S, -T, -R])
        rel = nullspace(rel_block)[:s, :] if s else zeros(0, 0)
        if s and not self._denominator_inside(T):
            raise ValueError("denominator is not contained in the numerator")

        snf = _SNF(rel) if s else None
        orders, keep = [], []
        for i in range(s):
            d = snf.diag[i] if i < snf.rank else 0
            if d != 1:
                orders.append(d)
                keep.append(i)
        self.group = FgAbGroup(tuple(orders))
        to = zeros(len(keep), s)
        lift_coeffs = zeros(s, len(keep))
        for a, i in enumerate(keep):
            for j in range(s):
                to[a, j] = snf.U[i][j]
                lift_coeffs[j, a] = snf.U_inv[j][i]
        self._to = to
        lift = _matmul(S, lift_coeffs) if s else zeros(n, 0)
        for a in range(lift.shape[1]):
            lift[:, a] = list(ambient.reduce(lift[:, a]))
        self._normalize_free_signs(lift)
        self.lift = lift

    def _normalize_free_signs(self, lift: np.ndarray) -> None:
        # infinite generators are only defined up to sign; make the last
        # nonzero coordinate of each representative positive
        for a, d in enumerate(self.group.orders):
            if d:
                continue
            col = [int(v) for v in lift[:, a]]
            last = next((v for v in reversed(col) if v), 0)
            if last < 0:
                lift[:, a] = [-v for v in col]
                self._to[a, :] = -self._to[a, :]

    def _denominator_inside(self, T: np.ndarray) -> bool:
        return all(self._num_solver.solve(list(T[:, j])) is not None for j in range(T.shape[1]))

    def contains(self, v) -> bool:
        return self._num_solver.solve(self.ambient.reduce(v)) is not None

    def coords(self, v) -> tuple[int, ...]:
        """Coordinates in ``group`` of the class of the ambient element ``v``."""
        z = self._num_solver.solve(self.ambient.reduce(v))
        if z is None:
            raise ValueError(f"{tuple(v)} is not in the numerator")
        c = z[: self._s]
        out = [sum(int(self._to[a, j]) * c[j] for j in range(self._s)) for a in range(self._to.shape[0])]
        return self.group.reduce(out)

    def representative(self, coords) -> tuple[int, ...]:
        coords = self.group.reduce(coords)
        if not coords:
            return self.ambient.zero()
        return self.ambient.reduce(_matmul(self.lift, _column(coords))[:, 0])

    def inclusion(self) -> Homomorphism:
        """The map to the ambient group; only valid when the denominator is zero."""
        return Homomorphism(self.group, self.ambient, self.lift)

    def projection(self) -> Homomorphism:
        """The quotient map from the ambient group; only valid when the numerator is everything."""
        cols = [self.coords(e) for e in self.ambient.gens()]
        return Homomorphism(self.ambient, self.group, _columns(cols, self.group.ngens))

    def __repr__(self) -> str:
        return f"Subquotient({self.group} of {self.ambient})"


def _columns(cols: Sequence[Sequence[int]], n_rows: int) -> np.ndarray:
    out = zeros(n_rows, len(cols))
    for j, c in enumerate(cols):
        for i in range(n_rows):
            out[i, j] = int(c[i])
    return out


def induced_map(src: Subquotient, dst: Subquotient, f: Homomorphism) -> Homomorphism:
    """The map ``src.group -> dst.group`` induced by an ambient map ``f``.

    Raises ValueError when ``f`` does not carry numerator into numerator and
    denominator into denominator.
    """
    if f.domain != src.ambient or f.codomain != dst.ambient:
        raise ValueError("ambient map does not match the subquotients")
    for j in range(src.denominator.shape[1]):
        if any(dst.coords(f(src.denominator[:, j]))):
            raise ValueError("map does not preserve denominators")
    for j in range(src.numerator.shape[1]):
        if not dst.contains(f(src.numerator[:, j])):
            raise ValueError("map does not preserve numerators")
    cols = [dst.coords(f(src.lift[:, a])) for a in range(src.group.ngens)]
    return Homomorphism(src.group, dst.group, _columns(cols, dst.group.ngens))


def kernel(f: Homomorphism) -> tuple[FgAbGroup, Homomorphism]:
    sq = Subquotient(f.domain, kernel_lattice(f))
    return sq.group, sq.inclusion()


def cokernel(f: Homomorphism) -> tuple[FgAbGroup, Homomorphism]:
    sq = Subquotient(f.codomain, identity(f.codomain.ngens), f.matrix)
    return sq.group, sq.projection()


def image(f: Homomorphism) -> tuple[FgAbGroup, Homomorphism]:
    sq = Subquotient(f.codomain, f.matrix)
    return sq.group, sq.inclusion()


# ---------------------------------------------------------------------------
# homology of a composable sequence


def _check_complex(maps: Sequence[Homomorphism]) -> None:
    for k in range(len(maps) - 1):
        if maps[k].codomain != maps[k + 1].domain:
            raise ValueError(f"maps {k} and {k + 1} are not composable")
        if not maps[k + 1].compose(maps[k]).is_zero():
            raise ValueError(f"not a complex: composite at index {k} is nonzero")


def homology_subquotient(maps: Sequence[Homomorphism], i: int) -> Subquotient:
    """Homology at object ``i`` of ``A_0 -> A_1 -> ... -> A_len``.

    ``maps[k]`` goes from ``A_k`` to ``A_{k+1}``.  The result is
    ``ker(maps[i]) / im(maps[i-1])``, with missing maps read as zero.
    """
    if not maps:
        raise ValueError("empty sequence")
    if not 0 <= i <= len(maps):
        raise IndexError(f"object index {i} out of range")
    _check_complex(maps)
    obj = maps[i].domain if i < len(maps) else maps[-1].codomain
    num = kernel_lattice(maps[i]) if i < len(maps) else identity(obj.ngens)
    den = maps[i - 1].matrix if i > 0 else None
    return Subquotient(obj, num, den)


def homology_at(maps: Sequence[Homomorphism], i: int) -> FgAbGroup:
    return homology_subquotient(maps, i).group
