"""Exact lattice geometry over the integers and rationals.

Everything here works with Python ``int`` and :class:`fractions.Fraction`;
no floating point is used anywhere.  Polytopes are kept in double
description (vertices and facet inequalities) and the conversions between
the two are brute-force enumerations, which is fine at the small dimensions
(N <= 6) this package targets.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

Vector = tuple  # tuple[int, ...] or tuple[Fraction, ...]


def _gcd_all(values: Iterable[int]) -> int:
    return reduce(math.gcd, values, 0)


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries.

    >>> primitive((2, 4, 6))
    (1, 2, 3)
    """
    g = _gcd_all(abs(int(x)) for x in v)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(int(x) // g for x in v)


def is_primitive(v: Sequence[int]) -> bool:
    return _gcd_all(abs(int(x)) for x in v) == 1


def _integral_scaling(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Smallest positive multiple of a rational vector that is integral and primitive."""
    den = reduce(lambda a, b: a * b // math.gcd(a, b), (Fraction(x).denominator for x in v), 1)
    return primitive(tuple(int(Fraction(x) * den) for x in v))


# ---------------------------------------------------------------------------
# Integer matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def from_json(cls, data: dict) -> IntMatrix:
        return cls(int(data["rows"]), int(data["cols"]), tuple(int(x) for x in data["entries"]))

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "entries": list(self.entries)}

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def transpose(self) -> IntMatrix:
        return IntMatrix.from_rows([list(col) for col in zip(*self.to_rows())], self.rows)

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        b = other.to_rows()
        out = [
            [sum(a[k] * b[k][j] for k in range(self.cols)) for j in range(other.cols)]
            for a in self.to_rows()
        ]
        return IntMatrix.from_rows(out, other.cols)

    def det(self) -> int:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return bareiss_det(self.to_rows())

    def diagonal(self) -> list[int]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]


def bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    """Fraction-free Gaussian elimination determinant."""
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, S, V)`` with ``U @ m @ V == S`` and S in Smith form.

    U and V are unimodular, S is diagonal with nonnegative entries
    d1 | d2 | ... .  The pivot is always the entry of least absolute value
    in the remaining block, which keeps intermediate entries small.
    """
    r, c = m.rows, m.cols
    a = m.to_rows()
    u = IntMatrix.identity(r).to_rows()
    v = IntMatrix.identity(c).to_rows()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row dst += q * row src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    for t in range(min(r, c)):
        while True:
            best = None
            for i in range(t, r):
                for j in range(t, c):
                    x = a[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best and best[0] == 1:
                    break
            if best is None:
                break
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
            p = a[t][t]
            clean = True
            for i in range(t + 1, r):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, c):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    clean = clean and a[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, r) for j in range(t + 1, c) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        if all(a[i][j] == 0 for i in range(t, r) for j in range(t, c)):
            break

    return IntMatrix.from_rows(u, r), IntMatrix.from_rows(a, c), IntMatrix.from_rows(v, c)


def smith_invariants(m: IntMatrix) -> list[int]:
    """Nonzero diagonal of the Smith normal form, without the transforms.

    Works on sparse rows, which is what boundary matrices of nerves look
    like.  Once a pivot divides its whole row, the row and column drop out.
    """
    rows: dict[int, dict[int, int]] = {}
    for i in range(m.rows):
        row = {j: m[i, j] for j in range(m.cols) if m[i, j]}
        if row:
            rows[i] = row
    cols: dict[int, set[int]] = {}
    for i, row in rows.items():
        for j in row:
            cols.setdefault(j, set()).add(i)

    def set_entry(i, j, x):
        if x:
            rows[i][j] = x
            cols.setdefault(j, set()).add(i)
        else:
            rows[i].pop(j, None)
            cols[j].discard(i)

    diag = []
    while rows:
        pi, pj, pv = None, None, None
        for i, row in rows.items():
            for j, x in row.items():
                if pv is None or abs(x) < abs(pv):
                    pi, pj, pv = i, j, x
                    if abs(x) == 1:
                        break
            if pv is not None and abs(pv) == 1:
                break
        # clear the pivot column with row operations
        for i in list(cols[pj]):
            if i == pi:
                continue
            q = rows[i][pj] // pv
            for j, x in list(rows[pi].items()):
                set_entry(i, j, rows[i].get(j, 0) - q * x)
            if not rows[i]:
                del rows[i]
        if len(cols[pj]) > 1:
            continue  # remainders left; a smaller pivot exists now
        # clear the pivot row with column operations; only the pivot row is touched
        rest = [(j, x) for j, x in rows[pi].items() if j != pj]
        if all(x % pv == 0 for _, x in rest):
            for j, _ in rest:
                cols[j].discard(pi)
            cols[pj].discard(pi)
            del rows[pi]
            diag.append(abs(pv))
            continue
        for j, x in rest:
            set_entry(pi, j, x - (x // pv) * pv)
    # normalise to a divisibility chain
    diag.sort()
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            g = math.gcd(diag[i], diag[j])
            diag[i], diag[j] = g, diag[i] * diag[j] // g
    return diag


def rank(m: IntMatrix) -> int:
    """Rank over the rationals, read off the Smith normal form."""
    return len(smith_invariants(m))


def rational_rank(rows: Sequence[Sequence]) -> int:
    """Rank by plain Gaussian elimination over Q."""
    return len(_rref(rows)[1])


def _rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    a = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    if not a:
        return a, pivots
    ncols = len(a[0])
    row = 0
    for col in range(ncols):
        piv = next((i for i in range(row, len(a)) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        p = a[row][col]
        a[row] = [x / p for x in a[row]]
        for i in range(len(a)):
            if i != row and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[row])]
        pivots.append(col)
        row += 1
        if row == len(a):
            break
    return a, pivots


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple[Fraction, ...]]:
    """Basis of the rational right kernel of a matrix with ``ncols`` columns."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    a, pivots = _rref(rows)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for r, p in enumerate(pivots):
            vec[p] = -a[r][f]
        basis.append(tuple(vec))
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence) -> tuple[Fraction, ...] | None:
    """Unique solution of a square nonsingular system, or None if singular."""
    n = len(rows)
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    a, pivots = _rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) > n:
        return None
    return tuple(a[i][n] for i in range(n))


def inverse(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(rows)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(rows)]
    a, pivots = _rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in a[:n]]


# ---------------------------------------------------------------------------
# Cones
# ---------------------------------------------------------------------------


class NotTopDimensionalError(ValueError):
    pass


class NotUnimodularError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Cone:
    """A cone of a fan, given by the sorted indices of its rays."""

    ray_indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(sorted(int(i) for i in self.ray_indices))
        if len(set(idx)) != len(idx):
            raise ValueError(f"repeated ray index in cone {self.ray_indices}")
        if any(i < 0 for i in idx):
            raise ValueError(f"negative ray index in cone {self.ray_indices}")
        object.__setattr__(self, "ray_indices", idx)

    def __len__(self):
        return len(self.ray_indices)

    def __iter__(self):
        return iter(self.ray_indices)

    def __contains__(self, i):
        return i in self.ray_indices

    @property
    def dim(self) -> int:
        return len(self.ray_indices)


def dual_pairs(fan, sigma: Cone) -> list[tuple[tuple[int, ...], int]]:
    """Dual basis of a smooth top-dimensional cone, paired with the ray each vector is dual to.

    Returns ``[(nu_1, r_1), ..., (nu_N, r_N)]`` sorted lexicographically by
    ``nu``, where ``<nu_i, rays[r_j]> = delta_ij``.
    """
    sigma = sigma if isinstance(sigma, Cone) else Cone(tuple(sigma))
    n = fan.rank
    if len(sigma) != n:
        raise NotTopDimensionalError(
            f"cone {sigma.ray_indices} has {len(sigma)} rays, expected {n}"
        )
    gens = [fan.rays[i] for i in sigma.ray_indices]
    d = bareiss_det(gens)
    if abs(d) != 1:
        raise NotUnimodularError(
            f"cone {sigma.ray_indices} has generator determinant {d}, not +-1"
        )
    inv = inverse(gens)  # gens @ inv = I, so column j of inv is dual to gens[j]
    pairs = []
    for j, ray in enumerate(sigma.ray_indices):
        nu = tuple(int(inv[i][j]) for i in range(n))
        pairs.append((nu, ray))
    pairs.sort()
    return pairs


def dual_cone_basis(fan, sigma: Cone) -> list[tuple[int, ...]]:
    """Generators of the dual of a smooth N-cone, sorted lexicographically."""
    return [nu for nu, _ in dual_pairs(fan, sigma)]


# ---------------------------------------------------------------------------
# Polytopes
# ---------------------------------------------------------------------------


class OriginNotInteriorError(ValueError):
    pass


def _supporting_hyperplanes(points: Sequence[Vector], n: int) -> list[tuple[tuple[int, ...], Fraction]]:
    """All facet inequalities ``<a, x> >= b`` of conv(points), assumed full dimensional."""
    found: dict[tuple[int, ...], Fraction] = {}
    p0s = points
    for subset in itertools.combinations(range(len(p0s)), n):
        base = p0s[subset[0]]
        diffs = [[x - y for x, y in zip(p0s[i], base)] for i in subset[1:]]
        ker = nullspace(diffs, n) if n > 1 else [(Fraction(1),)]
        if len(ker) != 1:
            continue
        normal = _integral_scaling(ker[0])
        b = Fraction(dot(normal, base))
        vals = [dot(normal, p) for p in p0s]
        # parallel opposite facets share a normal up to sign, so orient before deduplicating
        if all(v >= b for v in vals):
            found[normal] = b
        elif all(v <= b for v in vals):
            found[tuple(-x for x in normal)] = -b
    return sorted(found.items())


@dataclass(frozen=True)
class LatticePolytope:
    """A rational polytope in double description, full dimensional or a single point.

    ``facets`` holds pairs ``(normal, offset)`` meaning ``<normal, x> >= offset``,
    with ``normal`` a primitive integer vector.
    """

    vertices: tuple[tuple[Fraction, ...], ...]
    facets: tuple[tuple[tuple[int, ...], Fraction], ...]

    @property
    def dim(self) -> int:
        return len(self.vertices[0])

    @classmethod
    def from_vertices(cls, points: Iterable[Sequence]) -> LatticePolytope:
        pts = sorted({tuple(Fraction(x) for x in p) for p in points})
        if not pts:
            raise ValueError("empty point set")
        n = len(pts[0])
        if len(pts) == 1:
            # a single point; described by the 2N coordinate half-spaces
            p = pts[0]
            facets = []
            for i in range(n):
                e = tuple(int(i == j) for j in range(n))
                facets += [(e, p[i]), (tuple(-x for x in e), -p[i])]
            return cls((p,), tuple(sorted(facets)))
        if rational_rank([[x - y for x, y in zip(p, pts[0])] for p in pts[1:]]) < n:
            raise ValueError("point set is not full dimensional")
        if n == 1:
            lo, hi = pts[0], pts[-1]
            facets = [((1,), lo[0]), ((-1,), -hi[0])]
            return cls((lo, hi), tuple(sorted(facets)))
        facets = _supporting_hyperplanes(pts, n)
        verts = [
            p for p in pts
            if rational_rank([a for a, b in facets if dot(a, p) == b]) == n
        ]
        return cls(tuple(verts), tuple(facets))

    @classmethod
    def from_facets(cls, inequalities: Iterable[tuple[Sequence[int], object]]) -> LatticePolytope:
        ineqs = [(tuple(int(x) for x in a), Fraction(b)) for a, b in inequalities]
        verts = polyhedron_vertices(ineqs)
        if not verts:
            raise ValueError("inequalities define an empty polytope")
        return cls.from_vertices(verts)

    @classmethod
    def from_json(cls, data: dict) -> LatticePolytope:
        return cls.from_vertices(data["vertices"])

    def to_json(self) -> dict:
        return {"vertices": [[_json_number(x) for x in v] for v in self.vertices]}

    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    def contains(self, x: Sequence) -> bool:
        return all(dot(a, x) >= b for a, b in self.facets)

    def interior_contains(self, x: Sequence) -> bool:
        return all(dot(a, x) > b for a, b in self.facets)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for v in self.vertices for x in v)

    def transform(self, matrix: Sequence[Sequence[int]]) -> LatticePolytope:
        """Image under x -> M x."""
        return LatticePolytope.from_vertices(
            [tuple(dot(row, v) for row in matrix) for v in self.vertices]
        )

    def __eq__(self, other):
        return isinstance(other, LatticePolytope) and self.vertex_set() == other.vertex_set()

    def __hash__(self):
        return hash(self.vertex_set())


def _json_number(x: Fraction):
    return int(x) if x.denominator == 1 else str(x)


def polyhedron_vertices(ineqs: Sequence[tuple[Sequence[int], Fraction]]) -> list[tuple[Fraction, ...]]:
    """Vertices of ``{x : <a, x> >= b}`` by intersecting every N-subset of hyperplanes."""
    if not ineqs:
        return []
    n = len(ineqs[0][0])
    out = set()
    for subset in itertools.combinations(ineqs, n):
        x = solve([a for a, _ in subset], [b for _, b in subset])
        if x is None:
            continue
        if all(dot(a, x) >= b for a, b in ineqs):
            out.add(x)
    return sorted(out)


def normals_positively_span(normals: Sequence[Sequence[int]]) -> bool:
    """True iff the vectors positively span R^N, i.e. ``{a : <a,x> >= b}`` is bounded."""
    if not normals:
        return False
    n = len(normals[0])
    if rational_rank(normals) < n:
        return False
    pts = list(normals) + [tuple(0 for _ in range(n))]
    hull = LatticePolytope.from_vertices(pts)
    return all(b < 0 for _, b in hull.facets)


def points_in_polyhedron(ineqs: Sequence[tuple[Sequence[int], object]]) -> list[tuple[int, ...]]:
    """Lattice points of a bounded polyhedron ``{x : <a, x> >= b}``, lexicographically sorted.

    The polyhedron may be lower dimensional or empty.  Raises ``ValueError``
    when it is unbounded.
    """
    ineqs = [(tuple(int(x) for x in a), Fraction(b)) for a, b in ineqs]
    if not normals_positively_span([a for a, _ in ineqs]):
        raise ValueError("polyhedron is unbounded")
    verts = polyhedron_vertices(ineqs)
    if not verts:
        return []
    n = len(verts[0])
    ranges = [
        range(math.ceil(min(v[i] for v in verts)), math.floor(max(v[i] for v in verts)) + 1)
        for i in range(n)
    ]
    return [p for p in itertools.product(*ranges) if all(dot(a, p) >= b for a, b in ineqs)]


def lattice_points(p: LatticePolytope) -> list[tuple[int, ...]]:
    """All integer points of a polytope in lexicographic order."""
    n = p.dim
    ranges = [
        range(math.ceil(min(v[i] for v in p.vertices)), math.floor(max(v[i] for v in p.vertices)) + 1)
        for i in range(n)
    ]
    return [x for x in itertools.product(*ranges) if p.contains(x)]


def polar_dual(p: LatticePolytope) -> LatticePolytope:
    """``{nu : <nu, v> >= -1 for every vertex v}`` for a polytope with 0 in its interior."""
    if not all(b < 0 for _, b in p.facets):
        raise OriginNotInteriorError("origin is not in the interior of the polytope")
    verts = tuple(sorted(tuple(Fraction(x) / -b for x in a) for a, b in p.facets))
    return LatticePolytope.from_vertices(verts)


def is_reflexive(p: LatticePolytope) -> bool:
    """Integral vertices, 0 the only interior lattice point, integral polar dual."""
    if not p.is_integral():
        return False
    interior = [x for x in lattice_points(p) if p.interior_contains(x)]
    if interior != [tuple(0 for _ in range(p.dim))]:
        return False
    return polar_dual(p).is_integral()
