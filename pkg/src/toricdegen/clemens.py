"""Clemens' complex of the central fibre, its rational homology and what it counts."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from . import lattice
from .degeneration import (
    EmptyDegenerationError,
    FamilySpec,
    Partition,
    Strata,
    Component,
    strata_of,
    cones_containing,
    components,
    is_boundary_cell,
    strata,
)
from .lattice import IntMatrix
from .toric import Fan, delta_polytope


class ComplexError(ValueError):
    pass


class CellComplex:
    """Abstract simplicial complex with vertices 0..m-1.

    ``cells[d]`` is the sorted tuple of d-simplices, each a sorted vertex tuple.
    Boundary signs follow the alternating convention on sorted vertex lists.
    Construction checks closure under faces and that the boundary squares to zero.
    """

    def __init__(self, simplices: Iterable[Sequence[int]], check: bool = True):
        by_dim: dict[int, set] = {}
        for s in simplices:
            s = tuple(sorted(set(int(v) for v in s)))
            if s:
                by_dim.setdefault(len(s) - 1, set()).add(s)
        top = max(by_dim, default=-1)
        self.cells: dict[int, tuple[tuple[int, ...], ...]] = {
            d: tuple(sorted(by_dim.get(d, ()))) for d in range(top + 1)
        }
        self._index = {d: {c: i for i, c in enumerate(cs)} for d, cs in self.cells.items()}
        if check:
            self._check_faces()
            for d in range(2, top + 1):
                for cell in self.cells[d]:
                    if any(self._boundary_chain(self._boundary_chain({cell: 1})).values()):
                        raise ComplexError(f"boundary o boundary != 0 on cell {cell}")

    def _check_faces(self) -> None:
        for d in range(1, self.dim + 1):
            for cell in self.cells[d]:
                for face in itertools.combinations(cell, d):
                    if face not in self._index[d - 1]:
                        raise ComplexError(f"face {face} of cell {cell} is missing")

    @staticmethod
    def _boundary_chain(chain: dict) -> dict:
        out: dict = {}
        for cell, c in chain.items():
            for i in range(len(cell)):
                face = cell[:i] + cell[i + 1:]
                out[face] = out.get(face, 0) + (-c if i % 2 else c)
        return {f: c for f, c in out.items() if c}

    @property
    def dim(self) -> int:
        return max(self.cells, default=-1)

    def count(self, d: int) -> int:
        return len(self.cells.get(d, ()))

    def all_cells(self) -> list[tuple[int, ...]]:
        return [c for d in sorted(self.cells) for c in self.cells[d]]

    def boundary_matrix(self, d: int) -> IntMatrix:
        """Matrix of the boundary map from d-cells to (d-1)-cells."""
        rows, cols = self.count(d - 1), self.count(d)
        entries = [0] * (rows * cols)
        if d >= 1:
            index = self._index[d - 1]
            for j, cell in enumerate(self.cells.get(d, ())):
                for i in range(len(cell)):
                    face = cell[:i] + cell[i + 1:]
                    entries[index[face] * cols + j] = -1 if i % 2 else 1
        return IntMatrix(rows, cols, tuple(entries))

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * self.count(d) for d in self.cells)

    def to_json(self) -> dict:
        return {"cells": {str(d): [list(c) for c in cs] for d, cs in self.cells.items()}}

    @classmethod
    def from_json(cls, data: Mapping) -> CellComplex:
        return cls(c for cs in data["cells"].values() for c in cs)

    def __eq__(self, other):
        return isinstance(other, CellComplex) and self.cells == other.cells

    def __repr__(self):
        counts = ", ".join(str(self.count(d)) for d in sorted(self.cells))
        return f"CellComplex(f-vector=({counts}))"


@dataclass(frozen=True)
class HomologyProfile:
    betti: tuple[int, ...]

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * b for i, b in enumerate(self.betti))

    def __getitem__(self, i: int) -> int:
        return self.betti[i] if 0 <= i < len(self.betti) else 0


def sphere_betti(dim: int) -> tuple[int, ...]:
    if dim == 0:
        return (2,)
    return (1,) + (0,) * (dim - 1) + (1,)


def build_clemens_complex(n_components: int, intersects) -> CellComplex:
    """Nerve of the components: one (|S|-1)-simplex per subset S with nonempty intersection.

    ``intersects`` is either a :class:`Strata` or a predicate on sorted tuples
    of component indices.  The oracle must be downward closed; a nonempty set
    with an empty subset is reported as an inconsistency.
    """
    if isinstance(intersects, Strata):
        oracle: Callable = intersects.nonempty
    else:
        oracle = intersects
    found: list[tuple[int, ...]] = []
    accepted: set = set()

    def extend(prefix: tuple[int, ...]) -> None:
        start = prefix[-1] + 1 if prefix else 0
        for j in range(start, n_components):
            key = prefix + (j,)
            if oracle(key):
                found.append(key)
                accepted.add(key)
                extend(key)

    extend(())
    for s in found:
        for face in itertools.combinations(s, len(s) - 1):
            if face and face not in accepted:
                raise ComplexError(
                    f"intersection oracle marks {s} nonempty but its subset {face} empty"
                )
    missing = [(j,) for j in range(n_components) if (j,) not in accepted]
    if missing:
        raise ComplexError(f"components {[m[0] for m in missing]} are empty")
    return CellComplex(found)


def complex_from_maximal_faces(faces: Iterable[Iterable[int]]) -> CellComplex:
    """Downward closure of a list of maximal simplices (incidence-file input)."""
    cells = set()
    for f in faces:
        f = tuple(sorted(set(f)))
        for r in range(1, len(f) + 1):
            cells.update(itertools.combinations(f, r))
    return CellComplex(cells)


def parse_incidence(text: str) -> list[tuple[int, ...]]:
    """One maximal nonempty component subset per line, comma separated."""
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            out.append(tuple(int(x) for x in line.split(",") if x.strip()))
        except ValueError:
            raise ComplexError(f"line {lineno}: expected comma-separated integers") from None
    return out


def homology(complex_: CellComplex) -> HomologyProfile:
    """Rational Betti numbers b_d = #d-cells - rank d_d - rank d_{d+1}."""
    top = complex_.dim
    ranks = {d: lattice.rank(complex_.boundary_matrix(d)) for d in range(1, top + 1)}
    betti = tuple(
        complex_.count(d) - ranks.get(d, 0) - ranks.get(d + 1, 0) for d in range(top + 1)
    )
    return HomologyProfile(betti)


def clemens_complex(spec: FamilySpec) -> CellComplex:
    st = strata(spec)
    if not st.components:
        raise EmptyDegenerationError("degeneration empty; no monodromy statement")
    return build_clemens_complex(len(st.components), st)


def max_jordan_block_count(spec: FamilySpec) -> int:
    """Number of Jordan blocks of size n+1, i.e. b_n of the Clemens complex."""
    return homology(clemens_complex(spec))[spec.n]


@dataclass
class SphereReport:
    cells: list[tuple[int, ...]]
    bijection_ok: bool
    order_reversing_ok: bool
    betti: tuple[int, ...]
    expected_betti: tuple[int, ...]
    mismatches: list[tuple[int, ...]]

    @property
    def passed(self) -> bool:
        return self.bijection_ok and self.order_reversing_ok and self.betti == self.expected_betti

    def to_json(self) -> dict:
        return {
            "model": "nerve model",
            "cells": len(self.cells),
            "bijection": self.bijection_ok,
            "order_reversing": self.order_reversing_ok,
            "betti": list(self.betti),
            "expected_betti": list(self.expected_betti),
            "mismatches": [list(m) for m in self.mismatches],
        }


def boundary_complex_cells(fan: Fan) -> list[tuple[int, ...]]:
    """Cells of the subdivision of the boundary of Delta induced by the fan, as ray sets.

    Found geometrically: a ray subset is a cell when its points lie on a facet
    of Delta, are affinely independent and their barycentre is carried by
    exactly those rays.
    """
    delta = delta_polytope(fan)
    out = []
    for r in range(1, fan.rank + 1):
        for tau in itertools.combinations(range(fan.nrays), r):
            if is_boundary_cell(fan, tau, delta):
                out.append(tau)
    return out


def _conv_contains(fan: Fan, big: Sequence[int], small: Sequence[int]) -> bool:
    """Every ray of ``small`` lies in conv(rays of ``big``)."""
    pts = [fan.rays[i] for i in big]
    for i in small:
        target = list(fan.rays[i]) + [1]
        rows = [list(col) for col in zip(*[list(p) + [1] for p in pts])]
        # least-norm not needed: affinely independent points give a unique solution if any
        sol = _affine_coords(rows, target)
        if sol is None or any(x < 0 for x in sol):
            return False
    return True


def _affine_coords(rows, target):
    ncols = len(rows[0])
    aug = [r + [t] for r, t in zip(rows, target)]
    a, pivots = lattice._rref(aug)
    if ncols in pivots:
        return None
    sol = [0] * ncols
    for r, p in enumerate(pivots):
        sol[p] = a[r][ncols]
    return sol


def verify_sphere_theorem(fan: Fan, partition: Partition | None = None) -> SphereReport:
    """Hypersurface case: Clemens' complex against the boundary of Delta.

    (a) the nonempty intersections of the D_rho (ray subsets spanning cones)
    biject with the cells conv(tau) of the boundary of Delta, and
    cap_{tau'} D subset cap_{tau} D iff conv(tau') contains conv(tau);
    (b) the Betti numbers are those of S^(N-1).
    """
    if partition is None:
        partition = Partition.single_block(fan.nrays)
    if partition.k != 1:
        raise ComplexError("sphere theorem applies to the single-block (hypersurface) case")
    partition.validate(fan.nrays)
    st = strata_of(fan, [Component((i,)) for i in range(fan.nrays)])
    comp_rays = [c.rays[0] for c in st.components]
    pi_cells = sorted(
        tuple(sorted(comp_rays[i] for i in key)) for key in st.intersections
    )
    geo_cells = sorted(boundary_complex_cells(fan))
    mismatches = sorted(set(pi_cells) ^ set(geo_cells))

    orbits = {c: set(cones_containing(fan, c)) for c in pi_cells}
    order_ok = True
    for a in pi_cells:
        for b in pi_cells:
            stratum_inclusion = orbits[b] <= orbits[a]  # cap_b D subset cap_a D
            if stratum_inclusion != _conv_contains(fan, b, a):
                order_ok = False
    cx = build_clemens_complex(len(st.components), st)
    return SphereReport(pi_cells, not mismatches, order_ok, homology(cx).betti,
                        sphere_betti(fan.rank - 1), mismatches)


@dataclass
class GenusReport:
    component_terms: int
    stratum_terms: int
    top_homology: int
    expected: int | None
    assumption: str

    @property
    def geometric_genus(self) -> int:
        return self.component_terms + self.stratum_terms + self.top_homology

    @property
    def passed(self) -> bool:
        return self.expected is None or self.geometric_genus == self.expected

    def to_json(self) -> dict:
        return {
            "sum_pg_components": self.component_terms,
            "sum_strata_forms": self.stratum_terms,
            "dim_Hn_clemens": self.top_homology,
            "pg": self.geometric_genus,
            "expected": self.expected,
            "assumption": self.assumption,
        }


def reduced_genus_check(spec: FamilySpec, expected: int | None = 1) -> GenusReport:
    """p_g(X_t) = sum p_g(C_i) + sum h^0(C_I, Omega^(n-k)) + dim H_n(Pi(X_0)).

    Every stratum is a smooth complete toric variety, which carries no
    holomorphic q-forms for q > 0, so the first two sums are 0 by assumption.
    ``expected`` defaults to 1, the Calabi-Yau value.
    """
    b = max_jordan_block_count(spec)
    return GenusReport(
        0, 0, b, expected,
        "smooth complete toric strata have no nonzero holomorphic q-forms (q > 0)",
    )
