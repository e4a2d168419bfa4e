"""One-parameter complete-intersection families G_{i,t} = t F_i - prod_{rho in pi_i} x_rho.

The central fibre X_0 is the union of the toric strata C_sigma = cap_{rho in sigma} D_rho
over the transversals sigma of the partition (one ray per block) whose rays span
a cone of the fan.  Everything here is combinatorics on ray indices.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import lattice
from .lattice import Cone
from .toric import Fan, FanError, Section, TorusDivisor, build_projective_fan


class DegenerationError(ValueError):
    pass


class EmptyDegenerationError(DegenerationError):
    pass


@dataclass(frozen=True)
class Partition:
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(sorted(int(i) for i in b)) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if not blocks:
            raise DegenerationError("partition must have at least one block")
        if any(not b for b in blocks):
            raise DegenerationError("partition has an empty block")
        flat = [i for b in blocks for i in b]
        if len(set(flat)) != len(flat):
            raise DegenerationError("partition blocks are not disjoint")

    def validate(self, nrays: int) -> None:
        flat = sorted(i for b in self.blocks for i in b)
        if flat != list(range(nrays)):
            raise DegenerationError(
                f"partition does not cover the rays 0..{nrays - 1} exactly once"
            )

    def block_of(self, ray: int) -> int:
        for i, b in enumerate(self.blocks):
            if ray in b:
                return i
        raise KeyError(ray)

    @property
    def k(self) -> int:
        return len(self.blocks)

    @classmethod
    def single_block(cls, nrays: int) -> Partition:
        return cls((tuple(range(nrays)),))

    @classmethod
    def from_json(cls, data) -> Partition:
        return cls(tuple(tuple(b) for b in data["blocks"]))

    def to_json(self) -> dict:
        return {"blocks": [list(b) for b in self.blocks]}


@dataclass(frozen=True, order=True)
class Component:
    """A transversal sigma of the partition; C_sigma is a component of X_0 when nonempty."""

    rays: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(sorted(int(i) for i in self.rays)))

    def __iter__(self):
        return iter(self.rays)

    def __len__(self):
        return len(self.rays)


def block_divisor(fan: Fan, block: Iterable[int]) -> TorusDivisor:
    return TorusDivisor.of_rays(fan, block)


@dataclass(frozen=True)
class FamilySpec:
    """Fan, partition and one section F_i of O(sum_{rho in pi_i} D_rho) per block."""

    fan: Fan
    partition: Partition
    sections: tuple[Section, ...]
    label: str = field(default="", compare=False)
    claimed_component_count: int | None = field(default=None, compare=False)

    def __post_init__(self):
        self.partition.validate(self.fan.nrays)
        if len(self.sections) != self.partition.k:
            raise DegenerationError(
                f"{len(self.sections)} sections given for {self.partition.k} blocks"
            )
        for block, sec in zip(self.partition.blocks, self.sections):
            if sec.divisor != block_divisor(self.fan, block):
                raise DegenerationError(f"section for block {block} has the wrong divisor class")
        if self.n < 1:
            raise DegenerationError(f"fibre dimension n = N - k = {self.n} must be at least 1")

    @property
    def k(self) -> int:
        return self.partition.k

    @property
    def n(self) -> int:
        return self.fan.rank - self.partition.k

    @classmethod
    def generic(cls, fan: Fan, partition: Partition, label: str = "") -> FamilySpec:
        """All-ones coefficient tables over each block's section polytope."""
        partition.validate(fan.nrays)
        secs = tuple(Section.generic(fan, block_divisor(fan, b)) for b in partition.blocks)
        return cls(fan, partition, secs, label=label)


def cone_membership(fan: Fan, tau: Iterable[int]) -> bool:
    """True iff the rays of tau lie in a common maximal cone, i.e. span a cone of the fan."""
    tau = set(tau)
    if any(not 0 <= i < fan.nrays for i in tau):
        raise FanError(f"ray indices {sorted(tau)} out of range")
    return any(tau.issubset(c.ray_indices) for c in fan.max_cones)


def cones_containing(fan: Fan, tau: Iterable[int]) -> list[Cone]:
    """All cones of the (simplicial) fan containing tau: the orbits making up cap D_rho."""
    tau = frozenset(tau)
    found = set()
    for c in fan.max_cones:
        if tau.issubset(c.ray_indices):
            rest = [i for i in c.ray_indices if i not in tau]
            for r in range(len(rest) + 1):
                for extra in itertools.combinations(rest, r):
                    found.add(Cone(tuple(tau) + extra))
    return sorted(found)


def carrier_cone(fan: Fan, tau: Sequence[int]) -> tuple[int, ...] | None:
    """Geometric test that conv(tau) is a cell of the subdivision of the boundary of Delta.

    Locates the barycentre of the rays of tau in the fan by solving for its
    coordinates in each maximal cone; returns the rays carrying it with
    positive weight (the smallest cone containing it), or None if no maximal
    cone contains it.
    """
    n = fan.rank
    bary = [sum(fan.rays[i][j] for i in tau) for j in range(n)]
    for c in fan.max_cones:
        gens = [fan.rays[i] for i in c.ray_indices]
        # bary = sum_i lam_i gens[i]  <=>  gens^T lam = bary
        lam = lattice.solve([list(col) for col in zip(*gens)], bary)
        if lam is None or any(x < 0 for x in lam):
            continue
        return tuple(r for r, x in zip(c.ray_indices, lam) if x > 0)
    return None


def is_boundary_cell(fan: Fan, tau: Sequence[int], delta=None) -> bool:
    """conv(tau) is a (|tau|-1)-cell of the subdivision of the boundary of Delta induced by the fan."""
    from .toric import delta_polytope

    tau = tuple(sorted(tau))
    if not tau:
        return False
    delta = delta or delta_polytope(fan)
    pts = [fan.rays[i] for i in tau]
    on_facet = any(all(lattice.dot(a, p) == b for p in pts) for a, b in delta.facets)
    if not on_facet:
        return False
    if lattice.rational_rank([[x - y for x, y in zip(p, pts[0])] for p in pts[1:]]) != len(pts) - 1:
        return False
    return carrier_cone(fan, tau) == tau


def transversals(partition: Partition) -> Iterable[tuple[int, ...]]:
    for choice in itertools.product(*partition.blocks):
        yield tuple(sorted(choice))


def components(spec: FamilySpec) -> list[Component]:
    """Transversals sigma with C_sigma nonempty, sorted."""
    return sorted(
        Component(t) for t in transversals(spec.partition) if cone_membership(spec.fan, t)
    )


@dataclass(frozen=True)
class Strata:
    """Nonempty intersections of the components of X_0.

    ``intersections`` maps a sorted tuple of component indices to the
    dimension N - |union of their rays| of the common intersection.
    """

    components: tuple[Component, ...]
    intersections: dict
    ambient_rank: int

    def nonempty(self, subset: Iterable[int]) -> bool:
        return tuple(sorted(subset)) in self.intersections

    def dimension(self, subset: Iterable[int]) -> int:
        return self.intersections[tuple(sorted(subset))]

    def to_json(self) -> list[dict]:
        out = []
        for key, dim in sorted(self.intersections.items(), key=lambda kv: (len(kv[0]), kv[0])):
            rays = sorted(set().union(*(self.components[i].rays for i in key)))
            out.append({"components": list(key), "rays": rays, "dimension": dim})
        return out


def strata(spec: FamilySpec, comps: Sequence[Component] | None = None) -> Strata:
    """Enumerate all nonempty intersections of components.

    Intersections shrink as sets grow, so the search only extends subsets
    that are already nonempty.
    """
    comps = tuple(components(spec) if comps is None else comps)
    return strata_of(spec.fan, comps)


def strata_of(fan: Fan, comps: Sequence[Component]) -> Strata:
    """Nonempty intersections of the divisor strata C_sigma for the given ray sets."""
    comps = tuple(comps)
    n = fan.rank
    found: dict[tuple[int, ...], int] = {}

    def extend(prefix: tuple[int, ...], rays: frozenset) -> None:
        start = prefix[-1] + 1 if prefix else 0
        for j in range(start, len(comps)):
            new = rays | frozenset(comps[j].rays)
            if cone_membership(fan, new):
                key = prefix + (j,)
                found[key] = n - len(new)
                extend(key, new)

    extend((), frozenset())
    return Strata(comps, found, n)


@dataclass(frozen=True)
class FixedPointChain:
    """Output of the fixed-point construction for one component.

    ``coordinate_order`` lists the rays of tau with the replacement rays
    rho'_1..rho'_n first and the rays of sigma0 (block order) last, so that on
    the patch of tau the last k coordinates cut out C_sigma0.
    """

    sigma0: Component
    tau: Cone
    chain: tuple[Component, ...]
    replaced_blocks: tuple[int, ...]
    coordinate_order: tuple[int, ...]


def find_fixed_point_chain(spec: FamilySpec, sigma0: Component) -> FixedPointChain:
    fan, part = spec.fan, spec.partition
    sigma0 = sigma0 if isinstance(sigma0, Component) else Component(tuple(sigma0))
    if sorted(part.block_of(r) for r in sigma0.rays) != list(range(part.k)):
        raise DegenerationError(f"{sigma0.rays} is not a transversal of the partition")
    tau = next((c for c in fan.max_cones if set(sigma0.rays) <= set(c.ray_indices)), None)
    if tau is None:
        raise DegenerationError(f"no maximal cone contains {sigma0.rays}")
    by_block = {part.block_of(r): r for r in sigma0.rays}
    primed = [r for r in tau.ray_indices if r not in sigma0.rays]
    chain, blocks = [], []
    for rp in primed:
        b = part.block_of(rp)
        chain.append(Component(tuple(r for r in sigma0.rays if r != by_block[b]) + (rp,)))
        blocks.append(b)
    order = tuple(primed) + tuple(by_block[b] for b in range(part.k))
    return FixedPointChain(sigma0, tau, tuple(chain), tuple(blocks), order)


@dataclass(frozen=True)
class ChainCheck:
    union_size: int
    union_is_tau: bool
    chain_are_components: bool
    pairwise_cones: bool
    codim_ok: bool

    @property
    def passed(self) -> bool:
        return self.union_is_tau and self.chain_are_components and self.pairwise_cones and self.codim_ok


def verify_fixed_point_chain(spec: FamilySpec, result: FixedPointChain) -> ChainCheck:
    """Independent audit: union of all sigma is tau (size N), each chain member is a
    component, and each sigma0 u sigma_j spans a (k+1)-cone."""
    fan, part = spec.fan, spec.partition
    union = set(result.sigma0.rays).union(*(c.rays for c in result.chain))
    comps_ok = all(
        sorted(part.block_of(r) for r in c.rays) == list(range(part.k))
        and cone_membership(fan, c.rays)
        for c in result.chain
    )
    pair_sets = [set(result.sigma0.rays) | set(c.rays) for c in result.chain]
    pairs_ok = all(cone_membership(fan, s) for s in pair_sets)
    codim_ok = all(len(s) == spec.k + 1 for s in pair_sets)
    return ChainCheck(
        len(union), union == set(result.tau.ray_indices) and len(union) == fan.rank,
        comps_ok, pairs_ok, codim_ok,
    )


def claimed_component_count(degrees: Sequence[int]) -> int:
    """prod (n_i - 1), the count stated for the projective Fermat families."""
    return math.prod(d - 1 for d in degrees)


def projective_ci_family(n: int, degrees: Sequence[int]) -> FamilySpec:
    """t F_i - prod_{j in block i} x_j in P^(n+k), blocks of sizes n_i in index order.

    F_i = sum_j (j+1)^i x_j^(n_i), a diagonal section over all N+1 coordinates.
    Block 0 is the Fermat polynomial; the Vandermonde weights keep the
    sections independent, so equal-degree families (two cubics in P^5)
    have a smooth general fibre instead of F_1 = F_2.
    """
    degrees = tuple(int(d) for d in degrees)
    k = len(degrees)
    if n < 1 or k < 1:
        raise DegenerationError("need n >= 1 and at least one degree")
    if any(d < 1 for d in degrees):
        raise DegenerationError("degrees must be positive")
    if sum(degrees) != n + k + 1:
        raise DegenerationError(
            f"degree sum {sum(degrees)} != n + k + 1 = {n + k + 1}"
        )
    fan = build_projective_fan(n + k)
    blocks, start = [], 0
    for d in degrees:
        blocks.append(tuple(range(start, start + d)))
        start += d
    part = Partition(tuple(blocks))
    secs = tuple(
        Section.from_monomials(
            fan, block_divisor(fan, b),
            {tuple(d * int(r == j) for r in range(fan.nrays)): (j + 1) ** i for j in range(fan.nrays)},
        )
        for i, (b, d) in enumerate(zip(blocks, degrees))
    )
    label = f"P{n + k}[{','.join(map(str, degrees))}]"
    return FamilySpec(fan, part, secs, label=label,
                      claimed_component_count=claimed_component_count(degrees))
