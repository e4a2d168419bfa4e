"""Shared independent oracles for the test suite."""

from __future__ import annotations

import itertools
import random

import pytest
import sympy

from toricdegen import builtins
from toricdegen.degeneration import Component, Partition
from toricdegen.lattice import LatticePolytope, is_reflexive
from toricdegen.laurent import LaurentPolynomial


def to_sympy(p: LaurentPolynomial):
    """Laurent polynomial as a sympy expression in z0..z{n-1}, t."""
    zs = sympy.symbols(f"z0:{p.nvars}")
    t = sympy.Symbol("t")
    expr = sympy.Integer(0)
    for (exp, tp), c in p.items():
        term = sympy.Rational(c.numerator, c.denominator) * t**tp
        for z, e in zip(zs, exp):
            term *= z**e
        expr += term
    return sympy.expand(expr), zs, t


def brute_components(fan, partition: Partition) -> list[tuple[int, ...]]:
    """Every k-subset of rays meeting each block once and lying in some maximal cone."""
    k = partition.k
    out = []
    for sub in itertools.combinations(range(fan.nrays), k):
        if sorted(partition.block_of(r) for r in sub) != list(range(k)):
            continue
        if any(set(sub) <= set(c.ray_indices) for c in fan.max_cones):
            out.append(tuple(sorted(sub)))
    return sorted(out)


def random_partitions(nrays: int, rank: int, rng: random.Random, count: int = 4):
    """Random set partitions with 1 <= k <= rank - 1 blocks."""
    out = [Partition.single_block(nrays)]
    for _ in range(count):
        k = rng.randint(1, max(1, min(rank - 1, nrays)))
        labels = [i % k for i in range(nrays)]
        rng.shuffle(labels)
        blocks = tuple(tuple(i for i in range(nrays) if labels[i] == b) for b in range(k))
        out.append(Partition(blocks))
    return out


def reflexive_corpus(count: int, seed: int = 7) -> list[LatticePolytope]:
    """Random reflexive polytopes in dimension 2 and 3, generated from small boxes."""
    rng = random.Random(seed)
    found: dict = {}
    boxes = {2: [p for p in itertools.product(range(-2, 3), repeat=2) if any(p)],
             3: [p for p in itertools.product(range(-1, 2), repeat=3) if any(p)]}
    tries = 0
    while len(found) < count and tries < 5000:
        tries += 1
        dim = 2 if tries % 2 else 3
        pts = rng.sample(boxes[dim], rng.randint(dim + 1, dim + 4))
        try:
            P = LatticePolytope.from_vertices(pts)
        except ValueError:
            continue
        if P.dim != dim or not P.interior_contains((0,) * dim):
            continue
        if is_reflexive(P):
            found.setdefault(P.vertex_set(), P)
    return list(found.values())


@pytest.fixture(scope="session")
def small_fans():
    return {name: builtins.fan(name) for name in builtins.FANS}


def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion, in order."""
    import sys as _sys

    mod = _sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(mod.RESULTS):
            terminalreporter.write_line(mod.RESULTS[n])
