from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import pytest
import sympy

from conftest import random_partitions, to_sympy
from test_degeneration import CORPUS
from toricdegen import builtins
from toricdegen.degeneration import Component, FamilySpec, Partition, components, find_fixed_point_chain
from toricdegen.laurent import LaurentPolynomial as LP
from toricdegen.residue import (
    ASSUMED,
    FAIL,
    PASS,
    SKIPPED,
    CoordinateOrderError,
    family_polynomial,
    period_series,
    residue_limit,
    residue_limit_check,
    torus_polynomial,
    verify_max_monodromy_criterion,
)
from toricdegen.toric import FanError, Section, TorusDivisor, has_reflexive_delta, is_smooth


def _chain_patch(spec, comp):
    ch = find_fixed_point_chain(spec, comp)
    return family_polynomial(spec, ch.tau, ch.coordinate_order)


def test_quintic_family_polynomial():
    spec = builtins.family("quintic")
    g = _chain_patch(spec, Component((0,)))
    expr, z, t = to_sympy(g)
    expected = z[0] * z[1] * z[2] * z[3] - t * (1 + sum(zi**5 for zi in z))
    assert sympy.expand(expr - expected) == 0
    for sigma in spec.fan.max_cones:
        g = family_polynomial(spec, sigma)
        assert g.is_polynomial() and len(g) == 6


def test_cubic_family_polynomial():
    spec = builtins.family("cubic-curve")
    expr, z, t = to_sympy(_chain_patch(spec, Component((0,))))
    assert sympy.expand(expr - (z[0] * z[1] - t * (z[0]**3 + z[1]**3 + 1))) == 0


def test_two_cubics_family_polynomial():
    """Oracle: dehomogenise the two diagonal cubics by hand in sympy."""
    spec = builtins.family("two-cubics")
    comp = Component((0, 3))
    ch = find_fixed_point_chain(spec, comp)
    g = family_polynomial(spec, ch.tau, ch.coordinate_order)
    expr, z, t = to_sympy(g)
    # P^5 ray 5 is the only ray outside tau, so x5 = 1 on this patch and every other
    # x_r is the coordinate attached to ray r in the chain's order.
    x = {r: z[i] for i, r in enumerate(ch.coordinate_order)}
    missing = [r for r in range(6) if r not in x]
    assert missing == [5]
    x[5] = sympy.Integer(1)
    G1 = t * sum(x[j]**3 for j in range(6)) - x[0] * x[1] * x[2]
    G2 = t * sum((j + 1) * x[j]**3 for j in range(6)) - x[3] * x[4] * x[5]
    assert sympy.expand(expr - G1 * G2) == 0


@pytest.mark.parametrize("name", builtins.CY_FAMILIES)
def test_residue_limit(name):
    spec = builtins.family(name)
    expected = LP.monomial((1,) * spec.n + (0,) * spec.k)
    for comp in components(spec):
        lim = residue_limit(spec, comp)
        assert lim == expected
        assert residue_limit_check(spec, comp)
        # sympy oracle on the same polynomial
        ch = find_fixed_point_chain(spec, comp)
        expr, z, t = to_sympy(family_polynomial(spec, ch.tau, ch.coordinate_order))
        for zi in z[spec.n:]:
            expr = sympy.diff(expr, zi)
        assert sympy.expand(expr.subs(t, 0)) == sympy.Mul(*z[: spec.n])


def test_residue_over_corpus():
    rng = random.Random(4)
    for name, fan in CORPUS.items():
        if not is_smooth(fan) or not has_reflexive_delta(fan) or fan.nrays > 9:
            continue
        for part in random_partitions(fan.nrays, fan.rank, rng, count=2):
            if fan.rank - part.k < 1:
                continue
            spec = FamilySpec.generic(fan, part, label=name)
            for comp in components(spec):
                assert residue_limit_check(spec, comp), (name, part, comp)


def test_coordinate_order_errors():
    spec = builtins.family("quintic")
    ch = find_fixed_point_chain(spec, Component((0,)))
    with pytest.raises(CoordinateOrderError, match=r"z\[4\]"):
        residue_limit(spec, Component((0,)), ch.tau, (0, 1, 2, 3))
    with pytest.raises(CoordinateOrderError):
        residue_limit(spec, Component((0,)), ch.tau, (0, 1, 2, 4))


def test_non_reflexive_rejected():
    fan = builtins.fan("P112")
    spec = FamilySpec.generic(fan, Partition.single_block(3))
    with pytest.raises(FanError):
        family_polynomial(spec, fan.max_cones[0])


@pytest.mark.parametrize("name", builtins.CY_FAMILIES)
def test_criterion_passes(name):
    rep = verify_max_monodromy_criterion(builtins.family(name))
    assert rep.satisfied
    assert [v.status for v in rep.verdicts] == [ASSUMED, ASSUMED, PASS, PASS, PASS]
    assert rep.verdict == "criterion satisfied (combinatorial+symbolic parts)"


def test_criterion_empty():
    rep = verify_max_monodromy_criterion(builtins.family("empty"))
    assert not rep.satisfied
    assert [v.status for v in rep.verdicts] == [ASSUMED, ASSUMED, SKIPPED, FAIL, SKIPPED]
    assert rep.failing.condition == "4"
    assert "X0 empty" in rep.verdict


def _ct_oracle(f: LP, m: int):
    expr, z, _ = to_sympy(f)
    poly = sympy.expand(expr**m)
    return poly.as_independent(*z, as_Add=True)[0] if m else sympy.Integer(1)


def test_quintic_periods():
    spec = builtins.family("quintic")
    f = torus_polynomial(spec.fan, spec.sections[0])
    series = period_series(f, 10)
    c = series.coefficients
    assert c[5] == 120 and c[10] == 113400 and c[0] == 1
    assert all(c[m] == 0 for m in range(11) if m % 5)
    for a in range(3):
        assert c[5 * a] == math.factorial(5 * a) // math.factorial(a) ** 5
    for m in (5, 10):
        assert c[m] == _ct_oracle(f, m)
    assert series.to_json()["normalization"] == "(2*pi*i)^N omitted"


def test_cubic_periods():
    spec = builtins.family("cubic-curve")
    f = torus_polynomial(spec.fan, spec.sections[0])
    c = period_series(f, 9).coefficients
    assert (c[3], c[6]) == (6, 90)
    for m in range(10):
        assert c[m] == _ct_oracle(f, m)
        expected = math.factorial(m) // math.factorial(m // 3) ** 3 if m % 3 == 0 else 0
        assert c[m] == expected


def test_zero_period():
    assert period_series(LP.zero(3), 3).coefficients == (1, 0, 0, 0)


def test_period_nonnegative_integers():
    for name in ("P2", "P3", "example2", "P1xP1"):
        fan = builtins.fan(name)
        f = torus_polynomial(fan, Section.generic(fan, TorusDivisor.anticanonical(fan)))
        c = period_series(f, 6).coefficients
        assert all(x >= 0 and Fraction(x).denominator == 1 for x in c)
        for m in range(4):
            assert c[m] == _ct_oracle(f, m)


def test_associativity_audit():
    spec = builtins.family("cubic-curve")
    f = torus_polynomial(spec.fan, Section.generic(spec.fan, TorusDivisor.anticanonical(spec.fan)))
    for m1, m2 in itertools.product(range(4), repeat=2):
        assert (f ** (m1 + m2)).constant_term() == (f ** m1 * f ** m2).constant_term()


def test_period_rejects_t():
    with pytest.raises(ValueError):
        period_series(LP.t(2), 3)
