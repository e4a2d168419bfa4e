"""Symbolic shadows of the Leray residue: the denominator limit and the torus period."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .degeneration import (
    Component,
    FamilySpec,
    components,
    find_fixed_point_chain,
    strata,
    verify_fixed_point_chain,
)
from .lattice import Cone
from .laurent import LaurentPolynomial
from .toric import (
    FanError,
    NotReflexiveError,
    Section,
    character_polynomial,
    has_reflexive_delta,
    is_smooth,
    patch_rays,
)


class CoordinateOrderError(ValueError):
    pass


def _require(spec: FamilySpec) -> None:
    if not is_smooth(spec.fan):
        raise FanError("fan is not smooth")
    if not has_reflexive_delta(spec.fan):
        raise NotReflexiveError("hull of the rays is not a reflexive polytope")


def family_polynomial(spec: FamilySpec, sigma, order: Sequence[int] | None = None) -> LaurentPolynomial:
    """g_t(z) = z_1...z_N (1 - t f_1(z)) ... (1 - t f_k(z)) on the patch of sigma.

    f_i is F_i divided by prod_{rho in pi_i} x_rho, written in the patch
    coordinates; ``order`` fixes which ray each coordinate belongs to
    (canonical order when omitted).
    """
    _require(spec)
    if order is None:
        order = patch_rays(spec.fan, sigma)
    elif Cone(tuple(order)) != (sigma if isinstance(sigma, Cone) else Cone(tuple(sigma))):
        raise CoordinateOrderError(f"order {tuple(order)} is not an ordering of the rays of {sigma}")
    n = spec.fan.rank
    t = LaurentPolynomial.t(n)
    g = LaurentPolynomial.product_of_variables(n)
    for sec in spec.sections:
        g = g * (1 - t * character_polynomial(spec.fan, sec, order))
    if not g.is_polynomial():
        raise FanError("g_t is not a polynomial on this patch")
    return g


def _check_order(spec: FamilySpec, sigma0: Component, tau: Cone, order: Sequence[int]) -> None:
    order = tuple(order)
    if sorted(order) != list(tau.ray_indices):
        raise CoordinateOrderError(
            f"coordinate order {order} is not a permutation of the rays of tau {tau.ray_indices}"
        )
    k = spec.k
    tail = order[len(order) - k:]
    bad = [len(order) - k + i + 1 for i, r in enumerate(tail) if r not in sigma0.rays]
    if bad or set(tail) != set(sigma0.rays):
        raise CoordinateOrderError(
            f"variables z{bad} do not cut out C_sigma0 {sigma0.rays}; "
            f"the last {k} coordinates must belong to its rays"
        )


def residue_limit(spec: FamilySpec, sigma0: Component, tau: Cone | None = None,
                  order: Sequence[int] | None = None) -> LaurentPolynomial:
    """d/dz_{n+1} ... d/dz_N g_t, then t = 0."""
    sigma0 = sigma0 if isinstance(sigma0, Component) else Component(tuple(sigma0))
    if tau is None or order is None:
        chain = find_fixed_point_chain(spec, sigma0)
        if tau is not None and Cone(tuple(tau)) != chain.tau:
            raise CoordinateOrderError(
                f"tau {tuple(tau)} differs from the chain's cone {chain.tau.ray_indices}; pass an order"
            )
        tau, order = chain.tau, chain.coordinate_order
    tau = tau if isinstance(tau, Cone) else Cone(tuple(tau))
    _check_order(spec, sigma0, tau, order)
    g = family_polynomial(spec, tau, order)
    for i in range(spec.n, spec.fan.rank):
        g = g.partial_derivative(i)
    return g.set_t_zero()


def residue_limit_check(spec: FamilySpec, sigma0: Component, tau: Cone | None = None,
                        order: Sequence[int] | None = None) -> bool:
    """True iff the limit equals z_1 ... z_n exactly."""
    expected = LaurentPolynomial.monomial((1,) * spec.n + (0,) * spec.k)
    return residue_limit(spec, sigma0, tau, order) == expected


# ---------------------------------------------------------------------------
# Criterion report
# ---------------------------------------------------------------------------

PASS, FAIL, ASSUMED, SKIPPED = "pass", "fail", "assumed", "skipped"


@dataclass
class Verdict:
    condition: str
    status: str
    reason: str
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"condition": self.condition, "status": self.status, "reason": self.reason}
        if self.details:
            out["details"] = self.details
        return out


@dataclass
class CriterionReport:
    label: str
    n: int
    verdicts: list[Verdict]

    @property
    def satisfied(self) -> bool:
        return all(v.status in (PASS, ASSUMED) for v in self.verdicts)

    @property
    def failing(self) -> Verdict | None:
        return next((v for v in self.verdicts if v.status == FAIL), None)

    @property
    def verdict(self) -> str:
        if self.satisfied:
            return "criterion satisfied (combinatorial+symbolic parts)"
        f = self.failing
        return f"criterion fails at condition {f.condition}: {f.reason}"

    def to_json(self) -> dict:
        return {
            "family": self.label,
            "n": self.n,
            "jordan_block_size": self.n + 1,
            "conditions": [v.to_json() for v in self.verdicts],
            "verdict": self.verdict,
        }


def verify_max_monodromy_criterion(spec: FamilySpec) -> CriterionReport:
    """Check every combinatorial or symbolic hypothesis of the maximal-Jordan-block criterion."""
    out = [
        Verdict("1", ASSUMED, "X_t nonsingular of dimension n for t != 0; input obligation",
                {"n": spec.n}),
        Verdict("2", ASSUMED, "h^0(X_t, Omega^n) >= 1; input obligation (Calabi-Yau by adjunction)"),
    ]
    comps = components(spec)
    if not comps:
        out.append(Verdict("3", SKIPPED, "no components to check"))
        out.append(Verdict("4", FAIL, "X0 empty: every transversal contains a primitive collection"))
        out.append(Verdict("5", SKIPPED, "no component carries a residue"))
        return CriterionReport(spec.label, spec.n, out)

    st = strata(spec, comps)
    codim_ok = all(len(c) == spec.k for c in comps)
    dims_ok = all(
        dim == spec.fan.rank - len(set().union(*(comps[i].rays for i in key)))
        for key, dim in st.intersections.items()
    )
    out.append(Verdict(
        "3", PASS if codim_ok and dims_ok else FAIL,
        "components are codimension-k toric strata C_sigma meeting in torus-invariant strata",
        {"components": len(comps)},
    ))

    chains = {c: find_fixed_point_chain(spec, c) for c in comps}
    bad_chain = [c.rays for c, ch in chains.items() if not verify_fixed_point_chain(spec, ch).passed]
    out.append(Verdict(
        "4", FAIL if bad_chain else PASS,
        "C_sigma0 and n neighbouring components meet in a torus fixed point"
        + (f"; failed for {bad_chain}" if bad_chain else ""),
        {"checked_components": len(comps)},
    ))

    try:
        bad_res = [c.rays for c in comps
                   if not residue_limit_check(spec, c, chains[c].tau, chains[c].coordinate_order)]
        out.append(Verdict(
            "5", FAIL if bad_res else PASS,
            "d_{n+1}...d_N g_t at t = 0 equals z_1...z_n on the fixed-point patch"
            + (f"; failed for {bad_res}" if bad_res else ""),
        ))
    except FanError as exc:
        out.append(Verdict("5", FAIL, str(exc)))
    return CriterionReport(spec.label, spec.n, out)


# ---------------------------------------------------------------------------
# Periods
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PeriodSeries:
    """Coefficients c_m = CT(f^m) of the torus period, the factor (2 pi i)^N left out."""

    coefficients: tuple[Fraction, ...]
    normalization: str = "(2*pi*i)^N omitted"

    def to_json(self) -> dict:
        return {"normalization": self.normalization, "coeffs": [str(c) for c in self.coefficients]}


def period_series(f: LaurentPolynomial, order: int) -> PeriodSeries:
    """Constant terms of f^0, f^1, ..., f^order by repeated multiplication."""
    if not f.is_t_free():
        raise ValueError("period_series expects a Laurent polynomial without t")
    if order < 0:
        raise ValueError("order must be nonnegative")
    coeffs = []
    power = LaurentPolynomial.constant(f.nvars, 1)
    for m in range(order + 1):
        coeffs.append(power.constant_term())
        if m < order:
            power = power * f
    return PeriodSeries(tuple(coeffs))


def torus_polynomial(fan, section: Section, sigma=None) -> LaurentPolynomial:
    """f with F = prod x_rho * f on the torus, in the coordinates of a patch (first cone by default)."""
    sigma = fan.max_cones[0] if sigma is None else sigma
    return character_polynomial(fan, section, patch_rays(fan, sigma))
