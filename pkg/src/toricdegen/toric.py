"""Smooth complete fans, torus-invariant divisors and their sections.

Sections of O(D) for D = sum a_rho D_rho are indexed by the lattice points nu
of P_D = {nu : <nu, rho> >= -a_rho}; the point nu corresponds to the monomial
prod_rho x_rho^(<nu, rho> + a_rho) in the homogeneous coordinate ring.
On the affine patch of a smooth N-cone sigma the coordinates z_i are the
characters of the dual basis of sigma, so nu becomes z^v with
v_i = <nu, rho_i>, rho_i the ray dual to the i-th basis vector.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from . import lattice
from .lattice import Cone, IntMatrix, LatticePolytope
from .laurent import LaurentPolynomial


class FanError(ValueError):
    pass


@dataclass(frozen=True)
class Fan:
    """A simplicial fan given by primitive rays and its maximal cones."""

    rank: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[Cone, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in r) for r in self.rays)
        cones = tuple(sorted(c if isinstance(c, Cone) else Cone(tuple(c)) for c in self.max_cones))
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "max_cones", cones)
        if self.rank < 1:
            raise FanError("fan rank must be positive")
        for r in rays:
            if len(r) != self.rank:
                raise FanError(f"ray {r} does not have length {self.rank}")
            if not lattice.is_primitive(r):
                raise FanError(f"ray {r} is not primitive")
        if len(set(rays)) != len(rays):
            raise FanError("rays are not pairwise distinct")
        if len(set(cones)) != len(cones):
            raise FanError("repeated maximal cone")
        used = set()
        for c in cones:
            if any(i >= len(rays) for i in c):
                raise FanError(f"cone {c.ray_indices} refers to a missing ray")
            used.update(c)
        missing = set(range(len(rays))) - used
        if missing:
            raise FanError(f"rays {sorted(missing)} lie in no maximal cone")

    @property
    def nrays(self) -> int:
        return len(self.rays)

    @classmethod
    def from_json(cls, data: Mapping, name: str = "") -> Fan:
        return cls(int(data["rank"]), tuple(map(tuple, data["rays"])),
                   tuple(Cone(tuple(c)) for c in data["max_cones"]), name=name)

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "rays": [list(r) for r in self.rays],
            "max_cones": [list(c.ray_indices) for c in self.max_cones],
        }


def is_smooth(fan: Fan) -> bool:
    for c in fan.max_cones:
        if len(c) != fan.rank:
            return False
        if abs(lattice.bareiss_det([fan.rays[i] for i in c])) != 1:
            return False
    return True


def is_complete(fan: Fan) -> bool:
    """Every ridge of a maximal cone lies in exactly two maximal cones, and the
    cones form one connected chamber complex."""
    n = fan.rank
    if any(len(c) != n for c in fan.max_cones):
        raise FanError("fan is not pure of dimension N")
    ridges = defaultdict(list)
    for k, c in enumerate(fan.max_cones):
        for ridge in itertools.combinations(c.ray_indices, n - 1):
            ridges[ridge].append(k)
    if any(len(v) != 2 for v in ridges.values()):
        return False
    adj = defaultdict(set)
    for a, b in ridges.values():
        adj[a].add(b)
        adj[b].add(a)
    seen, todo = {0}, [0]
    while todo:
        for nb in adj[todo.pop()]:
            if nb not in seen:
                seen.add(nb)
                todo.append(nb)
    return len(seen) == len(fan.max_cones)


def build_projective_fan(n: int) -> Fan:
    """Fan of P^n: rays e_0 = -(e_1 + ... + e_n), e_1, ..., e_n."""
    if n < 1:
        raise FanError("projective space needs N >= 1")
    rays = [tuple(-1 for _ in range(n))]
    rays += [tuple(int(i == j) for j in range(n)) for i in range(n)]
    cones = [Cone(c) for c in itertools.combinations(range(n + 1), n)]
    return Fan(n, tuple(rays), tuple(cones), name=f"P{n}")


@lru_cache(maxsize=None)
def delta_polytope(fan: Fan) -> LatticePolytope:
    """Convex hull of the ray generators."""
    try:
        return LatticePolytope.from_vertices(fan.rays)
    except ValueError as exc:
        raise FanError(f"hull of rays is not full dimensional: {exc}") from None


@lru_cache(maxsize=None)
def nabla_polytope(fan: Fan) -> LatticePolytope:
    return lattice.polar_dual(delta_polytope(fan))


@lru_cache(maxsize=None)
def has_reflexive_delta(fan: Fan) -> bool:
    try:
        return lattice.is_reflexive(delta_polytope(fan))
    except (FanError, lattice.OriginNotInteriorError):
        return False


def picard_group(fan: Fan) -> list[int]:
    """Invariant factors of A_{N-1}(V) = Z^S / image of the ray matrix.

    Returns the torsion orders followed by a 0 for each free summand, e.g.
    ``[0]`` for P^N.
    """
    m = IntMatrix.from_rows(fan.rays)  # S x N, the map M -> Z^S
    _, s, _ = lattice.smith_normal_form(m)
    diag = [d for d in s.diagonal()]
    torsion = [d for d in diag if d > 1]
    free = fan.nrays - sum(1 for d in diag if d)
    return torsion + [0] * free


# ---------------------------------------------------------------------------
# Divisors and sections
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TorusDivisor:
    """D = sum_rho a_rho D_rho."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(int(a) for a in self.coefficients))

    @classmethod
    def anticanonical(cls, fan: Fan) -> TorusDivisor:
        return cls((1,) * fan.nrays)

    @classmethod
    def of_rays(cls, fan: Fan, rays: Iterable[int]) -> TorusDivisor:
        rays = set(rays)
        return cls(tuple(int(i in rays) for i in range(fan.nrays)))

    def is_anticanonical(self) -> bool:
        return all(a == 1 for a in self.coefficients)


@dataclass(frozen=True)
class SectionBasisElement:
    nu: tuple[int, ...]
    exponents: tuple[int, ...]


def _check_divisor(fan: Fan, d: TorusDivisor) -> None:
    if len(d.coefficients) != fan.nrays:
        raise FanError(
            f"divisor has {len(d.coefficients)} coefficients, fan has {fan.nrays} rays"
        )


def section_polyhedron(fan: Fan, d: TorusDivisor) -> list[tuple[tuple[int, ...], int]]:
    _check_divisor(fan, d)
    return [(rho, -a) for rho, a in zip(fan.rays, d.coefficients)]


@lru_cache(maxsize=None)
def _section_points(fan: Fan, d: TorusDivisor) -> tuple[tuple[int, ...], ...]:
    ineqs = section_polyhedron(fan, d)
    try:
        return tuple(lattice.points_in_polyhedron(ineqs))
    except ValueError:
        raise FanError("divisor not globally generated at desk scale") from None


def section_exponents(fan: Fan, d: TorusDivisor, nu: Sequence[int]) -> tuple[int, ...]:
    return tuple(lattice.dot(nu, rho) + a for rho, a in zip(fan.rays, d.coefficients))


def section_basis(fan: Fan, d: TorusDivisor) -> list[SectionBasisElement]:
    """Monomial basis of H^0(V, O(D)), one element per lattice point of P_D."""
    return [SectionBasisElement(nu, section_exponents(fan, d, nu)) for nu in _section_points(fan, d)]


def nu_from_exponents(fan: Fan, d: TorusDivisor, exponents: Sequence[int]) -> tuple[int, ...]:
    """Inverse of :func:`section_exponents`; raises if the monomial is not a section of O(D)."""
    _check_divisor(fan, d)
    if len(exponents) != fan.nrays or any(e < 0 for e in exponents):
        raise FanError(f"invalid exponent vector {tuple(exponents)}")
    pairs = lattice.dual_pairs(fan, fan.max_cones[0])
    nu = [0] * fan.rank
    for basis, ray in pairs:
        w = exponents[ray] - d.coefficients[ray]
        nu = [x + w * y for x, y in zip(nu, basis)]
    nu = tuple(nu)
    if section_exponents(fan, d, nu) != tuple(exponents):
        raise FanError(f"monomial {tuple(exponents)} does not have the class of the divisor")
    return nu


@dataclass(frozen=True)
class Section:
    """A section of O(D) as a coefficient table over the lattice points of P_D.

    With D anticanonical this is f = x_1...x_S * sum_nu c_nu x^nu.
    """

    divisor: TorusDivisor
    coeffs: tuple[tuple[tuple[int, ...], Fraction], ...]

    def __post_init__(self):
        items = self.coeffs.items() if isinstance(self.coeffs, Mapping) else self.coeffs
        merged: dict[tuple[int, ...], Fraction] = {}
        for nu, c in items:
            nu = tuple(int(x) for x in nu)
            merged[nu] = merged.get(nu, Fraction(0)) + Fraction(c)
        object.__setattr__(
            self, "coeffs", tuple(sorted((nu, c) for nu, c in merged.items() if c))
        )

    def as_dict(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self.coeffs)

    def support(self) -> list[tuple[int, ...]]:
        return [nu for nu, _ in self.coeffs]

    def validate(self, fan: Fan) -> None:
        allowed = set(_section_points(fan, self.divisor))
        outside = [nu for nu in self.support() if nu not in allowed]
        if outside:
            raise FanError(f"section support {outside} lies outside P_D")

    @classmethod
    def generic(cls, fan: Fan, d: TorusDivisor) -> Section:
        """Every basis monomial with coefficient 1."""
        return cls(d, tuple((nu, Fraction(1)) for nu in _section_points(fan, d)))

    @classmethod
    def from_monomials(cls, fan: Fan, d: TorusDivisor,
                       monomials: Mapping[Sequence[int], object]) -> Section:
        """Build from ``{exponent vector over rays: coefficient}``."""
        return cls(d, tuple((nu_from_exponents(fan, d, e), c) for e, c in monomials.items()))

    @classmethod
    def from_json(cls, data: Mapping, divisor: TorusDivisor) -> Section:
        return cls(divisor, tuple((tuple(e["nu"]), Fraction(e["c"])) for e in data["coeffs"]))

    def to_json(self) -> dict:
        return {"coeffs": [{"nu": list(nu), "c": str(c)} for nu, c in self.coeffs]}


def anticanonical_section(fan: Fan, coeffs: Mapping[Sequence[int], object]) -> Section:
    """The anticanonical section with the given ``{nu: c_nu}`` table."""
    return Section(TorusDivisor.anticanonical(fan), tuple(coeffs.items()))


def distinguished_section(fan: Fan) -> Section:
    """x_1 ... x_S, the nu = 0 anticanonical section."""
    return anticanonical_section(fan, {(0,) * fan.rank: 1})


def fermat_section(fan: Fan, d: TorusDivisor) -> Section:
    """Sum of the pure powers x_rho^deg that are sections of O(D), coefficient 1 each."""
    monos = {}
    for el in section_basis(fan, d):
        nonzero = [e for e in el.exponents if e]
        if len(nonzero) == 1:
            monos[el.exponents] = 1
    return Section.from_monomials(fan, d, monos)


# ---------------------------------------------------------------------------
# Affine patches
# ---------------------------------------------------------------------------


class NotReflexiveError(FanError):
    pass


def _as_cone(sigma) -> Cone:
    return sigma if isinstance(sigma, Cone) else Cone(tuple(sigma))


def patch_rays(fan: Fan, sigma) -> tuple[int, ...]:
    """Rays of an N-cone ordered so that z_i vanishes on the divisor of the i-th ray.

    Patch coordinates follow the ray indices of the cone: z_i is the
    character of the dual vector paired with the i-th smallest ray index.
    This is the order in which the projective sign law det A = (-1)^(i+j)
    holds.
    """
    cone = _as_cone(sigma)
    lattice.dual_pairs(fan, cone)  # validates top dimension and unimodularity
    return cone.ray_indices


def local_exponent(fan: Fan, order: Sequence[int], nu: Sequence[int]) -> tuple[int, ...]:
    """Coordinates of nu in the dual basis attached to an ordered list of patch rays."""
    return tuple(lattice.dot(nu, fan.rays[r]) for r in order)


def _check_patch_order(fan: Fan, order: Sequence[int]) -> tuple[int, ...]:
    order = tuple(order)
    cone = Cone(order)
    if cone not in fan.max_cones:
        raise FanError(f"rays {order} do not form a maximal cone")
    lattice.dual_pairs(fan, cone)  # validates unimodularity
    return order


def character_polynomial(fan: Fan, section: Section, order: Sequence[int]) -> LaurentPolynomial:
    """sum_nu c_nu z^v on the patch with ordered rays ``order`` (no prefactor)."""
    order = _check_patch_order(fan, order)
    poly = LaurentPolynomial(fan.rank)
    for nu, c in section.coeffs:
        poly = poly + LaurentPolynomial.monomial(local_exponent(fan, order, nu), c)
    return poly


def _require_reflexive(fan: Fan) -> None:
    if not is_smooth(fan):
        raise FanError("fan is not smooth")
    if not has_reflexive_delta(fan):
        raise NotReflexiveError("hull of the rays is not a reflexive polytope")


def local_section(fan: Fan, f: Section, sigma, order: Sequence[int] | None = None) -> LaurentPolynomial:
    """f_sigma(z) = z_1...z_N sum_v c_v z^v, the anticanonical section on a patch.

    ``order`` fixes the coordinate order; by default the canonical one.
    """
    _require_reflexive(fan)
    if not f.divisor.is_anticanonical():
        raise FanError("local_section expects an anticanonical section")
    if order is None:
        order = patch_rays(fan, sigma)
    return LaurentPolynomial.product_of_variables(fan.rank) * character_polynomial(fan, f, order)


def transition_matrix(fan: Fan, sigma, tau, sigma_order=None, tau_order=None) -> IntMatrix:
    """A with nu_i = sum_j a_ij mu_j, nu / mu the ordered dual bases of sigma / tau."""
    so = tuple(sigma_order) if sigma_order else patch_rays(fan, sigma)
    to = tuple(tau_order) if tau_order else patch_rays(fan, tau)
    _check_patch_order(fan, so)
    _check_patch_order(fan, to)
    dual = dict((ray, nu) for nu, ray in lattice.dual_pairs(fan, Cone(so)))
    # the coefficient of mu_j in nu_i is <nu_i, ray dual to mu_j>
    rows = [[lattice.dot(dual[ri], fan.rays[rj]) for rj in to] for ri in so]
    return IntMatrix.from_rows(rows, fan.rank)


@dataclass(frozen=True)
class GluingReport:
    support_ok: bool
    identity_ok: bool
    det: int
    offending: tuple[tuple[int, ...], ...] = ()

    def __bool__(self):
        return self.support_ok and self.identity_ok


def verify_gluing(fan: Fan, f: Section, sigma, tau) -> GluingReport:
    """Check the patch-change law for an anticanonical section.

    Two things are checked exactly: every exponent v of f on sigma is carried
    by B (v -> A^T v) to a point of nabla_tau with the same coefficient, and the
    Laurent identity f_sigma(z(w)) = det(A) (z_1..z_N / w_1..w_N) f_tau(w) holds
    after the monomial substitution z_i = w^(A_i).
    """
    _require_reflexive(fan)
    so, to = patch_rays(fan, sigma), patch_rays(fan, tau)
    a = transition_matrix(fan, sigma, tau)
    det = a.det()
    at = a.transpose().to_rows()
    nabla_tau = {
        local_exponent(fan, to, nu): nu for nu in lattice.lattice_points(nabla_polytope(fan))
    }
    coeffs = f.as_dict()
    offending = []
    for nu, c in f.coeffs:
        v = local_exponent(fan, so, nu)
        u = tuple(lattice.dot(row, v) for row in at)
        image = nabla_tau.get(u)
        if image is None or coeffs.get(image) != c:
            offending.append(nu)
    n = fan.rank
    lhs = local_section_unchecked(fan, f, so).substitute_monomial(at)
    w_all = LaurentPolynomial.product_of_variables(n)
    ratio = LaurentPolynomial.monomial(tuple(sum(row) - 1 for row in at))  # z_1..z_N / w_1..w_N
    f_tau = w_all * character_polynomial(fan, f, to) * Fraction(1, det)
    rhs = ratio * f_tau * det
    return GluingReport(not offending, lhs == rhs, det, tuple(offending))


def local_section_unchecked(fan: Fan, f: Section, order: Sequence[int]) -> LaurentPolynomial:
    return LaurentPolynomial.product_of_variables(fan.rank) * character_polynomial(fan, f, order)
