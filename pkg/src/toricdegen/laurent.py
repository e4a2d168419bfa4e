"""Sparse Laurent polynomials in z_1..z_N with coefficients in Q[t]."""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class LaurentPolynomial:
    """Exact Laurent polynomial with a formal deformation parameter ``t``.

    Terms are stored as ``{(exponent, t_power): coefficient}``; zero
    coefficients are never stored.  ``t`` is purely formal: "t -> 0" means
    dropping every term with a positive power of t.

    >>> z1 = LaurentPolynomial.variable(2, 0)
    >>> (z1 * z1 + 3).constant_term()
    Fraction(3, 1)
    """

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Mapping | None = None):
        self.nvars = int(nvars)
        self._terms: dict[tuple[Exponent, int], Fraction] = {}
        for key, c in (terms or {}).items():
            if isinstance(key, tuple) and len(key) == 2 and isinstance(key[0], tuple):
                exp, tpow = key
            else:
                exp, tpow = key, 0
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.nvars:
                raise ValueError(f"exponent {exp} has length {len(exp)}, expected {self.nvars}")
            if isinstance(c, (list, tuple)):
                for k, ck in enumerate(c):
                    self._add_term(exp, tpow + k, _frac(ck))
            else:
                self._add_term(exp, tpow, _frac(c))

    def _add_term(self, exp: Exponent, tpow: int, c: Fraction) -> None:
        if tpow < 0:
            raise ValueError("negative power of t")
        key = (exp, tpow)
        new = self._terms.get(key, Fraction(0)) + c
        if new:
            self._terms[key] = new
        else:
            self._terms.pop(key, None)

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> LaurentPolynomial:
        p = cls.__new__(cls)
        p.nvars = nvars
        p._terms = {k: v for k, v in terms.items() if v}
        return p

    # constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> LaurentPolynomial:
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, c=1) -> LaurentPolynomial:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, exp: Sequence[int], c=1, t_power: int = 0) -> LaurentPolynomial:
        exp = tuple(exp)
        return cls(len(exp), {(exp, t_power): c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> LaurentPolynomial:
        return cls.monomial(tuple(int(i == j) for j in range(nvars)))

    @classmethod
    def t(cls, nvars: int) -> LaurentPolynomial:
        return cls.monomial((0,) * nvars, 1, t_power=1)

    @classmethod
    def product_of_variables(cls, nvars: int) -> LaurentPolynomial:
        return cls.monomial((1,) * nvars)

    # inspection -----------------------------------------------------------

    @property
    def terms(self) -> dict[Exponent, tuple[Fraction, ...]]:
        """``{exponent: (c_0, c_1, ...)}`` with c_k the coefficient of t^k."""
        grouped: dict[Exponent, dict[int, Fraction]] = defaultdict(dict)
        for (exp, k), c in self._terms.items():
            grouped[exp][k] = c
        out = {}
        for exp in sorted(grouped):
            ks = grouped[exp]
            out[exp] = tuple(ks.get(k, Fraction(0)) for k in range(max(ks) + 1))
        return out

    def items(self) -> Iterable[tuple[tuple[Exponent, int], Fraction]]:
        return sorted(self._terms.items())

    def support(self) -> list[Exponent]:
        return sorted({exp for exp, _ in self._terms})

    def coefficient(self, exp: Sequence[int], t_power: int = 0) -> Fraction:
        return self._terms.get((tuple(exp), t_power), Fraction(0))

    def t_degree(self) -> int:
        return max((k for _, k in self._terms), default=0)

    def is_zero(self) -> bool:
        return not self._terms

    def is_t_free(self) -> bool:
        return all(k == 0 for _, k in self._terms)

    def min_exponent(self) -> int | None:
        """Smallest exponent of any variable in any term (None for zero or N = 0)."""
        exps = [e for (exp, _) in self._terms for e in exp]
        return min(exps) if exps else None

    def is_polynomial(self) -> bool:
        return all(e >= 0 for (exp, _) in self._terms for e in exp)

    def __len__(self):
        return len(self._terms)

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> LaurentPolynomial:
        if isinstance(other, LaurentPolynomial):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        return LaurentPolynomial.constant(self.nvars, other)

    def __add__(self, other) -> LaurentPolynomial:
        other = self._coerce(other)
        out = dict(self._terms)
        for key, c in other._terms.items():
            out[key] = out.get(key, 0) + c
        return LaurentPolynomial._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> LaurentPolynomial:
        return LaurentPolynomial._raw(self.nvars, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> LaurentPolynomial:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> LaurentPolynomial:
        return self._coerce(other) - self

    def __mul__(self, other) -> LaurentPolynomial:
        if not isinstance(other, LaurentPolynomial):
            c = _frac(other)
            return LaurentPolynomial._raw(self.nvars, {k: v * c for k, v in self._terms.items()})
        other = self._coerce(other)
        out: dict = defaultdict(Fraction)
        for (e1, k1), c1 in self._terms.items():
            for (e2, k2), c2 in other._terms.items():
                out[(tuple(a + b for a, b in zip(e1, e2)), k1 + k2)] += c1 * c2
        return LaurentPolynomial._raw(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, m: int) -> LaurentPolynomial:
        if m < 0:
            # only t-free monomials are units
            if len(self._terms) != 1 or not self.is_t_free():
                raise ValueError("negative powers exist only for t-free monomials")
            ((exp, _), c), = self._terms.items()
            return LaurentPolynomial.monomial(tuple(-e for e in exp), 1 / c) ** -m
        result = LaurentPolynomial.constant(self.nvars, 1)
        for _ in range(m):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, LaurentPolynomial):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == LaurentPolynomial.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self._terms.items())))

    # calculus and specialisation -----------------------------------------

    def partial_derivative(self, i: int) -> LaurentPolynomial:
        """d/dz_i, mapping z^v to v_i z^(v - e_i)."""
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range for {self.nvars} variables")
        out = {}
        for (exp, k), c in self._terms.items():
            if exp[i]:
                new = exp[:i] + (exp[i] - 1,) + exp[i + 1:]
                out[(new, k)] = c * exp[i]
        return LaurentPolynomial._raw(self.nvars, out)

    def set_t_zero(self) -> LaurentPolynomial:
        return LaurentPolynomial._raw(
            self.nvars, {k: c for k, c in self._terms.items() if k[1] == 0}
        )

    def constant_term(self):
        """Coefficient of z^0.

        A :class:`Fraction` when the polynomial does not involve t, otherwise
        the tuple of coefficients of ascending powers of t.
        """
        zero = (0,) * self.nvars
        if self.is_t_free():
            return self._terms.get((zero, 0), Fraction(0))
        deg = self.t_degree()
        return tuple(self._terms.get((zero, k), Fraction(0)) for k in range(deg + 1))

    def substitute_monomial(self, matrix: Sequence[Sequence[int]]) -> LaurentPolynomial:
        """Monomial change of variables z^v -> w^(M v) for an integer matrix M."""
        out: dict = defaultdict(Fraction)
        for (exp, k), c in self._terms.items():
            new = tuple(sum(row[j] * exp[j] for j in range(self.nvars)) for row in matrix)
            out[(new, k)] += c
        nvars = len(matrix)
        return LaurentPolynomial._raw(nvars, out)

    # serialisation --------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vars": self.nvars,
            "terms": [
                {"exp": list(exp), "coeff_t": [str(c) for c in cs]}
                for exp, cs in self.terms.items()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> LaurentPolynomial:
        n = int(data["vars"])
        p = cls(n)
        for term in data["terms"]:
            exp = tuple(int(e) for e in term["exp"])
            for k, c in enumerate(term["coeff_t"]):
                p._add_term(exp, k, Fraction(c))
        return p

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for (exp, k), c in self.items():
            mono = "*".join(
                f"z{i + 1}" if e == 1 else f"z{i + 1}^{e}" for i, e in enumerate(exp) if e
            )
            if k:
                mono = "*".join(filter(None, ["t" if k == 1 else f"t^{k}", mono]))
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return " + ".join(parts)
