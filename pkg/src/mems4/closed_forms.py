"""Exact rational calculus for radial power sums.

Everything in this module works over arbitrary-precision rationals
(`fractions.Fraction`): the explicit touchdown profiles, the harmonic
boundary extension, the action of the radial bilaplacian on powers of r,
the Hardy-Rellich constant, and the dilation map.  No floating point
enters except in the convenience evaluator `PowerSum.evaluate`, so these
values are safe to feed into the certification engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Union[Fraction, int]

FOUR_THIRDS = Fraction(4, 3)


def _check_dimension(n: int) -> int:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"space dimension must be a positive integer, got {n!r}")
    return n


def singular_voltage(n: int) -> Fraction:
    """Voltage at which the pure touchdown shape 1 - r^(4/3) solves the
    deflection equation exactly: 8(3N-2)(3N-8)/81.

    Nonpositive for N <= 2, where it is only a (trivially true) lower
    bound on the pull-in voltage.
    """
    _check_dimension(n)
    return Fraction(8 * (3 * n - 2) * (3 * n - 8), 81)


def hardy_rellich(n: int) -> Fraction:
    """Optimal constant N^2(N-4)^2/16 in the Hardy-Rellich inequality
    int (Delta psi)^2 >= H int psi^2/|x|^4 on H_0^2 of the unit ball.

    The inequality itself holds for N >= 5; the value is defined for all
    N >= 1 and callers must gate its use.
    """
    _check_dimension(n)
    return Fraction(n * n * (n - 4) * (n - 4), 16)


def laplacian_power_coeff(s: Rational, n: int) -> Fraction:
    """Coefficient of r^(s-2) in the radial Laplacian of r^s: s(s+N-2)."""
    _check_dimension(n)
    s = Fraction(s)
    return s * (s + n - 2)


def bilaplacian_power_coeff(s: Rational, n: int) -> Fraction:
    """Coefficient K(s,N) = s(s+N-2)(s-2)(s+N-4) of r^(s-4) in the radial
    bilaplacian of r^s (valid away from the origin)."""
    s = Fraction(s)
    return laplacian_power_coeff(s, n) * laplacian_power_coeff(s - 2, n)


@dataclass(frozen=True)
class PowerTerm:
    """One term c * r^s with exact rational coefficient and exponent."""

    coeff: Fraction
    exponent: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        object.__setattr__(self, "exponent", Fraction(self.exponent))


@dataclass(frozen=True)
class PowerSum:
    """A finite sum of rational powers of r with rational coefficients.

    The term list is normalized on construction: sorted by exponent,
    duplicate exponents merged, zero coefficients dropped.
    """

    terms: tuple[PowerTerm, ...]

    def __post_init__(self):
        merged: dict[Fraction, Fraction] = {}
        for t in self.terms:
            if not isinstance(t, PowerTerm):
                t = PowerTerm(*t)
            merged[t.exponent] = merged.get(t.exponent, Fraction(0)) + t.coeff
        norm = tuple(
            PowerTerm(c, e) for e, c in sorted(merged.items()) if c != 0
        )
        object.__setattr__(self, "terms", norm)

    @staticmethod
    def of(*pairs: tuple[Rational, Rational]) -> "PowerSum":
        """Build from (coefficient, exponent) pairs."""
        return PowerSum(tuple(PowerTerm(Fraction(c), Fraction(e)) for c, e in pairs))

    @staticmethod
    def constant(c: Rational) -> "PowerSum":
        return PowerSum.of((c, 0))

    def __add__(self, other: "PowerSum") -> "PowerSum":
        return PowerSum(self.terms + other.terms)

    def __sub__(self, other: "PowerSum") -> "PowerSum":
        return self + (-other)

    def __neg__(self) -> "PowerSum":
        return PowerSum(tuple(PowerTerm(-t.coeff, t.exponent) for t in self.terms))

    def __mul__(self, other: "PowerSum") -> "PowerSum":
        prods = [
            PowerTerm(a.coeff * b.coeff, a.exponent + b.exponent)
            for a in self.terms
            for b in other.terms
        ]
        return PowerSum(tuple(prods))

    def scale(self, c: Rational) -> "PowerSum":
        c = Fraction(c)
        return PowerSum(tuple(PowerTerm(c * t.coeff, t.exponent) for t in self.terms))

    def derivative(self) -> "PowerSum":
        return PowerSum(
            tuple(
                PowerTerm(t.coeff * t.exponent, t.exponent - 1)
                for t in self.terms
                if t.exponent != 0
            )
        )

    def evaluate_exact(self, r: Rational) -> Fraction:
        """Exact value at rational r > 0; raises if some r^exponent is
        irrational at this point."""
        r = Fraction(r)
        if r < 0:
            raise ValueError("radius must be nonnegative")
        total = Fraction(0)
        for t in self.terms:
            total += t.coeff * rational_pow(r, t.exponent)
        return total

    def evaluate(self, r: float) -> float:
        """Floating-point value at r >= 0 (correctly-rounded pow per term)."""
        if r < 0:
            raise ValueError("radius must be nonnegative")
        total = 0.0
        for t in self.terms:
            e = float(t.exponent)
            if r == 0.0:
                if e < 0:
                    raise ZeroDivisionError("negative exponent at r=0")
                term = float(t.coeff) if e == 0 else 0.0
            else:
                term = float(t.coeff) * r**e
            total += term
        return total

    def min_exponent(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        return self.terms[0].exponent

    def is_zero(self) -> bool:
        return not self.terms


def _int_nth_root(a: int, q: int) -> int | None:
    """Exact integer q-th root of a >= 0, or None if a is not a perfect power."""
    if a < 0:
        return None
    if a in (0, 1) or q == 1:
        return a
    # Integer Newton iteration for the floor root; no float intermediates.
    x = 1 << -(-a.bit_length() // q)
    while True:
        y = ((q - 1) * x + a // x ** (q - 1)) // q
        if y >= x:
            break
        x = y
    return x if x**q == a else None


def rational_pow(x: Fraction, e: Fraction) -> Fraction:
    """x**e for rational x > 0 (x = 0 allowed with e >= 0); raises
    ValueError when the result is irrational."""
    x = Fraction(x)
    e = Fraction(e)
    if x == 0:
        if e < 0:
            raise ZeroDivisionError("0 raised to a negative power")
        return Fraction(1) if e == 0 else Fraction(0)
    if x < 0:
        raise ValueError("negative bases are not supported")
    if e == 0:
        return Fraction(1)
    p, q = e.numerator, e.denominator
    num = _int_nth_root(x.numerator, q)
    den = _int_nth_root(x.denominator, q)
    if num is None or den is None:
        raise ValueError(f"{x}**{e} is not rational")
    root = Fraction(num, den)
    return root**p


@dataclass(frozen=True)
class BoundaryPair:
    """Boundary data (value alpha, outward slope beta) at r = 1."""

    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "beta", Fraction(self.beta))


HOMOGENEOUS = BoundaryPair(Fraction(0), Fraction(0))


def is_admissible(bp: BoundaryPair) -> bool:
    """True iff beta <= 0 and alpha - beta/2 < 1, which keeps the boundary
    extension strictly below the contact plane."""
    return bp.beta <= 0 and bp.alpha - bp.beta / 2 < 1


def boundary_extension(bp: BoundaryPair) -> PowerSum:
    """The polynomial (alpha - beta/2) + (beta/2) r^2: it has zero
    bilaplacian and matches value alpha and slope beta at r = 1."""
    return PowerSum.of((bp.alpha - bp.beta / 2, 0), (bp.beta / 2, 2))


def apply_bilaplacian(ps: PowerSum, n: int) -> PowerSum:
    """Termwise bilaplacian: sum c K(s,N) r^(s-4), normalized."""
    _check_dimension(n)
    return PowerSum(
        tuple(
            PowerTerm(t.coeff * bilaplacian_power_coeff(t.exponent, n), t.exponent - 4)
            for t in ps.terms
        )
    )


def touchdown_shape() -> PowerSum:
    """The exact singular deflection shape 1 - r^(4/3)."""
    return PowerSum.of((1, 0), (-1, FOUR_THIRDS))


def touchdown_profile(m: Rational) -> PowerSum:
    """Clamped singular profile 1 - (3m/(3m-4)) r^(4/3) + (4/(3m-4)) r^m.

    Value and slope at r = 1 vanish identically for every admissible m.
    The coefficient pole m = 4/3 is rejected.  Parameters outside m in
    {2, 3} carry no closed-form certificates; see the certify module.
    """
    m = Fraction(m)
    if m <= 0:
        raise ValueError("profile parameter m must be positive")
    if m == FOUR_THIRDS:
        raise ValueError("m = 4/3 is a coefficient pole of the profile family")
    d = 3 * m - 4
    return PowerSum.of((1, 0), (Fraction(-3 * m, d), FOUR_THIRDS), (Fraction(4, d), m))


@dataclass(frozen=True)
class Constants:
    """Per-dimension exact constants used throughout."""

    dimension: int
    singular_voltage: Fraction
    hardy_rellich: Fraction

    @staticmethod
    def for_dimension(n: int) -> "Constants":
        return Constants(_check_dimension(n), singular_voltage(n), hardy_rellich(n))


def envelope_coefficient(
    lambda_star: Rational, n: int, rel_prec: Fraction = Fraction(1, 10**12)
) -> Fraction:
    """Cube root of lambda_star / singular_voltage(n), computed by rational
    bisection to the requested relative precision.

    This is the coefficient of the lower touchdown envelope
    1 - C r^(4/3) <= u* in the singular regime.
    """
    _check_dimension(n)
    lb = singular_voltage(n)
    if lb <= 0:
        raise ValueError(f"singular voltage is nonpositive in dimension {n}")
    lam = Fraction(lambda_star)
    if lam <= 0:
        raise ValueError("pull-in estimate must be positive")
    ratio = lam / lb
    lo, hi = Fraction(0), max(ratio, Fraction(1))
    # Exact cube shortcut.
    exact = _int_nth_root(ratio.numerator, 3)
    exact_d = _int_nth_root(ratio.denominator, 3)
    if exact is not None and exact_d is not None:
        return Fraction(exact, exact_d)
    while hi - lo > rel_prec * hi:
        mid = (lo + hi) / 2
        if mid**3 < ratio:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def dilate(w: PowerSum, r1: Rational) -> PowerSum:
    """Dilation w -> r1^(-4/3) (w(r1 r) - 1) + 1 of a radial power sum.

    Maps solutions of the deflection problem to solutions on the unit
    ball with boundary data alpha' = r1^(-4/3)(alpha - 1) + 1,
    beta' = r1^(-1/3) beta.  Requires every r1^(s - 4/3) to be rational;
    otherwise raises ValueError.
    """
    r1 = Fraction(r1)
    if not 0 < r1 < 1:
        raise ValueError("dilation radius must lie in (0, 1)")
    out: list[tuple[Fraction, Fraction]] = []
    const_coeff = Fraction(0)
    for t in w.terms:
        if t.exponent == 0:
            const_coeff = t.coeff
        else:
            out.append((t.coeff * rational_pow(r1, t.exponent - FOUR_THIRDS), t.exponent))
    # (c0 - 1) r1^(-4/3) + 1; combined first so the fixed-point case c0 = 1
    # never asks for an irrational power.
    const = Fraction(1)
    if const_coeff != 1:
        const += (const_coeff - 1) * rational_pow(r1, -FOUR_THIRDS)
    out.append((const, Fraction(0)))
    return PowerSum.of(*out)


def format_rational(x: Fraction) -> str:
    """Render as "num/den" (decimal-free, bit-exact)."""
    return f"{x.numerator}/{x.denominator}"


def rational_to_decimal(x: Fraction, digits: int = 17) -> str:
    """17-significant-digit decimal rendering for human readers."""
    return f"{float(x):.{digits}g}"
