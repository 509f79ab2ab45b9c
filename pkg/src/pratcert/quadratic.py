"""Quadratic fields Q(sqrt(m)): exact elements, fundamental units,
and valuations at odd ramified primes.

Units come from the continued fraction of sqrt(m), with period detection on
the exact (P, Q) state.  Facts the implementation leans on (proofs in
docs/algorithms.md):

  * the convergent just before the first return of Q to 1 gives the minimal
    solution of x^2 - m y^2 = (-1)^period;
  * for m = 1 (mod 4) the unit group of Z[sqrt(m)] has index 1 or 3 in the
    maximal order's, and the index is 1 whenever m = 1 (mod 8), so the
    half-integral fundamental unit is recovered, when it exists, as an exact
    integer cube root of the minimal Pell solution;
  * for an odd prime l dividing the discriminant, the valuation of e at the
    unique prime above l equals the l-adic valuation of N(e);
  * N(u^2 - 1) = 2 + 2 N(u) - T(u)^2 when |N(u)| = 1, so deciding whether
    that valuation is 0, 1, 2 or >= 3 needs the trace only modulo l^3.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

from .arith import factor, is_prime, padic_valuation

__all__ = [
    "GE3",
    "FundUnit",
    "QuadElem",
    "QuadField",
    "fundamental_unit",
    "fundamental_unit_mod",
    "make_field",
    "norm_trace",
    "ramified_valuation",
    "unit_norm_sign",
    "unit_sq_minus_one_valuation",
]

# symbolic valuation used by the reduced (modular) scan path
GE3 = ">=3"


@dataclass(frozen=True)
class QuadField:
    """Q(sqrt(m)) for squarefree m != 0, 1, with its fundamental discriminant."""

    m: int
    disc: int
    is_real: bool

    def __post_init__(self) -> None:
        if self.m in (0, 1) or not factor(self.m).is_squarefree():
            raise ValueError("field radicand must be squarefree and not 0 or 1")
        expected = self.m if self.m % 4 == 1 else 4 * self.m
        if self.disc != expected or self.is_real != (self.m > 0):
            raise ValueError("inconsistent field data")


def make_field(m0: int) -> QuadField:
    """Field generated by sqrt(m0); m0 is replaced by its squarefree core."""
    if m0 == 0:
        raise ValueError("radicand must be nonzero")
    if m0 > 0 and isqrt(m0) ** 2 == m0:
        raise ValueError("radicand must not be a perfect square")
    m = factor(m0).squarefree_core()
    disc = m if m % 4 == 1 else 4 * m
    return QuadField(m=m, disc=disc, is_real=m > 0)


@dataclass(frozen=True)
class QuadElem:
    """(x + y sqrt(m)) / den with den in {1, 2}.

    den = 2 is the canonical shape of half-integral elements of the maximal
    order: it requires m = 1 (mod 4) and x, y both odd.
    """

    field: QuadField
    x: int
    y: int
    den: int = 1

    def __post_init__(self) -> None:
        if self.den == 1:
            return
        if self.den != 2:
            raise ValueError("den must be 1 or 2")
        if self.field.m % 4 != 1 or self.x % 2 == 0 or self.y % 2 == 0:
            raise ValueError("den = 2 requires m = 1 (mod 4) and odd x, y")

    @classmethod
    def make(cls, field: QuadField, x: int, y: int, den: int = 1) -> "QuadElem":
        """Build an element from coordinates over any power-of-two denominator."""
        if den < 1 or den & (den - 1):
            raise ValueError("den must be a positive power of 2")
        while den % 2 == 0 and x % 2 == 0 and y % 2 == 0:
            x //= 2
            y //= 2
            den //= 2
        if den > 2:
            raise ValueError("coordinates do not describe an algebraic integer")
        return cls(field=field, x=x, y=y, den=den)

    def norm(self) -> int:
        n4 = self.x * self.x - self.field.m * self.y * self.y
        num, rem = divmod(n4, self.den * self.den)
        assert rem == 0
        return num

    def trace(self) -> int:
        num, rem = divmod(2 * self.x, self.den)
        assert rem == 0
        return num

    def conjugate(self) -> "QuadElem":
        return QuadElem(self.field, self.x, -self.y, self.den)

    def inverse(self) -> "QuadElem":
        n = self.norm()
        if abs(n) != 1:
            raise ValueError("only elements of norm +-1 have integral inverses")
        return QuadElem(self.field, n * self.x, -n * self.y, self.den)

    def __mul__(self, other: "QuadElem | int") -> "QuadElem":
        if isinstance(other, int):
            return QuadElem.make(self.field, self.x * other, self.y * other, self.den)
        if self.field != other.field:
            raise ValueError("elements live in different fields")
        m = self.field.m
        x = self.x * other.x + m * self.y * other.y
        y = self.x * other.y + self.y * other.x
        return QuadElem.make(self.field, x, y, self.den * other.den)

    __rmul__ = __mul__

    def __add__(self, other: "QuadElem | int") -> "QuadElem":
        if isinstance(other, int):
            return QuadElem.make(self.field, self.x + other * self.den, self.y, self.den)
        if self.field != other.field:
            raise ValueError("elements live in different fields")
        if self.den == other.den:
            return QuadElem.make(self.field, self.x + other.x, self.y + other.y, self.den)
        a, b = (self, other) if self.den == 2 else (other, self)
        return QuadElem.make(self.field, a.x + 2 * b.x, a.y + 2 * b.y, 2)

    def __sub__(self, other: "QuadElem | int") -> "QuadElem":
        return self + (-other)

    def __neg__(self) -> "QuadElem":
        return QuadElem(self.field, -self.x, -self.y, self.den)

    def __pow__(self, e: int) -> "QuadElem":
        if e < 0:
            return self.inverse() ** (-e)
        result = QuadElem(self.field, 1, 0)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __str__(self) -> str:
        sign = "-" if self.y < 0 else "+"
        body = f"{self.x} {sign} {abs(self.y)}*sqrt({self.field.m})"
        return f"({body})/2" if self.den == 2 else body


def norm_trace(e: QuadElem) -> tuple[int, int]:
    """Field norm and trace of e, always exact integers."""
    return e.norm(), e.trace()


@dataclass(frozen=True)
class FundUnit:
    """Fundamental unit > 1 of the maximal order of a real quadratic field."""

    elem: QuadElem
    unit_norm: int

    def __post_init__(self) -> None:
        if self.unit_norm not in (-1, 1) or self.elem.norm() != self.unit_norm:
            raise ValueError("unit norm mismatch")
        if self.elem.x <= 0 or self.elem.y <= 0:
            raise ValueError("the fundamental unit is taken > 1")


def _pell_cf(m: int, mod: int | None = None) -> tuple[int, int, int]:
    """Minimal solution of x^2 - m y^2 = (-1)**period from the CF of sqrt(m).

    With ``mod`` set, the (exponentially growing) convergents are reduced
    modulo ``mod`` while the (P, Q) state, and hence the period, stays exact.
    Returns (x, y, period).
    """
    a0 = isqrt(m)
    P, Q, a = 0, 1, a0
    h_prev, h = 1, a0
    k_prev, k = 0, 1
    steps = 0
    while True:
        P = a * Q - P
        Q = (m - P * P) // Q
        steps += 1
        if Q == 1:
            return h, k, steps
        a = (a0 + P) // Q
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        if mod is not None:
            h %= mod
            k %= mod


def unit_norm_sign(m: int) -> int:
    """Norm of the fundamental unit of Q(sqrt(m)) from the CF period alone."""
    a0 = isqrt(m)
    P, Q, a = 0, 1, a0
    steps = 0
    while True:
        P = a * Q - P
        Q = (m - P * P) // Q
        steps += 1
        if Q == 1:
            return -1 if steps % 2 else 1
        a = (a0 + P) // Q


def _icbrt(n: int) -> int:
    if n < 0:
        raise ValueError("negative input")
    if n == 0:
        return 0
    x = 1 << ((n.bit_length() + 2) // 3)
    while True:
        x_next = (2 * x + n // (x * x)) // 3
        if x_next >= x:
            break
        x = x_next
    while x * x * x > n:
        x -= 1
    return x


def _half_unit_from_cube(m: int, x1: int, n0: int) -> tuple[int, int] | None:
    # If the minimal Pell solution is a cube of a half-integral unit
    # (x + y sqrt(m))/2, its trace x satisfies x^3 - 3 n0 x = 2 x1.
    t1 = 2 * x1
    guess = _icbrt(t1)
    for x in range(max(1, guess - 1), guess + 3):
        if x**3 - 3 * n0 * x == t1:
            ysq, rem = divmod(x * x - 4 * n0, m)
            if rem:
                return None
            y = isqrt(ysq)
            if y * y != ysq:
                return None
            assert x % 2 == 1 and y % 2 == 1
            return x, y
    return None


def fundamental_unit(field: QuadField) -> FundUnit:
    """Fundamental unit > 1 of the maximal order, exact."""
    if not field.is_real:
        raise ValueError("imaginary quadratic fields have no fundamental unit")
    m = field.m
    x, y, period = _pell_cf(m)
    norm = -1 if period % 2 else 1
    den = 1
    if m % 8 == 5:
        half = _half_unit_from_cube(m, x, norm)
        if half is not None:
            x, y = half
            den = 2
    return FundUnit(elem=QuadElem(field, x, y, den), unit_norm=norm)


def fundamental_unit_mod(field: QuadField, modulus: int) -> tuple[int, int, int] | None:
    """Fundamental unit coordinates reduced mod ``modulus``: (x, y, norm).

    Only valid when m != 5 (mod 8); in that residue class the unit may be
    half-integral and cannot be reconstructed from reduced convergents, so
    None is returned and callers fall back to exact arithmetic.  The norm and
    the denominator (always 1 here) are exact.
    """
    if not field.is_real:
        raise ValueError("imaginary quadratic fields have no fundamental unit")
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    m = field.m
    if m % 8 == 5:
        return None
    x, y, period = _pell_cf(m, mod=modulus)
    return x % modulus, y % modulus, -1 if period % 2 else 1


def ramified_valuation(e: QuadElem, ell: int) -> int:
    """Valuation of e at the unique prime above an odd ramified prime ell.

    Computed as the ell-adic valuation of N(e); see docs/algorithms.md for
    why the two agree.
    """
    if ell == 2 or not is_prime(ell):
        raise ValueError("ell must be an odd prime")
    if e.field.disc % ell != 0:
        raise ValueError("ell must divide the field discriminant")
    n = e.norm()
    if n == 0:
        raise ValueError("the zero element has no finite valuation")
    return padic_valuation(n, ell)[0]


def unit_sq_minus_one_valuation(trace: int, unit_norm: int, ell: int) -> int | str:
    """Valuation of u^2 - 1 above ell for a unit u, from T(u) mod ell**3.

    Exact when the answer is 0, 1 or 2; returns the symbol GE3 otherwise.
    The callers only ever need to distinguish those four cases.
    """
    if unit_norm not in (-1, 1):
        raise ValueError("unit norm must be +-1")
    mod = ell**3
    w = (2 + 2 * unit_norm - trace * trace) % mod
    if w == 0:
        return GE3
    v = 0
    while w % ell == 0:
        w //= ell
        v += 1
    return v
