"""Exact integer primitives shared by every other module.

Primality is a deterministic Miller-Rabin test whose witness set is proven
complete below 2**64; factorization runs trial division up to 10**6 and
hands surviving cofactors to Brent's variant of Pollard rho.  Nothing here
uses floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

__all__ = [
    "Factorization",
    "factor",
    "is_prime",
    "kronecker",
    "mult_order",
    "padic_valuation",
    "primes_up_to",
]

# Proven deterministic for all n < 3_317_044_064_679_887_385_961_981 > 2**64.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_TRIAL_LIMIT = 10**6


def is_prime(n: int) -> bool:
    """Deterministic primality test for 0 <= n < 2**64.

    Inputs outside that range are rejected rather than answered
    probabilistically.
    """
    if n < 0:
        raise ValueError("is_prime expects a nonnegative integer")
    if n >= 1 << 64:
        raise ValueError("is_prime is deterministic only for 64-bit inputs")
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = (d & -d).bit_length() - 1
    d >>= r
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Factorization:
    """Complete factorization of a nonzero integer, sign kept separate.

    ``n`` is the absolute value, ``factors`` lists (prime, exponent) with
    strictly increasing primes.
    """

    n: int
    sign: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.n < 1 or self.sign not in (-1, 1):
            raise ValueError("n must be positive and sign must be +-1")
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1 or not is_prime(p):
                raise ValueError("factors must be increasing (prime, exponent) pairs")
            last = p
            prod *= p**e
        if prod != self.n:
            raise ValueError("factor product does not equal n")

    def value(self) -> int:
        return self.sign * self.n

    def valuation(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    def squarefree_core(self) -> int:
        core = 1
        for p, e in self.factors:
            if e % 2:
                core *= p
        return self.sign * core


def _brent_rho(n: int) -> int:
    # n odd composite with no prime factor <= _TRIAL_LIMIT
    for c in range(1, 200):
        y, r, q = 2, 1, 1
        g = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += 128
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho could not split {n}")


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _brent_rho(n)
    _split(d, out)
    _split(n // d, out)


def factor(n: int) -> Factorization:
    """Complete factorization of |n|; the sign is reported separately."""
    if n == 0:
        raise ValueError("0 has no factorization")
    sign = -1 if n < 0 else 1
    m = abs(n)
    out: dict[int, int] = {}
    for p in (2, 3):
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
    f, step = 5, 2
    while f * f <= m and f <= _TRIAL_LIMIT:
        if m % f == 0:
            e = 0
            while m % f == 0:
                m //= f
                e += 1
            out[f] = e
        f += step
        step = 6 - step
    if m > 1:
        if f * f > m:
            # no divisor up to sqrt(m): the cofactor is prime
            out[m] = out.get(m, 0) + 1
        else:
            _split(m, out)
    return Factorization(n=abs(n), sign=sign, factors=tuple(sorted(out.items())))


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), defined for all integers not both zero."""
    if n == 0:
        if a == 0:
            raise ValueError("kronecker(0, 0) is undefined")
        return 1 if abs(a) == 1 else 0
    if a % 2 == 0 and n % 2 == 0:
        return 0
    k = 1
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v % 2 == 1 and a % 8 in (3, 5):
        k = -k
    if n < 0:
        n = -n
        if a < 0:
            k = -k
    while True:
        a %= n
        if a == 0:
            return k if n == 1 else 0
        v = 0
        while a % 2 == 0:
            a //= 2
            v += 1
        if v % 2 == 1 and n % 8 in (3, 5):
            k = -k
        if a % 4 == 3 and n % 4 == 3:
            k = -k
        a, n = n, a


def padic_valuation(n: int, ell: int) -> tuple[int, int]:
    """Largest v with ell**v | n, together with the exact cofactor n / ell**v."""
    if n == 0:
        raise ValueError("the valuation of 0 is infinite")
    if ell < 2 or not is_prime(ell):
        raise ValueError("ell must be prime")
    v = 0
    while n % ell == 0:
        n //= ell
        v += 1
    return v, n


def _carmichael(m: int) -> int:
    lam = 1
    for p, e in factor(m).factors:
        if p == 2:
            block = 1 if e == 1 else 2 if e == 2 else 1 << (e - 2)
        else:
            block = (p - 1) * p ** (e - 1)
        lam = lam * block // gcd(lam, block)
    return lam


def mult_order(a: int, m: int) -> int:
    """Least k >= 1 with a**k = 1 (mod m); requires gcd(a, m) = 1."""
    if m < 2:
        raise ValueError("modulus must be at least 2")
    a %= m
    if gcd(a, m) != 1:
        raise ValueError("mult_order requires gcd(a, m) = 1")
    order = _carmichael(m)
    for p, _ in factor(order).factors:
        while order % p == 0 and pow(a, order // p, m) == 1:
            order //= p
    return order


def primes_up_to(n: int) -> list[int]:
    """All primes <= n by a plain sieve."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i, flag in enumerate(sieve) if flag]
