"""Local tests at primes p >= 5: splitting type, p-th power criteria for
units, roots of unity in local fields, and place counts along cyclotomic
towers.

Every criterion reduces to finite congruences modulo p**2, after the
Teichmuller part of a unit has been killed by raising it to the residue
group order (p - 1 in residue field F_p, p**2 - 1 in F_{p^2}).  The mod-p**2
precision suffices because the p-th powers of principal units form exactly
1 + m**3 in the ramified case and 1 + p**2 O in the unramified case; the
derivations live in docs/algorithms.md.  p = 2 and p = 3 are rejected
everywhere: the criteria below assume p >= 5.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import is_prime, mult_order
from .quadratic import QuadElem, QuadField, norm_trace

__all__ = [
    "LocalContext",
    "classify_splitting",
    "is_pth_power_local",
    "mu_p_in_local",
    "pth_power_oracle",
    "tower_places",
]


@dataclass(frozen=True)
class LocalContext:
    """How p >= 5 behaves in a quadratic field, with sqrt(m) mod p**2 when split."""

    p: int
    field: QuadField
    kind: str
    sqrt_lifts: tuple[int, int] | None

    def __post_init__(self) -> None:
        if self.kind not in ("split", "inert", "ramified"):
            raise ValueError("kind must be split, inert or ramified")
        if (self.kind == "split") != (self.sqrt_lifts is not None):
            raise ValueError("sqrt lifts are stored exactly for the split case")


def _require_p(p: int) -> None:
    if p < 5 or not is_prime(p):
        raise ValueError("p must be a prime >= 5")


def _sqrt_mod_prime(a: int, p: int) -> int:
    # Tonelli-Shanks; a must be a nonzero residue
    a %= p
    if pow(a, (p - 1) // 2, p) != 1:
        raise ValueError("not a quadratic residue")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    m_, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m_ - i - 1), p)
        m_, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def classify_splitting(field: QuadField, p: int) -> LocalContext:
    """Splitting of p in the field: ramified iff p | disc, split iff
    kronecker(disc, p) = +1, inert otherwise."""
    _require_p(p)
    if field.disc % p == 0:
        return LocalContext(p=p, field=field, kind="ramified", sqrt_lifts=None)
    p2 = p * p
    a = field.m % p
    if pow(a, (p - 1) // 2, p) == 1:
        r = _sqrt_mod_prime(a, p)
        # Hensel lift to mod p**2
        r = (r - (r * r - field.m) * pow(2 * r, -1, p2)) % p2
        return LocalContext(p=p, field=field, kind="split", sqrt_lifts=tuple(sorted((r, p2 - r))))
    return LocalContext(p=p, field=field, kind="inert", sqrt_lifts=None)


def _pair_mul(u: tuple[int, int], v: tuple[int, int], m: int, mod: int) -> tuple[int, int]:
    a, b = u
    c, d = v
    return ((a * c + m * b * d) % mod, (a * d + b * c) % mod)


def _pair_pow(u: tuple[int, int], e: int, m: int, mod: int) -> tuple[int, int]:
    result = (1, 0)
    while e:
        if e & 1:
            result = _pair_mul(result, u, m, mod)
        u = _pair_mul(u, u, m, mod)
        e >>= 1
    return result


def _pth_power_flags(x: int, y: int, den: int, ctx: LocalContext) -> tuple[bool, ...]:
    # Core of the test; accepts raw coordinates so the scanner can pass
    # unit coordinates that were already reduced modulo a multiple of p**2.
    p = ctx.p
    p2 = p * p
    inv_den = pow(den, -1, p2)
    a = x * inv_den % p2
    b = y * inv_den % p2
    m = ctx.field.m % p2
    if ctx.kind == "ramified":
        wa, wb = _pair_pow((a, b), p - 1, m, p2)
        return ((wa - 1) % p2 == 0 and wb % p == 0,)
    if ctx.kind == "inert":
        wa, wb = _pair_pow((a, b), p2 - 1, m, p2)
        return (wa == 1 and wb == 0,)
    assert ctx.sqrt_lifts is not None
    return tuple(pow((a + b * r) % p2, p - 1, p2) == 1 for r in ctx.sqrt_lifts)


def is_pth_power_local(u: QuadElem, ctx: LocalContext) -> tuple[bool, ...]:
    """Whether the unit u is a p-th power in each completion above p.

    One flag for the ramified and inert kinds, two (ordered by the stored
    sqrt lifts) for the split kind.  The test is exact:

      ramified:  w = u**(p-1) mod p**2; u is a p-th power iff, writing
                 w - 1 = A + B sqrt(m), p**2 | A and p | B;
      inert:     w = u**(p**2-1) mod p**2; u is a p-th power iff w = 1;
      split:     the image of u under each embedding is a p-th power in Z_p
                 iff its (p-1)-th power is 1 mod p**2.
    """
    if u.field != ctx.field:
        raise ValueError("element and context belong to different fields")
    n, _ = norm_trace(u)
    if abs(n) != 1:
        raise ValueError("the local p-th power test expects a unit of norm +-1")
    return _pth_power_flags(u.x, u.y, u.den, ctx)


def pth_power_oracle(u: QuadElem, ctx: LocalContext) -> bool:
    """Exhaustive p-th power test for the ramified kind, p in {5, 7} only.

    Enumerates all p**3 candidates a + b sqrt(m) with a mod p**2, b mod p and
    compares p-th powers coordinatewise (p**2 on A, p on B).  Ground truth
    for the congruence criterion in tests.
    """
    if ctx.kind != "ramified":
        raise ValueError("the oracle handles the ramified kind only")
    if ctx.p > 7:
        raise ValueError("the oracle is restricted to p in {5, 7}")
    p = ctx.p
    p2 = p * p
    m = ctx.field.m % p2
    inv_den = pow(u.den, -1, p2)
    ta = u.x * inv_den % p2
    tb = u.y * inv_den % p2
    for a in range(p2):
        for b in range(p):
            wa, wb = _pair_pow((a, b), p, m, p2)
            if (wa - ta) % p2 == 0 and (wb - tb) % p == 0:
                return True
    return False


def mu_p_in_local(t: int, p: int) -> bool:
    """Whether mu_p lies in the unramified local field with residue size t.

    Tame criterion: the p-th roots of unity live in the field iff p | t - 1.
    """
    _require_p(p)
    if t < 2:
        raise ValueError("t must be a prime power >= 2")
    return (t - 1) % p == 0


def tower_places(q: int, f: int, p: int) -> int:
    """Stable number of places above a prime q along the cyclotomic Z_p-tower
    of a field where q has residue degree f.

    With t = q**f and d0 the order of t mod p, the count is
    p**max(0, v_p(t**d0 - 1) - 1).
    """
    _require_p(p)
    if q == p:
        raise ValueError("q must differ from p")
    if q < 2 or not is_prime(q):
        raise ValueError("q must be prime")
    if f < 1:
        raise ValueError("f must be a positive integer")
    t = q**f
    d0 = mult_order(t % p, p)
    v = 1
    while pow(t, d0, p ** (v + 1)) == 1:
        v += 1
    return p ** (v - 1)
