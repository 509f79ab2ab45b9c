"""p-rationality reports for quadratic and biquadratic fields, and the
freeness certificate for Q(sqrt(pq), sqrt(-d)).

The certificate checks sufficient conditions only.  CERTIFIED_FREE means
every hypothesis was verified exactly; NOT_CERTIFIED means some hypothesis
failed or could not be established, never that the module is non-free.

All verdict-driving arithmetic for the quartic field happens inside its real
quadratic subfield: with E the unit group of the quartic field, Z_p (x) E has
rank 1 and the index of the subgroup generated by eps**2 is prime to p, so
the p-adic tests see only the real-subfield fundamental unit eps.  The docs
spell this out (docs/algorithms.md).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from typing import Any

from ._version import __version__
from .arith import factor, is_prime, kronecker, mult_order
from .classno import h_imaginary, h_plus_real
from .localfield import (
    LocalContext,
    _pth_power_flags,
    classify_splitting,
    is_pth_power_local,
    mu_p_in_local,
    tower_places,
)
from .quadratic import (
    QuadElem,
    fundamental_unit,
    fundamental_unit_mod,
    make_field,
    ramified_valuation,
    unit_sq_minus_one_valuation,
)

__all__ = [
    "CERTIFIED_FREE",
    "NOT_CERTIFIED",
    "Check",
    "FamilyParams",
    "FamilyValidationError",
    "FreenessReport",
    "PRationalityReport",
    "SummandCheck",
    "alpha_S",
    "certify_freeness",
    "direct_summand_check",
    "family_violations",
    "prat_biquad",
    "prat_imag",
    "prat_real",
    "validate_family",
]

CERTIFIED_FREE = "certified_free"
NOT_CERTIFIED = "not_certified"

SCHEMA_VERSION = 1


class FamilyValidationError(ValueError):
    """Raised when (p, q, d) violates the family constraints.

    ``reasons`` names every violated condition, not just the first.
    """

    def __init__(self, reasons: list[str]) -> None:
        super().__init__("; ".join(reasons))
        self.reasons = tuple(reasons)


@dataclass(frozen=True)
class FamilyParams:
    """Validated parameters of the quartic family Q(sqrt(pq), sqrt(-d)).

    The congruence conditions force the residue degrees above p and q to be
    2 and keep the p-th roots of unity out of the field, so those facts are
    carried as constants.
    """

    p: int
    q: int
    d: int
    residue_degree_p: int = 2
    residue_degree_q: int = 2
    mu_p_in_field: bool = False


def family_violations(p: int, q: int, d: int) -> list[str]:
    """Every violated family condition, by name; empty list means valid.

    Conditions: p prime > 3; q an odd prime distinct from p with
    q = -1 (mod p); d >= 1 squarefree, coprime to pq, with -d a quadratic
    non-residue mod p and mod q.
    """
    reasons: list[str] = []
    p_ok = p > 3 and is_prime(p)
    if not p_ok:
        reasons.append("p must be a prime greater than 3")
    q_ok = q >= 3 and q % 2 == 1 and is_prime(q)
    if not q_ok:
        reasons.append("q must be an odd prime")
    if p_ok and q_ok and q == p:
        reasons.append("q must be distinct from p")
    if p_ok and q_ok and q != p and (q + 1) % p != 0:
        reasons.append("q must be congruent to -1 modulo p")
    d_ok = d >= 1
    if not d_ok:
        reasons.append("d must be a positive integer")
    elif d > 1 and not _is_squarefree(d):
        reasons.append("d must be squarefree")
        d_ok = False
    if d_ok and p_ok and d % p == 0:
        reasons.append("d must not be divisible by p")
    if d_ok and q_ok and d % q == 0:
        reasons.append("d must not be divisible by q")
    if d_ok and p_ok and d % p != 0 and kronecker(-d, p) != -1:
        reasons.append("-d must be a quadratic non-residue modulo p")
    if d_ok and q_ok and q != p and d % q != 0 and kronecker(-d, q) != -1:
        reasons.append("-d must be a quadratic non-residue modulo q")
    return reasons


def _is_squarefree(n: int) -> bool:
    return factor(n).is_squarefree()


def validate_family(p: int, q: int, d: int) -> FamilyParams:
    """Validated FamilyParams, or FamilyValidationError naming all failures."""
    reasons = family_violations(p, q, d)
    if reasons:
        raise FamilyValidationError(reasons)
    return FamilyParams(p=p, q=q, d=d)


@dataclass(frozen=True)
class Check:
    """One named fact with the value observed and whether it passed."""

    name: str
    value: Any
    passed: bool


@dataclass(frozen=True)
class PRationalityReport:
    """p-rationality verdict for a quadratic or biquadratic field."""

    field_desc: str
    radicands: tuple[int, ...]
    p: int
    checks: tuple[Check, ...]
    verdict: bool


def _require_prime_p(p: int) -> None:
    if p < 5 or not is_prime(p):
        raise ValueError("p must be a prime >= 5")


def prat_imag(d0: int, p: int) -> PRationalityReport:
    """p-rationality of the imaginary quadratic field Q(sqrt(-d0)), d0 > 0.

    For an imaginary quadratic field and p >= 5 the criterion is a single
    class-number condition: the field is p-rational iff p does not divide h.
    """
    _require_prime_p(p)
    if d0 < 1:
        raise ValueError("d0 must be a positive integer")
    field = make_field(-d0)
    h = h_imaginary(field.disc).h
    checks = (Check(name="class_number_prime_to_p", value=h, passed=h % p != 0),)
    return PRationalityReport(
        field_desc=f"Q(sqrt({field.m}))",
        radicands=(field.m,),
        p=p,
        checks=checks,
        verdict=all(c.passed for c in checks),
    )


def _place_labels(ctx: LocalContext) -> tuple[str, ...]:
    if ctx.kind == "split":
        return ("p_first", "p_second")
    return ("p",)


def prat_real(m: int, p: int) -> PRationalityReport:
    """p-rationality of the real quadratic field Q(sqrt(m)), m > 1.

    Criterion for p >= 5: p does not divide the class number, and the
    fundamental unit is not a p-th power in any completion above p.
    """
    _require_prime_p(p)
    if m < 2:
        raise ValueError("m must be an integer > 1")
    field = make_field(m)
    cn = h_plus_real(field.disc)
    fu = fundamental_unit(field)
    ctx = classify_splitting(field, p)
    flags = is_pth_power_local(fu.elem, ctx)
    checks = [Check(name="class_number_prime_to_p", value=cn.h, passed=cn.h % p != 0)]
    for label, flag in zip(_place_labels(ctx), flags):
        checks.append(
            Check(name=f"unit_pth_power_at_{label}", value=flag, passed=not flag)
        )
    return PRationalityReport(
        field_desc=f"Q(sqrt({field.m}))",
        radicands=(field.m,),
        p=p,
        checks=tuple(checks),
        verdict=all(c.passed for c in checks),
    )


def prat_biquad(m1: int, m2: int, p: int) -> PRationalityReport:
    """p-rationality of the biquadratic field Q(sqrt(m1), sqrt(m2)).

    The field is p-rational iff its three quadratic subfields are, with
    radicands m1, m2 and the squarefree core of m1*m2, each dispatched to
    the real or imaginary criterion by sign.
    """
    _require_prime_p(p)
    f1 = make_field(m1)
    f2 = make_field(m2)
    if f1.m == f2.m:
        raise ValueError("radicands generate the same quadratic field")
    f3 = make_field(f1.m * f2.m)
    checks: list[Check] = []
    verdict = True
    for sub in (f1, f2, f3):
        rep = prat_real(sub.m, p) if sub.is_real else prat_imag(-sub.m, p)
        verdict = verdict and rep.verdict
        for c in rep.checks:
            checks.append(
                Check(name=f"sqrt({sub.m}):{c.name}", value=c.value, passed=c.passed)
            )
    return PRationalityReport(
        field_desc=f"Q(sqrt({f1.m}), sqrt({f2.m}))",
        radicands=(f1.m, f2.m, f3.m),
        p=p,
        checks=tuple(checks),
        verdict=verdict,
    )


@dataclass(frozen=True)
class SummandCheck:
    """Evidence that the global units split off the local units at p.

    v_p_val and v_q_val are the valuations of eps**2 - 1 at the ramified
    places above p and q (an exact integer, or the symbol ">=3" on the
    reduced path); primitive is the certifying threshold v_p_val <= 2.
    """

    e_s_generated: bool
    v_p_val: int | str
    v_q_val: int | str
    primitive: bool


def _unit_square_residue_order(x: int, den: int, q: int) -> int:
    # order of eps**2 mod the ramified prime above q; sqrt(pq) vanishes
    # there, so only the rational coordinate survives
    r = x * pow(den, -1, q) % q
    r2 = r * r % q
    if r2 == 0:
        raise ArithmeticError("a unit cannot vanish at an unramified coordinate")
    return mult_order(r2, q)


def _summand_from_exact_unit(params: FamilyParams, elem: QuadElem) -> SummandCheck:
    w = elem * elem - 1
    v_p = ramified_valuation(w, params.p)
    v_q = ramified_valuation(w, params.q)
    order = _unit_square_residue_order(elem.x, elem.den, params.q)
    return SummandCheck(
        e_s_generated=order % params.p != 0,
        v_p_val=v_p,
        v_q_val=v_q,
        primitive=isinstance(v_p, int) and v_p <= 2,
    )


def direct_summand_check(params: FamilyParams) -> SummandCheck:
    """Direct-summand evidence from the exact fundamental unit of Q(sqrt(pq)).

    e_s_generated asks that the order of eps**2 in the residue field at the
    place above q be prime to p (automatic on the family since the order
    divides q - 1); primitive = (v_p_val <= 2) certifies that the unit
    image is a direct summand of the principal local units at p.
    """
    field = make_field(params.p * params.q)
    fu = fundamental_unit(field)
    return _summand_from_exact_unit(params, fu.elem)


def alpha_S(params: FamilyParams) -> int:
    """The 0/1 weight of the single tame place above q.

    The weight is 1 iff the p-th roots of unity miss the completion of the
    real subfield (p does not divide q - 1) but appear in the completion of
    the quartic field (p divides q**2 - 1).  Both hold on the family, where
    q = -1 (mod p), so the value is 1 for every valid FamilyParams.
    """
    p, q = params.p, params.q
    in_real_completion = mu_p_in_local(q, p)
    in_quartic_completion = mu_p_in_local(q * q, p)
    return 1 if (not in_real_completion and in_quartic_completion) else 0


@dataclass(frozen=True)
class FreenessReport:
    """Freeness certificate for Q(sqrt(pq), sqrt(-d)).

    verdict is "certified_free" (with rank 2) when every hypothesis was
    verified, else "not_certified" with the failing conditions in reasons.
    invalid lists parameter violations when (p, q, d) is outside the family.
    facts records every quantity the verdict consumed, keyed by name.
    """

    p: int
    q: int
    d: int
    verdict: str
    rank: int | None
    mode: str
    facts: dict[str, Any] = dataclass_field(default_factory=dict)
    reasons: tuple[str, ...] = ()
    invalid: tuple[str, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "tool_version": __version__,
            "p": self.p,
            "q": self.q,
            "d": self.d,
            "verdict": self.verdict,
            "rank": self.rank,
            "mode": self.mode,
            "facts": dict(self.facts),
            "reasons": list(self.reasons),
            "invalid": list(self.invalid),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "FreenessReport":
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ValueError("unsupported schema_version")
        return cls(
            p=data["p"],
            q=data["q"],
            d=data["d"],
            verdict=data["verdict"],
            rank=data["rank"],
            mode=data["mode"],
            facts=dict(data["facts"]),
            reasons=tuple(data["reasons"]),
            invalid=tuple(data["invalid"]),
        )


def certify_freeness(
    p: int,
    q: int,
    d: int,
    *,
    exact: bool = True,
    lazy: bool = False,
    _unit_elem: QuadElem | None = None,
) -> FreenessReport:
    """Freeness certificate for the quartic field Q(sqrt(pq), sqrt(-d)).

    Pipeline: validate the parameters; count the stable places above q in
    the cyclotomic tower (s); check that p is prime to the class numbers of
    the three quadratic subfields; test the fundamental unit of Q(sqrt(pq))
    at the place above p; bound the valuation of eps**2 - 1 at p; check the
    residue order at q.  Certification needs all of: s = 1, the three
    class-number conditions, unit not a local p-th power, v_p_val <= 2,
    e_s_generated, and no p-th roots of unity in the field.

    exact=False reduces the unit coordinates modulo p**5 * q**3 during the
    continued-fraction walk (orders of magnitude faster for scans) and
    reports valuations >= 3 as the symbol ">=3"; it falls back to the exact
    unit when the radicand is 5 mod 8, where a half-integral unit could
    hide below the integral one.  lazy=True stops at the first failing
    stage, recording the facts computed so far.

    Parameter violations produce a NOT_CERTIFIED report with the violations
    in ``invalid``; no exception escapes for bad (p, q, d).

    _unit_elem substitutes a caller-supplied unit for the computed one on
    the exact path (renormalization-invariance tests only).
    """
    mode_requested = "exact" if exact else "fast"
    violations = family_violations(p, q, d)
    if violations:
        return FreenessReport(
            p=p,
            q=q,
            d=d,
            verdict=NOT_CERTIFIED,
            rank=None,
            mode=mode_requested,
            facts={},
            reasons=("parameters are outside the certified family",),
            invalid=tuple(violations),
        )
    params = FamilyParams(p=p, q=q, d=d)
    facts: dict[str, Any] = {}
    reasons: list[str] = []

    # stage 1: congruence-level facts (cheap, no class numbers, no units)
    s = tower_places(q, params.residue_degree_q, p)
    facts["s"] = s
    if s != 1:
        reasons.append(f"s = {s}, need a single stable place above q in the tower")
    facts["alpha_S"] = alpha_S(params)
    facts["mu_p_in_K"] = params.mu_p_in_field
    facts["mu_p_in_local_at_q"] = mu_p_in_local(q * q, p)
    if params.mu_p_in_field:
        reasons.append("the field contains the p-th roots of unity")
    if lazy and reasons:
        return _finish(params, mode_requested, facts, reasons)

    # stage 2: imaginary subfield class numbers; the large discriminant
    # -4*d*p*q dominates the runtime of the whole certificate
    h_small = h_imaginary(make_field(-d).disc).h
    facts["h_imag_d"] = h_small
    if h_small % p == 0:
        reasons.append(f"p divides the class number {h_small} of Q(sqrt({-d}))")
    h_large = h_imaginary(make_field(-d * p * q).disc).h
    facts["h_imag_dpq"] = h_large
    if h_large % p == 0:
        reasons.append(f"p divides the class number {h_large} of Q(sqrt({-d * p * q}))")
    if lazy and reasons:
        return _finish(params, mode_requested, facts, reasons)

    # stage 3: real subfield class number (narrow count, wide value)
    real_field = make_field(p * q)
    cn = h_plus_real(real_field.disc)
    facts["h_plus_real_pq"] = cn.h_plus
    facts["h_real_pq"] = cn.h
    if cn.h % p == 0:
        reasons.append(f"p divides the class number {cn.h} of Q(sqrt({p * q}))")
    if lazy and reasons:
        return _finish(params, mode_requested, facts, reasons)

    # stage 4: fundamental unit of the real subfield
    exact_elem: QuadElem | None = None
    reduced: tuple[int, int, int] | None = None
    if _unit_elem is not None:
        if _unit_elem.field != real_field:
            raise ValueError("substitute unit lives in the wrong field")
        exact_elem = _unit_elem
    elif exact:
        exact_elem = fundamental_unit(real_field).elem
    else:
        reduced = fundamental_unit_mod(real_field, p**5 * q**3)
        if reduced is None:
            exact_elem = fundamental_unit(real_field).elem
    if exact_elem is not None:
        ux, uy, uden = exact_elem.x, exact_elem.y, exact_elem.den
        unit_norm = exact_elem.norm()
        mode = "exact"
    else:
        assert reduced is not None
        ux, uy, unit_norm = reduced
        uden = 1
        mode = "fast"
    facts["mode"] = mode
    facts["unit_norm"] = unit_norm
    if exact_elem is not None and _unit_elem is None:
        facts["unit"] = str(exact_elem)

    ctx = classify_splitting(real_field, p)
    pth_power = _pth_power_flags(ux, uy, uden, ctx)[0]
    facts["unit_pth_power_at_p"] = pth_power
    if pth_power:
        reasons.append("the fundamental unit is a p-th power in the completion at p")

    if exact_elem is not None:
        w = exact_elem * exact_elem - 1
        v_p_val: int | str = ramified_valuation(w, p)
        v_q_val: int | str = ramified_valuation(w, q)
    else:
        trace = 2 * ux
        v_p_val = unit_sq_minus_one_valuation(trace, unit_norm, p)
        v_q_val = unit_sq_minus_one_valuation(trace, unit_norm, q)
    facts["v_p_val"] = v_p_val
    facts["v_q_val"] = v_q_val
    primitive = isinstance(v_p_val, int) and v_p_val <= 2
    if not primitive:
        reasons.append(
            f"v(eps**2 - 1) = {v_p_val} at the place above p, need at most 2"
        )
    order = _unit_square_residue_order(ux, uden, q)
    e_s = order % p != 0
    facts["e_s_generated"] = e_s
    if not e_s:
        reasons.append("p divides the residue order of eps**2 at the place above q")

    if facts["alpha_S"] != 1:
        reasons.append("the tame place weight alpha_S is not 1")
    return _finish(params, mode_requested, facts, reasons)


def _finish(
    params: FamilyParams,
    mode_requested: str,
    facts: dict[str, Any],
    reasons: list[str],
) -> FreenessReport:
    facts.setdefault("mode", mode_requested)
    certified = not reasons
    return FreenessReport(
        p=params.p,
        q=params.q,
        d=params.d,
        verdict=CERTIFIED_FREE if certified else NOT_CERTIFIED,
        rank=2 if certified else None,
        mode=facts["mode"],
        facts=facts,
        reasons=tuple(reasons),
        invalid=(),
    )
