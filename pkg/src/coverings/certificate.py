"""Machine-checkable certificates that a multiplicative base factorizes no
covering system.

The base is cut into blocks ``P_i = base ∩ (T_{i-1}, T_i]`` by thresholds
``T_0 < T_1 < ...`` (default ``T_i = e^(6+i)``).  The run bounds the bias
statistic at step 0, then for each step ``i`` checks it against the
threshold that makes the inductive criterion fire and propagates the bias
bound to step ``i+1``.  Every quantity is a :class:`CertifiedValue`; a step
passes only when an UPPER bias bound is at most a LOWER threshold bound.

Steps beyond ``i_max`` are not checked here.  They rest on the analytic
growth comparison from the literature, and the report says so.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal
from fractions import Fraction
from typing import Callable

import numpy as np

from .base import BaseDescriptor, tail_numerator_poly
from .certified import LOWER, UPPER, CertifiedValue
from .primes import (
    PrimeInterval,
    certified_product_of_terms,
    certified_sum_of_terms,
    exp_floor,
    primes_in,
)

__all__ = [
    "CertificateParams",
    "StepReport",
    "CertificateReport",
    "BaseCaseInvalid",
    "CERTIFIED",
    "BASE_CASE_INVALID",
    "failed_at",
    "TAIL_ASSUMPTION",
    "delta_sum_bound",
    "base_case_beta",
    "c1_threshold",
    "c1_check",
    "growth_factor",
    "beta_step",
    "product_bound",
    "certify",
    "hough_quick_check",
    "format_bound",
]

CERTIFIED = "CERTIFIED_UP_TO_I_MAX"
BASE_CASE_INVALID = "BASE_CASE_INVALID"


def failed_at(i: int) -> str:
    return f"FAILED_AT_STEP({i})"


TAIL_ASSUMPTION = (
    "steps i > {i_max} are not checked numerically; they rely on the analytic "
    "lemma that the threshold A_k grows faster than the bias bound beyond {t}"
)

HOUGH_ASSUMPTION = (
    "relies on Hough's theorem with P0 = e^11 and delta = 0.86: a set of moduli "
    "whose P0-smooth part has reciprocal sum below delta has no covering"
)


class BaseCaseInvalid(ValueError):
    """The base-case density bound is not below 1 (or exceeds a fixed delta)."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


@dataclass(frozen=True)
class CertificateParams:
    """Parameters of a certification run.

    ``delta=None`` computes the base-case density bound from the product
    over the first block; a number fixes it (it must still dominate the
    computed bound).  ``thresholds`` overrides ``first_exponent`` with
    explicit integer cutoffs ``T_0, T_1, ...``.
    """

    base: BaseDescriptor = field(default_factory=lambda: BaseDescriptor.primes(19))
    k: int = 3
    e_lambda: Fraction = Fraction(2)
    pi_good: Fraction = Fraction(1, 2)
    first_exponent: int | float = 6
    thresholds: tuple[int, ...] | None = None
    i_max: int = 8
    delta: Fraction | None = None
    method: str = "inductive"
    probe_steps: int = 0

    def __post_init__(self):
        object.__setattr__(self, "e_lambda", _frac(self.e_lambda))
        object.__setattr__(self, "pi_good", _frac(self.pi_good))
        if self.delta is not None:
            object.__setattr__(self, "delta", _frac(self.delta))
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.e_lambda <= 1:
            raise ValueError("e_lambda must exceed 1")
        if not 0 < self.pi_good <= 1:
            raise ValueError("pi_good must lie in (0, 1]")
        if self.i_max < 0:
            raise ValueError("i_max must be >= 0")
        if self.method not in ("inductive", "hough"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.thresholds is not None:
            t = tuple(int(x) for x in self.thresholds)
            if any(b <= a for a, b in zip(t, t[1:])):
                raise ValueError("thresholds must be strictly increasing")
            object.__setattr__(self, "thresholds", t)

    @classmethod
    def for_q0(cls, q0: int, v: int | None = None, **kw) -> "CertificateParams":
        return cls(base=BaseDescriptor.primes(q0, v=v), **kw)

    @property
    def lower_end(self) -> int:
        return self.base.primes_above if self.base.is_prime_interval else 1

    def threshold(self, i: int) -> int:
        """Integer cutoff T_i; i = -1 is the lower end of the base."""
        if i < 0:
            return self.lower_end
        if self.thresholds is not None:
            if i >= len(self.thresholds):
                raise ValueError(f"no threshold given for step {i}")
            return self.thresholds[i]
        return exp_floor(self.first_exponent + i)

    def threshold_label(self, i: int) -> str:
        if i < 0:
            return str(self.lower_end)
        if self.thresholds is not None:
            return str(self.thresholds[i])
        return f"e^{self.first_exponent + i}"

    def block(self, i: int) -> PrimeInterval:
        """The interval holding the base elements of block i."""
        lo, hi = self.threshold(i - 1), self.threshold(i)
        lo = max(lo, self.lower_end)
        if self.base.upto is not None:
            hi = min(hi, self.base.upto)
        hi = max(hi, lo)
        return PrimeInterval(lo, hi, self.threshold_label(i - 1), self.threshold_label(i))

    def elements(self, i: int):
        iv = self.block(i)
        if self.base.is_prime_interval:
            return primes_in(iv)
        return np.array([q for q in self.base.elements if q in iv], dtype=np.int64)

    def to_dict(self) -> dict:
        return {
            "base": self.base.to_dict(),
            "k": self.k,
            "e_lambda": str(self.e_lambda),
            "pi_good": str(self.pi_good),
            "first_exponent": self.first_exponent,
            "thresholds": list(self.thresholds) if self.thresholds is not None else None,
            "i_max": self.i_max,
            "delta_policy": "compute" if self.delta is None else f"fixed({self.delta})",
            "method": self.method,
            "probe_steps": self.probe_steps,
        }


# -- exact per-element terms ---------------------------------------------------
# Each returns (numerator, denominator) as Python ints.


def _s_pair(q: int, v: int | None) -> tuple[int, int]:
    if v is None:
        return 1, q - 1
    qv = q**v
    return qv - 1, qv * (q - 1)


def _t_pair(q: int, v: int | None, k: int) -> tuple[int, int]:
    if v is None:
        acc = 0
        for c in tail_numerator_poly(k):
            acc = acc * q + c
        return acc, (q - 1) ** k
    num = sum(((j + 1) ** k - j**k) * q ** (v - j) for j in range(1, v + 1))
    return num, q**v


def _one_plus(c: Fraction, pair_fn) -> Callable[[int], tuple[int, int]]:
    """q -> 1 + c * pair_fn(q)."""
    a, b = c.numerator, c.denominator

    def term(q: int) -> tuple[int, int]:
        num, den = pair_fn(q)
        return b * den + a * num, b * den

    return term


def _s_fn(params: CertificateParams):
    cap = params.base.cap
    return lambda q: _s_pair(q, cap(q))


def _t_fn(params: CertificateParams):
    cap, k = params.base.cap, params.k
    return lambda q: _t_pair(q, cap(q), k)


def _s_power_fn(params: CertificateParams):
    cap, k = params.base.cap, params.k

    def term(q: int) -> tuple[int, int]:
        num, den = _s_pair(q, cap(q))
        return num**k, den**k

    return term


# -- operations ----------------------------------------------------------------


def delta_sum_bound(params: CertificateParams) -> CertifiedValue:
    """UPPER bound on the reciprocal sum of moduli built from block 0."""
    prod = certified_product_of_terms(
        params.elements(0), _one_plus(Fraction(1), _s_fn(params)), UPPER
    )
    return prod - 1


def _delta_used(params: CertificateParams, computed: CertifiedValue) -> CertifiedValue:
    if params.delta is None:
        return computed
    fixed = CertifiedValue.exact(params.delta, UPPER)
    if computed.value > fixed.value:
        raise BaseCaseInvalid(
            f"fixed delta {params.delta} is below the computed bound {computed.value}"
        )
    return fixed


def base_case_beta(params: CertificateParams, delta: CertifiedValue | None = None) -> CertifiedValue:
    """UPPER bound on the step-0 bias statistic.

    Raises :class:`BaseCaseInvalid` when the certified density bound is not
    below 1.
    """
    if delta is None:
        delta = _delta_used(params, delta_sum_bound(params))
    one_minus = CertifiedValue.exact(1, LOWER) - delta
    if one_minus.value <= 0:
        raise BaseCaseInvalid(f"density bound {delta.value} is not below 1")
    prod = certified_product_of_terms(
        params.elements(0), _one_plus(Fraction(1), _t_fn(params)), UPPER
    )
    return (prod / one_minus).root(params.k)


def product_bound(params: CertificateParams, i: int) -> CertifiedValue:
    """UPPER bound on prod over block i+1 of (1 + e^lambda * S(q))."""
    return certified_product_of_terms(
        params.elements(i + 1), _one_plus(params.e_lambda, _s_fn(params)), UPPER
    )


def c1_threshold(params: CertificateParams, i: int) -> CertifiedValue:
    """LOWER bound on the largest step-i bias for which the criterion fires."""
    els = params.elements(i + 1)
    if len(els) == 0:
        return CertifiedValue.infinity()
    k, el = params.k, params.e_lambda
    coef = CertifiedValue.exact((el - 1) / (el * el), LOWER)
    pi_part = CertifiedValue.exact(1 - params.pi_good, LOWER).root(k)
    power_sum = certified_sum_of_terms(els, _s_power_fn(params), UPPER)
    a_k = power_sum.root(k).reciprocal()
    prod_inv = product_bound(params, i).reciprocal()
    return coef * pi_part * a_k * prod_inv


def c1_check(params: CertificateParams, i: int, beta_upper: CertifiedValue,
             threshold: CertifiedValue | None = None) -> bool:
    if not beta_upper.is_upper:
        raise ValueError("c1_check needs an UPPER bound on the bias")
    if threshold is None:
        threshold = c1_threshold(params, i)
    return beta_upper.value <= threshold.value


def growth_factor(params: CertificateParams, i: int) -> CertifiedValue:
    """UPPER bound on beta(i+1)/beta(i)."""
    prod = certified_product_of_terms(
        params.elements(i + 1), _one_plus(params.e_lambda, _t_fn(params)), UPPER
    )
    inv_pi = CertifiedValue.exact(1 / params.pi_good, UPPER)
    return (inv_pi * prod).root(params.k)


def beta_step(params: CertificateParams, i: int, beta_upper: CertifiedValue) -> CertifiedValue:
    return beta_upper * growth_factor(params, i)


def hough_quick_check(q1: int, P0: int | None = None, delta=Fraction(86, 100)):
    """Certified check that prod_{q1<p<=P0} (1 + 1/(p-1)) - 1 < delta.

    ``P0`` defaults to floor(e^11).  Returns ``(holds, upper_bound)``.
    """
    if q1 < 2:
        raise ValueError("q1 must be >= 2")
    if P0 is None:
        P0 = exp_floor(11)
    iv = PrimeInterval(q1, max(q1, int(P0)))
    prod = certified_product_of_terms(
        primes_in(iv), _one_plus(Fraction(1), lambda q: (1, q - 1)), UPPER
    )
    value = prod - 1
    return value.value < float(_frac(delta)), value


# -- reports -------------------------------------------------------------------


def _num(x: float) -> float | None:
    return None if math.isinf(x) else x


@dataclass(frozen=True)
class StepReport:
    i: int
    interval: PrimeInterval
    n_elements: int
    beta_upper: CertifiedValue
    c1_threshold_lower: CertifiedValue
    product_upper: CertifiedValue
    passed: bool
    growth_factor: CertifiedValue | None

    def to_dict(self) -> dict:
        return {
            "i": self.i,
            "interval": self.interval.to_dict(),
            "n_elements": self.n_elements,
            "beta_upper": self.beta_upper.value,
            "c1_threshold_lower": _num(self.c1_threshold_lower.value),
            "product_upper": self.product_upper.value,
            "passed": self.passed,
            "growth_factor": None if self.growth_factor is None else self.growth_factor.value,
        }


@dataclass(frozen=True)
class CertificateReport:
    params: CertificateParams
    verdict: str
    steps: tuple[StepReport, ...]
    delta_bound: CertifiedValue | None
    beta0: CertifiedValue | None
    tail_assumption: str
    message: str = ""
    probes: tuple[dict, ...] = ()

    @property
    def certified(self) -> bool:
        return self.verdict == CERTIFIED

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "verdict": self.verdict,
            "message": self.message,
            "delta_bound": None if self.delta_bound is None else self.delta_bound.value,
            "beta0_upper": None if self.beta0 is None else self.beta0.value,
            "steps": [s.to_dict() for s in self.steps],
            "tail_assumption": self.tail_assumption,
            "probes": list(self.probes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def table_rows(self) -> list[tuple]:
        return [
            (s.i, s.beta_upper, s.c1_threshold_lower, s.product_upper, s.passed)
            for s in self.steps
        ]

    def to_text(self, digits: int = 6) -> str:
        lines = [f"{'i':>2}  {'interval':<16} {'beta_k(i) <=':>14} {'B_k(i) >=':>14} "
                 f"{'prod <=':>10}  C1"]
        for s in self.steps:
            lines.append(
                f"{s.i:>2}  {s.interval.label():<16} "
                f"{format_bound(s.beta_upper, digits):>14} "
                f"{format_bound(s.c1_threshold_lower, digits):>14} "
                f"{format_bound(s.product_upper, digits):>10}  "
                f"{'pass' if s.passed else 'FAIL'}"
            )
        lines.append(f"verdict: {self.verdict}")
        if self.message:
            lines.append(self.message)
        for p in self.probes:
            lines.append(
                f"probe i={p['i']}: A ratio {p['a_ratio']:.6g} vs growth bound "
                f"{p['growth_upper']:.6g} ({'ok' if p['holds'] else 'not ok'})"
            )
        if self.tail_assumption:
            lines.append(f"note: {self.tail_assumption}")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        out = ["i,lo,hi,n_elements,beta_upper,c1_threshold_lower,product_upper,passed"]
        for s in self.steps:
            thr = s.c1_threshold_lower.value
            out.append(
                f"{s.i},{s.interval.lo},{s.interval.hi},{s.n_elements},"
                f"{s.beta_upper.value!r},{'inf' if math.isinf(thr) else repr(thr)},"
                f"{s.product_upper.value!r},{str(s.passed).lower()}"
            )
        return "\n".join(out) + "\n"


def format_bound(cv: CertifiedValue, digits: int = 6) -> str:
    """Decimal string rounded away from the certified side's danger.

    UPPER bounds are rounded up and LOWER bounds down, so the printed
    number is itself a valid bound.
    """
    if math.isinf(cv.value):
        return "inf" if cv.value > 0 else "-inf"
    if cv.value == 0:
        return "0"
    d = Decimal(cv.value)
    exp = d.adjusted() - digits + 1
    q = Decimal(1).scaleb(exp)
    r = d.quantize(q, rounding=ROUND_CEILING if cv.is_upper else ROUND_FLOOR)
    return f"{r:f}" if -6 < r.adjusted() < 15 else f"{r:e}"


def _a_k(params: CertificateParams, i: int) -> float:
    els = params.elements(i + 1)
    s = certified_sum_of_terms(els, _s_power_fn(params), UPPER)
    return s.value ** (-1.0 / params.k)


def _probe(params: CertificateParams, start: int, count: int) -> tuple[dict, ...]:
    out = []
    for i in range(start, start + count):
        ratio = _a_k(params, i + 1) / _a_k(params, i)
        g = growth_factor(params, i + 1).value
        out.append({"i": i + 1, "a_ratio": ratio, "growth_upper": g, "holds": ratio > g})
    return tuple(out)


def certify(params: CertificateParams | None = None) -> CertificateReport:
    params = params or CertificateParams()
    if params.method == "hough":
        return _certify_hough(params)

    tail = TAIL_ASSUMPTION.format(
        i_max=params.i_max, t=params.threshold_label(params.i_max + 1)
    )
    delta = delta_sum_bound(params)
    try:
        beta = base_case_beta(params, _delta_used(params, delta))
    except BaseCaseInvalid as exc:
        return CertificateReport(params, BASE_CASE_INVALID, (), delta, None, tail, str(exc))

    beta0 = beta
    steps = []
    verdict = CERTIFIED
    for i in range(params.i_max + 1):
        thr = c1_threshold(params, i)
        prod = product_bound(params, i)
        passed = c1_check(params, i, beta, thr)
        g = growth_factor(params, i) if passed else None
        steps.append(
            StepReport(i, params.block(i + 1), len(params.elements(i + 1)),
                       beta, thr, prod, passed, g)
        )
        if not passed:
            verdict = failed_at(i)
            break
        beta = beta * g

    probes = ()
    if verdict == CERTIFIED and params.probe_steps > 0:
        probes = _probe(params, params.i_max, params.probe_steps)
    return CertificateReport(params, verdict, tuple(steps), delta, beta0, tail, "", probes)


def _certify_hough(params: CertificateParams) -> CertificateReport:
    if not params.base.is_prime_interval:
        raise ValueError("the quick check applies to prime-interval bases only")
    delta = params.delta if params.delta is not None else Fraction(86, 100)
    holds, value = hough_quick_check(params.base.primes_above, params.threshold(0), delta)
    verdict = CERTIFIED if holds else failed_at(0)
    msg = f"quick check: prod - 1 <= {value.value!r} {'<' if holds else '>='} delta = {float(delta):g}"
    return CertificateReport(params, verdict, (), value, None, HOUGH_ASSUMPTION, msg)
