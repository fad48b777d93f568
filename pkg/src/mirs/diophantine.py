"""
Badly approximable rotation angles and the closed-form witness products of the
projector / shear-rotation pair.

``theta = pi * vartheta`` where ``vartheta = [0; a_1, a_2, ...]`` has partial
quotients ``a_n = ceil(q_{n-1}^(gamma-1))``.  Then ``n^gamma |sin n theta|`` is
bounded below for all ``n`` and bounded above along the convergent denominators.

``vartheta`` is never handled as a float.  A deep reference convergent ``P/Q``
(far beyond the requested precision) stands in for it, and ``n * vartheta mod 1``
is evaluated as ``(n * P mod Q) / Q`` in exact integer arithmetic, so
``sin(n theta)`` keeps full relative accuracy for ``n`` in the trillions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import mpmath
import numpy as np

from .errors import (
    DegenerateAngle,
    DegenerateInput,
    DepthTooShallow,
    NoEligibleDenominators,
    PrecisionExhausted,
)


# stored denominators stay printable as decimal strings
MAX_DENOMINATOR_BITS = 14_000


def _int_gamma(gamma: float) -> Optional[int]:
    k = round(gamma)
    return int(k) if abs(gamma - k) < 1e-12 else None


def _ceil_power(q: int, e: float) -> int:
    """``ceil(q ** e)`` for a positive integer ``q`` and real ``e >= 0``."""
    k = _int_gamma(e)
    if k is not None:
        return q ** k
    with mpmath.workdps(int(q.bit_length() * 0.30103 * (e + 1)) + 30):
        return int(mpmath.ceil(mpmath.mpf(q) ** e))


def quotient_stream(gamma: float):
    """Yield ``(a_n, p_n, q_n)`` for ``n = 1, 2, ...``."""
    p2, q2, p1, q1 = 1, 0, 0, 1
    while True:
        a = _ceil_power(q1, gamma - 1)
        p, q = a * p1 + p2, a * q1 + q2
        yield a, p, q
        p2, q2, p1, q1 = p1, q1, p, q


@dataclass
class CFTheta:
    """A rotation angle given by its continued fraction, with exact convergents."""

    gamma: float
    quotients: List[int]
    convergents: List[Tuple[int, int]]
    vartheta: str
    theta: float
    kappa_estimate: Optional[float] = None
    digits: int = 120
    ref: Tuple[int, int] = field(default=(0, 1), repr=False)
    ref_error: float = 0.0

    @classmethod
    def rational(cls, p: int, q: int, gamma: float = 1.0) -> "CFTheta":
        """Embed ``vartheta = p / q`` exactly (useful as a negative control)."""
        g = math.gcd(p, q)
        p, q = p // g, q // g
        quotients, convs = [], []
        a, b = p, q
        pp, qq, p1, q1 = 1, 0, 0, 1
        _, a = divmod(a, b)
        a, b = b, a
        while b:
            t, r = divmod(a, b)
            quotients.append(t)
            pn, qn = t * p1 + pp, t * q1 + qq
            convs.append((pn, qn))
            pp, qq, p1, q1 = p1, q1, pn, qn
            a, b = b, r
        with mpmath.workdps(40):
            value = mpmath.mpf(p) / q
            theta = float(mpmath.pi * value)
            text = mpmath.nstr(value, 30)
        return cls(gamma, quotients, convs, text, theta, None, 30, (p, q), 0.0)

    def frac(self, n: int) -> Tuple[float, int]:
        """``n * vartheta = k + r`` with ``|r| <= 1/2``; returns ``(r, k mod 2)``."""
        P, Q = self.ref
        res = (n * P) % Q
        k = (n * P) // Q
        if 2 * res > Q:
            res -= Q
            k += 1
        return res / Q, k & 1

    def sincos(self, n: int):
        """``sin(n theta)``, ``cos(n theta)`` and ``1 - |cos(n theta)|``, all to full relative accuracy."""
        r, parity = self.frac(n)
        sign = -1.0 if parity else 1.0
        x = math.pi * r
        return sign * math.sin(x), sign * math.cos(x), 2.0 * math.sin(0.5 * x) ** 2

    def to_json(self) -> dict:
        return {
            "gamma": self.gamma,
            "quotients": [str(a) for a in self.quotients],
            "convergents": [[str(p), str(q)] for p, q in self.convergents],
            "vartheta": self.vartheta,
            "theta": self.theta,
            "kappa_estimate": self.kappa_estimate,
            "digits": self.digits,
        }


def build_theta(gamma: float, depth: int, *, digits: int = 120,
                kappa_range: Optional[int] = 100_000) -> CFTheta:
    """Angle with exponent ``gamma`` and ``depth`` stored convergents.

    The decimal value of ``vartheta`` is produced to ``digits`` places from an
    internally deeper convergent, so any ``depth >= 2`` is accepted.
    """
    if not gamma >= 1:
        raise DegenerateInput(f"gamma must be >= 1, got {gamma}")
    if depth < 2:
        raise DepthTooShallow("at least two convergents are required")
    ig = _int_gamma(gamma)
    if ig is not None:
        gamma = float(ig)
    quotients, convs = [], []
    target = 10 ** (digits + 10)
    stream = quotient_stream(gamma)
    prev_q = None
    for a, p, q in stream:
        if len(convs) < depth and q.bit_length() > MAX_DENOMINATOR_BITS:
            raise PrecisionExhausted(
                f"q_{len(convs) + 1} exceeds {MAX_DENOMINATOR_BITS} bits; use a smaller depth")
        quotients.append(a)
        convs.append((p, q))
        if len(convs) > depth and prev_q is not None and prev_q * q > target:
            break
        prev_q = q
    # the second-to-last convergent approximates vartheta within 1/(q q_next) < 10^-(digits+10)
    P, Q = convs[-2]
    err = 1.0 / float(min(Q * convs[-1][1], 10 ** 300))
    with mpmath.workdps(digits + 20):
        value = mpmath.mpf(P) / Q
        theta = float(mpmath.pi * value)
        text = mpmath.nstr(value, digits, strip_zeros=False)
    cf = CFTheta(gamma, quotients[:depth], convs[:depth], text, theta, None, digits, (P, Q), err)
    if kappa_range:
        cf.kappa_estimate = badness_check(cf, kappa_range).inf_value
    return cf


@dataclass
class BadnessReport:
    inf_value: float
    argmin: int
    sup_on_denominators: float
    ok: bool


def badness_values(cf: CFTheta, N: int) -> np.ndarray:
    """``n^gamma |sin n theta|`` for ``n = 1..N``."""
    if N < 1:
        raise DegenerateInput("N must be at least 1")
    if N * 10.0 ** (-cf.digits) > 1e-6:
        raise PrecisionExhausted(f"N={N} needs more than {cf.digits} digits of vartheta")
    P, Q = cf.ref
    res = np.empty(N)
    r = 0
    half = Q // 2
    for i in range(N):
        r += P
        if r >= Q:
            r -= Q
        # distance to the nearest integer, formed in integers before dividing
        res[i] = (Q - r if r > half else r) / Q
    n = np.arange(1, N + 1, dtype=float)
    return n ** cf.gamma * np.abs(np.sin(np.pi * res))


def badness_check(cf: CFTheta, N: int) -> BadnessReport:
    """Infimum of ``n^gamma |sin n theta|`` over ``n <= N`` and its supremum on denominators ``q <= N``."""
    vals = badness_values(cf, N)
    i = int(np.argmin(vals))
    sup = denominator_sup(cf, N)
    return BadnessReport(float(vals[i]), i + 1, sup, bool(vals[i] > 0))


def denominator_sup(cf: CFTheta, limit: Optional[int] = None) -> float:
    out = 0.0
    for _, q in cf.convergents:
        if limit is not None and q > limit:
            break
        s, _, _ = cf.sincos(q)
        out = max(out, float(q) ** cf.gamma * abs(s))
    return out


def bend_constant(beta: float, delta: float, p_grid=None) -> float:
    """``C = 2^beta * K`` with ``K = sup_{p >= delta} p^-beta ((p + 2/p)^(2+beta) - p^(2+beta))``.

    The supremum is taken over a dense logarithmic grid (plus ``p_grid``) and
    the limit ``2 beta + 4`` at infinity.
    """
    ps = np.geomspace(delta, 1e8, 20001)
    if p_grid is not None:
        pg = np.asarray(p_grid, dtype=float)
        ps = np.concatenate([ps, pg[pg >= delta]])
    e = 2.0 + beta
    # (p + 2/p)^e - p^e = p^e * expm1(e * log1p(2 / p^2)), stable for large p
    f = ps ** 2 * np.expm1(e * np.log1p(2.0 / ps ** 2))
    K = max(float(f.max()), 2 * beta + 4)
    return 2.0 ** beta * K


def bend_inequality_check(beta: float, delta: float, phi_grid, p_grid):
    """Largest value of ``|sin phi| + p|cos phi| - (p^(2+beta) + C/|sin phi|^beta)^(1/(2+beta))``.

    Returns ``(C, max_violation)``; the inequality holds on the grids when the
    violation is ``<= 0``.
    """
    if not beta > 0 or not 0 < delta <= 1:
        raise DegenerateInput("need beta > 0 and 0 < delta <= 1")
    phi = np.asarray(phi_grid, dtype=float).ravel()
    p = np.asarray(p_grid, dtype=float).ravel()
    if phi.size == 0 or p.size == 0:
        raise DegenerateInput("grids must be nonempty")
    if np.any(p < delta):
        raise DegenerateInput("p grid must lie in [delta, inf)")
    s = np.abs(np.sin(phi))
    if np.any(s == 0):
        raise DegenerateInput("phi grid contains a multiple of pi")
    c = np.abs(np.cos(phi))
    C = bend_constant(beta, delta, p)
    e = 2.0 + beta
    worst = -np.inf
    pe = p ** e
    for lo in range(0, len(phi), 512):
        sl, cl = s[lo:lo + 512, None], c[lo:lo + 512, None]
        lhs = sl + p[None, :] * cl
        rhs = (pe[None, :] + C / sl ** beta) ** (1.0 / e)
        worst = max(worst, float((lhs - rhs).max()))
    return C, worst


def pj_witness_indices(n: int, m: int) -> tuple:
    """Index sequence of ``(A0 A1^n A0)^m``."""
    return ((0,) + (1,) * n + (0,)) * m


def pj_witness_matrix_entries(cf: CFTheta, n: int, m: int):
    """``(w, c^m)`` in ``(A0 A1^n A0)^m = [[1, w, 0], [0, c^m, 0], [0, 0, 0]]``, ``c = cos(n theta)``."""
    s, c, one_minus_abs = cf.sincos(n)
    if c > 0:
        one_minus_c = one_minus_abs
    else:
        one_minus_c = 1.0 + abs(c)
    if abs(one_minus_c) < 1e-300:
        raise DegenerateAngle(f"cos({n} theta) is 1 to working precision")
    log_abs = math.log1p(-one_minus_abs) if one_minus_abs < 1 else -math.inf
    mag = m * log_abs
    negative = c < 0 and m % 2 == 1
    if mag < math.log(1e-300):
        cm, one_minus_cm = 0.0, 1.0
    elif negative:
        cm = -math.exp(mag)
        one_minus_cm = 1.0 + math.exp(mag)
    else:
        cm = math.exp(mag)
        one_minus_cm = -math.expm1(mag)
    w = s * one_minus_cm / one_minus_c
    return w, cm


def pj_witness_norm(cf: CFTheta, n: int, m: int) -> float:
    """Norm of ``(A0 A1^n A0)^m`` from its closed form, valid for huge ``m``."""
    if n < 1 or m < 1:
        raise DegenerateInput("n and m must be positive")
    w, cm = pj_witness_matrix_entries(cf, n, m)
    # largest singular value of [[1, w], [0, cm]]
    t = 1.0 + w * w + cm * cm
    disc = math.sqrt(max((1.0 - cm) ** 2 + w * w, 0.0) * max((1.0 + cm) ** 2 + w * w, 0.0))
    return math.sqrt(0.5 * (t + disc))


def pj_witness_lower_bound(cf: CFTheta, n: int, m: int, kappa: Optional[float] = None) -> float:
    """``(1 - exp(-kappa^2 m / (2 n^(2 gamma)))) / |sin n theta|`` (meaningful when ``cos n theta > 0``)."""
    kappa = cf.kappa_estimate if kappa is None else kappa
    s, _, _ = cf.sincos(n)
    return -math.expm1(-kappa ** 2 * m / (2.0 * float(n) ** (2 * cf.gamma))) / abs(s)


@dataclass(frozen=True)
class SubsequenceTerm:
    q: int
    n: int
    m: int


def pj_subsequence(cf: CFTheta, count: int, K: Optional[float] = None) -> List[SubsequenceTerm]:
    """Lengths ``n = m (2q + 2)`` with ``m = ceil(q^(2 gamma))`` along eligible denominators.

    A denominator ``q`` is eligible when ``2 K^2 q^(-2 gamma) < 1``; ``K`` defaults
    to the largest ``q^gamma |sin q theta|`` over the stored convergents.
    """
    K = denominator_sup(cf) if K is None else K
    out, seen = [], set()
    for _, q in cf.convergents:
        if q in seen:
            continue
        seen.add(q)
        if 2.0 * K * K * float(q) ** (-2.0 * cf.gamma) >= 1.0:
            continue
        m = _ceil_power(q, 2.0 * cf.gamma)
        out.append(SubsequenceTerm(q, m * (2 * q + 2), m))
        if len(out) == count:
            return out
    if not out or len(out) < count:
        raise NoEligibleDenominators(
            f"only {len(out)} eligible denominators among {len(cf.convergents)} convergents"
        )
    return out
