"""
Diagnostics computed from sequences and matrix sets: growth exponents, step
ratios, the off-diagonal coupling sequence of a block-triangular set, joint
spectral radius brackets, truncated extremal norms and an irreducibility margin.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc

from .constructions import BlockCombineSpec
from .engine import (
    INTERVAL,
    EngineConfig,
    MirsResult,
    iterate_frontiers,
)
from .errors import (
    HorizonMismatch,
    InsufficientExactPrefix,
    PreconditionNormExceeded,
    WindowTooSmall,
)
from .linalg import MatrixSet, block_upper, op_norm, op_norms, spectral_radii

SeqLike = Union[MirsResult, Sequence[float], np.ndarray]


def _values(seq: SeqLike) -> np.ndarray:
    if isinstance(seq, MirsResult):
        return np.asarray(seq.values, dtype=float)
    return np.asarray(seq, dtype=float)


def _exact_prefix(seq: SeqLike) -> int:
    if isinstance(seq, MirsResult):
        return seq.exact_prefix()
    return len(_values(seq))


@dataclass
class GrowthFit:
    exponent: float
    log_intercept: float
    window: Tuple[int, int]
    max_abs_residual: float
    envelope_constant: float
    points: np.ndarray = field(default=None, repr=False)


def envelope_constant(seq: SeqLike, alpha: float, n_min: int = 1, n_max: Optional[int] = None) -> float:
    """``max_{n_min <= n <= n_max} a_n / n^alpha``."""
    a = _values(seq)
    n_max = len(a) if n_max is None else n_max
    n = np.arange(n_min, n_max + 1)
    return float(np.max(a[n - 1] / n.astype(float) ** alpha))


def fit_exponent(seq: SeqLike, window: Optional[Tuple[int, int]] = None,
                 max_points: int = 64) -> GrowthFit:
    """Least-squares slope of ``log a_n`` against ``log n`` over a window.

    The default window is ``[N/4, N]``; points are subsampled geometrically so
    the tail does not dominate the fit.
    """
    a = _values(seq)
    N = len(a)
    lo, hi = window if window is not None else (max(1, N // 4), N)
    if not 1 <= lo < hi <= N:
        raise WindowTooSmall(f"invalid window ({lo}, {hi}) for horizon {N}")
    if isinstance(seq, MirsResult):
        bad = [n for n in range(lo, hi + 1)
               if not (seq.certificates[n - 1].is_exact or seq.certificates[n - 1].kind == INTERVAL)]
        if bad:
            raise WindowTooSmall(f"window contains uncertified entries (first n={bad[0]})")
    ns = np.unique(np.round(np.geomspace(lo, hi, max_points)).astype(int))
    if len(ns) < 8:
        raise WindowTooSmall(f"only {len(ns)} distinct points in window ({lo}, {hi})")
    x, y = np.log(ns), np.log(a[ns - 1])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    env = envelope_constant(a, slope, lo, hi)
    return GrowthFit(float(slope), float(intercept), (int(lo), int(hi)),
                     float(np.abs(resid).max()), env, ns)


@dataclass
class RegularityReport:
    min_step_ratio: float
    max_step_ratio: float
    rv_table: Dict[int, float]
    weakly_increasing_kappa: float
    exact_range: int


def regularity_report(seq: SeqLike, multipliers: Sequence[int] = (2, 3, 4)) -> RegularityReport:
    """Step-ratio extremes and regular-variation constants over the exact prefix."""
    P = _exact_prefix(seq)
    if P < 4:
        raise InsufficientExactPrefix(f"exact prefix of length {P} is shorter than 4")
    a = _values(seq)[:P]
    steps = a[1:] / a[:-1]
    rv = {}
    for m in multipliers:
        n = np.arange(1, P // m + 1)
        rv[int(m)] = float(np.max(a[n * m - 1] / a[n - 1])) if len(n) else float("nan")
    kappa = float(np.min(a / np.maximum.accumulate(a)))
    return RegularityReport(float(steps.min()), float(steps.max()), rv, kappa, P)


@dataclass
class CouplingResult:
    alpha_seq: np.ndarray
    hat_seq: np.ndarray
    subadditivity_max_violation: float
    subadditive_ok: bool
    sandwich_ok: bool
    sandwich_violation: Tuple[float, float]


def _sum_norm_sup(S: np.ndarray, C: np.ndarray, iters: int = 60, starts: int = 8) -> np.ndarray:
    """``sup_{|v|=1} |S v| + |C v|`` for stacks of ``S`` (k x d1 x d2) and ``C`` (k x d2 x d2).

    The objective is convex and positively homogeneous, so the iteration
    ``v <- grad / |grad|`` never decreases it.  Starts: the top right singular
    vectors of ``S`` and ``C`` plus a few fixed directions.  The result is a
    lower estimate that is at least ``max(|S|, |C|)``.
    """
    k, d2 = C.shape[0], C.shape[1]
    cands = []
    for M in (S, C):
        _, _, vt = np.linalg.svd(M)
        cands.append(vt[:, 0, :])
    rng = np.random.default_rng(7)
    for v in rng.standard_normal((starts, d2)):
        cands.append(np.broadcast_to(v / np.linalg.norm(v), (k, d2)))
    best = np.zeros(k)
    for v in cands:
        v = np.array(v, dtype=float)
        for _ in range(iters):
            sv = np.einsum("kij,kj->ki", S, v)
            cv = np.einsum("kij,kj->ki", C, v)
            ns, nc = np.linalg.norm(sv, axis=1), np.linalg.norm(cv, axis=1)
            best = np.maximum(best, ns + nc)
            g = (np.einsum("kji,kj->ki", S, sv) / np.where(ns > 0, ns, 1)[:, None]
                 + np.einsum("kji,kj->ki", C, cv) / np.where(nc > 0, nc, 1)[:, None])
            gn = np.linalg.norm(g, axis=1)
            if not np.any(gn > 0):
                break
            v = np.where(gn[:, None] > 0, g / np.where(gn > 0, gn, 1)[:, None], v)
        sv = np.einsum("kij,kj->ki", S, v)
        cv = np.einsum("kij,kj->ki", C, v)
        best = np.maximum(best, np.linalg.norm(sv, axis=1) + np.linalg.norm(cv, axis=1))
    return best


def block_sum_norm(Z: np.ndarray, k: int) -> float:
    """Operator norm of ``Z = [[B, S], [0, C]]`` induced by ``|u| + |v|`` on ``R^k + R^(d-k)``.

    Equals ``max(|B|, sup_{|v|=1} |S v| + |C v|)``; the supremum is estimated
    from below by :func:`_sum_norm_sup`.
    """
    Z = np.asarray(Z, dtype=float)
    return float(max(op_norm(Z[:k, :k]),
                     _sum_norm_sup(Z[None, :k, k:], Z[None, k:, k:])[0]))


def coupling_sequence(spec: BlockCombineSpec, N: int,
                      config: Optional[EngineConfig] = None) -> CouplingResult:
    """Norms ``alpha_n`` of the off-diagonal block ``sum_j B..B D_j C..C`` maximised over words.

    Also computes ``hat a_n``, the maximal norm of the whole product in the
    norm induced by ``|u| + |v|``, and checks
    ``max(1, alpha_n) <= hat a_n <= 1 + alpha_n`` and subadditivity of ``alpha``.
    """
    for name, blocks in (("upper", spec.upper), ("lower", spec.lower)):
        worst = max(op_norm(b) for b in blocks)
        if worst > 1 + 1e-12:
            raise PreconditionNormExceeded(f"{name} blocks have norm {worst} > 1")
    k = spec.upper.dim
    mset = MatrixSet.of([block_upper(b, d, c) for b, d, c in
                         zip(spec.upper, spec.couplers, spec.lower)], name="coupled")
    alpha, hat = [], []
    for fr in iterate_frontiers(mset, N, config):
        st = fr.states
        B, S, C = st[:, :k, :k], st[:, :k, k:], st[:, k:, k:]
        ns, nb, nc = op_norms(S), op_norms(B), op_norms(C)
        alpha.append(float(ns.max()))
        lower = max(float(nb.max()), float(np.max(np.maximum(ns, nc))))
        # only products whose crude upper bound beats the current best need the sup
        idx = np.flatnonzero(ns + nc > lower)
        if len(idx):
            lower = max(lower, float(_sum_norm_sup(S[idx], C[idx]).max()))
        hat.append(lower)
    alpha, hat = np.array(alpha), np.array(hat)
    viol, ok = -np.inf, True
    for n in range(1, N):
        for m in range(1, N - n + 1):
            an, am, anm = alpha[n - 1], alpha[m - 1], alpha[n + m - 1]
            viol = max(viol, anm - an - am)
            ok &= bool(anm <= an + am + 1e-9 * (1 + an + am))
    lo_v = float(np.max(np.maximum(1.0, alpha) - hat))
    hi_v = float(np.max(hat - (1.0 + alpha)))
    sandwich_ok = lo_v <= 1e-9 and hi_v <= 1e-9
    return CouplingResult(alpha, hat, float(viol) if N > 1 else 0.0, ok, sandwich_ok, (lo_v, hi_v))


@dataclass
class JsrBounds:
    lower: float
    upper: float
    lower_by_depth: np.ndarray
    upper_by_depth: np.ndarray

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, x: float, tol: float = 1e-8) -> bool:
        return self.lower - tol <= x <= self.upper + tol


def jsr_bounds(mset: MatrixSet, depth: int, config: Optional[EngineConfig] = None) -> JsrBounds:
    """Bracket the joint spectral radius with products of length at most ``depth``.

    Lower: ``max rho(P)^(1/n)`` over enumerated products.  Upper: ``min a_n^(1/n)``
    over lengths whose ``a_n`` is exact.
    """
    lo, hi = [], []
    best_lo, best_hi = 0.0, np.inf
    for fr in iterate_frontiers(mset, depth, config):
        n = fr.length
        best_lo = max(best_lo, float(spectral_radii(fr.states).max()) ** (1.0 / n))
        if fr.exact:
            best_hi = min(best_hi, float(op_norms(fr.states).max()) ** (1.0 / n))
        lo.append(best_lo)
        hi.append(best_hi)
    return JsrBounds(best_lo, best_hi, np.array(lo), np.array(hi))


def extremal_norm_estimate(mset: MatrixSet, truncation: int, probes,
                           config: Optional[EngineConfig] = None) -> np.ndarray:
    """``sup_{0 <= n <= T} max_{P in A_n} |P v|`` for each probe vector ``v``."""
    V = np.atleast_2d(np.asarray(probes, dtype=float))
    est = np.linalg.norm(V, axis=1)
    if truncation < 1:
        return est
    for fr in iterate_frontiers(mset, truncation, config):
        pv = np.einsum("kij,pj->pki", fr.states, V)
        est = np.maximum(est, np.linalg.norm(pv, axis=2).max(axis=1))
    return est


def irreducibility_margin(mset: MatrixSet, samples: int = 1024, refine_steps: int = 200,
                          seed: int = 0) -> float:
    """Estimate ``min_{|v|=1} max_A |A v|`` from above.

    Scrambled Sobol points (fixed seed) are mapped to the sphere, then the best
    few are refined by coordinate descent with step halving.
    """
    d = mset.dim
    stack = mset.stack()

    def f(v):
        v = np.atleast_2d(v)
        v = v / np.linalg.norm(v, axis=1, keepdims=True)
        return np.linalg.norm(np.einsum("mij,pj->pmi", stack, v), axis=2).max(axis=1)

    if d == 1:
        return float(f(np.ones((1, 1)))[0])
    u = qmc.Sobol(d, scramble=True, seed=seed).random(max(samples, 1))
    pts = ndtri(np.clip(u, 1e-12, 1 - 1e-12))
    pts = np.concatenate([pts, np.eye(d)])
    vals = f(pts)
    best = float(vals.min())
    for i in np.argsort(vals, kind="stable")[:4]:
        v = pts[i] / np.linalg.norm(pts[i])
        fv, step = float(f(v)[0]), 0.25
        for _ in range(refine_steps):
            trials = np.repeat(v[None], 2 * d, axis=0)
            trials[np.arange(d), np.arange(d)] += step
            trials[d + np.arange(d), np.arange(d)] -= step
            tv = f(trials)
            j = int(np.argmin(tv))
            if tv[j] < fv:
                v = trials[j] / np.linalg.norm(trials[j])
                fv = float(tv[j])
            else:
                step *= 0.5
                if step < 1e-15:
                    break
        best = min(best, fv)
    return best


def sandwich_check(source: SeqLike, lifted: SeqLike, m: int) -> Tuple[float, float]:
    """Largest violations of ``max_{k <= n/(m+1)} a_k <= b_n <= max_{k <= n} a_k`` (``a_0 = 1``)."""
    a = np.concatenate([[1.0], _values(source)])
    b = _values(lifted)
    N = len(b)
    if N > len(a) - 1:
        raise HorizonMismatch(f"lifted horizon {N} exceeds source horizon {len(a) - 1}")
    run = np.maximum.accumulate(a)
    n = np.arange(1, N + 1)
    lower = run[n // (m + 1)]
    upper = run[n]
    return float(np.max(lower - b)), float(np.max(b - upper))
