"""
Named end-to-end checks.  Each returns a report dict
``{"name", "claim", "computed", "tolerance", "pass"}`` and never raises on a
failed comparison; operational errors propagate.
"""

from __future__ import annotations

from typing import Callable, Dict

import numpy as np

from . import constructions as cons
from .analysis import (
    coupling_sequence,
    envelope_constant,
    jsr_bounds,
    regularity_report,
    sandwich_check,
)
from .diophantine import (
    CFTheta,
    badness_check,
    bend_inequality_check,
    build_theta,
    denominator_sup,
    pj_subsequence,
    pj_witness_norm,
)
from .engine import EngineConfig, compute_mirs, compute_mirs_pj
from .linalg import MatrixSet

CHECKS: Dict[str, Callable[..., dict]] = {}


def check(name: str, claim: str):
    def wrap(fn):
        def run(**params):
            rep = fn(**params)
            rep = {"name": name, "claim": claim, **rep}
            rep["pass"] = bool(rep["pass"])
            return rep
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        run.claim = claim
        run.impl = fn
        CHECKS[name] = run
        return run
    return wrap


def run_check(name: str, **params) -> dict:
    if name not in CHECKS:
        raise KeyError(f"unknown check {name!r}; choose from {sorted(CHECKS)}")
    params = {k: v for k, v in params.items() if v is not None}
    return CHECKS[name](**params)


def golden_theta(depth: int = 40) -> CFTheta:
    return build_theta(1.0, depth)


def pj_pair(theta=None) -> MatrixSet:
    return cons.pj_matrices(1 / 3, golden_theta().theta if theta is None else theta)


def _rel(x, y):
    x, y = np.asarray(x, float), np.asarray(y, float)
    return float(np.max(np.abs(x - y) / np.maximum(np.abs(y), 1e-300))) if x.size else 0.0


def _exact_n(*results):
    return min(r.exact_prefix() for r in results)


@check("kron-product", "Kronecker product of two sets has c_n = a_n b_n in the Euclidean norm")
def kron_product(N: int = 10, pairs: int = 5, seed: int = 0, tol: float = 1e-9, config=None):
    rng = np.random.default_rng(seed)
    cases = [(cons.random_set(rng), cons.random_set(rng)) for _ in range(pairs)]
    pj = pj_pair()
    cases.append((pj, pj))
    worst = 0.0
    for a_set, b_set in cases:
        a = compute_mirs(a_set, N, config)
        b = compute_mirs(b_set, N, config)
        c = compute_mirs(cons.kron_product_set(a_set, b_set), N, config)
        k = _exact_n(a, b, c)
        worst = max(worst, _rel(c.values[:k], a.values[:k] * b.values[:k]))
    return {"computed": {"max_relative_deviation": worst, "cases": len(cases)},
            "tolerance": tol, "pass": worst <= tol}


@check("kron-power", "Kronecker k-th power of a set has c_n = a_n^k")
def kron_power(N: int = 10, k: int = 2, tol: float = 1e-9, config=None):
    pj = pj_pair()
    a = compute_mirs(pj, N, config)
    c = compute_mirs(cons.kron_power_set(pj, k), N, config)
    n = _exact_n(a, c)
    dev = _rel(c.values[:n], a.values[:n] ** k)
    return {"computed": {"max_relative_deviation": dev, "k": k}, "tolerance": tol, "pass": dev <= tol}


@check("block-max", "block-diagonal combination has c_n = max(a_n, b_n); with couplers "
       "max(a_n, b_n) <= c_n <= max(a_n, b_n) + K0 sum a_{k-1} b_{n-k}")
def block_max(N: int = 12, trials: int = 5, seed: int = 1, tol: float = 1e-9, config=None):
    rng = np.random.default_rng(seed)
    eq_dev, sand = 0.0, -np.inf
    for _ in range(trials):
        up, lo = cons.random_set(rng), cons.random_set(rng)
        a, b = compute_mirs(up, N, config), compute_mirs(lo, N, config)
        c0 = compute_mirs(cons.block_combine(cons.BlockCombineSpec.zero_coupled(up, lo)), N, config)
        n = _exact_n(a, b, c0)
        eq_dev = max(eq_dev, _rel(c0.values[:n], np.maximum(a.values[:n], b.values[:n])))
        spec = cons.BlockCombineSpec(up, lo, tuple(rng.standard_normal((len(up), 2, 2))))
        c1 = compute_mirs(cons.block_combine(spec), N, config)
        n = _exact_n(a, b, c1)
        low, high = cons.sandwich_bounds(a.values[:n], b.values[:n], spec.K0)
        sand = max(sand, float(np.max(low - c1.values[:n])), float(np.max(c1.values[:n] - high)))
    return {"computed": {"zero_coupler_deviation": eq_dev, "sandwich_violation": sand},
            "tolerance": tol, "pass": eq_dev <= tol and sand <= tol}


@check("pair-lift-sandwich", "two-matrix lift satisfies max_{k <= n/(m+1)} a_k <= b_n <= max_{k <= n} a_k")
def pair_lift_sandwich(N: int = 24, family: str = "pj", tol: float = 1e-9, config=None):
    src = pj_pair() if family == "pj" else cons.named_family(family)
    lift = cons.pair_lift(src)
    a = compute_mirs(src, N, config)
    b = compute_mirs(lift.as_set(), N, config)
    n = _exact_n(a, b)
    lo, hi = sandwich_check(a.values[:n], b.values[:n], len(src))
    return {"computed": {"lower_violation": lo, "upper_violation": hi, "exact_range": n},
            "tolerance": tol, "pass": lo <= tol and hi <= tol and n == N}


@check("pj-upper", "projector/shear-rotation pair at alpha = 1/3 has a_n bounded by C n^(1/3): "
       "the envelope max a_n/n^(1/3) stabilises")
def pj_upper(N: int = 200, n_min: int = 20, tol: float = 0.25):
    res = compute_mirs_pj(pj_pair(), N)
    full = envelope_constant(res, 1 / 3, n_min, N)
    half = envelope_constant(res, 1 / 3, n_min, N // 2)
    change = abs(full - half) / half
    return {"computed": {"envelope_N": full, "envelope_half": half, "relative_change": change},
            "tolerance": tol, "pass": change <= tol}


@check("pj-witness", "witness products (A0 A1^(2q) A0)^m with m = ceil(q^2) have norm of order n^(1/3)")
def pj_witness(count: int = 15, depth: int = 40, band: float = 20.0):
    cf = golden_theta(depth)
    terms = pj_subsequence(cf, count)
    ratios = [pj_witness_norm(cf, 2 * t.q, t.m) / t.n ** (1 / 3) for t in terms]
    lo, hi = min(ratios), max(ratios)
    return {"computed": {"min_ratio": lo, "max_ratio": hi, "band": hi / lo,
                         "q": [t.q for t in terms]},
            "tolerance": band, "pass": lo > 0 and hi / lo <= band}


@check("coupling-subadditive", "off-diagonal coupling sequence is subadditive and "
       "max(1, alpha_n) <= hat a_n <= 1 + alpha_n")
def coupling_subadditive(N: int = 20, tol: float = 1e-9, config=None):
    cr = coupling_sequence(cons.pj_triangular_split(pj_pair()), N, config)
    return {"computed": {"max_violation": cr.subadditivity_max_violation,
                         "sandwich_violation": list(cr.sandwich_violation)},
            "tolerance": tol, "pass": cr.subadditive_ok and cr.sandwich_ok}


@check("ratio-floor", "a_{n+1} >= kappa a_n for some kappa > 0")
def ratio_floor(N: int = 24, config=None):
    out, ok = {}, True
    pj = pj_pair()
    for label, mset in (("pj", pj), ("lift", cons.pair_lift(pj).as_set())):
        res = compute_mirs(mset, N, config)
        full = regularity_report(res).min_step_ratio
        half = regularity_report(res.values[: N // 2]).min_step_ratio
        out[label] = {"min_step_ratio": full, "min_step_ratio_half": half}
        ok &= full > 0 and half / full <= 2 and full / half <= 2
    return {"computed": out, "tolerance": 2.0, "pass": ok}


def jsr_families(grid_points: int = 4):
    pj = pj_pair()
    theta = golden_theta().theta
    return {
        "pj": pj,
        "harvey": cons.harvey_pair(theta),
        "lift": cons.pair_lift(pj).as_set(),
        "kron": cons.kron_product_set(pj, MatrixSet.of([np.array([[0.0, 1.0], [1.0, 0.0]])],
                                                      claimed_jsr=1.0)),
        "gz": cons.gz_family(0.5, grid_points),
    }


@check("jsr-one", "every constructed family has joint spectral radius 1")
def jsr_one(depth: int = 12, width: float = 0.05, grid_points: int = 4):
    cfg = EngineConfig(capacity=400_000, beam_width=20_000)
    out, ok = {}, True
    for label, mset in jsr_families(grid_points).items():
        jb = jsr_bounds(mset, depth, cfg)
        out[label] = {"lower": jb.lower, "upper": jb.upper, "width": jb.width}
        ok &= jb.contains(1.0) and jb.width <= width
    return {"computed": out, "tolerance": width, "pass": ok}


@check("bend", "|sin phi| + p|cos phi| <= (p^(2+beta) + C/|sin phi|^beta)^(1/(2+beta)) for p >= delta")
def bend(beta: float = 1.0, delta: float = 1.0, phi_points: int = 10_000, p_points: int = 1_000,
         p_max: float = 1e4):
    phi = np.linspace(0, np.pi, phi_points + 2)[1:-1]
    p = np.geomspace(delta, p_max, p_points)
    C, viol = bend_inequality_check(beta, delta, phi, p)
    return {"computed": {"C": C, "max_violation": viol}, "tolerance": 0.0, "pass": viol <= 0}


@check("badness", "n^gamma |sin n theta| is bounded below, and bounded above on convergent denominators")
def badness(N: int = 100_000, N2: int = 10_000, floor1: float = 0.5, floor2: float = 0.05):
    g1 = golden_theta()
    r1 = badness_check(g1, N)
    sup1 = denominator_sup(g1)
    g2 = build_theta(2.0, 12, kappa_range=None)
    r2 = badness_check(g2, N2)
    ok = r1.inf_value >= floor1 and sup1 <= np.pi and r2.inf_value > floor2
    return {"computed": {"gamma1_inf": r1.inf_value, "gamma1_argmin": r1.argmin,
                         "gamma1_denominator_sup": sup1, "gamma2_inf": r2.inf_value},
            "tolerance": {"gamma1_floor": floor1, "denominator_cap": np.pi, "gamma2_floor": floor2},
            "pass": ok}
