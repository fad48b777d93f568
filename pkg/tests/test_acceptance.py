"""The fourteen acceptance criteria, each at its stated tolerance and time budget.

Every test prints one ``PASS``/``FAIL`` line, and the lines are repeated in
the terminal summary.
"""

import time

import numpy as np
import pytest

from conftest import ACCEPTANCE, brute_force_mirs
from mirs.analysis import fit_exponent
from mirs.constructions import pj_matrices, random_set
from mirs.diophantine import pj_witness_indices, pj_witness_norm
from mirs.engine import compute_mirs, evaluate_witness
from mirs.linalg import MatrixSet, jordan_block
from mirs.verification import run_check


def record(num, title, ok, detail, elapsed, budget, key=None):
    ok = bool(ok) and elapsed < budget
    line = (f"[{'PASS' if ok else 'FAIL'}] {num:2d} {title}: {detail} "
            f"({elapsed:.1f}s, budget {budget:g}s)")
    ACCEPTANCE[num if key is None else key] = line
    print(line)
    assert ok, line


def timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


def check_line(num, title, name, budget, **params):
    rep, dt = timed(run_check, name, **params)
    record(num, title, rep["pass"], rep["computed"], dt, budget)


def test_01_kron_product():
    check_line(1, "Kronecker product c_n = a_n b_n", "kron-product", 30, N=10, pairs=5)


def test_02_kron_power():
    check_line(2, "Kronecker power c_n = a_n^2", "kron-power", 30, N=10, k=2)


def test_03_block_combination():
    check_line(3, "block combination max and sandwich", "block-max", 30, N=12)


def test_04_pair_lift_sandwich():
    check_line(4, "pair-lift sandwich", "pair-lift-sandwich", 300, N=24)


def test_05_pj_upper_envelope():
    check_line(5, "PJ envelope a_n / n^(1/3) stabilises", "pj-upper", 600, N=200, tol=0.25)


def test_06_pj_witness_band():
    check_line(6, "PJ witness band", "pj-witness", 1, count=15, band=20)


def test_07_witness_oracle(golden):
    def run():
        pj = pj_matrices(1 / 3, golden.theta)
        worst = 0.0
        for n in range(1, 31):
            for m in range(1, 30 // n + 1):
                ref = evaluate_witness(pj, pj_witness_indices(n, m))
                worst = max(worst, abs(pj_witness_norm(golden, n, m) - ref) / ref)
        return worst
    worst, dt = timed(run)
    record(7, "closed-form witness vs explicit product", worst <= 1e-9,
           f"max relative error {worst:.2e}", dt, 10)


def test_08_coupling_subadditive():
    check_line(8, "coupling subadditivity and sandwich", "coupling-subadditive", 120, N=20)


def test_09_ratio_floor():
    check_line(9, "step-ratio floor", "ratio-floor", 600, N=24)


def test_10_jsr_bracket():
    check_line(10, "JSR bracket contains 1 with width <= 0.05", "jsr-one", 120, depth=12, width=0.05)


def test_11_diophantine_bounds():
    check_line(11, "badly approximable angle bounds", "badness", 60)


@pytest.mark.parametrize("beta", [0.5, 1.0])
def test_12_bend_inequality(beta):
    rep, dt = timed(run_check, "bend", beta=beta, delta=1.0, phi_points=10_000, p_points=1_000)
    record(12, f"bend inequality beta={beta:g}", rep["pass"], rep["computed"], dt, 30,
           key=12 + beta / 10)


def test_13_single_matrix_law():
    def run():
        out = {}
        n = np.arange(1, 501)
        for d in (2, 3):
            J = jordan_block(d)
            vals, P = [], np.eye(d)
            for _ in n:
                P = P @ J
                vals.append(np.linalg.norm(P, 2))
            vals = np.array(vals)
            fit = fit_exponent(vals)
            ratio = vals[99:] / n[99:] ** (d - 1)
            out[d] = (fit.exponent, ratio.max() / ratio.min())
        return out
    out, dt = timed(run)
    ok = all(abs(e - (d - 1)) <= 0.1 and band <= 3 for d, (e, band) in out.items())
    detail = ", ".join(f"d={d}: exponent {e:.4f}, band {b:.3f}" for d, (e, b) in out.items())
    record(13, "Jordan block a_n ~ n^(d-1)", ok, detail, dt, 5)


def test_14_engine_oracle():
    def run():
        rng = np.random.default_rng(14)
        worst = 0.0
        for _ in range(20):
            mset = random_set(rng)
            r = compute_mirs(mset, 10)
            k = r.exact_prefix()
            assert k == 10
            ref = brute_force_mirs(list(mset), 10)
            worst = max(worst, float(np.max(np.abs(r.values - ref) / ref)))
        return worst
    worst, dt = timed(run)
    record(14, "dedup engine vs full enumeration", worst <= 1e-9,
           f"max relative deviation {worst:.2e}", dt, 60)
