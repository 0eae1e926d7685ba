"""Acceptance criteria, one test per criterion (some split into clauses).

Every test records a ``PASS``/``FAIL`` line that is printed in the pytest
terminal summary.  Run standalone with ``python3 tests/test_acceptance.py``.
"""

import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from twophoton import (
    SpatialGrid,
    component_ratio_profile,
    cross_section,
    default_grid,
    field_norm,
    make_gaussian,
    one_photon_output,
    psi_abs_at,
    two_photon_components_oracle,
    two_photon_output,
)
from twophoton.cli import one_photon_summary, two_photon_summary


def record(label, checks):
    """checks: list of (description, value, ok)."""
    ok = all(c[2] for c in checks)
    detail = "; ".join(f"{d}={v:.6g}" if isinstance(v, float) else f"{d}={v}" for d, v, _ in checks)
    line = f"{'PASS' if ok else 'FAIL'} {label}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    failed = [d for d, _, good in checks if not good]
    assert ok, f"{label} failed on: {', '.join(failed)}"


def within(v, lo, hi):
    return lo <= v <= hi


@pytest.fixture(scope="module")
def long_summary():
    T = 10.0
    p = make_gaussian(T)
    grid = default_grid(T)
    _, s1 = one_photon_summary(p, grid)
    dec, s2 = two_photon_summary(p, grid, [0.0, 1.4, 5.0])
    return dec, {**s1, **s2}


@pytest.fixture(scope="module")
def short_summary():
    T = 1.0
    p = make_gaussian(T)
    grid = default_grid(T)
    one, s1 = one_photon_summary(p, grid)
    dec, s2 = two_photon_summary(p, grid, [0.0, 1.0])
    return one, dec, {**s1, **s2}


def test_c01_one_photon_long_pulse():
    p = make_gaussian(10.0)
    grid = default_grid(10.0)
    start = time.perf_counter()
    dec, s = one_photon_summary(p, grid)
    elapsed = time.perf_counter() - start
    x = grid.points
    shape_err = float(np.max(np.abs(dec.total.amplitudes + p(x + 2.0))) / p.peak_amplitude)
    record("C1 one-photon long pulse", [
        ("delay", s["one_photon.delay"], within(s["one_photon.delay"], 1.8, 2.2)),
        ("peak_ratio", s["one_photon.peak_ratio"], within(s["one_photon.peak_ratio"], -1.1, -0.85)),
        ("max|out+psi(x+2)|/peak", shape_err, shape_err <= 0.05),
        ("runtime_s", elapsed, elapsed < 1.0),
    ])


def test_c02_absorption_long_pulse(long_summary):
    _, s = long_summary
    record("C2 absorption long pulse", [
        ("abs_peak_ratio", s["absorption.peak_ratio"], within(s["absorption.peak_ratio"], 1.85, 2.1)),
        ("shift", s["absorption.shift"], within(s["absorption.shift"], 0.85, 1.15)),
    ])


def test_c03_two_photon_long_pulse_tau0():
    p = make_gaussian(10.0)
    grid = SpatialGrid(-50.0, 30.0, 401)
    start = time.perf_counter()
    _, s = two_photon_summary(p, grid, [0.0])
    elapsed = time.perf_counter() - start
    record("C3 two-photon long pulse tau=0", [
        ("total_ratio", s["xsec.tau=0.total_ratio"], within(s["xsec.tau=0.total_ratio"], -3.3, -2.7)),
        ("delay", s["xsec.tau=0.total_delay"], within(s["xsec.tau=0.total_delay"], 0.5, 0.85)),
        ("runtime_s_401x401", elapsed, elapsed < 30.0),
    ])


def test_c04_two_photon_long_pulse_tau14(long_summary):
    _, s = long_summary
    frac = s["xsec.tau=1.4.total_max_fraction"]
    record("C4 two-photon long pulse tau=1.4", [("max_fraction", frac, frac <= 0.1)])


def test_c05_two_photon_long_pulse_tau5(long_summary):
    _, s = long_summary
    record("C5 two-photon long pulse tau=5", [
        ("total_ratio", s["xsec.tau=5.total_ratio"], within(s["xsec.tau=5.total_ratio"], 0.85, 1.15)),
        ("delay", s["xsec.tau=5.total_delay"], within(s["xsec.tau=5.total_delay"], 1.7, 2.3)),
    ])


def test_c06_component_ratios_long_pulse(long_summary):
    _, s = long_summary
    checks = []
    for tau in ("0", "1.4", "5"):
        v = s[f"xsec.tau={tau}.psi2_ratio"]
        checks.append((f"psi2/psi1@{tau}", v, within(v, -4.4, -3.6)))
    bands = {"0": (-0.05, 0.05), "1.4": (2.6, 3.4), "5": (3.5, 4.4)}
    for tau, (lo, hi) in bands.items():
        v = s[f"xsec.tau={tau}.psi3_ratio"]
        checks.append((f"psi3/psi1@{tau}", v, within(v, lo, hi)))
    record("C6 component ratios long pulse", checks)


def test_c07_short_one_photon(short_summary):
    one, _, s = short_summary
    record("C7 short one-photon pulse", [
        ("abs_peak_ratio", s["absorption.peak_ratio"], within(s["absorption.peak_ratio"], 1.15, 1.45)),
        ("shift", s["absorption.shift"], within(s["absorption.shift"], 0.45, 0.75)),
        ("positive_front", s["one_photon.has_positive_front"], s["one_photon.has_positive_front"]),
        ("negative_tail", s["one_photon.has_negative_tail"], s["one_photon.has_negative_tail"]),
    ])


def test_c08a_short_two_photon_sign(short_summary):
    # The exact output is slightly positive off the diagonal for x1, x2 > 0
    # (about +0.012 against a peak magnitude of 1.23), so this clause fails.
    _, dec, s = short_summary
    total = dec.total.amplitudes
    record("C8a short two-photon total <= 0 everywhere", [
        ("max_total", s["two_photon.max_total"], s["two_photon.max_total"] <= 0.0),
        ("positive_fraction", s["two_photon.positive_fraction"], bool(np.all(total <= 0))),
    ])


def test_c08b_short_two_photon_diagonal_delay(short_summary):
    _, _, s = short_summary
    d = s["xsec.tau=0.total_delay"]
    record("C8b short two-photon diagonal delay", [("delay", d, within(d, 0.3, 0.5))])


def test_c08c_short_two_photon_tau1_ratios(short_summary):
    _, _, s = short_summary
    record("C8c short two-photon tau=1 ratios", [
        ("psi2/psi1", s["xsec.tau=1.psi2_ratio"], within(s["xsec.tau=1.psi2_ratio"], -3.5, -2.5)),
        ("psi3/psi1", s["xsec.tau=1.psi3_ratio"], within(s["xsec.tau=1.psi3_ratio"], 1.1, 1.9)),
        ("total/psi1", s["xsec.tau=1.total_ratio"], within(s["xsec.tau=1.total_ratio"], -0.8, -0.3)),
    ])


@pytest.fixture(scope="module")
def oracle_case():
    p = make_gaussian(1.0)
    grid = SpatialGrid(-6.0, 3.0, 41)
    start = time.perf_counter()
    oracle = two_photon_components_oracle(p, grid)
    elapsed = time.perf_counter() - start
    return p, grid, oracle, elapsed


def test_c09_properties(long_summary, short_summary, oracle_case):
    checks = []
    _, oracle, _elapsed = oracle_case[1:]
    for label, T, dec in (("T10", 10.0, long_summary[0]), ("T1", 1.0, short_summary[1])):
        one = one_photon_output(make_gaussian(T), dec.grid)
        n1 = field_norm(one.total)
        n2 = field_norm(dec.total)
        checks.append((f"{label}.norm1-1", n1 - 1, abs(n1 - 1) <= 1e-6))
        checks.append((f"{label}.norm2-1", n2 - 1, abs(n2 - 1) <= 1e-4))
        diag = float(np.max(np.abs(dec.psi3.diagonal())))
        checks.append((f"{label}.max|psi3(x,x)|", diag, diag <= 1e-10))
        a = dec.total.amplitudes
        parts = dec.psi1.amplitudes + dec.psi2.amplitudes + dec.psi3.amplitudes
        resid = float(np.max(np.abs(parts - a)))
        checks.append((f"{label}.sum_residual", resid, resid <= 4 * np.finfo(float).eps * np.max(np.abs(a))))
        lin = float(np.max(np.abs(dec.linear_part().amplitudes - np.multiply.outer(one.total.amplitudes, one.total.amplitudes))))
        checks.append((f"{label}.linear_vs_outer", lin, lin <= 1e-10))
    sym = oracle.total.symmetry_residual()
    checks.append(("oracle.symmetry_residual", sym, sym <= 1e-9))
    odiag = float(np.max(np.abs(oracle.psi3.diagonal())))
    checks.append(("oracle.max|psi3(x,x)|", odiag, odiag <= 1e-10))
    record("C9 property suite", checks)


def test_c10_oracle_equivalence(oracle_case):
    p, grid, oracle, elapsed = oracle_case
    fast = two_photon_output(p, grid)
    diff = float(np.max(np.abs(oracle.total.amplitudes - fast.total.amplitudes)))
    record("C10 oracle equivalence 41x41 T=1", [
        ("max_abs_diff", diff, diff <= 1e-8),
        ("runtime_s", elapsed, elapsed < 60.0),
    ])


def test_c11_closed_form_vs_quadrature():
    checks = []
    for T in (1.0, 10.0):
        p = make_gaussian(T)
        x = np.linspace(-5 * T, 3 * T, 401)
        diff = float(np.max(np.abs(psi_abs_at(p, x) - psi_abs_at(p, x, method="quadrature"))))
        checks.append((f"T{T:g}.max_abs_diff", diff, diff <= 1e-9))
    record("C11 closed form vs quadrature", checks)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
