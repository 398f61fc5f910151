"""Acceptance gate: ten criteria, one pass/fail line each.

Each test prints `ACCEPTANCE <n>: PASS` or `ACCEPTANCE <n>: FAIL` and then
asserts, so the suite output doubles as the acceptance report.
"""

import time

import numpy as np
import pytest

from ctpower.control import (
    ghz_closed_form,
    minimal_control_power,
    w_ntype_closed_form,
    wclass_closed_form,
)
from ctpower.measures import (
    fef_numeric,
    fidelity_from_T,
    fidelity_from_f,
    fully_entangled_fraction,
    partial_tangle,
    three_tangle,
)
from ctpower.control import fct_three_qubit
from ctpower.qlinalg import haar_state, random_density
from ctpower.simkit import (
    ProtocolConfig,
    ct_fidelity_oracle,
    ct_fidelity_oracle_n,
    mc_teleportation_fidelity,
)
from ctpower.states import Partition, PureState, make_ghz, make_w_class


def _verdict(n, ok, detail):
    print(f"ACCEPTANCE {n}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"acceptance criterion {n} failed: {detail}"


def test_acceptance_01_ghz_closed_form():
    t0 = time.monotonic()
    worst = 0.0
    values = []
    for a2 in np.linspace(0.0, 1.0, 101):
        rep = ghz_closed_form(3, np.sqrt(a2), np.sqrt(1.0 - a2))
        worst = max(worst, abs(rep.minimal_P - 2 * np.sqrt(a2 * (1 - a2)) / 3))
        values.append(rep.minimal_P)
    peak_ok = int(np.argmax(values)) == 50 and abs(values[50] - 1 / 3) <= 1e-12
    elapsed = time.monotonic() - t0
    ok = worst <= 1e-12 and peak_ok and elapsed < 1.0
    _verdict(1, ok, f"max dev {worst:.2e}, peak at 1/2: {peak_ok}, {elapsed:.2f}s")


def test_acceptance_02_standard_w_value():
    t0 = time.monotonic()
    lam = (0.0, 1 / np.sqrt(3), 1 / np.sqrt(3), 1 / np.sqrt(3))
    closed = wclass_closed_form(*lam).minimal_P
    generic = minimal_control_power(make_w_class(*lam)).minimal_P
    elapsed = time.monotonic() - t0
    ok = (
        abs(closed - 2 / 9) <= 1e-12
        and abs(generic - 2 / 9) <= 1e-12
        and elapsed < 1.0
    )
    _verdict(
        2, ok,
        f"closed form {closed:.12f}, generic {generic:.12f}, target 2/9, "
        f"{elapsed:.2f}s",
    )


def test_acceptance_03_prop1_property():
    t0 = time.monotonic()
    rng = np.random.default_rng(2026)
    worst = 0.0
    for _ in range(10**4):
        lam = np.abs(rng.standard_normal(4))
        lam /= np.linalg.norm(lam)
        worst = max(worst, wclass_closed_form(*lam).minimal_P)
    elapsed = time.monotonic() - t0
    ok = worst <= 2 / 9 + 1e-9 and elapsed < 10.0
    _verdict(3, ok, f"max minimal_P {worst:.6f} <= 2/9, {elapsed:.1f}s")


def test_acceptance_04_w_ntype_table():
    t0 = time.monotonic()
    devs = [
        abs(
            w_ntype_closed_form(np.full(3, 1 / np.sqrt(3))).minimal_P - 2 / 9
        )
    ]
    for n in range(4, 9):
        rep = w_ntype_closed_form(np.full(n, 1 / np.sqrt(n)))
        devs.append(abs(rep.minimal_P - (1 / 3 - 2 / (3 * n))))
    elapsed = time.monotonic() - t0
    ok = max(devs) <= 1e-12 and elapsed < 1.0
    _verdict(4, ok, f"max dev {max(devs):.2e}, {elapsed:.2f}s")


def test_acceptance_05_oracle_equivalence():
    t0 = time.monotonic()
    rng = np.random.default_rng(14)
    cfg = ProtocolConfig(seed=14)
    worst = 0.0
    for _ in range(200):
        psi = PureState(3, haar_state(3, rng))
        for j in (1, 2, 3):
            worst = max(
                worst,
                abs(ct_fidelity_oracle(psi, j, cfg) - fct_three_qubit(psi, j)),
            )
    elapsed = time.monotonic() - t0
    ok = worst <= 1e-5 and elapsed < 300.0
    _verdict(5, ok, f"max |oracle - (2+tau_kl)/3| = {worst:.2e}, {elapsed:.0f}s")


def test_acceptance_06_mc_vs_correlation_fidelity():
    t0 = time.monotonic()
    rng = np.random.default_rng(15)
    worst, worst_tol = 0.0, 1.0
    ok = True
    for i in range(50):
        rho = random_density(4, rng, rank=1 + i % 4)
        est = mc_teleportation_fidelity(
            rho, ProtocolConfig(mc_samples=10**5, seed=i)
        )
        gap = abs(est.value - fidelity_from_T(rho))
        tol = max(2e-3, 3 * est.stderr)
        if gap > worst:
            worst, worst_tol = gap, tol
        ok = ok and gap <= tol
    elapsed = time.monotonic() - t0
    ok = ok and elapsed < 300.0
    _verdict(6, ok, f"worst gap {worst:.2e} (tol {worst_tol:.2e}), {elapsed:.0f}s")


def test_acceptance_07_fidelity_consistency():
    t0 = time.monotonic()
    rng = np.random.default_rng(3)
    worst_fid, worst_fef = 0.0, 0.0
    for i in range(10**3):
        rho = random_density(4, rng, rank=1 + i % 4)
        f = fully_entangled_fraction(rho)
        worst_fid = max(worst_fid, abs(fidelity_from_T(rho) - fidelity_from_f(f)))
        worst_fef = max(worst_fef, abs(f - fef_numeric(rho)))
    elapsed = time.monotonic() - t0
    ok = worst_fid <= 1e-6 and worst_fef <= 1e-6 and elapsed < 60.0
    _verdict(
        7, ok,
        f"fidelity gap {worst_fid:.2e}, FEF gap {worst_fef:.2e}, {elapsed:.0f}s",
    )


def test_acceptance_08_meaningfulness_fixtures():
    t0 = time.monotonic()
    half = 1 / np.sqrt(2)
    third = 1 / np.sqrt(3)
    pos = np.sqrt([0.1, 0.3, 0.3, 0.3])
    fixtures = [
        ("ghz ab!=0", ghz_closed_form(3, half, half).meaningful, True),
        ("ghz a=0", ghz_closed_form(3, 0.0, 1.0).meaningful, False),
        ("ghz b=0", ghz_closed_form(3, 1.0, 0.0).meaningful, False),
        ("wclass all lam>0", wclass_closed_form(*pos).meaningful, True),
        (
            "wclass lam2=0",
            wclass_closed_form(0.0, third, 0.0, np.sqrt(1 - third**2)).meaningful,
            False,
        ),
        (
            "wclass lam3=0",
            wclass_closed_form(0.0, third, np.sqrt(1 - third**2), 0.0).meaningful,
            False,
        ),
    ]
    failures = [name for name, got, want in fixtures if got is not want]
    elapsed = time.monotonic() - t0
    ok = not failures and elapsed < 1.0
    _verdict(8, ok, f"failing fixtures: {failures or 'none'}, {elapsed:.2f}s")


def test_acceptance_09_monogamy_suite():
    t0 = time.monotonic()
    rng = np.random.default_rng(9)
    ok = True
    min_tau = 1.0
    for _ in range(10**4):
        psi = PureState(3, haar_state(3, rng))
        # three_tangle asserts focus-qubit independence within 1e-8;
        # partial_tangle asserts both expressions agree within 1e-8
        tau = three_tangle(psi, agree_tol=1e-8)
        min_tau = min(min_tau, tau)
        ok = ok and tau >= -1e-8
        partial_tangle(psi, 2, 3, agree_tol=1e-8)
    elapsed = time.monotonic() - t0
    ok = ok and elapsed < 30.0
    _verdict(9, ok, f"min tau {min_tau:.2e}, {elapsed:.0f}s")


def test_acceptance_10_nqubit_ghz_oracle():
    t0 = time.monotonic()
    rng = np.random.default_rng(10)
    cfg = ProtocolConfig(seed=10)
    worst = 0.0
    for n in (4, 5):
        partition = Partition(n, tuple(range(1, n - 1)), (n - 1, n))
        for _ in range(10):
            a2 = rng.uniform(0.02, 0.98)
            a, b = np.sqrt(a2), np.sqrt(1 - a2)
            res = ct_fidelity_oracle_n(make_ghz(n, a, b), partition, cfg)
            worst = max(worst, abs(res.value - 2 * (a * b + 1) / 3))
    elapsed = time.monotonic() - t0
    ok = worst <= 1e-5 and elapsed < 600.0
    _verdict(10, ok, f"max dev {worst:.2e}, {elapsed:.0f}s")
