"""Acceptance gate: one test per criterion, each at its pinned tolerance.

Every test appends a PASS/FAIL line (worst value versus tolerance) that is
printed in the terminal summary.  Seeds are fixed at 0.
"""

import cmath
import json
import math

import numpy as np
import pytest
from conftest import ACCEPTANCE_LINES

from gtso import epr
from gtso.cli import main
from gtso.fock import (
    TruncationConfig,
    basis_index,
    form_equivalence_residual,
    heisenberg_residual,
    realize_gtso,
    realize_s2,
    su11_residuals,
    vacuum_covariance,
)
from gtso.symplectic import (
    Form,
    SqueezeParam,
    compose,
    decompose,
    log_identity_residual,
    max_deviation,
    random_params,
    symplectic_residual,
    target_symplectic,
    validate_params,
)
from gtso.verify import is_truncation_limited

SEED = 0

TOL_COMPOSE = 1e-10
TOL_SYMPLECTIC = 1e-12
TOL_LOG = 1e-12
TOL_HEISENBERG = 1e-6
TOL_SU11 = 1e-10
TOL_FORMS = 1e-7
TOL_S2_HEISENBERG = 1e-6
TOL_S2_AMPLITUDES = 1e-8
TOL_F2_DEFICIT = 1e-4
TOL_F2_PHASE = 1e-3
TOL_OVERLAP = 2e-3
TOL_DILATION = 1e-4
TOL_COVARIANCE = 1e-6
MONOTONE_FACTOR = 2.0


def record(label, ok, detail):
    line = f"{label}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def draws(n):
    rng = np.random.default_rng(SEED)
    return [random_params(rng) for _ in range(n)]


def test_c01_symplectic_factorization():
    worst_compose = worst_sym = 0.0
    for p in draws(100):
        s = target_symplectic(p)
        worst_sym = max(worst_sym, symplectic_residual(s))
        for form in Form:
            c = compose(decompose(p, form))
            worst_compose = max(worst_compose, max_deviation(c, s))
            worst_sym = max(worst_sym, symplectic_residual(c))
    ok = worst_compose <= TOL_COMPOSE and worst_sym <= TOL_SYMPLECTIC
    detail = f"compose {worst_compose:.2e} <= {TOL_COMPOSE:g}; SJS^T-J {worst_sym:.2e} <= {TOL_SYMPLECTIC:g}"
    assert record("C1 symplectic factorization", ok, detail)


def test_c02_log_identity():
    worst = max(log_identity_residual(p) for p in draws(100))
    ok = worst <= TOL_LOG
    assert record("C2 matrix-log identity", ok, f"max {worst:.2e} <= {TOL_LOG:g}")


def test_c03_heisenberg_laws():
    config = TruncationConfig(16, 6)
    worst = 0.0
    for p in draws(20):
        for form in Form:
            worst = max(worst, heisenberg_residual(realize_gtso(p, form, config), p, config).max())
    ok = worst <= TOL_HEISENBERG
    assert record("C3 Heisenberg laws n16/m6", ok, f"max {worst:.2e} <= {TOL_HEISENBERG:g}")


def test_c04_su11_algebra():
    worst = 0.0
    for n in (8, 12, 16):
        worst = max(worst, su11_residuals(TruncationConfig(n, 4)).max())
    ok = worst <= TOL_SU11
    assert record("C4 SU(1,1) commutators", ok, f"max {worst:.2e} <= {TOL_SU11:g}")


def test_c05_form_equivalence():
    config = TruncationConfig(16, 6)
    worst = max(form_equivalence_residual(p, config) for p in draws(20))
    ok = worst <= TOL_FORMS
    assert record("C5 form equivalence n16/m6", ok, f"max {worst:.2e} <= {TOL_FORMS:g}")


def test_c06_two_mode_squeezer():
    lam = 0.3
    sp = SqueezeParam(lam)
    config = TruncationConfig(22, 16)
    u = realize_s2(sp, config)
    heis = heisenberg_residual(u, sp.inverse_params(), config).max()
    col = u[:, 0]
    amp = max(
        abs(col[basis_index(n, n, config)] - math.tanh(lam) ** n / math.cosh(lam)) for n in range(config.levels)
    )
    ok = heis <= TOL_S2_HEISENBERG and amp <= TOL_S2_AMPLITUDES
    detail = f"scaling {heis:.2e} <= {TOL_S2_HEISENBERG:g}; amplitudes {amp:.2e} <= {TOL_S2_AMPLITUDES:g}"
    assert record("C6 two-mode squeezer", ok, detail)


def test_c07_representation_transform():
    config = TruncationConfig(20, 8)
    mu = math.exp(0.2)
    cases = {"(2,1,1,1)": validate_params(2, 1, 1, 1), "(mu,0,0,1/mu)": validate_params(mu, 0, 0, 1 / mu)}
    parts, ok = [], True
    for name, p in cases.items():
        deficit = phase = 0.0
        for eta in (0, 0.5, 0.3j):
            chk = epr.f2_action_fidelity(eta, p, config)
            deficit, phase = max(deficit, chk.deficit), max(phase, chk.phase_error)
        ok &= deficit <= TOL_F2_DEFICIT and phase <= TOL_F2_PHASE
        parts.append(f"{name} deficit {deficit:.2e} phase {phase:.2e}")
    detail = "; ".join(parts) + f" (<= {TOL_F2_DEFICIT:g}, {TOL_F2_PHASE:g} rad)"
    assert record("C7 representation transform", ok, detail)


def test_c08_overlap_and_kernel():
    config = TruncationConfig(22, 8)
    rng = np.random.default_rng(SEED)
    labels = [0, 0.8, 0.8j, 0.8 * cmath.exp(0.7j), -0.8]
    labels += list(0.8 * np.sqrt(rng.uniform(size=6)) * np.exp(2j * np.pi * rng.uniform(size=6)))
    mu = math.exp(0.2)
    params = [validate_params(2, 1, 1, 1), validate_params(mu, 0, 0, 1 / mu)]
    worst_o = worst_k = 0.0
    for xi in labels:
        for eta in labels:
            worst_o = max(worst_o, epr.overlap_residual(xi, eta, config))
            for p in params:
                worst_k = max(worst_k, epr.kernel_residual(xi, eta, p, config))
    ok = worst_o <= TOL_OVERLAP and worst_k <= TOL_OVERLAP
    detail = f"overlap {worst_o:.2e}; kernel {worst_k:.2e} (<= {TOL_OVERLAP:g})"
    assert record("C8 overlap and kernel", ok, detail)


def test_c09_dilation():
    config = TruncationConfig(22, 14)
    worst = max(epr.dilation_fidelity(math.exp(0.3), xi, config).deficit for xi in (0, 0.4))
    ok = worst <= TOL_DILATION
    assert record("C9 dilation", ok, f"deficit {worst:.2e} <= {TOL_DILATION:g}")


def test_c10_vacuum_covariance():
    config = TruncationConfig(20, 8)
    worst = 0.0
    for p in draws(10):
        for form in Form:
            worst = max(worst, vacuum_covariance(realize_gtso(p, form, config), config, p)[1])
    ok = worst <= TOL_COVARIANCE
    assert record("C10 vacuum covariance n20", ok, f"max {worst:.2e} <= {TOL_COVARIANCE:g}")


def test_c11_convergence_monotone(capsys):
    code = main(
        ["sweep", "--abcd", "2,1,1,1", "--nmax-list", "10,14,18,22", "--margin-fraction", str(6 / 16),
         "--output", "json"]
    )
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    rows = [r["residuals"] for r in out["rows"]]
    worst_ratio, worst_key = 0.0, None
    for prev, cur in zip(rows, rows[1:]):
        for k in prev:
            if not is_truncation_limited(k) or prev[k] == 0:
                continue
            ratio = cur[k] / prev[k]
            if ratio > worst_ratio:
                worst_ratio, worst_key = ratio, k
    ok = worst_ratio <= MONOTONE_FACTOR
    detail = f"worst step ratio {worst_ratio:.2f} ({worst_key}) <= {MONOTONE_FACTOR:g}"
    assert record("C11 convergence monotonicity", ok, detail)
