"""Residual suites shared by the ``verify`` and ``sweep`` commands."""

import math

import numpy as np

from . import epr, fock
from .fock import ResidualReport, TruncationConfig
from .symplectic import (
    Form,
    SqueezeParam,
    compose,
    core_sequences,
    decompose,
    log_identity_residual,
    max_deviation,
    plus_block_of,
    random_params,
    symplectic_residual,
    target_symplectic,
)

# First matching prefix wins.
THRESHOLDS = (
    ("symplectic.target_residual", 1e-12),
    ("symplectic.log_identity", 1e-12),
    ("symplectic.random.log_identity", 1e-12),
    ("symplectic.random.target_residual", 1e-12),
    ("symplectic.", 1e-10),
    ("heisenberg.", 1e-6),
    ("s2.heisenberg.", 1e-6),
    ("s2.vacuum_amplitudes", 1e-8),
    ("s2.scaling.deficit", 1e-4),
    ("s2.scaling.ratio", 1e-3),
    ("su11.", 1e-10),
    ("form_equivalence", 1e-7),
    ("gtso_forms", 1e-7),
    ("covariance.", 1e-6),
    ("eigen.", 1e-2),
    ("db_commutator", 1e-10),
    ("overlap", 2e-3),
    ("kernel", 2e-3),
    ("f2_action.", 1e-4),
    ("f2_action_phase.", 1e-3),
    ("dilation.deficit", 1e-4),
    ("dilation.ratio", 1e-3),
)

# Residuals that are exact identities (or roundoff) rather than truncation-limited.
EXACT_PREFIXES = ("symplectic.", "su11.", "unitarity.", "db_commutator", "eigen.")


def threshold_for(name, config=None):
    if name.startswith("unitarity."):
        return config.tol if config is not None else 1e-8
    for prefix, value in THRESHOLDS:
        if name.startswith(prefix):
            return value
    raise KeyError(f"no threshold for residual {name!r}")


def is_truncation_limited(name):
    return not name.startswith(EXACT_PREFIXES)


def _forms(form):
    if form in ("both", None):
        return (Form.EQ22, Form.EQ25)
    return (Form.parse(form),)


def symplectic_suite(params, forms, draws=0, seed=0):
    s = target_symplectic(params)
    res = {
        "symplectic.target_residual": symplectic_residual(s),
        "symplectic.det_deviation": abs(float(np.linalg.det(s)) - 1.0),
        "symplectic.log_identity": log_identity_residual(params),
    }
    composed = {}
    for f in forms:
        composed[f] = compose(decompose(params, f))
        res[f"symplectic.compose.{f.value}"] = max_deviation(composed[f], s)
    if len(forms) == 2:
        res["symplectic.forms_agree"] = max_deviation(*composed.values())
    four, three = core_sequences(params)
    res["symplectic.core_forms"] = max_deviation(compose(four), compose(three))
    if draws:
        rng = np.random.default_rng(seed)
        worst = {"compose": 0.0, "target_residual": 0.0, "log_identity": 0.0, "group_law": 0.0}
        for _ in range(draws):
            p, q = random_params(rng), random_params(rng)
            t = target_symplectic(p)
            worst["target_residual"] = max(worst["target_residual"], symplectic_residual(t))
            worst["log_identity"] = max(worst["log_identity"], log_identity_residual(p))
            for f in forms:
                worst["compose"] = max(worst["compose"], max_deviation(compose(decompose(p, f)), t))
            prod = plus_block_of(t @ target_symplectic(q))
            worst["group_law"] = max(worst["group_law"], max_deviation(prod, p.plus_block() @ q.plus_block()))
        res.update({f"symplectic.random.{k}": v for k, v in worst.items()})
    return res


def run_suite(params, config, form="both", eta=None, xi=None, lam=None, draws=0, seed=0):
    """Run every applicable residual check; return ``(report, thresholds, passed)``."""
    forms = _forms(form)
    report = ResidualReport({}, config.as_dict(), fock.params_dict(params))
    report.residuals.update(symplectic_suite(params, forms, draws, seed))

    unitaries = {}
    for f in forms:
        u = fock.realize_gtso(params, f, config)
        unitaries[f] = u
        report.residuals[f"unitarity.{f.value}"] = fock.interior_unitarity(u, config)
        report.update(fock.heisenberg_residual(u, params, config).prefixed(f"heisenberg.{f.value}"))
        _, cov = fock.vacuum_covariance(u, config, params)
        report.residuals[f"covariance.{f.value}"] = cov
    if len(forms) == 2:
        report.residuals["gtso_forms"] = fock.aligned_deviation(*unitaries.values(), config)
    report.update(fock.su11_residuals(config).prefixed("su11"))
    four, three = core_sequences(params)
    report.residuals["form_equivalence"] = fock.aligned_deviation(
        fock.realize_sequence(four, config), fock.realize_sequence(three, config), config
    )

    if eta is not None:
        e = complex(eta)
        st = epr.eta_state(e, config)
        report.update(epr.eigen_residuals(st, "eta", (e.real, e.imag), config).prefixed("eigen.eta"))
        db = epr.eta_db_state(e, params, config)
        report.update(epr.eigen_residuals(db, "db", (e.real, e.imag), config, params).prefixed("eigen.db"))
        report.residuals["db_commutator"] = epr.db_pair_commutator(params, config)
        u22 = unitaries.get(Form.EQ22)
        if u22 is None:
            u22 = fock.realize_gtso(params, Form.EQ22, config)
        chk = epr.compare_states(u22 @ st, db, config)
        report.residuals["f2_action.deficit"] = chk.deficit
        report.residuals["f2_action_phase.eq22"] = chk.phase_error
    if xi is not None:
        x = complex(xi)
        report.update(epr.eigen_residuals(epr.xi_state(x, config), "xi", (x.real, x.imag), config).prefixed("eigen.xi"))
        chk = epr.dilation_fidelity(params.a, x, config)
        report.residuals["dilation.deficit"] = chk.deficit
        report.residuals["dilation.ratio"] = chk.ratio_error
    if eta is not None and xi is not None:
        report.residuals["overlap"] = epr.overlap_residual(xi, eta, config)
        report.residuals["kernel"] = epr.kernel_residual(xi, eta, params, config)
    if lam is not None:
        sp = SqueezeParam(float(lam))
        u = fock.realize_s2(sp, config)
        report.update(fock.heisenberg_residual(u, sp.inverse_params(), config).prefixed("s2.heisenberg"))
        report.residuals["s2.vacuum_amplitudes"] = s2_vacuum_amplitude_error(u, sp, config)
        if eta is not None:
            chk = epr.s2_scaling_fidelity(sp, eta, config)
            report.residuals["s2.scaling.deficit"] = chk.deficit
            report.residuals["s2.scaling.ratio"] = chk.ratio_error

    thresholds = {k: threshold_for(k, config) for k in report.residuals}
    passed = all(
        math.isfinite(v) and v <= thresholds[k] for k, v in report.residuals.items()
    )
    return report, thresholds, passed


def s2_vacuum_amplitude_error(u, sp, config):
    """Max distance of ``<n,n|S2|00>`` to ``tanh(lam)^n / cosh(lam)`` over the interior."""
    col = u[:, 0]
    t, c = math.tanh(sp.lam), math.cosh(sp.lam)
    levels = range(config.interior_level + 1)
    return max(abs(col[fock.basis_index(n, n, config)] - t**n / c) for n in levels)


def sweep(params, n_max_list, margin_fraction, tol=1e-8, **kwargs):
    """One ``run_suite`` per truncation, margins scaled with ``n_max``."""
    rows = []
    for n in n_max_list:
        margin = max(2, int(round(margin_fraction * n)))
        config = TruncationConfig(n, margin, tol)
        report, thresholds, passed = run_suite(params, config, **kwargs)
        rows.append((config, report, passed))
    return rows
