"""Entangled-state representations on the truncated two-mode Fock space.

The states built here (``|eta>``, ``|xi>`` and the rotated ``|eta>_{D,B}``)
are all of the form

    N * exp(alpha a1^dag + beta a2^dag + gamma a1^dag a2^dag) |00>

with ``|gamma| = 1``, so none of them is normalizable.  The exponent holds
creation operators only and is nilpotent on the box, which makes the series
finite and exact.  Comparisons are made after projecting on the interior
and normalizing; overlaps between two such states are summed with a
phase-matched iterated tail average (see :func:`tail_averaged_overlap`).
"""

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import EnvelopeExceeded, ZeroState
from .fock import (
    ResidualReport,
    _ladders,
    _quadratures,
    compress,
    params_dict,
    realize_factor,
    realize_gtso,
    realize_s2,
)
from .symplectic import FactorKind, Form, GaussianFactor

#: Largest label modulus for which default truncations are trusted.
ENVELOPE = 1.5

#: Number of averaging rounds applied to the box partial sums of an overlap.
DEFAULT_TAIL_ORDER = 8


def _check_envelope(*labels):
    for z in labels:
        if abs(z) > ENVELOPE:
            warnings.warn(
                f"label {z!r} outside the accuracy envelope |z| <= {ENVELOPE}",
                EnvelopeExceeded,
                stacklevel=3,
            )


def creation_series(alpha, beta, gamma, config):
    """``exp(alpha a1^dag + beta a2^dag + gamma a1^dag a2^dag)|00>`` on the box.

    Each term raises the total excitation by at least one, so the series
    stops after ``2 * n_max + 1`` terms.
    """
    a1, a2 = _ladders(config.n_max)
    c1, c2 = a1.conj().T, a2.conj().T
    gen = alpha * c1 + beta * c2 + gamma * (c1 @ c2)
    term = np.zeros(config.dim, dtype=complex)
    term[0] = 1.0
    out = term.copy()
    for k in range(1, 2 * config.n_max + 2):
        term = gen @ term / k
        if not term.any():
            break
        out += term
    return out


def eta_state(eta, config):
    eta = complex(eta)
    return math.exp(-abs(eta) ** 2 / 2) * creation_series(eta, -eta.conjugate(), 1.0, config)


def xi_state(xi, config):
    xi = complex(xi)
    return math.exp(-abs(xi) ** 2 / 2) * creation_series(xi, xi.conjugate(), -1.0, config)


def _db_coefficients(eta, params):
    eta = complex(eta)
    z = params.d + 1j * params.b
    pref = cmath.exp(-(params.a - 1j * params.c) * abs(eta) ** 2 / (2 * z)) / z
    return pref, eta / z, -eta.conjugate() / z, (params.d - 1j * params.b) / z


def eta_db_state(eta, params, config):
    """Common eigenvector ``|eta>_{D,B}`` in its closed normalization."""
    pref, alpha, beta, gamma = _db_coefficients(eta, params)
    return pref * creation_series(alpha, beta, gamma, config)


# -- overlaps -------------------------------------------------------------------


def box_partial_sums(bra, ket, config):
    """``S_K = sum_{n1, n2 <= K} conj(bra) ket`` for ``K = 0 .. n_max``."""
    c = (np.conj(bra) * ket).reshape(config.levels, config.levels)
    return np.diagonal(np.cumsum(np.cumsum(c, axis=0), axis=1)).copy()


def tail_averaged_overlap(bra, ket, config, omega=-1.0, order=DEFAULT_TAIL_ORDER):
    """Overlap of two non-normalizable pair states, tail-averaged.

    The box partial sums oscillate as ``S_K ~ L + g(K) omega^K``, where
    ``omega`` is the product of the conjugated bra pair coefficient and the
    ket pair coefficient.  Each round replaces neighbouring sums by
    ``(S_K - omega S_{K-1}) / (1 - omega)``, which removes the oscillation
    exactly for constant ``g``.  ``order=1, omega=-1`` is the plain average
    of the sums at ``n_max`` and ``n_max - 1``.
    """
    if order < 0 or order > config.n_max:
        raise ValueError(f"order must lie in [0, n_max], got {order}")
    s = box_partial_sums(bra, ket, config)[config.n_max - order :]
    for _ in range(order):
        s = (s[1:] - omega * s[:-1]) / (1 - omega)
    return complex(s[0])


def overlap_target(xi, eta):
    xi, eta = complex(xi), complex(eta)
    return 0.5 * cmath.exp((eta * xi.conjugate() - xi * eta.conjugate()) / 2)


def overlap_residual(xi, eta, config, order=DEFAULT_TAIL_ORDER):
    """Distance of the truncated ``<xi|eta>`` to ``exp((eta xi* - xi eta*)/2) / 2``."""
    _check_envelope(xi, eta)
    val = tail_averaged_overlap(xi_state(xi, config), eta_state(eta, config), config, -1.0, order)
    return abs(val - overlap_target(xi, eta))


def kernel_target(xi, eta, params):
    xi, eta = complex(xi), complex(eta)
    a, b, c, d = params.as_tuple()
    norm = cmath.exp(1j * c * abs(eta) ** 2 / (2 * d)) / (2 * d)
    return norm * cmath.exp(1j / d * (xi.real * eta.imag - xi.imag * eta.real - b * abs(xi) ** 2 / 2))


def kernel_residual(xi, eta, params, config, order=DEFAULT_TAIL_ORDER):
    """Distance of the truncated ``<xi|eta>_{D,B}`` to its closed form."""
    _check_envelope(xi, eta)
    gamma = _db_coefficients(eta, params)[3]
    val = tail_averaged_overlap(
        xi_state(xi, config), eta_db_state(eta, params, config), config, -gamma, order
    )
    return abs(val - kernel_target(xi, eta, params))


# -- eigen-equations --------------------------------------------------------------


def pair_operators(pair, config, params=None):
    """The two commuting operators whose common eigenvectors form ``pair``.

    ``pair`` is ``"eta"`` (Q1-Q2, P1+P2), ``"xi"`` (Q1+Q2, P1-P2) or ``"db"``
    (D(Q1-Q2) - B(P1-P2), B(Q1+Q2) + D(P1+P2)).
    """
    q1, p1, q2, p2 = _quadratures(config.n_max)
    if pair == "eta":
        return q1 - q2, p1 + p2
    if pair == "xi":
        return q1 + q2, p1 - p2
    if pair == "db":
        if params is None:
            raise ValueError("the db pair needs params")
        b, d = params.b, params.d
        return d * (q1 - q2) - b * (p1 - p2), b * (q1 + q2) + d * (p1 + p2)
    raise ValueError(f"unknown pair {pair!r}")


def eigen_residuals(state, pair, eigenvalues, config, params=None):
    """Interior residuals ``||Pi (O - sqrt(2) e) psi|| / ||Pi psi||``."""
    state = np.asarray(state)
    denom = np.linalg.norm(compress(state, config))
    if denom == 0:
        raise ZeroState("state vanishes on the interior")
    res = {}
    for name, op, e in zip(("first", "second"), pair_operators(pair, config, params), eigenvalues):
        v = op @ state - math.sqrt(2) * e * state
        res[name] = float(np.linalg.norm(compress(v, config)) / denom)
    return ResidualReport(res, config.as_dict(), params_dict(params))


def db_pair_commutator(params, config):
    x, y = pair_operators("db", config, params)
    return float(np.max(np.abs(compress(x @ y - y @ x, config))))


# -- representation transforms --------------------------------------------------


@dataclass(frozen=True)
class TransformCheck:
    """Comparison of a transformed state with its predicted image.

    ``deficit`` is one minus the interior fidelity; ``ratio_error`` is
    ``|c / c_expected - 1|`` for the amplitude ratio ``c`` on the dominant
    interior component and ``phase_error`` is ``|arg(c / c_expected)|``.
    """

    deficit: float
    ratio_error: float
    phase_error: float


def compare_states(image, predicted, config, expected_ratio=1.0):
    phi, psi = compress(image, config), compress(predicted, config)
    nphi, npsi = np.linalg.norm(phi), np.linalg.norm(psi)
    if nphi == 0 or npsi == 0:
        raise ZeroState("state vanishes on the interior")
    fid = abs(np.vdot(psi, phi)) / (nphi * npsi)
    # pair states have many equal-magnitude entries; take the lowest-level one
    mag = np.abs(psi)
    k = int(np.flatnonzero(mag >= (1 - 1e-9) * mag.max())[0])
    rel = phi[k] / (psi[k] * expected_ratio)
    return TransformCheck(max(0.0, 1.0 - float(fid)), float(abs(rel - 1)), float(abs(cmath.phase(rel))))


def f2_action_fidelity(eta, params, config, form=Form.EQ22):
    """Check that the squeezer maps ``|eta>`` onto ``|eta>_{D,B}``."""
    _check_envelope(eta)
    u = realize_gtso(params, form, config)
    return compare_states(u @ eta_state(eta, config), eta_db_state(eta, params, config), config)


def s2_scaling_fidelity(sp, eta, config):
    """Check ``S2 |eta> = |eta / mu> / mu``."""
    _check_envelope(eta, complex(eta) / sp.mu)
    image = realize_s2(sp, config) @ eta_state(eta, config)
    return compare_states(image, eta_state(complex(eta) / sp.mu, config), config, 1.0 / sp.mu)


def dilation_fidelity(a_scale, xi, config):
    """Check ``exp(i (Q1 P2 + Q2 P1) ln a) |xi> = |xi / a> / a``."""
    if not a_scale > 0:
        raise ValueError("a_scale must be positive")
    _check_envelope(xi, complex(xi) / a_scale)
    u = realize_factor(GaussianFactor(FactorKind.SU11_MID, math.log(a_scale)), config)
    return compare_states(u @ xi_state(xi, config), xi_state(complex(xi) / a_scale, config), config, 1.0 / a_scale)
