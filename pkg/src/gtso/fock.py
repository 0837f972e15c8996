"""Truncated two-mode Fock-space realization of the squeezer family.

Operators are dense complex ``numpy`` arrays on the basis ``|n1, n2>`` with
``0 <= n1, n2 <= n_max``; the index of ``|n1, n2>`` is ``n1 * (n_max + 1) + n2``.
Truncated quadratures violate the canonical relations at the box edge, so
every check is made on the *interior*: levels ``n1, n2 <= n_max - margin``.
"""

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NotHermitian, TruncationError
from .symplectic import FactorKind, Form, core_sequences, decompose, target_symplectic

DEFAULT_DIM_CAP = 4096


@dataclass(frozen=True)
class TruncationConfig:
    n_max: int = 16
    margin: int = 6
    tol: float = 1e-8
    dim_cap: int = DEFAULT_DIM_CAP

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 4:
            raise TruncationError(f"n_max must be an integer >= 4, got {self.n_max!r}")
        if int(self.margin) != self.margin or self.margin < 2:
            raise TruncationError(f"margin must be an integer >= 2, got {self.margin!r}")
        if self.margin >= self.n_max:
            raise TruncationError("margin must be smaller than n_max")
        if not self.tol > 0:
            raise TruncationError("tol must be positive")
        if self.dim > self.dim_cap:
            raise TruncationError(f"dimension {self.dim} exceeds cap {self.dim_cap}")

    @property
    def levels(self):
        return self.n_max + 1

    @property
    def dim(self):
        return (self.n_max + 1) ** 2

    @property
    def interior_level(self):
        return self.n_max - self.margin

    @property
    def interior(self):
        return _box_indices(self.n_max, self.interior_level)

    def with_n_max(self, n_max, margin=None):
        return TruncationConfig(n_max, self.margin if margin is None else margin, self.tol, self.dim_cap)

    def as_dict(self):
        return {"n_max": self.n_max, "margin": self.margin, "tol": self.tol}


@dataclass
class ResidualReport:
    """Named residuals plus echoes of the inputs that produced them.

    ``residuals`` are the thresholded quantities; ``diagnostics`` holds
    reported-only values such as unprojected edge residuals.
    """

    residuals: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    params: dict = None
    diagnostics: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.residuals[key]

    def max(self):
        return max(self.residuals.values()) if self.residuals else 0.0

    def prefixed(self, prefix):
        return ResidualReport(
            {f"{prefix}.{k}": v for k, v in self.residuals.items()},
            dict(self.config),
            self.params,
            {f"{prefix}.{k}": v for k, v in self.diagnostics.items()},
        )

    def update(self, other):
        self.residuals.update(other.residuals)
        self.diagnostics.update(other.diagnostics)
        return self

    def to_dict(self):
        return {
            "residuals": dict(self.residuals),
            "diagnostics": dict(self.diagnostics),
            "config": dict(self.config),
            "params": self.params,
        }


def params_dict(params):
    return None if params is None else dict(zip("abcd", params.as_tuple()))


# -- basis helpers ---------------------------------------------------------


@functools.lru_cache(maxsize=None)
def _box_indices(n_max, level):
    """Flat indices of ``|n1, n2>`` with both levels ``<= level``."""
    n = np.arange(level + 1)
    idx = (n[:, None] * (n_max + 1) + n[None, :]).ravel()
    idx.setflags(write=False)
    return idx


def compress(x, config):
    """Interior block of an operator, or interior part of a state."""
    idx = config.interior
    x = np.asarray(x)
    if x.ndim == 1:
        return x[idx]
    return x[np.ix_(idx, idx)]


def basis_index(n1, n2, config):
    return n1 * config.levels + n2


def basis_labels(config):
    n = np.arange(config.levels)
    return np.repeat(n, config.levels), np.tile(n, config.levels)


# -- ladder and quadrature operators ----------------------------------------


@functools.lru_cache(maxsize=None)
def _ladders(n_max):
    d = n_max + 1
    a = np.diag(np.sqrt(np.arange(1, d, dtype=float)), 1).astype(complex)
    eye = np.eye(d)
    out = (np.kron(a, eye), np.kron(eye, a))
    for m in out:
        m.setflags(write=False)
    return out


def ladder(mode, config):
    """Annihilation operator of mode 1 or 2; ``.conj().T`` gives the creator."""
    if mode not in (1, 2):
        raise ValueError("mode must be 1 or 2")
    return _ladders(config.n_max)[mode - 1]


@functools.lru_cache(maxsize=None)
def _quadratures(n_max):
    a1, a2 = _ladders(n_max)
    out = []
    for a in (a1, a2):
        ad = a.conj().T
        out.append((a + ad) / math.sqrt(2))
        out.append(1j * (ad - a) / math.sqrt(2))
    for m in out:
        m.setflags(write=False)
    return tuple(out)  # Q1, P1, Q2, P2


def quadrature(mode, kind, config):
    if mode not in (1, 2) or kind not in ("Q", "P"):
        raise ValueError("mode must be 1|2 and kind 'Q'|'P'")
    return _quadratures(config.n_max)[2 * (mode - 1) + (kind == "P")]


def quadrature_vector(config):
    """``(Q1, P1, Q2, P2)`` in the package's phase-space ordering."""
    return _quadratures(config.n_max)


# -- exact quadratic generators -----------------------------------------------
#
# A product of two truncated quadratures is wrong in its last row/column
# (the intermediate level n_max + 1 is missing).  Quadratic generators are
# therefore formed one level higher and cut back, which makes them the exact
# compression of the infinite-dimensional operator.


def _pad_cut(n_max):
    return _box_indices(n_max + 1, n_max)


def exact_quadratic(fn, config):
    """Evaluate ``fn(Q1, P1, Q2, P2)`` (at most quadratic) exactly on the box."""
    return _exact_quadratic(fn, config.n_max)


def _exact_quadratic(fn, n_max):
    big = _quadratures(n_max + 1)
    idx = _pad_cut(n_max)
    return np.ascontiguousarray(fn(*big)[np.ix_(idx, idx)])


_GENERATORS = {
    FactorKind.FREE_PROP_PLUS: lambda q1, p1, q2, p2: (p1 + p2) @ (p1 + p2),
    FactorKind.FREE_PROP_MINUS: lambda q1, p1, q2, p2: (p1 - p2) @ (p1 - p2),
    FactorKind.COLLECTIVE_SCALE: lambda q1, p1, q2, p2: (p1 @ q1 + q1 @ p1 + p2 @ q2 + q2 @ p2) / 2,
    FactorKind.TWO_MODE_SCALE: lambda q1, p1, q2, p2: -(p1 @ q2 + p2 @ q1),
    FactorKind.THIN_LENS_MINUS: lambda q1, p1, q2, p2: (q1 - q2) @ (q1 - q2),
    FactorKind.THIN_LENS_PLUS: lambda q1, p1, q2, p2: (q1 + q2) @ (q1 + q2),
    FactorKind.SU11_PLUS: lambda q1, p1, q2, p2: (q1 - q2) @ (q1 - q2) + (p1 + p2) @ (p1 + p2),
    FactorKind.SU11_MID: lambda q1, p1, q2, p2: q1 @ p2 + q2 @ p1,
    FactorKind.SU11_MINUS: lambda q1, p1, q2, p2: (q1 + q2) @ (q1 + q2) + (p1 - p2) @ (p1 - p2),
}


@functools.lru_cache(maxsize=None)
def _generator(kind, n_max):
    g = _exact_quadratic(_GENERATORS[kind], n_max)
    g.setflags(write=False)
    return g


def factor_generator(kind, config):
    """Hermitian generator ``G`` with ``factor = exp(i * param * G)``."""
    return _generator(kind, config.n_max)


# -- exponentials ------------------------------------------------------------


def hermitian_exp(h, config):
    """``exp(i H)`` of a Hermitian matrix by eigendecomposition."""
    h = np.asarray(h)
    dev = float(np.max(np.abs(h - h.conj().T))) if h.size else 0.0
    if dev > config.tol:
        raise NotHermitian(dev)
    w, v = np.linalg.eigh((h + h.conj().T) / 2)
    return (v * np.exp(1j * w)) @ v.conj().T


def realize_factor(factor, config):
    if factor.param == 0.0:
        return np.eye(config.dim, dtype=complex)
    return hermitian_exp(factor.param * factor_generator(factor.kind, config), config)


def realize_sequence(seq, config):
    """Operator product of a factor sequence, in written order."""
    out = None
    for f in seq:
        u = realize_factor(f, config)
        out = u if out is None else out @ u
    return out


def realize_gtso(params, form, config):
    return realize_sequence(decompose(params, Form.parse(form)), config)


def realize_s2(sp, config):
    """``exp(lam (a1^dag a2^dag - a1 a2))``."""
    a1, a2 = _ladders(config.n_max)
    k = a1.conj().T @ a2.conj().T - a1 @ a2
    return hermitian_exp(-1j * sp.lam * k, config)


# -- residual checks -----------------------------------------------------------


def interior_unitarity(u, config):
    g = compress(u.conj().T @ u, config)
    return float(np.max(np.abs(g - np.eye(g.shape[0]))))


def collective_operators(config):
    """Unnormalised collective quadratures ``Q1+Q2, P1+P2, Q1-Q2, P1-P2``."""
    q1, p1, q2, p2 = _quadratures(config.n_max)
    return q1 + q2, p1 + p2, q1 - q2, p1 - p2


def heisenberg_residual(u, params, config):
    """Relative interior residuals of ``U X U^dag = alpha X + beta Y``.

    One residual per transformation law: ``q_plus`` for ``Q1+Q2``,
    ``p_plus`` for ``P1+P2``, ``p_minus`` for ``P1-P2``, ``q_minus`` for
    ``Q1-Q2``.  Norms are Frobenius norms of interior blocks.
    """
    a, b, c, d = params.as_tuple()
    qp, pp, qm, pm = collective_operators(config)
    laws = {
        "q_plus": (qp, a * qp + c * pp),
        "p_plus": (pp, d * pp + b * qp),
        "p_minus": (pm, a * pm - c * qm),
        "q_minus": (qm, d * qm - b * pm),
    }
    ud = u.conj().T
    res = {}
    for name, (x, rhs) in laws.items():
        diff = compress(u @ x @ ud - rhs, config)
        res[name] = float(np.linalg.norm(diff) / np.linalg.norm(compress(x, config)))
    return ResidualReport(res, config.as_dict(), params_dict(params))


def su11_generators(config):
    """``(K_plus, K_minus, K_zero)`` built from the truncated quadratures."""
    q1, p1, q2, p2 = _quadratures(config.n_max)
    kp = ((q1 - q2) @ (q1 - q2) + (p1 + p2) @ (p1 + p2)) / 4
    km = ((q1 + q2) @ (q1 + q2) + (p1 - p2) @ (p1 - p2)) / 4
    k0 = -0.5j * (q1 @ p2 + q2 @ p1)
    return kp, km, k0


def su11_residuals(config):
    """Interior residuals of the closed SU(1,1) commutator algebra.

    Checked relations: ``[K+, K-] = 2 K0``, ``[K0, K+] = K+`` and
    ``[K0, K-] = -K-``.  Unprojected residuals go to ``diagnostics``.
    """
    kp, km, k0 = su11_generators(config)

    def comm(x, y):
        return x @ y - y @ x

    relations = {
        "k_plus_k_minus": comm(kp, km) - 2 * k0,
        "k_zero_k_plus": comm(k0, kp) - kp,
        "k_zero_k_minus": comm(k0, km) + km,
    }
    res = {k: float(np.max(np.abs(compress(v, config)))) for k, v in relations.items()}
    diag = {f"unprojected.{k}": float(np.max(np.abs(v))) for k, v in relations.items()}
    return ResidualReport(res, config.as_dict(), None, diag)


def aligned_deviation(u, v, config):
    """Interior max-norm distance after removing a global phase.

    Each operator is divided by the phase of its entry at the position of the
    largest-magnitude interior entry of ``u``.
    """
    cu, cv = compress(u, config), compress(v, config)
    k = np.unravel_index(np.argmax(np.abs(cu)), cu.shape)
    pu, pv = cu[k] / abs(cu[k]), cv[k] / abs(cv[k])
    return float(np.max(np.abs(cu / pu - cv / pv)))


def form_equivalence_residual(params, config):
    four, three = core_sequences(params)
    return aligned_deviation(realize_sequence(four, config), realize_sequence(three, config), config)


def gtso_form_deviation(params, config):
    """Aligned interior distance between the EQ22 and EQ25 products."""
    u22 = realize_gtso(params, Form.EQ22, config)
    u25 = realize_gtso(params, Form.EQ25, config)
    return aligned_deviation(u22, u25, config)


def state_covariance(psi, config):
    """Symmetrised covariance of a state in the ``(q1, p1, q2, p2)`` ordering.

    Second moments use quadratures one level above the box so that
    ``R_i R_j |psi>`` is exact for any ``psi`` supported on the box.
    """
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    big = _quadratures(config.n_max + 1)
    embed = np.zeros((config.n_max + 2) ** 2, dtype=complex)
    embed[_pad_cut(config.n_max)] = psi
    rpsi = [r @ embed for r in big]
    mean = np.array([np.vdot(embed, x).real for x in rpsi])
    sigma = np.empty((4, 4))
    for i in range(4):
        for j in range(4):
            sigma[i, j] = np.vdot(rpsi[i], rpsi[j]).real - mean[i] * mean[j]
    return sigma, mean


def vacuum_covariance(u, config, params=None):
    """Covariance of ``U|00>`` and, given ``params``, its distance to the
    symplectic prediction ``S^{-1} (I/2) S^{-T}``."""
    sigma, _ = state_covariance(u[:, 0], config)
    if params is None:
        return sigma, None
    s_inv = np.linalg.inv(target_symplectic(params))
    expected = s_inv @ (np.eye(4) / 2) @ s_inv.T
    return sigma, float(np.max(np.abs(sigma - expected)))

