"""Exact phase-space algebra of the generalized two-mode squeezer.

Everything here works with 4x4 real matrices in the ``(q1, p1, q2, p2)``
basis under the Heisenberg convention of :mod:`gtso.conventions`.  No Fock
space, no truncation.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .conventions import J, blocks_to_mode, to_collective
from .errors import DeterminantViolation, EmptySequence, LogDomain, NonpositiveDiagonal

DET_TOL = 1e-12


@dataclass(frozen=True)
class AbcdParams:
    """Real parameters ``a, b, c, d`` with ``ad - bc = 1`` and ``a, d > 0``.

    Build instances through :func:`validate_params`; the constructor does not
    check the invariants.
    """

    a: float
    b: float
    c: float
    d: float

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    def plus_block(self):
        """Action on ``(q+, p+)``: rows ``[a, c]`` and ``[b, d]``."""
        return np.array([[self.a, self.c], [self.b, self.d]])

    def minus_block(self):
        """Action on ``(q-, p-)``: rows ``[d, -b]`` and ``[-c, a]``."""
        return np.array([[self.d, -self.b], [-self.c, self.a]])

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d)


def validate_params(a, b, c, d, tol=DET_TOL):
    vals = [float(v) for v in (a, b, c, d)]
    if not all(math.isfinite(v) for v in vals):
        raise ValueError(f"parameters must be finite, got {vals}")
    a, b, c, d = vals
    dev = abs(a * d - b * c - 1.0)
    if dev > tol:
        raise DeterminantViolation(dev)
    if a <= 0 or d <= 0:
        raise NonpositiveDiagonal(a, d)
    return AbcdParams(a, b, c, d)


IDENTITY_PARAMS = AbcdParams(1.0, 0.0, 0.0, 1.0)


@dataclass(frozen=True)
class SqueezeParam:
    """Two-mode squeezing strength ``lam``; ``mu = exp(lam)``."""

    lam: float

    @property
    def mu(self):
        return math.exp(self.lam)

    @classmethod
    def from_mu(cls, mu):
        if mu <= 0:
            raise ValueError("mu must be positive")
        return cls(math.log(mu))

    def inverse_params(self):
        """ABCD parameters whose Heisenberg action coincides with this squeezer.

        ``exp(lam (a1^dag a2^dag - a1 a2))`` sends ``q+ -> exp(-lam) q+``, so it
        is the member ``(1/mu, 0, 0, mu)`` of the family.
        """
        return AbcdParams(1.0 / self.mu, 0.0, 0.0, self.mu)


class FactorKind(enum.Enum):
    FREE_PROP_PLUS = "free_prop_plus"
    FREE_PROP_MINUS = "free_prop_minus"
    COLLECTIVE_SCALE = "collective_scale"
    TWO_MODE_SCALE = "two_mode_scale"
    THIN_LENS_MINUS = "thin_lens_minus"
    THIN_LENS_PLUS = "thin_lens_plus"
    SU11_PLUS = "su11_plus"
    SU11_MID = "su11_mid"
    SU11_MINUS = "su11_minus"


@dataclass(frozen=True)
class GaussianFactor:
    """One exponential ``exp(i * param * G_kind)`` of a factorization.

    The generators ``G_kind`` are, with ``Q±`` and ``P±`` the unnormalised sums
    ``Q1 ± Q2`` and ``P1 ± P2``:

    ===================  ==============================================
    FREE_PROP_PLUS       ``(P1 + P2)^2``
    FREE_PROP_MINUS      ``(P1 - P2)^2``
    COLLECTIVE_SCALE     ``sum_j (P_j Q_j + Q_j P_j) / 2``
    TWO_MODE_SCALE       ``-(P1 Q2 + P2 Q1)``
    THIN_LENS_MINUS      ``(Q1 - Q2)^2``
    THIN_LENS_PLUS       ``(Q1 + Q2)^2``
    SU11_PLUS            ``(Q1 - Q2)^2 + (P1 + P2)^2``
    SU11_MID             ``Q1 P2 + Q2 P1``
    SU11_MINUS           ``(Q1 + Q2)^2 + (P1 - P2)^2``
    ===================  ==============================================
    """

    kind: FactorKind
    param: float

    def __post_init__(self):
        if not math.isfinite(self.param):
            raise ValueError(f"factor parameter must be finite, got {self.param!r}")

    def inverse(self):
        return GaussianFactor(self.kind, -self.param)


@dataclass(frozen=True)
class FactorSequence:
    """Ordered operator product; ``factors[0]`` is the leftmost factor."""

    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise EmptySequence("a factor sequence needs at least one factor")

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)

    def __getitem__(self, i):
        return self.factors[i]

    def inverse(self):
        return FactorSequence(tuple(f.inverse() for f in reversed(self.factors)))

    def __add__(self, other):
        return FactorSequence(self.factors + tuple(other))


class Form(enum.Enum):
    EQ22 = "eq22"  # free propagation, scalings, thin lens
    EQ25 = "eq25"  # three SU(1,1) exponentials

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


def target_symplectic(params):
    """Symplectic matrix of the generalized two-mode squeezer, mode basis."""
    return blocks_to_mode(params.plus_block(), params.minus_block())


def _shear_q(x):
    # q -> q + x p
    return np.array([[1.0, x], [0.0, 1.0]])


def _shear_p(x):
    # p -> p + x q
    return np.array([[1.0, 0.0], [x, 1.0]])


def _scale(s):
    return np.diag([math.exp(s), math.exp(-s)])


_EYE2 = np.eye(2)


def factor_symplectic(factor):
    """Exact Heisenberg image of ``exp(i * param * G_kind)``."""
    k, x = factor.kind, factor.param
    if k is FactorKind.FREE_PROP_PLUS:
        plus, minus = _shear_q(4 * x), _EYE2
    elif k is FactorKind.FREE_PROP_MINUS:
        plus, minus = _EYE2, _shear_q(4 * x)
    elif k is FactorKind.COLLECTIVE_SCALE:
        plus = minus = _scale(x)
    elif k is FactorKind.TWO_MODE_SCALE:
        plus, minus = _scale(-x), _scale(x)
    elif k is FactorKind.THIN_LENS_MINUS:
        plus, minus = _EYE2, _shear_p(-4 * x)
    elif k is FactorKind.THIN_LENS_PLUS:
        plus, minus = _shear_p(-4 * x), _EYE2
    elif k is FactorKind.SU11_PLUS:
        plus, minus = _shear_q(4 * x), _shear_p(-4 * x)
    elif k is FactorKind.SU11_MID:
        plus, minus = _scale(x), _scale(-x)
    elif k is FactorKind.SU11_MINUS:
        plus, minus = _shear_p(-4 * x), _shear_q(4 * x)
    else:  # pragma: no cover
        raise ValueError(f"unknown factor kind {k!r}")
    return blocks_to_mode(plus, minus)


def compose(seq):
    """Symplectic matrix of an operator product.

    Matrices multiply in reverse written order (see :mod:`gtso.conventions`).
    """
    factors = seq.factors if isinstance(seq, FactorSequence) else tuple(seq)
    if not factors:
        raise EmptySequence("cannot compose an empty sequence")
    out = np.eye(4)
    for f in factors:
        out = factor_symplectic(f) @ out
    return out


def decompose(params, form=Form.EQ22):
    """Factor sequence realizing ``params`` in the requested form."""
    form = Form.parse(form)
    a, b, c, d = params.as_tuple()
    F = GaussianFactor
    if form is Form.EQ22:
        return FactorSequence(
            (
                F(FactorKind.FREE_PROP_PLUS, c / (4 * a)),
                F(FactorKind.FREE_PROP_MINUS, -b / (4 * d)),
                F(FactorKind.COLLECTIVE_SCALE, math.log(math.sqrt(a * d))),
                F(FactorKind.TWO_MODE_SCALE, math.log(math.sqrt(d / a))),
                F(FactorKind.THIN_LENS_MINUS, c / (4 * d)),
                F(FactorKind.THIN_LENS_PLUS, -b / (4 * a)),
            )
        )
    return FactorSequence(
        (
            F(FactorKind.SU11_PLUS, c / (4 * a)),
            F(FactorKind.SU11_MID, math.log(a)),
            F(FactorKind.SU11_MINUS, -b / (4 * a)),
        )
    )


def core_sequences(params):
    """The four-factor core of the EQ22 product and its three-factor rewrite.

    Dropping the outer ``FREE_PROP_PLUS`` and ``THIN_LENS_PLUS`` factors of
    the EQ22 form leaves an operator that can also be written with a single
    ``SU11_MID`` scaling between two minus-sector quadratics.  Returns
    ``(four_factor, three_factor)``.
    """
    a, b, c, d = params.as_tuple()
    F = GaussianFactor
    four = FactorSequence(
        (
            F(FactorKind.FREE_PROP_MINUS, -b / (4 * d)),
            F(FactorKind.COLLECTIVE_SCALE, math.log(math.sqrt(a * d))),
            F(FactorKind.TWO_MODE_SCALE, math.log(math.sqrt(d / a))),
            F(FactorKind.THIN_LENS_MINUS, c / (4 * d)),
        )
    )
    three = FactorSequence(
        (
            F(FactorKind.THIN_LENS_MINUS, c / (4 * a)),
            F(FactorKind.SU11_MID, math.log(a)),
            F(FactorKind.FREE_PROP_MINUS, -b / (4 * a)),
        )
    )
    return four, three


def symplectic_residual(s):
    s = np.asarray(s, dtype=float)
    return float(np.max(np.abs(s @ J @ s.T - J)))


def max_deviation(x, y):
    return float(np.max(np.abs(np.asarray(x) - np.asarray(y))))


def log_identity_matrices(params):
    """The symmetric 2x2 matrix whose log is claimed, and the claimed log."""
    a, d = params.a, params.d
    s, t = 1 / (2 * a) + 1 / (2 * d), 1 / (2 * a) - 1 / (2 * d)
    arg = np.array([[s, t], [t, s]])
    u, v = -math.log(math.sqrt(a * d)), math.log(math.sqrt(d / a))
    return arg, np.array([[u, v], [v, u]])


def symmetric_logm(m):
    """Principal logarithm of a real symmetric positive definite matrix."""
    w, v = np.linalg.eigh(m)
    if np.any(w <= 0):
        raise LogDomain(f"matrix is not positive definite (eigenvalues {w})")
    return (v * np.log(w)) @ v.T


def log_identity_residual(params):
    arg, claimed = log_identity_matrices(params)
    return max_deviation(symmetric_logm(arg), claimed)


def plus_block_of(s):
    return to_collective(s)[:2, :2]


def minus_block_of(s):
    return to_collective(s)[2:, 2:]


def random_params(rng, log_range=0.5, off_range=1.0, max_tries=1000):
    """Draw valid parameters with ``|ln a|, |ln d| <= log_range``.

    One of ``b``, ``c`` is drawn uniformly from ``[-off_range, off_range]``
    and the other solves ``ad - bc = 1``; draws where it falls outside the
    same interval are rejected.
    """
    for _ in range(max_tries):
        a = math.exp(rng.uniform(-log_range, log_range))
        d = math.exp(rng.uniform(-log_range, log_range))
        x = rng.uniform(-off_range, off_range)
        if abs(x) < 1e-9:
            continue
        y = (a * d - 1.0) / x
        if abs(y) > off_range:
            continue
        b, c = (x, y) if rng.random() < 0.5 else (y, x)
        # recompute d so the determinant holds to rounding
        d = (1.0 + b * c) / a
        if d <= 0:
            continue
        return validate_params(a, b, c, d)
    raise RuntimeError("could not draw valid parameters")
