"""Phase-space conventions shared by every layer of the package.

Basis
-----
Quadrature vectors are ordered ``R = (q1, p1, q2, p2)`` with
``q = (a + a^dagger)/sqrt(2)``, ``p = i(a^dagger - a)/sqrt(2)`` and
``[q_j, p_k] = i delta_jk`` (hbar = 1).  The canonical form is

    J = diag(J2, J2),   J2 = [[0, 1], [-1, 0]]

so that ``[R_i, R_j] = i J_ij``.

Collective quadratures
----------------------
``q± = (q1 ± q2)/sqrt(2)``, ``p± = (p1 ± p2)/sqrt(2)``, ordered
``(q+, p+, q-, p-)``.  :data:`COLLECTIVE` is the orthogonal matrix taking the
mode basis to the collective basis; it preserves ``J``.

Heisenberg convention
---------------------
A unitary ``U`` is represented by the real 4x4 matrix ``S`` defined through

    U R U^dagger = S R

(component-wise, ``U R_i U^dagger = sum_j S_ij R_j``).  With this convention
an operator product ``U = X Y`` maps to ``S_U = S_Y @ S_X``: matrices compose
in the *reverse* of the written operator order.

For ``U = exp(i H)`` with ``H = R^T M R / 2`` (``M`` real symmetric) one has
``S = expm(J @ M)``.

The covariance of ``U|00>`` is ``S^{-1} (I/2) S^{-T}``.
"""

import numpy as np

#: Labels of the mode-basis ordering.
MODE_LABELS = ("q1", "p1", "q2", "p2")

#: Labels of the collective-basis ordering.
COLLECTIVE_LABELS = ("q+", "p+", "q-", "p-")

J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])

J = np.block([[J2, np.zeros((2, 2))], [np.zeros((2, 2)), J2]])

_s = 1.0 / np.sqrt(2.0)

#: Rows express (q+, p+, q-, p-) in terms of (q1, p1, q2, p2).
COLLECTIVE = np.array(
    [
        [_s, 0.0, _s, 0.0],
        [0.0, _s, 0.0, _s],
        [_s, 0.0, -_s, 0.0],
        [0.0, _s, 0.0, -_s],
    ]
)

for _arr in (J2, J, COLLECTIVE):
    _arr.setflags(write=False)


def to_collective(s):
    """Express a mode-basis 4x4 matrix in the collective basis."""
    return COLLECTIVE @ np.asarray(s) @ COLLECTIVE.T


def from_collective(s):
    """Express a collective-basis 4x4 matrix in the mode basis."""
    return COLLECTIVE.T @ np.asarray(s) @ COLLECTIVE


def block_diag2(plus, minus):
    """Assemble a collective-basis matrix from its plus and minus 2x2 blocks."""
    out = np.zeros((4, 4))
    out[:2, :2] = plus
    out[2:, 2:] = minus
    return out


def blocks_to_mode(plus, minus):
    """Mode-basis matrix of ``block_diag2(plus, minus)``.

    Same as ``from_collective(block_diag2(plus, minus))`` but without the
    ``1/sqrt(2)`` roundoff: the mode blocks are ``(P + M)/2`` on the diagonal
    and ``(P - M)/2`` off it.
    """
    plus, minus = np.asarray(plus, dtype=float), np.asarray(minus, dtype=float)
    even, odd = (plus + minus) / 2, (plus - minus) / 2
    return np.block([[even, odd], [odd, even]])

