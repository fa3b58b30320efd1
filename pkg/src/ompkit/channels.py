"""Qubit channels as affine maps of the Bloch ball.

A channel acts on Bloch vectors as ``v -> D v + t`` with a real 3x3 matrix
``D`` and a shift ``t``; this parametrization is trace preserving by
construction, so complete positivity is the only condition left to test.  The
authoritative test builds the 4x4 Choi operator; the closed-form inequality
test on the rotation-canonical form is kept as a fast cross-check on the
domain where it is conclusive.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .bloch import DEFAULT_TOL, Tolerances
from .errors import BadParameter, BlochOutOfBall

_SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
_I2 = np.eye(2, dtype=complex)

# Default slack for Choi positivity and for the inequality checks.
CPTP_TOL = 1e-9


class CptpVerdict(enum.Enum):
    CPTP = "CPTP"
    NOT_CP = "NotCP"
    INCONCLUSIVE = "INCONCLUSIVE_USE_CHOI"


@dataclass(frozen=True)
class QubitChannel:
    """Affine Bloch map ``v -> matrix @ v + shift``."""

    matrix: np.ndarray
    shift: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        t = np.array(self.shift, dtype=float)
        if m.shape != (3, 3):
            raise ValueError(f"channel matrix must be 3x3, got {m.shape}")
        if t.shape != (3,):
            raise ValueError(f"channel shift must be a 3-vector, got {t.shape}")
        m.flags.writeable = False
        t.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "shift", t)

    def apply(self, v, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
        """Image of the Bloch vector ``v``; the input must lie in the ball."""
        v = np.asarray(v, dtype=float)
        if np.linalg.norm(v) > 1.0 + tol.psd_tol:
            raise BlochOutOfBall(f"input Bloch norm {np.linalg.norm(v):.12g} > 1")
        return self.matrix @ v + self.shift

    def compose(self, inner: "QubitChannel") -> "QubitChannel":
        """The map ``self after inner``."""
        return QubitChannel(
            self.matrix @ inner.matrix, self.matrix @ inner.shift + self.shift
        )


@dataclass(frozen=True)
class CanonicalForm:
    """Rotation-canonical decomposition ``D = rot_out @ diag(scales) @ rot_in``.

    Both rotations are proper, the signed scales satisfy
    ``|scales[0]| <= |scales[1]| <= |scales[2]|`` with ``scales[2] >= 0``, and
    ``shift_canon = rot_out.T @ t`` is the shift seen in the canonical frame.
    """

    scales: np.ndarray
    shift_canon: np.ndarray
    rot_out: np.ndarray
    rot_in: np.ndarray


def identity_channel() -> QubitChannel:
    return QubitChannel(np.eye(3), np.zeros(3))


def depolarizing_channel(eta: float) -> QubitChannel:
    """Uniform contraction ``v -> (1 - eta) v`` for ``eta`` in [0, 1]."""
    eta = float(eta)
    if not 0.0 <= 1.0 - eta <= 1.0:
        raise BadParameter(f"depolarizing strength must be in [0, 1], got {eta}")
    return QubitChannel((1.0 - eta) * np.eye(3), np.zeros(3))


def unitary_channel(axis, angle: float) -> QubitChannel:
    """Rotation of the Bloch ball about ``axis`` (unit to 1e-9) by ``angle``."""
    axis = np.asarray(axis, dtype=float)
    if axis.shape != (3,):
        raise BadParameter(f"axis must be a 3-vector, got shape {axis.shape}")
    if abs(np.linalg.norm(axis) - 1.0) > 1e-9:
        raise BadParameter(f"axis must be unit length, got norm {np.linalg.norm(axis):.12g}")
    angle = float(angle)
    c, s = np.cos(angle), np.sin(angle)
    k = np.array(
        [
            [0.0, -axis[2], axis[1]],
            [axis[2], 0.0, -axis[0]],
            [-axis[1], axis[0], 0.0],
        ]
    )
    rot = c * np.eye(3) + s * k + (1.0 - c) * np.outer(axis, axis)
    return QubitChannel(rot, np.zeros(3))


def canonical_form(channel: QubitChannel) -> CanonicalForm:
    """Signed-SVD canonical form with proper rotations on both sides.

    Singular-value signs are folded into the smallest-magnitude scale so that
    ``det(rot_out) = det(rot_in) = +1``; columns are sign-fixed to make the
    output deterministic (diagonal channels with distinct positive entries get
    identity rotations).
    """
    u, s, vt = np.linalg.svd(channel.matrix)
    # reorder to |scales| ascending; a stable sort keeps tied blocks in the
    # frame the SVD produced (so isotropic maps keep their natural axes)
    order = np.argsort(s, kind="stable")
    u = u[:, order].copy()
    s = s[order].copy()
    vt = vt[order, :].copy()
    for k in range(3):
        j = int(np.argmax(np.abs(u[:, k])))
        if u[j, k] < 0:
            u[:, k] = -u[:, k]
            vt[k, :] = -vt[k, :]
    scales = s.copy()
    if np.linalg.det(u) < 0:
        u[:, 0] = -u[:, 0]
        scales[0] = -scales[0]
    if np.linalg.det(vt) < 0:
        vt[0, :] = -vt[0, :]
        scales[0] = -scales[0]
    return CanonicalForm(scales, u.T @ channel.shift, u, vt)


def choi_matrix(channel: QubitChannel) -> np.ndarray:
    """Choi operator (trace 2) of the affine map under the standard basis."""
    d, t = channel.matrix, channel.shift.astype(complex)
    j = np.zeros((4, 4), dtype=complex)
    for a in range(2):
        for b in range(2):
            e = np.zeros((2, 2), dtype=complex)
            e[a, b] = 1.0
            alpha = np.trace(e) / 2.0
            beta = np.array([np.trace(s @ e) / 2.0 for s in _SIGMA])
            out_beta = d @ beta + alpha * t
            image = alpha * _I2 + sum(out_beta[k] * _SIGMA[k] for k in range(3))
            j += np.kron(image, e)
    return (j + j.conj().T) / 2.0


def is_cptp_choi(channel: QubitChannel, tol: float = CPTP_TOL) -> CptpVerdict:
    """CPTP verdict from the smallest Choi eigenvalue.  Always conclusive."""
    lo = float(np.linalg.eigvalsh(choi_matrix(channel))[0])
    return CptpVerdict.CPTP if lo >= -tol else CptpVerdict.NOT_CP


def is_cptp_inequalities(form: CanonicalForm, tol: float = CPTP_TOL) -> CptpVerdict:
    """Closed-form CPTP test on a canonical form.

    The scale bound ``|scale| <= 1``, the two shifted-square conditions and
    the quartic condition are necessary in general, so any failure is a
    conclusive NotCP.  They are also sufficient when the canonical shift is
    purely along the third axis, and on the boundary ``|l3| + |t3| = 1`` only
    such shifts are admissible.  Off that domain the test returns
    INCONCLUSIVE_USE_CHOI.
    """
    l1, l2, l3 = (float(x) for x in form.scales)
    t1, t2, t3 = (float(x) for x in form.shift_canon)
    if max(abs(l1), abs(l2), abs(l3)) > 1.0 + tol:
        return CptpVerdict.NOT_CP
    ok = (l1 + l2) ** 2 <= (1.0 + l3) ** 2 - t3 * t3 + tol
    ok = ok and (l1 - l2) ** 2 <= (1.0 - l3) ** 2 - t3 * t3 + tol
    lhs = (1.0 - (l1 * l1 + l2 * l2 + l3 * l3) - (t1 * t1 + t2 * t2 + t3 * t3)) ** 2
    rhs = 4.0 * (
        l1 * l1 * (t1 * t1 + l2 * l2)
        + l2 * l2 * (t2 * t2 + l3 * l3)
        + l3 * l3 * (t3 * t3 + l1 * l1)
        - 2.0 * l1 * l2 * l3
    )
    ok = ok and lhs + tol >= rhs
    if not ok:
        return CptpVerdict.NOT_CP
    axial = abs(t1) <= tol and abs(t2) <= tol
    on_boundary = abs(abs(l3) + abs(t3) - 1.0) <= tol
    if on_boundary and not axial:
        # extreme scale/shift combinations admit no transverse shift
        return CptpVerdict.NOT_CP
    if axial:
        return CptpVerdict.CPTP
    return CptpVerdict.INCONCLUSIVE
