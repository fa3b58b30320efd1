"""Minimum-error discrimination of qubit ensembles.

The dual of the discrimination problem asks for the Hermitian operator of
least trace dominating every weighted state.  In Bloch coordinates that is a
weighted smallest-enclosing-ball problem for the points ``q_x v_x / 2`` with
additive offsets ``q_x / 2``; its optimal value is half the guessing
probability.  ``solve_general`` solves it exactly by enumerating candidate
active subsets and certifying one through the first-order conditions, so the
result carries machine-precision optimality certificates rather than an
iteration tolerance.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

import numpy as np

from .bloch import DEFAULT_TOL, Herm2, Tolerances
from .ensembles import Ensemble
from .errors import ConvergenceFailure, InfeasibleCompleteness, WrongArity, WrongLength

# Certification thresholds for the exact phase.  They gate acceptance of a
# candidate optimum, not the quality of the answer itself, which is set by
# the linear algebra.
_EQ_RES = 1e-9
_MU_TOL = 1e-9
_FEAS_SLACK = 1e-10

# Subgradient pruning keeps every state whose dual constraint comes within
# this margin of binding at the approximate center.
_PRUNE_MARGIN = 1e-3


class CaseTag(enum.Enum):
    """Per-state outcome of the dual geometry.

    PROJECTIVE_ELEMENT: the dual gap closes to a rank-1 operator, so the
    state can be detected by a weighted projector.  NEVER_IDENTIFIED: the gap
    operator is definite and every optimal measurement ignores the state.
    NO_MEASUREMENT: the dual optimum coincides with the weighted state
    itself, so blind guessing is already optimal.
    """

    PROJECTIVE_ELEMENT = "projective_element"
    NEVER_IDENTIFIED = "never_identified"
    NO_MEASUREMENT = "no_measurement"


@dataclass(frozen=True)
class DiscriminationSolution:
    """Optimal discrimination data for one ensemble.

    ``symmetry_op`` is the dual optimizer; ``p_guess`` equals its trace.
    ``gaps[x]`` is ``p_guess - priors[x]`` and ``comp_states[x]`` is the raw
    Bloch vector of the complementary state, unit length exactly when the
    state is identified, shorter for NEVER_IDENTIFIED states, and the zero
    vector in the NO_MEASUREMENT case where it is undefined.
    ``povm_weights[x]`` scales the projector onto the plane orthogonal to
    ``comp_states[x]``; weights of unidentified states are zero, and the
    whole vector is zero when blind guessing is the optimal strategy.
    """

    p_guess: float
    symmetry_op: Herm2
    gaps: np.ndarray
    comp_states: np.ndarray
    identified: tuple
    case_tags: tuple
    povm_weights: np.ndarray

    def comp_axis(self, x: int) -> np.ndarray:
        """Unit complementary axis of state ``x`` (zero vector if the gap
        closes, which happens only for a dominant state)."""
        s = self.comp_states[x]
        n = np.linalg.norm(s)
        return s / n if n > 0 else s.copy()


def _centers(ens: Ensemble):
    return ens.blochs * (ens.priors[:, None] / 2.0), ens.priors / 2.0


def _subgradient_center(cen: np.ndarray, off: np.ndarray, iters: int = 150):
    """Rough minimizer of ``max_x (off_x + |y - cen_x|)`` for pruning."""
    y = np.average(cen, axis=0, weights=off)
    span = float(np.max(np.linalg.norm(cen - y, axis=1))) + 1.0e-3
    best_y, best_f = y.copy(), np.inf
    for k in range(1, iters + 1):
        d = y - cen
        dist = np.linalg.norm(d, axis=1)
        vals = off + dist
        i = int(np.argmax(vals))
        if vals[i] < best_f:
            best_f, best_y = float(vals[i]), y.copy()
        if dist[i] < 1e-15:
            break
        y = y - (span / k) * (d[i] / dist[i])
    return best_y, best_f


def _kkt_multipliers(units: np.ndarray):
    """Least-squares convex multipliers for ``sum mu_i u_i = 0``."""
    k = units.shape[0]
    a = np.vstack([units.T, np.ones((1, k))])
    rhs = np.concatenate([np.zeros(3), [1.0]])
    mu, *_ = np.linalg.lstsq(a, rhs, rcond=None)
    res = float(np.linalg.norm(a @ mu - rhs))
    return mu, res

def _certify_subset(idx, cen, off, f_cap):
    """Solve the equal-value system on one subset and certify it, or None.

    Active equalities pin ``y`` to an affine function of the common value;
    the remaining quadratic closes the system.  A root is accepted only if
    every equality holds to 1e-9, the convex multipliers exist with no
    component below -1e-9, and no other state exceeds the value by more
    than 1e-10.
    """
    sub_c = cen[list(idx)]
    sub_o = off[list(idx)]
    if len(idx) == 1:
        y, f = sub_c[0], float(sub_o[0])
        if np.max(off + np.linalg.norm(cen - y, axis=1)) > f + _FEAS_SLACK:
            return None
        return f, y
    c0, o0 = sub_c[0], sub_o[0]
    z = sub_c[1:] - c0
    d_off = sub_o[1:] - o0
    h = 0.5 * (
        np.sum(sub_c[1:] ** 2, axis=1) - c0 @ c0 - (sub_o[1:] ** 2 - o0 * o0)
    ) - z @ c0
    g = z @ z.T
    g_pinv = np.linalg.pinv(g, rcond=1e-12)
    # y(f) = b + a f restricted to the affine hull of the subset centers
    a_vec = z.T @ (g_pinv @ d_off)
    b_vec = c0 + z.T @ (g_pinv @ h)
    qa = a_vec @ a_vec - 1.0
    qb = 2.0 * (a_vec @ (b_vec - c0) + o0)
    qc = (b_vec - c0) @ (b_vec - c0) - o0 * o0
    if abs(qa) < 1e-14:
        roots = [] if abs(qb) < 1e-14 else [-qc / qb]
    else:
        disc = qb * qb - 4.0 * qa * qc
        if disc < 0.0:
            return None
        sq = np.sqrt(disc)
        roots = [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)]
    best = None
    for f in sorted(roots):
        if f < np.max(sub_o) - 1e-12 or f > f_cap:
            continue
        y = b_vec + a_vec * f
        d = y - sub_c
        dist = np.linalg.norm(d, axis=1)
        if np.max(np.abs(sub_o + dist - f)) > _EQ_RES:
            continue
        if np.min(dist) < 1e-15:
            continue
        mu, res = _kkt_multipliers(d / dist[:, None])
        if res > _EQ_RES or np.min(mu) < -_MU_TOL:
            continue
        if np.max(off + np.linalg.norm(cen - y, axis=1)) > f + _FEAS_SLACK:
            continue
        best = (float(f), y)
        break
    return best


def _enclosing_ball(cen, off, candidates, f_cap):
    found = []
    for size in range(1, min(4, len(candidates)) + 1):
        for idx in itertools.combinations(candidates, size):
            hit = _certify_subset(idx, cen, off, f_cap)
            if hit is not None:
                found.append(hit)
        if found:
            break
    if not found:
        return None
    return min(found, key=lambda t: t[0])


def _min_norm_weights(axes: np.ndarray, tol: Tolerances) -> np.ndarray:
    """Smallest nonnegative weights with ``sum w = 2`` and ``sum w s = 0``.

    Exact support enumeration; each support's candidate is the row-space
    solution of the restricted completeness system, which is the optimum
    whenever that support is the optimal one.
    """
    k = axes.shape[0]
    if k > 16:
        raise InfeasibleCompleteness(
            f"completeness search over {k} identified states is not supported"
        )
    a_full = np.vstack([np.ones((1, k)), axes.T])
    rhs = np.concatenate([[2.0], np.zeros(3)])
    best = None
    for size in range(1, k + 1):
        for sup in itertools.combinations(range(k), size):
            a = a_full[:, list(sup)]
            w = np.linalg.pinv(a, rcond=1e-12) @ rhs
            if np.min(w) < -1e-11:
                continue
            if np.linalg.norm(a @ w - rhs) > tol.match_tol:
                continue
            full = np.zeros(k)
            full[list(sup)] = np.clip(w, 0.0, None)
            norm = float(full @ full)
            if best is None or norm < best[0] - 1e-15:
                best = (norm, full)
    if best is None:
        raise InfeasibleCompleteness("no nonnegative completeness weights found")
    return best[1]


def _assemble(ens: Ensemble, f: float, y: np.ndarray, tol: Tolerances):
    cen, off = _centers(ens)
    p_guess = 2.0 * float(f)
    gaps = p_guess - ens.priors
    # lo[x] is the smallest eigenvalue of the dual gap operator of state x
    lo = (f - off) - np.linalg.norm(cen - y, axis=1)
    comp = np.zeros((ens.n, 3))
    tags = []
    for x in range(ens.n):
        if gaps[x] <= tol.psd_tol:
            tags.append(CaseTag.NO_MEASUREMENT)
            continue
        comp[x] = 2.0 * (y - cen[x]) / gaps[x]
        if lo[x] <= tol.psd_tol:
            tags.append(CaseTag.PROJECTIVE_ELEMENT)
        else:
            tags.append(CaseTag.NEVER_IDENTIFIED)
    tags = tuple(tags)
    identified = tuple(
        x for x in range(ens.n) if tags[x] is CaseTag.PROJECTIVE_ELEMENT
    )
    sol = DiscriminationSolution(
        p_guess=p_guess,
        symmetry_op=Herm2(f, y),
        gaps=gaps,
        comp_states=comp,
        identified=identified,
        case_tags=tags,
        povm_weights=np.zeros(ens.n),
    )
    if any(t is CaseTag.NO_MEASUREMENT for t in tags):
        # guessing is optimal; the all-zero weights mean "no measurement"
        return sol
    return DiscriminationSolution(
        p_guess=p_guess,
        symmetry_op=sol.symmetry_op,
        gaps=gaps,
        comp_states=comp,
        identified=identified,
        case_tags=tags,
        povm_weights=povm_weights(ens, sol, tol=tol),
    )


def povm_weights(
    ens: Ensemble,
    sol: DiscriminationSolution,
    index_set=None,
    tol: Tolerances = DEFAULT_TOL,
) -> np.ndarray:
    """Weights of an optimal measurement supported on ``index_set``.

    ``index_set`` defaults to every identified state.  Any nonnegative
    solution of the completeness system on identified states is
    automatically optimal (summing the per-element success terms telescopes
    to the trace of the dual optimizer), so restricting the support is how
    alternative optimal measurements are selected.  Ties are broken by
    minimum Euclidean norm.  Raises InfeasibleCompleteness when the chosen
    support admits no measurement, e.g. non-antipodal two-element supports.
    """
    if index_set is None:
        index_set = sol.identified
    index_set = tuple(index_set)
    if not index_set:
        raise InfeasibleCompleteness("empty index set")
    bad = [x for x in index_set if x not in sol.identified]
    if bad:
        raise InfeasibleCompleteness(
            f"states {bad} are not identified by this solution"
        )
    axes = np.array([sol.comp_axis(x) for x in index_set])
    weights = np.zeros(ens.n)
    weights[list(index_set)] = _min_norm_weights(axes, tol)
    return weights


def solve_general(ens: Ensemble, tol: Tolerances = DEFAULT_TOL) -> DiscriminationSolution:
    """Exact optimal discrimination of an arbitrary qubit ensemble.

    A short subgradient descent localizes the dual optimizer, then active
    subsets of up to four states are enumerated and certified.  Raises
    ConvergenceFailure if no subset certifies, which for valid input
    indicates degeneracy beyond the built-in tolerances.
    """
    cen, off = _centers(ens)
    y0, f0 = _subgradient_center(cen, off)
    vals = off + np.linalg.norm(cen - y0, axis=1)
    candidates = [x for x in range(ens.n) if vals[x] >= f0 - _PRUNE_MARGIN]
    hit = _enclosing_ball(cen, off, candidates, f0 + _PRUNE_MARGIN)
    if hit is None and len(candidates) < ens.n:
        hit = _enclosing_ball(cen, off, list(range(ens.n)), np.inf)
    if hit is None:
        raise ConvergenceFailure(
            "no active subset certified; ensemble too degenerate for the "
            "built-in certification tolerances"
        )
    return _assemble(ens, hit[0], hit[1], tol)


def solve_two_state(ens: Ensemble, tol: Tolerances = DEFAULT_TOL) -> DiscriminationSolution:
    """Closed-form two-state solution (the trace-norm formula).

    When the weighted Bloch difference is shorter than the prior difference
    the best strategy is to always guess the likelier state; it gets tagged
    NO_MEASUREMENT and the other one NEVER_IDENTIFIED.
    """
    if ens.n != 2:
        raise WrongArity(f"two-state solver got {ens.n} states")
    cen, off = _centers(ens)
    diff = cen[1] - cen[0]
    gap = float(np.linalg.norm(diff))
    if gap <= abs(off[0] - off[1]) + 1e-15:
        x = 0 if off[0] >= off[1] else 1
        return _assemble(ens, float(off[x]), cen[x], tol)
    f = 0.5 * (gap + off[0] + off[1])
    y = cen[0] + (f - off[0]) * (diff / gap)
    return _assemble(ens, f, y, tol)


def solve(ens: Ensemble, tol: Tolerances = DEFAULT_TOL) -> DiscriminationSolution:
    """Dispatch on arity: exact closed form for pairs, enumeration above."""
    if ens.n == 2:
        return solve_two_state(ens, tol)
    return solve_general(ens, tol)


def povm_value(ens: Ensemble, sol: DiscriminationSolution, weights=None) -> float:
    """Success probability actually achieved by a measurement.

    ``weights`` defaults to the weights stored in the solution.  At an
    optimum the result equals ``p_guess`` to machine precision, which makes
    it a strong-duality certificate.  In the guessing-only case (all weights
    zero) the value is the prior of the guessed state.
    """
    if weights is None:
        weights = sol.povm_weights
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (ens.n,):
        raise WrongLength(f"expected {ens.n} weights, got shape {weights.shape}")
    if not np.any(weights):
        for x, tag in enumerate(sol.case_tags):
            if tag is CaseTag.NO_MEASUREMENT:
                return float(ens.priors[x])
    total = 0.0
    for x in range(ens.n):
        w = weights[x]
        if w == 0.0:
            continue
        total += ens.priors[x] * w * 0.5 * (1.0 - sol.comp_axis(x) @ ens.blochs[x])
    return float(total)


def oracle_random_search(ens: Ensemble, samples: int = 2000, seed: int = 0) -> float:
    """Primal lower bound on the guessing probability by random measurements.

    Draws random projective pairs and random three- and four-outcome
    measurements, labels every outcome greedily, and returns the best value
    seen, never exceeding the true optimum.  Used as an independent oracle
    in tests.
    """
    rng = np.random.default_rng(seed)
    q, v = ens.priors, ens.blochs
    best = float(np.max(q))
    axes = rng.normal(size=(samples, 3))
    axes /= np.linalg.norm(axes, axis=1, keepdims=True)
    # projective pairs: outcomes (I +- u.sigma)/2 with the best label each
    up = 0.5 * (1.0 + axes @ v.T) * q
    dn = 0.5 * (1.0 - axes @ v.T) * q
    best = max(best, float(np.max(up.max(axis=1) + dn.max(axis=1))))
    for k in (3, 4):
        # whitened Wishart outcomes: M_j = S^{-1/2} G_j S^{-1/2}, batched
        batch = max(1, samples // 20)
        g = rng.normal(size=(batch, k, 2, 2)) + 1j * rng.normal(size=(batch, k, 2, 2))
        g = g @ np.conj(np.swapaxes(g, 2, 3))
        s = g.sum(axis=1)
        tau = np.trace(s, axis1=1, axis2=2).real
        det = (s[:, 0, 0] * s[:, 1, 1] - s[:, 0, 1] * s[:, 1, 0]).real
        root = np.sqrt(np.maximum(det, 0.0))
        # closed-form PSD square root of 2x2 S, then its adjugate inverse
        sqrt_s = (s + root[:, None, None] * np.eye(2)) / np.sqrt(
            tau + 2.0 * root
        )[:, None, None]
        sqrt_det = sqrt_s[:, 0, 0] * sqrt_s[:, 1, 1] - sqrt_s[:, 0, 1] * sqrt_s[:, 1, 0]
        white = np.empty_like(sqrt_s)
        white[:, 0, 0] = sqrt_s[:, 1, 1]
        white[:, 1, 1] = sqrt_s[:, 0, 0]
        white[:, 0, 1] = -sqrt_s[:, 0, 1]
        white[:, 1, 0] = -sqrt_s[:, 1, 0]
        white /= sqrt_det[:, None, None]
        m = np.einsum("bij,bkjl,blm->bkim", white, g, white)
        marks = np.stack(
            [
                (m[..., 0, 1] + m[..., 1, 0]).real,
                (1j * (m[..., 0, 1] - m[..., 1, 0])).real,
                (m[..., 0, 0] - m[..., 1, 1]).real,
            ],
            axis=-1,
        )
        traces = (m[..., 0, 0] + m[..., 1, 1]).real
        probs = 0.5 * q * (traces[..., None] + marks @ v.T)
        values = np.sum(np.max(probs, axis=2), axis=1)
        best = max(best, float(np.max(values)))
    return best
