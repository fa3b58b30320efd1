"""Construction of the full family of measurement-preserving channels.

The pairwise preservation conditions are linear in the channel matrix, the
shift, and the degradation, so for a measurement identifying m states they
stack into a 3(m-1) x 13 system whose solution set is an affine subspace:
a minimum-norm particular solution plus the kernel.  Everything here builds
that subspace, slices it (unital, fixed degradation), and sieves random
members down to admissible channels, meaning completely positive ones whose
degradation stays within the measurement's gap bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bloch import DEFAULT_TOL, Tolerances, nullspace, pinv
from .channels import CptpVerdict, QubitChannel, is_cptp_choi
from .discrimination import DiscriminationSolution, solve
from .ensembles import Ensemble
from .errors import (
    ConsistencyError,
    DeltaUnreachable,
    MissingComplementaryState,
    PairSetTooSmall,
    WrongLength,
)

# Unknown vector layout: three channel-matrix rows, then the shift, then the
# degradation scalar.
N_UNKNOWNS = 13
SHIFT_COORDS = (9, 10, 11)
DELTA_COORD = 12


@dataclass(frozen=True)
class OmpSystem:
    """Stacked linear preservation conditions for one measurement.

    ``helstrom_rows[j]`` is the weighted Bloch difference of the anchor
    state against the j-th other identified state, ``prior_diffs[j]`` the
    prior difference, and ``comp_diffs[j]`` the complementary-axis
    difference.  ``coeff_matrix`` is their 3(m-1) x 13 assembly and
    ``identity_vec`` packs the identity channel, which is always a solution.
    """

    ensemble: Ensemble
    solution: DiscriminationSolution
    index_set: tuple
    helstrom_rows: np.ndarray
    prior_diffs: np.ndarray
    comp_diffs: np.ndarray
    coeff_matrix: np.ndarray
    identity_vec: np.ndarray


@dataclass(frozen=True)
class OmpFamily:
    """Affine solution set: ``particular + null_basis @ c`` over free c."""

    system: OmpSystem
    particular: np.ndarray
    null_basis: np.ndarray
    dim: int


@dataclass(frozen=True)
class SieveSample:
    """One admissible family member and the coefficients that produced it."""

    channel: QubitChannel
    delta: float
    coeffs: np.ndarray


def pack(channel: QubitChannel, delta: float) -> np.ndarray:
    """Flatten a channel and degradation into the 13-vector of unknowns."""
    return np.concatenate(
        [channel.matrix.reshape(9), channel.shift, [float(delta)]]
    )


def unpack(x) -> tuple:
    """Inverse of pack; validates the length."""
    x = np.asarray(x, dtype=float)
    if x.shape != (N_UNKNOWNS,):
        raise WrongLength(f"expected a 13-vector, got shape {x.shape}")
    return QubitChannel(x[:9].reshape(3, 3), x[9:12]), float(x[DELTA_COORD])


def build_system(
    ens: Ensemble,
    sol: DiscriminationSolution | None = None,
    index_set=None,
    tol: Tolerances = DEFAULT_TOL,
) -> OmpSystem:
    """Assemble the preservation conditions for a measurement on ``ens``.

    The anchor is the smallest index in the set; rows for all other pairs
    are linear combinations of the anchored ones, so nothing is lost.
    """
    if sol is None:
        sol = solve(ens, tol)
    if index_set is None:
        index_set = sol.identified
    index_set = tuple(index_set)
    if len(index_set) < 2:
        raise PairSetTooSmall(
            f"need at least two identified states, got {len(index_set)}"
        )
    for x in index_set:
        if x not in sol.identified:
            raise MissingComplementaryState(f"state {x} is not identified")
        if np.linalg.norm(sol.comp_states[x]) < 0.5:
            raise MissingComplementaryState(
                f"state {x} has no complementary axis"
            )
    a1 = min(index_set)
    rest = [x for x in index_set if x != a1]
    m1 = len(rest)
    rows = np.array(
        [
            ens.priors[a1] * ens.blochs[a1] - ens.priors[aj] * ens.blochs[aj]
            for aj in rest
        ]
    )
    dq = np.array([ens.priors[a1] - ens.priors[aj] for aj in rest])
    sdiff = np.array(
        [sol.comp_states[a1] - sol.comp_states[aj] for aj in rest]
    )
    q = np.zeros((3 * m1, N_UNKNOWNS))
    for i in range(3):
        block = slice(i * m1, (i + 1) * m1)
        q[block, 3 * i : 3 * i + 3] = rows
        q[block, SHIFT_COORDS[i]] = dq
        q[block, DELTA_COORD] = -sdiff[:, i]
    return OmpSystem(
        ensemble=ens,
        solution=sol,
        index_set=index_set,
        helstrom_rows=rows,
        prior_diffs=dq,
        comp_diffs=sdiff,
        coeff_matrix=q,
        identity_vec=pack(QubitChannel(np.eye(3), np.zeros(3)), 0.0),
    )


def solve_family(sys: OmpSystem, tol: Tolerances = DEFAULT_TOL) -> OmpFamily:
    """Minimum-norm particular solution plus orthonormal kernel basis."""
    q, b = sys.coeff_matrix, sys.identity_vec
    particular = pinv(q, tol) @ (q @ b)
    basis = nullspace(q, tol)
    return OmpFamily(sys, particular, basis, basis.shape[1])


def family_for(
    ens: Ensemble,
    sol: DiscriminationSolution | None = None,
    index_set=None,
    tol: Tolerances = DEFAULT_TOL,
) -> OmpFamily:
    """Convenience: build the system and solve it in one step."""
    return solve_family(build_system(ens, sol, index_set, tol), tol)


def fix_coordinates(
    fam: OmpFamily, fixed: dict, tol: Tolerances = DEFAULT_TOL
) -> OmpFamily:
    """Restrict the family to members with the given coordinates pinned.

    ``fixed`` maps unknown-vector positions to target values.  Raises
    DeltaUnreachable when no member attains them.
    """
    coords = sorted(fixed)
    targets = np.array([float(fixed[c]) for c in coords])
    a = fam.null_basis[coords, :]
    rhs = targets - fam.particular[coords]
    # the basis is orthonormal, so entries of ``a`` sit on a unit scale;
    # a selector block below rank_tol means the kernel cannot move these
    # coordinates at all, only round-off pretends it can
    frozen = fam.dim == 0 or np.linalg.norm(a) <= tol.rank_tol
    if frozen:
        if np.linalg.norm(rhs) > tol.match_tol:
            raise DeltaUnreachable(
                f"coordinates {coords} are pinned away from the target"
            )
        return fam
    c = pinv(a, tol) @ rhs
    if np.linalg.norm(a @ c - rhs) > tol.match_tol:
        raise DeltaUnreachable(
            f"no family member attains coordinates {dict(fixed)}"
        )
    particular = fam.particular + fam.null_basis @ c
    keep = nullspace(a, tol)
    basis = fam.null_basis @ keep
    return OmpFamily(fam.system, particular, basis, basis.shape[1])


def unital_slice(fam: OmpFamily, tol: Tolerances = DEFAULT_TOL) -> OmpFamily:
    """Members with zero shift; never empty, the identity is one."""
    return fix_coordinates(fam, {c: 0.0 for c in SHIFT_COORDS}, tol)


def delta_slice(
    fam: OmpFamily, delta: float, tol: Tolerances = DEFAULT_TOL
) -> OmpFamily:
    """Members with the degradation pinned to ``delta``."""
    return fix_coordinates(fam, {DELTA_COORD: float(delta)}, tol)


def sieve_admissible(
    fam: OmpFamily,
    count: int = 1000,
    seed: int = 0,
    box: float = 2.0,
    tol: Tolerances = DEFAULT_TOL,
) -> list:
    """Random admissible members of the family.

    Coefficients are drawn uniformly from ``[-box, box]^dim``; a member is
    kept when its degradation lies in ``[0, min gap]`` up to tolerance and
    its Choi operator is positive.  Every kept member is re-verified through
    the pairwise check as a guard against assembly bugs.
    """
    from .omp_check import check_omp

    rng = np.random.default_rng(seed)
    sys = fam.system
    min_gap = float(np.min(sys.solution.gaps[list(sys.index_set)]))
    kept = []
    for _ in range(int(count)):
        c = rng.uniform(-box, box, size=fam.dim)
        channel, delta = unpack(fam.particular + fam.null_basis @ c)
        if not -tol.match_tol <= delta <= min_gap + tol.match_tol:
            continue
        if is_cptp_choi(channel, tol.psd_tol) is not CptpVerdict.CPTP:
            continue
        report = check_omp(sys.ensemble, channel, sys.solution, sys.index_set, tol)
        if not report.is_omp:
            raise ConsistencyError(
                "sieved member fails the pairwise check; family assembly bug"
            )
        kept.append(SieveSample(channel, delta, c))
    return kept
