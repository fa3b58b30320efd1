"""Measurement-preservation checks across channel families."""

import numpy as np
import pytest

from ompkit.bloch import Tolerances
from ompkit.channels import (
    QubitChannel,
    depolarizing_channel,
    identity_channel,
    unitary_channel,
)
from ompkit.discrimination import solve
from ompkit.ensembles import make_ensemble
from ompkit.errors import (
    BadParameter,
    DominatedState,
    NotEquiprobable,
    NotOmpInput,
    NotUnitary,
    PairSetTooSmall,
    WrongArity,
)
from ompkit.fileio import bundled_ensemble
from ompkit.omp_check import (
    Mode,
    check_convex_mix,
    check_equiprobable,
    check_omp,
    check_pg_preserving,
    check_two_state,
    check_unitary,
)

from helpers import random_cptp_channel, random_ensemble


def test_identity_preserves_everything():
    ens = bundled_ensemble("bb84")
    rep = check_omp(ens, identity_channel())
    assert rep.is_omp
    assert rep.mode is Mode.STRONG
    assert rep.delta == pytest.approx(0.0, abs=1e-12)
    assert rep.p_guess_before == pytest.approx(rep.p_guess_after, abs=1e-10)


def test_depolarizing_on_bb84():
    ens = bundled_ensemble("bb84")
    for eta in (0.1, 0.35, 0.9):
        rep = check_omp(ens, depolarizing_channel(eta))
        assert rep.is_omp
        assert rep.delta == pytest.approx(eta / 4.0, abs=1e-10)
        assert rep.p_guess_before - rep.p_guess_after == pytest.approx(
            rep.delta, abs=1e-10
        )


def test_axis_rotation_weak_but_not_strong():
    ens = bundled_ensemble("bb84")
    rot = unitary_channel((0, 0, 1), np.pi / 7)
    strong = check_omp(ens, rot)
    assert not strong.is_omp
    weak = check_omp(ens, rot, index_set=(0, 1))
    assert weak.is_omp
    assert weak.mode is Mode.WEAK
    assert weak.delta == pytest.approx(0.0, abs=1e-10)


def test_depolarizing_fails_for_unequal_priors():
    rep = check_omp(bundled_ensemble("unequal3"), depolarizing_channel(0.2))
    assert not rep.is_omp
    assert rep.residuals.max() > 1e-3


def test_pair_set_too_small():
    ens = bundled_ensemble("bb84")
    with pytest.raises(PairSetTooSmall):
        check_omp(ens, identity_channel(), index_set=(0,))


def test_equiprobable_depolarizing():
    ens = bundled_ensemble("three_mubs")
    sol = solve(ens)
    for eta in (0.0, 0.25, 0.6):
        rep = check_equiprobable(ens, depolarizing_channel(eta), sol)
        assert rep.is_omp
        assert rep.kappa == pytest.approx(1.0 - eta, abs=1e-10)
        assert rep.delta == pytest.approx(eta * (sol.p_guess - 1 / 6), abs=1e-10)


def test_equiprobable_requires_uniform_priors():
    with pytest.raises(NotEquiprobable):
        check_equiprobable(bundled_ensemble("unequal3"), identity_channel())


def test_planar_kernel_channel_is_omp():
    # The channel is not a multiple of the identity, but it acts as 0.5*I on
    # the plane spanned by the state differences, which is all that matters.
    trine = make_ensemble(
        [
            (1 / 3, (0.9 * np.cos(2 * np.pi * k / 3), 0.9 * np.sin(2 * np.pi * k / 3), 0))
            for k in range(3)
        ]
    )
    d = np.array([[0.5, 0, 0.1], [0, 0.5, 0.1], [0, 0, 0.6]])
    for shift in ((0, 0, 0), (0, 0, 0.2)):
        rep = check_equiprobable(trine, QubitChannel(d, shift))
        assert rep.is_omp
        assert rep.kappa == pytest.approx(0.5, abs=1e-12)
        assert rep.residual <= 1e-12
        # The common shift drops out of every difference vector.
        assert rep.delta == pytest.approx(0.5 * (19 / 30 - 1 / 3), abs=1e-10)


def test_two_state_depolarizing_threshold():
    # Orthogonal pair with priors 0.7/0.3: preserved exactly up to eta = 0.6.
    pair = make_ensemble([(0.7, (0, 0, 1)), (0.3, (0, 0, -1))])
    for eta, expect in ((0.4, True), (0.6, True), (0.8, False)):
        rep = check_two_state(pair, depolarizing_channel(eta))
        assert rep.is_omp is expect
        assert rep.scale == pytest.approx(1.0 - eta, abs=1e-12)
        assert rep.delta == pytest.approx(eta / 2.0, abs=1e-12)
        assert rep.offset == pytest.approx(eta * 0.4 / 2.0, abs=1e-12)


def test_two_state_axis_rotation():
    pair = make_ensemble([(0.6, (0, 0, 1)), (0.4, (1, 0, 0))])
    h = 0.6 * np.array([0.0, 0, 1]) - 0.4 * np.array([1.0, 0, 0])
    h /= np.linalg.norm(h)
    rep = check_two_state(pair, unitary_channel(h, 0.9))
    assert rep.is_omp
    assert rep.scale == pytest.approx(1.0, abs=1e-10)
    assert rep.offset == pytest.approx(0.0, abs=1e-10)
    assert rep.delta == pytest.approx(0.0, abs=1e-10)


def test_two_state_guard_conditions():
    with pytest.raises(WrongArity):
        check_two_state(bundled_ensemble("sic"), identity_channel())
    dominated = make_ensemble([(0.9, (0, 0, 0.7)), (0.1, (0, 0, 1))])
    with pytest.raises(DominatedState):
        check_two_state(dominated, depolarizing_channel(0.1))


def test_unitary_verdicts():
    pair = make_ensemble([(0.6, (0, 0, 1)), (0.4, (1, 0, 0))])
    h = 0.6 * np.array([0.0, 0, 1]) - 0.4 * np.array([1.0, 0, 0])
    h /= np.linalg.norm(h)
    assert check_unitary(pair, unitary_channel(h, 0.7))
    perp = np.array([h[2], 0.0, -h[0]])
    perp /= np.linalg.norm(perp)
    assert not check_unitary(pair, unitary_channel(perp, 0.7))
    # Three or more identified states survive only the identity rotation.
    bb84 = bundled_ensemble("bb84")
    assert check_unitary(bb84, identity_channel())
    assert not check_unitary(bb84, unitary_channel((0, 0, 1), 0.3))
    # With no identified states any rotation trivially preserves guessing.
    dominated = make_ensemble([(0.9, (0, 0, 0.7)), (0.1, (0, 0, 1))])
    assert check_unitary(dominated, unitary_channel((0, 1, 0), 1.2))
    with pytest.raises(NotUnitary):
        check_unitary(pair, depolarizing_channel(0.2))


def test_pg_preserving():
    pair = make_ensemble([(0.6, (0, 0, 1)), (0.4, (1, 0, 0))])
    h = 0.6 * np.array([0.0, 0, 1]) - 0.4 * np.array([1.0, 0, 0])
    h /= np.linalg.norm(h)
    assert check_pg_preserving(pair, identity_channel())
    assert check_pg_preserving(pair, unitary_channel(h, 0.7))
    assert not check_pg_preserving(bundled_ensemble("bb84"), depolarizing_channel(0.2))


def test_convex_mix_blends_degradation():
    ens = bundled_ensemble("bb84")
    rep = check_convex_mix(ens, identity_channel(), depolarizing_channel(0.2), 0.5)
    assert rep.is_omp
    assert rep.delta == pytest.approx(0.025, abs=1e-10)
    with pytest.raises(BadParameter):
        check_convex_mix(ens, identity_channel(), identity_channel(), 1.5)
    with pytest.raises(NotOmpInput):
        check_convex_mix(
            ens, unitary_channel((0, 0, 1), np.pi / 7), identity_channel(), 0.5
        )


def test_guessing_probability_never_increases():
    rng = np.random.default_rng(17)
    for _ in range(1000):
        ens = random_ensemble(rng, int(rng.integers(2, 5)))
        ch = random_cptp_channel(rng)
        before = solve(ens).p_guess
        mapped = make_ensemble(
            [(q, ch.apply(v)) for q, v in zip(ens.priors, ens.blochs)]
        )
        assert solve(mapped).p_guess <= before + 1e-9


def test_unitary_covariance():
    # Rotations leave the gaps alone and rotate the complementary axes.
    rng = np.random.default_rng(23)
    for _ in range(200):
        ens = random_ensemble(rng, int(rng.integers(2, 6)))
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        rot = unitary_channel(axis, float(rng.uniform(0, np.pi)))
        sol = solve(ens)
        mapped = make_ensemble(
            [(q, rot.apply(v)) for q, v in zip(ens.priors, ens.blochs)]
        )
        sol2 = solve(mapped)
        assert sol2.identified == sol.identified
        assert sol2.p_guess == pytest.approx(sol.p_guess, abs=1e-9)
        assert np.allclose(sol2.gaps, sol.gaps, atol=1e-9)
        for x in sol.identified:
            assert np.allclose(
                sol2.comp_axis(x), rot.matrix @ sol.comp_axis(x), atol=1e-7
            )
