import numpy as np
import pytest

from qbayes import effects, linalg, update
from qbayes.errors import (
    InconsistentRefinement,
    NotCp,
    NotNormalized,
    NotTracePreserving,
    RankDeficientState,
)

CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)


def basis_projectors(d):
    return effects.validate_povm(
        [linalg.projector(linalg.ket(i, d)) for i in range(d)]
    )


# --------------------------------------------------------------------------
# Instruments.


def test_projective_instrument_on_basis_state():
    inst = update.efficient_from_povm(basis_projectors(2))
    results = update.apply_instrument(linalg.projector(linalg.ket(0, 2)), inst)
    assert results[0].probability == pytest.approx(1.0)
    assert np.linalg.norm(results[0].posterior - linalg.projector(linalg.ket(0, 2))) < 1e-12
    assert results[1].posterior is None


def test_von_neumann_collapse_ignores_state(rng):
    # Projective Kraus A_i = Pi_i: posterior is Pi_i whatever rho was.
    inst = update.efficient_from_povm(basis_projectors(3))
    for _ in range(10):
        rho = linalg.random_state(3, rng)
        for i, out in enumerate(update.apply_instrument(rho, inst)):
            if out.posterior is None:
                continue
            assert np.linalg.norm(out.posterior - linalg.projector(linalg.ket(i, 3))) < 1e-10


def test_random_instrument_probabilities_match_effects(rng):
    for _ in range(50):
        d = int(rng.integers(2, 5))
        inst = update.random_instrument(d, int(rng.integers(2, 5)), int(rng.integers(1, 4)), rng)
        rho = linalg.random_state(d, rng)
        results = update.apply_instrument(rho, inst)
        total = 0.0
        for out, e in zip(results, inst.effects()):
            assert out.probability == pytest.approx(np.trace(rho @ e).real, abs=1e-12)
            total += out.probability
            if out.posterior is not None:
                assert np.linalg.eigvalsh(out.posterior)[0] > -1e-10
                assert np.trace(out.posterior).real == pytest.approx(1.0, abs=1e-9)
        assert total == pytest.approx(1.0, abs=1e-9)


def test_efficient_from_povm_kraus_squares_to_effect(rng):
    povm = effects.validate_povm(linalg.random_povm(3, 4, rng))
    inst = update.efficient_from_povm(povm)
    for (a,), e in zip(inst.outcomes, povm.elements):
        assert np.linalg.norm(linalg.dagger(a) @ a - e) <= 1e-10


def test_efficient_from_povm_rejects_non_unitary():
    with pytest.raises(update.NotUnitary):
        update.efficient_from_povm(
            basis_projectors(2), unitaries=[np.eye(2), 2.0 * np.eye(2)]
        )


def test_sqm_measurement_is_valid_instrument():
    inst = update.efficient_from_povm(effects.standard_sqm(2).base)
    assert len(inst) == 4
    assert inst.efficient


# --------------------------------------------------------------------------
# Refinement / readjustment factorization.


def test_pure_state_refines_to_itself(rng):
    psi = linalg.random_ket(3, rng)
    rho = np.outer(psi, psi.conj())
    inst = update.random_instrument(3, 4, 1, rng)
    fac = update.factor_update(rho, inst)
    for out in fac.outcomes:
        if out.refinement is not None:
            assert np.linalg.norm(out.refinement - rho) <= 1e-10


def test_maximally_mixed_projective_update_is_pure_refinement():
    inst = update.efficient_from_povm(basis_projectors(2))
    fac = update.factor_update(np.eye(2) / 2.0, inst)
    for i, out in enumerate(fac.outcomes):
        pi = linalg.projector(linalg.ket(i, 2))
        assert out.probability == pytest.approx(0.5)
        assert np.linalg.norm(out.refinement - pi) < 1e-12
        assert np.linalg.norm(out.posterior - pi) < 1e-12
        # Readjustment acts trivially on the refinement.
        moved = out.readjustment @ out.refinement @ linalg.dagger(out.readjustment)
        assert np.linalg.norm(moved - out.refinement) < 1e-12


@pytest.mark.parametrize("d", [2, 3, 4])
def test_factorization_invariants_random_pairs(d, rng):
    for _ in range(200):
        rho = linalg.random_state(d, rng)
        inst = update.random_instrument(d, int(rng.integers(2, 5)), 1, rng)
        fac = update.factor_update(rho, inst)
        assert np.linalg.norm(fac.mixture_of_refinements() - rho) <= 1e-9
        for out in fac.outcomes:
            if out.refinement is None:
                continue
            spec_r = np.sort(np.linalg.eigvalsh(out.refinement))
            spec_p = np.sort(np.linalg.eigvalsh(out.posterior))
            assert np.abs(spec_r - spec_p).max() <= 1e-8
            v = out.readjustment
            assert np.linalg.norm(linalg.dagger(v) @ v - np.eye(d)) <= 1e-9
            assert np.linalg.norm(v @ out.refinement @ linalg.dagger(v) - out.posterior) <= 1e-8


def test_factorization_rank_deficient_state_supported(rng):
    rho = linalg.random_state(3, rng, rank=2)
    inst = update.random_instrument(3, 3, 1, rng)
    fac = update.factor_update(rho, inst)
    assert fac.support_dim == 2
    assert np.linalg.norm(fac.mixture_of_refinements() - rho) <= 1e-9


def test_factorization_requires_efficient_instrument(rng):
    inst = update.random_instrument(2, 2, 3, rng)
    with pytest.raises(ValueError):
        update.factor_update(np.eye(2) / 2.0, inst)


def test_identify_measurement_round_trip(rng):
    rho = linalg.random_state(3, rng)
    inst = update.random_instrument(3, 4, 1, rng)
    fac = update.factor_update(rho, inst)
    refinement = [
        (o.probability, o.refinement) for o in fac.outcomes if o.refinement is not None
    ]
    recovered = update.identify_measurement(rho, refinement)
    for original, e in zip(inst.effects(), recovered.elements):
        assert np.linalg.norm(original - e) <= 1e-8


def test_identify_measurement_trivial_refinement(rng):
    rho = linalg.random_state(2, rng)
    povm = update.identify_measurement(rho, [(1.0, rho)])
    assert np.linalg.norm(povm[0] - np.eye(2)) <= 1e-10


def test_identify_measurement_projective_from_mixed():
    rho = np.eye(3) / 3.0
    refinement = [
        (1.0 / 3.0, linalg.projector(linalg.ket(i, 3))) for i in range(3)
    ]
    povm = update.identify_measurement(rho, refinement)
    for i, e in enumerate(povm.elements):
        assert np.linalg.norm(e - linalg.projector(linalg.ket(i, 3))) <= 1e-10


def test_identify_measurement_rejects_bad_refinement(rng):
    rho = linalg.random_state(2, rng)
    other = linalg.random_state(2, rng)
    with pytest.raises(InconsistentRefinement):
        update.identify_measurement(rho, [(1.0, other)])


def test_identify_measurement_rejects_rank_deficient(rng):
    rho = linalg.random_state(3, rng, rank=1)
    with pytest.raises(RankDeficientState):
        update.identify_measurement(rho, [(1.0, rho)])


# --------------------------------------------------------------------------
# Dilations.


def test_instrument_dilation_no_interaction_keeps_state(rng):
    rho_a = linalg.random_state(2, rng)
    inst = update.instrument_from_dilation(rho_a, np.eye(4), basis_projectors(2))
    rho = linalg.random_state(2, rng)
    for out in update.apply_instrument(rho, inst):
        if out.posterior is not None:
            assert np.linalg.norm(out.posterior - rho) <= 1e-10


def test_instrument_dilation_cnot_is_projective_collapse(rng):
    anc = linalg.projector(linalg.ket(0, 2))
    inst = update.instrument_from_dilation(anc, CNOT, basis_projectors(2))
    rho = linalg.random_state(2, rng)
    for i, out in enumerate(update.apply_instrument(rho, inst)):
        if out.posterior is None:
            continue
        assert np.linalg.norm(out.posterior - linalg.projector(linalg.ket(i, 2))) <= 1e-9


def test_instrument_dilation_matches_joint_picture(rng):
    d_sys, d_anc = 2, 3
    for _ in range(30):
        u = linalg.random_unitary(d_sys * d_anc, rng)
        rho_a = linalg.random_state(d_anc, rng)
        meas = basis_projectors(d_anc)
        inst = update.instrument_from_dilation(rho_a, u, meas)
        # Effects agree with the POVM route.
        povm = effects.povm_from_dilation(rho_a, u, meas)
        for e1, e2 in zip(povm.elements, inst.effects()):
            assert np.linalg.norm(e1 - e2) <= 1e-9
        # Completeness.
        total = sum(
            linalg.dagger(a) @ a for ops in inst.outcomes for a in ops
        )
        assert np.linalg.norm(total - np.eye(d_sys)) <= 1e-9
        # Posteriors agree with the projection-at-a-distance picture.
        rho_s = linalg.random_state(d_sys, rng)
        joint = u @ linalg.tensor(rho_s, rho_a) @ linalg.dagger(u)
        for d, out in enumerate(update.apply_instrument(rho_s, inst)):
            proj = linalg.tensor(np.eye(d_sys), meas[d])
            reduced = linalg.partial_trace(proj @ joint @ proj, (d_sys, d_anc), "B")
            p = np.trace(reduced).real
            assert abs(out.probability - p) <= 1e-9
            if p > 1e-9:
                assert np.linalg.norm(out.posterior - reduced / p) <= 1e-9


def test_dilation_from_instrument_round_trip(rng):
    for _ in range(10):
        d = int(rng.integers(2, 4))
        inst = update.random_instrument(d, int(rng.integers(2, 4)), 1, rng)
        anc, u, meas = update.dilation_from_instrument(inst)
        rebuilt = update.instrument_from_dilation(anc, u, meas)
        rho = linalg.random_state(d, rng)
        for a, b in zip(
            update.apply_instrument(rho, inst), update.apply_instrument(rho, rebuilt)
        ):
            assert a.probability == pytest.approx(b.probability, abs=1e-9)
            if a.posterior is not None:
                assert np.linalg.norm(a.posterior - b.posterior) <= 1e-9


# --------------------------------------------------------------------------
# Remote measurement non-disturbance.


def test_remote_measurement_nondisturbance_and_induced_povm(rng):
    # Measuring one side of a pure entangled state leaves the other side's
    # average marginal unchanged, and each conditional state is the pure
    # Bayes refinement of the marginal by a POVM: the measured effects
    # transposed in the Schmidt basis and rotated from the A basis to the
    # B one.  With psi written as a matrix amp = u_a diag(s) vh, that POVM
    # is F_d = W E_d^T W^dag with W = vh^T u_a^T.
    for _ in range(20):
        d = 2
        amp = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        amp = amp / np.linalg.norm(amp)
        psi = amp.reshape(-1)
        joint = np.outer(psi, psi.conj())
        rho_b = linalg.partial_trace(joint, (d, d), "A")
        inst = update.random_instrument(d, 3, 1, rng)
        u_a, _, vh = np.linalg.svd(amp)
        w = vh.T @ u_a.T
        root = linalg.mat_sqrt(rho_b)
        average = np.zeros((d, d), dtype=complex)
        total_f = np.zeros((d, d), dtype=complex)
        for (a,) in inst.outcomes:
            big = linalg.tensor(a, np.eye(d))
            after = big @ joint @ linalg.dagger(big)
            p = np.trace(after).real
            cond = linalg.partial_trace(after, (d, d), "A")
            average += cond
            f = w @ (linalg.dagger(a) @ a).T @ linalg.dagger(w)
            total_f += f
            predicted = root @ f @ root
            assert abs(np.trace(predicted).real - p) <= 1e-9
            assert np.linalg.norm(predicted - cond) <= 1e-9
        assert np.linalg.norm(total_f - np.eye(d)) <= 1e-9
        assert np.linalg.norm(average - rho_b) <= 1e-9


# --------------------------------------------------------------------------
# Channels and Choi operators.


def test_identity_channel_choi_is_maximally_entangled():
    choi = update.channel_choi(update.make_channel([np.eye(2)]))
    psi = update.maximally_entangled_ket(2)
    assert np.linalg.norm(choi - np.outer(psi, psi.conj())) <= 1e-12
    assert np.trace(choi).real == pytest.approx(1.0)


def test_depolarizing_channel_choi_is_maximally_mixed():
    ch = update.make_channel([p / 2.0 for p in linalg.paulis])
    assert np.linalg.norm(update.channel_choi(ch) - np.eye(4) / 4.0) <= 1e-12


def test_unitary_channel_choi_is_pure(rng):
    u = linalg.random_unitary(3, rng)
    choi = update.channel_choi(update.make_channel([u]))
    vals = np.linalg.eigvalsh(choi)
    assert vals[-1] == pytest.approx(1.0, abs=1e-10)
    assert np.abs(vals[:-1]).max() <= 1e-10


def test_choi_round_trip_on_random_channels(rng):
    for _ in range(50):
        d = int(rng.integers(2, 4))
        inst = update.random_instrument(d, 1, int(rng.integers(1, 5)), rng)
        ch = update.make_channel(inst.outcomes[0])
        choi = update.channel_choi(ch)
        # CP <-> PSD, TP <-> output partial trace I/d (hence unit trace).
        assert np.linalg.eigvalsh(choi)[0] >= -1e-9
        assert np.trace(choi).real == pytest.approx(1.0, abs=1e-9)
        reduced = linalg.partial_trace(choi, (d, d), "B")
        assert np.linalg.norm(reduced - np.eye(d) / d) <= 1e-9
        back = update.choi_channel(choi)
        rho = linalg.random_state(d, rng)
        assert np.linalg.norm(ch.apply(rho) - back.apply(rho)) <= 1e-9


def test_choi_channel_rejects_non_psd():
    bad = np.diag([0.75, 0.75, 0.25, -0.25]).astype(complex)
    with pytest.raises(NotCp):
        update.choi_channel(bad)


def test_choi_channel_rejects_non_trace_preserving():
    # PSD with unit trace is not enough: the output marginal must be I/d.
    bad = np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex)
    with pytest.raises(NotTracePreserving):
        update.choi_channel(bad)


def test_controlled_unitary_channel_limits():
    u0 = linalg.random_unitary(2, 0)
    ch = update.controlled_unitary_channel(u0, linalg.sigma_z, 1.0, 0.0)
    rho = linalg.random_state(2, 1)
    assert np.linalg.norm(ch.apply(rho) - u0 @ rho @ linalg.dagger(u0)) <= 1e-12


def test_controlled_unitary_phase_damping():
    s = 1.0 / np.sqrt(2.0)
    ch = update.controlled_unitary_channel(np.eye(2), linalg.sigma_z, s, s)
    plus = linalg.projector(np.array([1.0, 1.0]))
    assert np.linalg.norm(ch.apply(plus) - np.eye(2) / 2.0) <= 1e-12


def test_controlled_unitary_channel_choi_is_state(rng):
    for _ in range(10):
        u0 = linalg.random_unitary(2, rng)
        u1 = linalg.random_unitary(2, rng)
        amp = linalg.random_ket(2, rng)
        ch = update.controlled_unitary_channel(u0, u1, amp[0], amp[1])
        choi = update.channel_choi(ch)
        assert np.linalg.eigvalsh(choi)[0] >= -1e-12
        assert np.trace(choi).real == pytest.approx(1.0, abs=1e-12)


def test_controlled_unitary_rejects_unnormalized():
    with pytest.raises(NotNormalized):
        update.controlled_unitary_channel(np.eye(2), np.eye(2), 1.0, 1.0)


# --------------------------------------------------------------------------
# Remote steering.


def test_steering_schmidt_basis_gives_pure_unitaries():
    u0 = linalg.random_unitary(2, 10)
    u1 = linalg.random_unitary(2, 11)
    far = effects.validate_povm(
        [linalg.projector(linalg.ket(i, 2)) for i in range(2)]
    )
    rep = update.remote_steering_experiment(far, u0=u0, u1=u1, alpha=0.6, beta=0.8)
    c0 = update.channel_choi(update.make_channel([u0]))
    c1 = update.channel_choi(update.make_channel([u1]))
    assert np.linalg.norm(rep.conditional_chois[0] - c0) <= 1e-12
    assert np.linalg.norm(rep.conditional_chois[1] - c1) <= 1e-12
    assert rep.far_probs[0] == pytest.approx(0.36)


def test_steering_trivial_povm_recovers_unconditional():
    far = effects.validate_povm([np.eye(2)])
    rep = update.remote_steering_experiment(far, seed=3)
    assert np.linalg.norm(rep.conditional_chois[0] - rep.unconditional_choi) <= 1e-12


def test_steering_average_is_povm_independent(rng):
    reports = []
    for k in range(5):
        far = effects.validate_povm(linalg.random_povm(2, int(rng.integers(2, 5)), rng))
        reports.append(update.remote_steering_experiment(far, seed=99))
    for rep in reports:
        assert rep.max_deviation <= 1e-9
    for other in reports[1:]:
        assert np.abs(reports[0].averaged_choi - other.averaged_choi).max() <= 1e-9


# --------------------------------------------------------------------------
# Teleportation.


def test_teleport_basis_state_all_outcomes():
    for outcome in range(4):
        t = update.teleport(np.array([1.0, 0.0]), outcome=outcome)
        assert t.fidelity == pytest.approx(1.0, abs=1e-12)
        assert np.linalg.norm(
            t.final_state - linalg.projector(linalg.ket(0, 2))
        ) <= 1e-9


def test_teleport_random_states_full_oracle(rng):
    for _ in range(50):
        psi = linalg.random_ket(2, rng)
        for outcome in range(4):
            t = update.teleport(psi, outcome=outcome)
            assert abs(t.fidelity - 1.0) <= 1e-9
            assert np.abs(t.outcome_probs - 0.25).max() <= 1e-12
            assert np.abs(t.bob_marginal_before - np.eye(2) / 2.0).max() <= 1e-12
            assert np.abs(
                t.bob_marginal_unconditional - np.eye(2) / 2.0
            ).max() <= 1e-12


def test_teleport_conditional_states_are_pauli_rotations(rng):
    psi = linalg.random_ket(2, rng)
    rotations = [np.eye(2), linalg.sigma_z, linalg.sigma_x, linalg.sigma_z @ linalg.sigma_x]
    for outcome, w in enumerate(rotations):
        t = update.teleport(psi, outcome=outcome)
        expected = w @ psi  # conditional description before correction
        overlap = abs(np.vdot(expected, t.conditional_ket))
        assert overlap == pytest.approx(1.0, abs=1e-12)


def test_teleport_sampled_outcome_reproducible():
    psi = linalg.random_ket(2, 21)
    t1 = update.teleport(psi, seed=5)
    t2 = update.teleport(psi, seed=5)
    assert t1.outcome == t2.outcome


def test_teleport_rejects_unnormalized():
    with pytest.raises(NotNormalized):
        update.teleport(np.array([1.0, 1.0]))
