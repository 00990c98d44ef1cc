"""Branch-continuous eigenphase tracking and the action operator."""

import numpy as np
import pytest

from qeffort import (
    AmbiguousMatchError,
    NumericalError,
    SIGMA_X,
    StepPolicy,
    UnitaryTrajectory,
    ValidationError,
    action_at,
    action_derivative,
    action_expectation,
    constant_hamiltonian,
    evolve,
    exp_i,
    fold_angle,
    principal_log_unitary,
    track_action,
)
from conftest import random_hermitian


def tracked(h_mat, t_end, max_step):
    traj = evolve(constant_hamiltonian(h_mat), t_end, StepPolicy(max_step=max_step))
    return traj, track_action(traj)


class TestTrackBasics:
    def test_start_is_zero_action(self):
        _, track = tracked(np.diag([2.0, -1.0]), 0.5, 0.01)
        np.testing.assert_allclose(track.alphas[0], 0.0, atol=1e-12)
        assert track.degenerate[0].all()
        np.testing.assert_allclose(
            track.eigenvectors[0], track.eigenvectors[1], atol=1e-12
        )
        a0 = action_at(track, 0.0)
        np.testing.assert_allclose(a0.matrix, 0.0, atol=1e-12)
        assert a0.time == 0.0

    def test_constant_action_is_ht(self):
        rng = np.random.default_rng(31)
        h_mat = random_hermitian(rng, 3, 1.5)
        _, track = tracked(h_mat, 0.8, 0.005)
        np.testing.assert_allclose(
            action_at(track, 0.8).matrix, 0.8 * h_mat, atol=1e-9
        )

    def test_principal_phases_fold_the_alphas(self):
        _, track = tracked(np.diag([3.0, 0.0]), np.pi, 0.01)
        principal = track.principal_phases()
        # Away from the branch point folding the unwound value recovers it.
        mask = np.abs(np.abs(principal) - np.pi) > 1e-6
        np.testing.assert_allclose(
            fold_angle(track.alphas)[mask], principal[mask], atol=1e-12
        )

    def test_index_of_rejects_off_grid_times(self):
        _, track = tracked(np.eye(2), 0.5, 0.05)
        with pytest.raises(ValidationError, match="not a sample time"):
            track.index_of(0.1234)

    def test_needs_two_samples(self):
        one = UnitaryTrajectory(
            times=np.array([0.0]),
            unitaries=np.eye(2)[None, :, :],
            step_policy=StepPolicy(),
            kind="constant",
            blocks=(),
            h_norm_max=1.0,
        )
        with pytest.raises(ValidationError, match="at least two trajectory samples"):
            track_action(one)


class TestWinding:
    def test_phase_passes_branch_point(self):
        _, track = tracked(np.diag([3.0, 0.0]), np.pi, 0.01)
        order = np.argsort(track.alphas[-1])
        alphas = track.alphas[-1][order]
        np.testing.assert_allclose(alphas, [0.0, 3 * np.pi], atol=1e-8)
        assert list(track.windings[-1][order]) == [0, 1]
        # The single-point principal branch sees only 3*pi - 2*pi.
        u_end = exp_i(np.diag([3.0, 0.0]) * np.pi)
        log_vals = np.linalg.eigvalsh(principal_log_unitary(u_end))
        np.testing.assert_allclose(sorted(log_vals), [0.0, np.pi], atol=1e-10)

    def test_counter_rotating_channels(self):
        traj, track = tracked(np.asarray(SIGMA_X), 2 * np.pi, 0.01)
        order = np.argsort(track.alphas[-1])
        np.testing.assert_allclose(
            track.alphas[-1][order], [-2 * np.pi, 2 * np.pi], atol=1e-8
        )
        assert list(track.windings[-1][order]) == [-1, 1]
        # Both channels meet the branch point at t = pi (U = -I there).
        k_mid = track.index_of(np.pi)
        assert track.degenerate[k_mid].all()
        # A(t) reproduces U(t) along the whole path.
        for k in range(0, len(track.times), 50):
            np.testing.assert_allclose(
                exp_i(action_at(track, track.times[k]).matrix),
                traj.unitaries[k],
                atol=1e-8,
            )

    def test_step_budget_exceeded(self):
        with pytest.raises(NumericalError, match="continuity budget"):
            tracked(np.diag([4.0, 0.0]), 1.0, 0.5)


class TestAmbiguity:
    def test_unresolvable_match_raises(self):
        # Second step rotates the eigenbasis by 45 degrees, making both
        # assignments score an identical squared overlap of one half.
        c = np.cos(np.pi / 4)
        w = np.array([[c, -c], [c, c]], dtype=complex)
        u1 = np.diag(np.exp(1j * np.array([0.1, -0.1])))
        u2 = w @ np.diag(np.exp(1j * np.array([0.2, -0.2]))) @ w.conj().T
        traj = UnitaryTrajectory(
            times=np.array([0.0, 1.0, 2.0]),
            unitaries=np.stack([np.eye(2, dtype=complex), u1, u2]),
            step_policy=StepPolicy(),
            kind="constant",
            blocks=(),
            h_norm_max=1.0,
        )
        with pytest.raises(AmbiguousMatchError) as exc:
            track_action(traj)
        assert exc.value.step == 2
        assert exc.value.time == pytest.approx(2.0)


class TestExpectationAndDerivative:
    def test_expectation_weights_channels(self):
        _, track = tracked(np.diag([3.0, 0.0]), np.pi, 0.01)
        plus = np.array([1.0, 1.0]) / np.sqrt(2.0)
        assert action_expectation(track, plus, np.pi) == pytest.approx(
            1.5 * np.pi, abs=1e-8
        )
        assert action_expectation(track, [1.0, 0.0], np.pi) == pytest.approx(
            3 * np.pi, abs=1e-8
        )
        assert action_expectation(track, [0.0, 1.0], np.pi) == pytest.approx(
            0.0, abs=1e-8
        )

    def test_derivative_for_constant_h_is_h(self):
        rng = np.random.default_rng(32)
        h_mat = random_hermitian(rng, 3, 1.0)
        h = constant_hamiltonian(h_mat)
        traj = evolve(h, 0.7, StepPolicy(max_step=0.01))
        track = track_action(traj)
        for t in (0.0, traj.times[len(traj.times) // 2], traj.times[-1]):
            np.testing.assert_allclose(
                action_derivative(track, h, t), h_mat, atol=1e-9
            )


class TestTrackCsv:
    def test_layout_and_flag_encoding(self, tmp_path):
        _, track = tracked(np.diag([1.0, -0.5]), 0.2, 0.05)
        path = tmp_path / "track.csv"
        from qeffort import export_track_csv

        export_track_csv(path, track)
        text = path.read_text()
        lines = text.split("\n")
        assert lines[0] == "time,channel,eigenphase,winding,degenerate_flag"
        assert text.endswith("\n")
        assert "\r" not in text
        # One row per (sample, channel), flags are 0/1 strings.
        body = [ln for ln in lines[1:] if ln]
        assert len(body) == len(track.times) * track.dim
        first = body[0].split(",")
        assert first[1] == "0"
        assert first[4] in ("0", "1")
        # Row for the last sample of channel 1 carries the principal phase.
        last = body[-1].split(",")
        assert float(last[0]) == pytest.approx(track.times[-1])
        assert float(last[2]) == pytest.approx(
            track.principal_phases()[-1, 1], abs=1e-15
        )