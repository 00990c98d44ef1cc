"""The effort functional, computed four independent ways.

For a trajectory psi(t) = U(t) psi0 the accumulated average phase angle
alpha equals the overlap line integral, the time integral of <H>, the
expectation of the action operator, and twice the complex-plane area swept
by the coefficients in any fixed basis. Each estimator here has its own
error profile, so their mutual agreement is a real cross-check rather
than a tautology.

Signed values throughout: clockwise coefficient motion contributes
negative area and negative effort. The ground-zero shift that makes
efforts nonnegative is a convention applied by the difficulty module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .action import ActionOperator, action_expectation, track_action
from .errors import ValidationError
from .evolution import StateTrajectory, evolve, state_trajectory
from .linalg import as_state, check_hermitian, check_unitary
from .serialize import write_csv

TRACE_CSV_COLUMNS = ("time", "basis_index", "re", "im")


@dataclass(frozen=True, eq=False)
class EffortReport:
    """The four effort estimates and their mutual discrepancy.

    2 * area_swept is the alpha-comparable quantity; the three alphas and
    it agree within max_pairwise_discrepancy. area_basis_variation is the
    spread of the area across the requested bases (a basis-independence
    diagnostic, identically 0.0 for a single basis).
    """

    alpha_line_integral: float
    alpha_energy_integral: float
    alpha_action_expectation: float
    area_swept: float
    basis_used: str
    max_pairwise_discrepancy: float
    area_basis_variation: float = 0.0

    def to_json(self) -> dict:
        return {
            "alpha_line_integral": self.alpha_line_integral,
            "alpha_energy_integral": self.alpha_energy_integral,
            "alpha_action_expectation": self.alpha_action_expectation,
            "area_swept": self.area_swept,
            "basis_used": self.basis_used,
            "max_pairwise_discrepancy": self.max_pairwise_discrepancy,
            "area_basis_variation": self.area_basis_variation,
        }


@dataclass(frozen=True)
class EffortBounds:
    min: float
    max: float
    expected: float


def _state_samples(states) -> tuple[np.ndarray, np.ndarray]:
    """Coerce a StateTrajectory or (time, state) sequence to flat arrays."""
    if isinstance(states, StateTrajectory):
        return np.asarray(states.times, dtype=float), np.asarray(states.states, dtype=complex)
    pairs = list(states)
    if not pairs:
        raise ValidationError("empty state sequence")
    times = np.array([float(t) for t, _ in pairs])
    mat = np.array([np.asarray(v, dtype=complex).reshape(-1) for _, v in pairs])
    return times, mat


def effort_line_integral(states) -> float:
    """Sum of arg<psi_k|psi_k+1> along the sampled trajectory (radians).

    arg rather than Im of the step overlap: the two agree to third order
    per step, and arg stays exact for a pure phase rotation however large
    the step. Refuses sparse sampling (any step overlap magnitude <= 0.9).
    """
    _, psi = _state_samples(states)
    if psi.shape[0] < 2:
        raise ValidationError("line integral needs at least two samples")
    overlaps = np.einsum("ti,ti->t", psi[:-1].conj(), psi[1:])
    low = np.abs(overlaps).min()
    if low <= 0.9:
        raise ValidationError(
            f"sampling too sparse for the line integral: a step overlap "
            f"magnitude fell to {low:.4f} (need > 0.9)"
        )
    return float(np.angle(overlaps).sum())


def area_swept(states, basis=None) -> float:
    """Total signed complex-plane area swept by the coefficients.

    basis: unitary matrix whose columns are the expansion vectors; None
    means the standard basis. Each coefficient c_j(t) = <b_j|psi(t)> traces
    a curve; the swept area is sum_j (1/2) integral Im(conj(c_j) dc_j).
    Clockwise motion counts negative.

    The base estimate is the triangle sum (1/2) Im(conj(c_k) c_k+1), whose
    chord bias is O(step^2). Wherever two consecutive steps are equal the
    pair is Richardson-refined against the stride-2 triangle, which drops
    the bias to O(step^4); trajectories from evolve() qualify throughout.
    """
    times, psi = _state_samples(states)
    if psi.shape[0] < 2:
        raise ValidationError("area needs at least two samples")
    coeffs = psi if basis is None else psi @ check_unitary(basis, name="basis").conj()
    cross = np.einsum("kj,kj->k", coeffs[:-1].conj(), coeffs[1:]).imag
    n = cross.shape[0]
    if n < 2 or n % 2 != 0:
        return float(0.5 * cross.sum())
    dt = np.diff(times)
    uniform = np.abs(dt[0::2] - dt[1::2]) <= 1e-9 * np.abs(dt[0::2])
    fine = cross[0::2] + cross[1::2]
    coarse = np.einsum("kj,kj->k", coeffs[:-2:2].conj(), coeffs[2::2]).imag
    return float(0.5 * np.where(uniform, (4.0 * fine - coarse) / 3.0, fine).sum())


def _simpson_uniform(y: np.ndarray, dx: float) -> np.ndarray:
    n = y.shape[0] - 1
    if n < 2 or n % 2:
        raise ValidationError("Simpson rule needs an even, nonzero step count")
    return (dx / 3.0) * (
        y[0] + y[-1] + 4.0 * y[1:-1:2].sum(axis=0) + 2.0 * y[2:-1:2].sum(axis=0)
    )


def blockwise_energy_integral(traj, states: np.ndarray):
    """Integral of <state(t)| H(t) |state(t)> dt over the trajectory.

    states: (N, d) or (N, d, channels) array aligned with traj.times.
    Composite Simpson per uniform block, so piecewise discontinuities in
    H(t) fall on block boundaries and never inside a quadrature panel.
    Returns a scalar, or an array over the trailing channel axes.
    """
    states = np.asarray(states, dtype=complex)
    if states.shape[0] != traj.times.shape[0]:
        raise ValidationError("states are not aligned with the trajectory samples")
    total = np.zeros(states.shape[2:])
    for i0, i1, desc in traj.blocks:
        sub = states[i0 : i1 + 1]
        dt = (traj.times[i1] - traj.times[i0]) / (i1 - i0)
        if desc[0] == "const":
            e = np.einsum("ti...,ij,tj...->t...", sub.conj(), desc[1], sub).real
        else:
            _, t0, h0, t1, h1 = desc
            w = (traj.times[i0 : i1 + 1] - t0) / (t1 - t0)
            h_arr = (1.0 - w)[:, None, None] * h0 + w[:, None, None] * h1
            e = np.einsum("ti...,tij,tj...->t...", sub.conj(), h_arr, sub).real
        total = total + _simpson_uniform(e, dt)
    return float(total) if total.ndim == 0 else total


def effort_energy_integral(h, psi0, t_end: float, policy=None) -> float:
    """Evolve psi0 under h and integrate the instantaneous <H> (radians)."""
    traj = evolve(h, t_end, policy)
    st = state_trajectory(traj, psi0)
    return blockwise_energy_integral(traj, st.states)


def effort_report(h, psi0, t_end: float, bases=None, policy=None) -> EffortReport:
    """Run all four effort estimators on one evolution and compare them.

    bases: optional list of unitary basis matrices for the area; the
    reported area uses the first, and area_basis_variation records the
    spread across all of them.
    """
    traj = evolve(h, t_end, policy)
    st = state_trajectory(traj, psi0)
    line = effort_line_integral(st)
    energy = blockwise_energy_integral(traj, st.states)
    track = track_action(traj)
    a_exp = action_expectation(track, psi0, float(traj.times[-1]))
    basis_list = list(bases) if bases else [None]
    areas = [area_swept(st, b) for b in basis_list]
    area = areas[0]
    values = [2.0 * area, line, energy, a_exp]
    disc = max(abs(x - y) for x in values for y in values)
    return EffortReport(
        alpha_line_integral=line,
        alpha_energy_integral=energy,
        alpha_action_expectation=a_exp,
        area_swept=area,
        basis_used="standard" if bases is None or not bases else "custom",
        max_pairwise_discrepancy=disc,
        area_basis_variation=max(areas) - min(areas) if len(areas) > 1 else 0.0,
    )


def _bounds_from_listed(mat, states, probs) -> EffortBounds:
    vals = [float(np.vdot(s, mat @ s).real) for s in states]
    expected = float(np.dot(probs, vals))
    return EffortBounds(min=min(vals), max=max(vals), expected=expected)


def effort_bounds(a, ensemble="full-space") -> EffortBounds:
    """Extremes and expectation of an action operator over an ensemble.

    ensemble: "full-space" (min/max are extreme eigenvalues, expected is
    the uniform-density value Tr(A)/dim); a density matrix (expected =
    Tr(rho A), min/max over rho's eigenvectors with nonzero weight); or a
    list of (state, probability) pairs (min/max over the listed states).
    """
    mat = a.matrix if isinstance(a, ActionOperator) else None
    if mat is None:
        mat = check_hermitian(a, name="action operator")

    if isinstance(ensemble, str):
        if ensemble != "full-space":
            raise ValidationError(f"unknown ensemble {ensemble!r}")
        w = np.linalg.eigvalsh(mat)
        return EffortBounds(
            min=float(w[0]),
            max=float(w[-1]),
            expected=float(np.trace(mat).real / mat.shape[0]),
        )

    if isinstance(ensemble, np.ndarray) and ensemble.ndim == 2:
        rho = check_hermitian(ensemble, name="density operator")
        if rho.shape != mat.shape:
            raise ValidationError("density operator dimension mismatch")
        if abs(np.trace(rho).real - 1.0) >= 1e-10:
            raise ValidationError("density operator trace is not 1")
        w, v = np.linalg.eigh(rho)
        if w[0] < -1e-10:
            raise ValidationError("density operator is not positive semidefinite")
        keep = w > 1e-12
        states = [v[:, j] for j in np.flatnonzero(keep)]
        bounds = _bounds_from_listed(mat, states, w[keep] / w[keep].sum())
        # Tr(rho A) directly, so zero-weight eigenvectors cannot perturb it.
        return EffortBounds(
            min=bounds.min,
            max=bounds.max,
            expected=float(np.einsum("ij,ji->", rho, mat).real),
        )

    pairs = list(ensemble)
    if not pairs:
        raise ValidationError("empty ensemble")
    states = [as_state(s) for s, _ in pairs]
    probs = np.array([float(p) for _, p in pairs])
    if np.any(probs < 0.0):
        raise ValidationError("ensemble probabilities must be nonnegative")
    if abs(probs.sum() - 1.0) >= 1e-12:
        raise ValidationError(f"ensemble probabilities sum to {probs.sum()!r}, not 1")
    return _bounds_from_listed(mat, states, probs)


def hilbert_distance(psi1, psi2) -> float:
    """arccos |<psi1|psi2>|: the unrestricted minimum effort between states."""
    f = abs(np.vdot(as_state(psi1), as_state(psi2)))
    return float(np.arccos(min(f, 1.0)))


def export_state_trace_csv(path, states, basis=None) -> None:
    """Per-coefficient complex-plane trace (time, basis_index, re, im)."""
    times, psi = _state_samples(states)
    coeffs = psi if basis is None else psi @ check_unitary(basis, name="basis").conj()
    rows = (
        (times[k], j, coeffs[k, j].real, coeffs[k, j].imag)
        for k in range(times.shape[0])
        for j in range(coeffs.shape[1])
    )
    write_csv(path, TRACE_CSV_COLUMNS, rows)
