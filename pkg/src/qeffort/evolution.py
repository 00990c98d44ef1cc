"""Time evolution: cumulative unitary trajectories from Hamiltonian trajectories.

The operator equation dU/dt = +iH(t)U(t) is integrated as a time-ordered
product of short exponentials. Constant and piecewise-constant generators
are propagated exactly (spectrally, block by block); time-interpolated
generators use the midpoint-exponential rule, which is unitary per step
and second-order accurate.

Sample grids are built per uniform block (one block per constant span or
interpolation interval), with an even number of steps per block so that
downstream Simpson quadrature needs no special casing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ValidationError
from .linalg import as_state, check_hermitian, exp_i, reunitarize

#: Upper bound on the automatic step size. Chosen so that the four effort
#: estimators (each with an independent O(step^2) quadrature error) agree
#: to well under 1e-6 on unit-scale problems; see the effort module tests.
DEFAULT_MAX_STEP = 2.5e-4

#: Hard floor on a step; below this the grid builder has underflowed.
MIN_STEP = 1e-12


@dataclass(frozen=True)
class StepPolicy:
    """Step-size rule for evolve.

    max_step: explicit step bound, or None to use the density rule
        min(DEFAULT_MAX_STEP, pi / (8 * max spectral norm of H)). The rule
        keeps per-step eigenphase motion under pi/8, half the pi/4 budget
        the action tracker's unwinding assumes. An explicit max_step is
        honored verbatim; callers who exceed the density bound own the
        consequences (the tracker will refuse ambiguous matches).
    tolerance: unitarity drift above which a stepped integrator
        re-unitarizes immediately rather than waiting for the schedule.
    reunitarize_every: scheduled polar correction interval, in steps.
    """

    max_step: float | None = None
    tolerance: float = 1e-10
    reunitarize_every: int = 100

    def __post_init__(self):
        if self.max_step is not None and not self.max_step > 0.0:
            raise ValidationError("max_step must be positive")
        if not self.tolerance > 0.0:
            raise ValidationError("tolerance must be positive")
        if not isinstance(self.reunitarize_every, int) or self.reunitarize_every < 1:
            raise ValidationError("reunitarize_every must be a positive integer")


@dataclass(frozen=True, eq=False)
class HamiltonianTrajectory:
    """A time-parameterized Hermitian generator H(t).

    kind "constant": `matrix` holds H.
    kind "piecewise": `segments` is a tuple of (duration, H), applied in
        order starting at t = 0; a boundary instant belongs to the segment
        that starts there.
    kind "interpolated": `samples` is a tuple of (time, H) with strictly
        increasing times; H(t) is the entrywise linear interpolant, defined
        only inside the sampled range.

    Energies are radians per unit time (hbar = 1).
    """

    dim: int
    kind: str
    matrix: np.ndarray | None = None
    segments: tuple[tuple[float, np.ndarray], ...] | None = None
    samples: tuple[tuple[float, np.ndarray], ...] | None = None

    def at(self, t: float) -> np.ndarray:
        """H(t). For piecewise trajectories, boundaries take the later segment."""
        if self.kind == "constant":
            return self.matrix
        if self.kind == "piecewise":
            total = self.total_duration()
            if t < 0.0 or t > total:
                raise ValidationError(f"t = {t!r} is outside the piecewise range [0, {total!r}]")
            acc = 0.0
            for dur, h in self.segments:
                acc += dur
                if t < acc or acc == total:
                    return h
        times = [s[0] for s in self.samples]
        if t < times[0] or t > times[-1]:
            raise ValidationError(
                f"interpolation query t = {t!r} outside sample range "
                f"[{times[0]!r}, {times[-1]!r}]"
            )
        j = int(np.searchsorted(times, t, side="right"))
        if j == len(times):
            return self.samples[-1][1]
        if j == 0:
            return self.samples[0][1]
        t0, h0 = self.samples[j - 1]
        t1, h1 = self.samples[j]
        w = (t - t0) / (t1 - t0)
        return (1.0 - w) * h0 + w * h1

    def total_duration(self) -> float:
        if self.kind != "piecewise":
            raise ValidationError("total_duration is defined for piecewise trajectories")
        return float(sum(d for d, _ in self.segments))

    def spectral_norm_max(self) -> float:
        """Max spectral norm of H over its definition range.

        Exact for all three kinds: a linear interpolant's norm is bounded
        by the larger endpoint norm (convexity of the operator norm).
        """
        if self.kind == "constant":
            return float(np.linalg.norm(self.matrix, 2))
        mats = (
            [h for _, h in self.segments]
            if self.kind == "piecewise"
            else [h for _, h in self.samples]
        )
        return max(float(np.linalg.norm(h, 2)) for h in mats)


def constant_hamiltonian(h) -> HamiltonianTrajectory:
    h = check_hermitian(h, name="Hamiltonian")
    return HamiltonianTrajectory(dim=h.shape[0], kind="constant", matrix=h)


def piecewise_hamiltonian(segments) -> HamiltonianTrajectory:
    """Build a piecewise-constant trajectory from (duration, H) pairs."""
    segs = []
    dim = None
    for k, (dur, h) in enumerate(segments):
        if not dur > 0.0:
            raise ValidationError(f"segment {k} has non-positive duration {dur!r}")
        h = check_hermitian(h, name=f"segment {k} Hamiltonian")
        if dim is None:
            dim = h.shape[0]
        elif h.shape[0] != dim:
            raise ValidationError("segment dimensions disagree")
        segs.append((float(dur), h))
    if not segs:
        raise ValidationError("piecewise trajectory needs at least one segment")
    return HamiltonianTrajectory(dim=dim, kind="piecewise", segments=tuple(segs))


def interpolated_hamiltonian(samples) -> HamiltonianTrajectory:
    """Build a linearly interpolated trajectory from (time, H) pairs."""
    pts = []
    dim = None
    prev_t = None
    for k, (t, h) in enumerate(samples):
        h = check_hermitian(h, name=f"sample {k} Hamiltonian")
        if dim is None:
            dim = h.shape[0]
        elif h.shape[0] != dim:
            raise ValidationError("sample dimensions disagree")
        t = float(t)
        if prev_t is not None and t <= prev_t:
            raise ValidationError("sample times must be strictly increasing")
        prev_t = t
        pts.append((t, h))
    if len(pts) < 2:
        raise ValidationError("interpolated trajectory needs at least two samples")
    return HamiltonianTrajectory(dim=dim, kind="interpolated", samples=tuple(pts))


@dataclass(frozen=True, eq=False)
class UnitaryTrajectory:
    """Sampled cumulative evolution U(t_k), with U(0) = I.

    blocks: per uniform block, (start_index, stop_index, descriptor) where
    descriptor is ("const", H) or ("lin", t0, H0, t1, H1); stop_index is
    the index of the block's last sample. Consecutive blocks share their
    boundary sample. The block structure is what quadrature code needs to
    integrate across piecewise discontinuities correctly.
    """

    times: np.ndarray
    unitaries: np.ndarray
    step_policy: StepPolicy
    kind: str
    blocks: tuple
    h_norm_max: float

    @property
    def dim(self) -> int:
        return self.unitaries.shape[1]

    def index_of(self, t: float) -> int:
        k = int(np.searchsorted(self.times, t))
        for j in (k - 1, k, k + 1):
            if 0 <= j < len(self.times) and abs(self.times[j] - t) <= 1e-9:
                return j
        raise ValidationError(
            f"t = {t!r} is not a sample time of this trajectory "
            f"(range [0, {self.times[-1]!r}])"
        )


@dataclass(frozen=True, eq=False)
class StateTrajectory:
    """States at trajectory sample times; states[k] pairs with times[k]."""

    times: np.ndarray
    states: np.ndarray


def _effective_max_step(h: HamiltonianTrajectory, policy: StepPolicy) -> float:
    if policy.max_step is not None:
        return float(policy.max_step)
    hmax = h.spectral_norm_max()
    if hmax <= 0.0:
        return DEFAULT_MAX_STEP
    return min(DEFAULT_MAX_STEP, math.pi / (8.0 * hmax))


def _block_plan(h: HamiltonianTrajectory, t_end: float):
    """Split [0, t_end] into uniform blocks with per-block H descriptors."""
    if h.kind == "constant":
        return [(0.0, t_end, ("const", h.matrix))]
    if h.kind == "piecewise":
        blocks = []
        acc = 0.0
        for dur, mat in h.segments:
            if acc >= t_end:
                break
            stop = min(acc + dur, t_end)
            blocks.append((acc, stop, ("const", mat)))
            acc += dur
        if acc < t_end and not math.isclose(acc, t_end, rel_tol=0.0, abs_tol=1e-12):
            raise ValidationError(
                f"piecewise trajectory covers [0, {acc!r}] but t_end = {t_end!r}"
            )
        return blocks
    times = [s[0] for s in h.samples]
    if times[0] > 0.0 or times[-1] < t_end:
        raise ValidationError(
            f"interpolated samples cover [{times[0]!r}, {times[-1]!r}], "
            f"need [0, {t_end!r}]"
        )
    blocks = []
    for (t0, h0), (t1, h1) in zip(h.samples[:-1], h.samples[1:]):
        lo = max(t0, 0.0)
        hi = min(t1, t_end)
        if hi <= lo:
            continue
        blocks.append((lo, hi, ("lin", t0, h0, t1, h1)))
    return blocks


def _lin_at(desc, t: float) -> np.ndarray:
    _, t0, h0, t1, h1 = desc
    w = (t - t0) / (t1 - t0)
    return (1.0 - w) * h0 + w * h1


def _spectral_samples(h_mat, local_times, u_start):
    """U(t0 + s) = e^{iHs} U(t0) for every offset s in local_times, batched."""
    w, v = np.linalg.eigh(h_mat)
    phases = np.exp(1j * np.outer(local_times, w))
    props = np.einsum("ij,tj,kj->tik", v, phases, v.conj())
    return props @ u_start


def evolve(
    h: HamiltonianTrajectory, t_end: float, policy: StepPolicy | None = None
) -> UnitaryTrajectory:
    """Integrate dU/dt = +iH(t)U over [0, t_end].

    Constant and piecewise-constant generators are exact (spectral
    propagation per block). Interpolated generators step with
    U(t + dt) = exp_i(H(t + dt/2) dt) U(t), re-unitarized on the policy
    schedule. The default policy samples densely enough that successive
    eigenphases of U move by less than pi/4 per step.
    """
    if not t_end > 0.0:
        raise ValidationError(f"t_end must be positive, got {t_end!r}")
    if policy is None:
        policy = StepPolicy()
    cap = _effective_max_step(h, policy)

    dim = h.dim
    blocks = _block_plan(h, t_end)

    times_parts = [np.array([0.0])]
    block_records = []
    unitaries_parts = [np.eye(dim, dtype=complex)[None, :, :]]
    u_cur = np.eye(dim, dtype=complex)
    idx = 0

    for t0, t1, desc in blocks:
        dur = t1 - t0
        n = max(2, math.ceil(dur / cap))
        if n % 2:
            n += 1
        dt = dur / n
        if dt < MIN_STEP:
            raise NumericalError(
                f"step underflow: block [{t0!r}, {t1!r}] needs step {dt:.3e} < {MIN_STEP}"
            )
        local = np.linspace(0.0, dur, n + 1)
        ts = t0 + local[1:]

        if desc[0] == "const":
            batch = _spectral_samples(desc[1], local[1:], u_cur)
            u_cur = batch[-1]
        else:
            batch = np.empty((n, dim, dim), dtype=complex)
            since_polish = 0
            for k in range(n):
                h_mid = _lin_at(desc, t0 + (k + 0.5) * dt)
                u_cur = exp_i(h_mid * dt) @ u_cur
                since_polish += 1
                drift = np.linalg.norm(u_cur.conj().T @ u_cur - np.eye(dim))
                if drift > policy.tolerance or since_polish >= policy.reunitarize_every:
                    u_cur = reunitarize(u_cur)
                    since_polish = 0
                batch[k] = u_cur

        times_parts.append(ts)
        unitaries_parts.append(batch)
        block_records.append((idx, idx + n, desc))
        idx += n

    times = np.concatenate(times_parts)
    unitaries = np.concatenate(unitaries_parts, axis=0)
    return UnitaryTrajectory(
        times=times,
        unitaries=unitaries,
        step_policy=policy,
        kind=h.kind,
        blocks=tuple(block_records),
        h_norm_max=h.spectral_norm_max(),
    )


def apply(traj: UnitaryTrajectory, psi0, t: float) -> np.ndarray:
    """U(t) psi0 at a sample time t (within 1e-9 of one)."""
    psi0 = as_state(psi0)
    k = traj.index_of(t)
    v = traj.unitaries[k] @ psi0
    return v / np.linalg.norm(v)


def state_trajectory(traj: UnitaryTrajectory, psi0) -> StateTrajectory:
    """psi(t_k) = U(t_k) psi0 at every sample time."""
    psi0 = as_state(psi0)
    states = np.einsum("tij,j->ti", traj.unitaries, psi0)
    return StateTrajectory(times=traj.times, states=states)
