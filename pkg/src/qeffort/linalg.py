"""Dense complex linear algebra primitives.

Everything here works on plain numpy arrays. Hermitian eigendecomposition
is the only solver primitive; unitary matrices are decomposed by routing
through the Hermitian solver on (U + U†)/2 and (U - U†)/2i with subspace
refinement, which keeps every eigenproblem well conditioned.

Sign convention used throughout the package: exp_i(A) = e^{+iA}, so a
Hamiltonian H generates U(t) = e^{+iHt}. Energies and eigenphases are in
radians (per unit time where a time is involved); hbar = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ValidationError

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

#: Absolute gap below which neighboring eigenvalues are reported degenerate.
DEGENERACY_TOL = 1e-9

# Grouping tolerance for the cosine spectrum in the unitary route. Looser
# than DEGENERACY_TOL on purpose: cos merges +phi and -phi, and any group
# that was split spuriously is re-split by the sine refinement anyway.
_COS_GROUP_TOL = 1e-8

_HERM_TOL = 1e-10
_UNITARY_TOL = 1e-10


def fold_angle(x):
    """Fold an angle (or array of angles) into (-pi, pi].

    The branch point maps to +pi, never -pi.
    """
    y = np.remainder(np.asarray(x, dtype=float), 2.0 * np.pi)
    y = np.where(y > np.pi, y - 2.0 * np.pi, y)
    return y if y.ndim else float(y)


def as_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix has non-finite entries")
    return m


def check_hermitian(m, tol: float = _HERM_TOL, name: str = "matrix") -> np.ndarray:
    """Validate Hermiticity and return the input as a complex array.

    On failure the error message names the entry with the largest
    asymmetry, which is what a user needs to fix their input file.
    """
    m = as_matrix(m)
    delta = m - m.conj().T
    err = np.linalg.norm(delta)
    if err >= tol * max(1.0, np.linalg.norm(m)):
        i, j = np.unravel_index(np.argmax(np.abs(delta)), delta.shape)
        raise ValidationError(
            f"{name} is not Hermitian: entry ({i},{j}) differs from the "
            f"conjugate of ({j},{i}) by {np.abs(delta[i, j]):.3e}"
        )
    return m


def check_unitary(m, tol: float = _UNITARY_TOL, name: str = "matrix") -> np.ndarray:
    m = as_matrix(m)
    err = np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0]))
    if err >= tol:
        raise ValidationError(f"{name} is not unitary: ||M†M - I||_F = {err:.3e}")
    return m


def as_state(v, tol: float = 1e-12) -> np.ndarray:
    """Validate a normalized state vector and return it as a complex array."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    if not np.all(np.isfinite(v)):
        raise ValidationError("state vector has non-finite entries")
    norm2 = float(np.vdot(v, v).real)
    if abs(norm2 - 1.0) >= tol:
        raise ValidationError(f"state vector is not normalized: |psi|^2 = {norm2!r}")
    return v


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Spectral decomposition M = V diag(eigenvalues) V†.

    eigenvalues: real ascending for Hermitian input; unit-modulus complex
        sorted by principal argument for unitary input.
    eigenvectors: orthonormal columns, eigenvectors[:, i] belongs to
        eigenvalues[i].
    degenerate: per-eigenvalue flag, True when the gap to a neighbor is
        below DEGENERACY_TOL (measured on the unit circle for unitaries).
    kind: "hermitian" or "unitary".
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    degenerate: np.ndarray
    kind: str


def _degenerate_flags_real(w: np.ndarray, tol: float = DEGENERACY_TOL) -> np.ndarray:
    flags = np.zeros(w.shape[0], dtype=bool)
    close = np.abs(np.diff(w)) < tol
    flags[:-1] |= close
    flags[1:] |= close
    return flags


def _degenerate_flags_circular(phi: np.ndarray, tol: float = DEGENERACY_TOL) -> np.ndarray:
    # phi sorted ascending in (-pi, pi]; the circle closes between the
    # last and first entries.
    n = phi.shape[0]
    flags = np.zeros(n, dtype=bool)
    if n < 2:
        return flags
    close = np.abs(np.diff(phi)) < tol
    flags[:-1] |= close
    flags[1:] |= close
    wrap = abs(2.0 * np.pi - (phi[-1] - phi[0])) < tol
    if wrap:
        flags[0] = flags[-1] = True
    return flags


def _group_spans(values: np.ndarray, tol: float):
    """Yield (start, stop) index spans of near-equal consecutive values."""
    n = values.shape[0]
    start = 0
    for i in range(1, n):
        if values[i] - values[i - 1] >= tol:
            yield start, i
            start = i
    yield start, n


def _refine_unitary_basis(c_vals, vectors, s_mat):
    """Split cosine-degenerate subspaces using the sine part.

    c_vals: eigenvalues of (U+U†)/2, ascending. vectors: its eigenvectors.
    Within any group of near-equal cosines, the projected sine operator is
    diagonalized to separate +phi from -phi channels. Distinct phases in a
    cosine group always have distinct sines, so one refinement level is
    enough.
    """
    v = vectors.copy()
    for a, b in _group_spans(c_vals, _COS_GROUP_TOL):
        if b - a < 2:
            continue
        block = v[:, a:b]
        s_proj = block.conj().T @ s_mat @ block
        s_proj = (s_proj + s_proj.conj().T) / 2.0
        _, w = np.linalg.eigh(s_proj)
        v[:, a:b] = block @ w
    return v


def _unitary_eigen_from_parts(u, c_mat, s_mat, vectors):
    """Per-vector eigenphases from Rayleigh quotients of the two parts."""
    cos_q = np.einsum("ij,jk,ki->i", vectors.conj().T, c_mat, vectors).real
    sin_q = np.einsum("ij,jk,ki->i", vectors.conj().T, s_mat, vectors).real
    phi = np.arctan2(sin_q, cos_q)
    # arctan2(+0, -1) = +pi, which is the branch-point rule we want; a
    # rounding-noise -0.0 (or a sine tiny enough to round to -pi) would
    # land on -pi instead, so flip that single excluded value.
    phi[phi == -np.pi] = np.pi
    return phi


def spectral_decompose(m, kind: str | None = None) -> EigenSystem:
    """Eigendecompose a Hermitian or unitary matrix.

    kind: "hermitian", "unitary", or None to detect. Hermitian eigenvalues
    come back ascending; unitary eigenvalues are sorted by principal
    argument in (-pi, pi]. Degenerate subspaces get an arbitrary
    orthonormal internal basis and are flagged.
    """
    m = as_matrix(m)
    if kind is None:
        scale = max(1.0, np.linalg.norm(m))
        if np.linalg.norm(m - m.conj().T) < _HERM_TOL * scale:
            kind = "hermitian"
        elif np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0])) < _UNITARY_TOL:
            kind = "unitary"
        else:
            raise ValidationError("matrix is neither Hermitian nor unitary")

    if kind == "hermitian":
        m = check_hermitian(m)
        w, v = np.linalg.eigh(m)
        return EigenSystem(w, v, _degenerate_flags_real(w), "hermitian")

    if kind != "unitary":
        raise ValidationError(f"unknown decomposition kind {kind!r}")
    m = check_unitary(m)
    c_mat = (m + m.conj().T) / 2.0
    s_mat = (m - m.conj().T) / 2.0j
    c_vals, vectors = np.linalg.eigh(c_mat)
    vectors = _refine_unitary_basis(c_vals, vectors, s_mat)
    phi = _unitary_eigen_from_parts(m, c_mat, s_mat, vectors)
    order = np.argsort(phi, kind="stable")
    phi = phi[order]
    vectors = vectors[:, order]
    vals = np.exp(1j * phi)
    return EigenSystem(vals, vectors, _degenerate_flags_circular(phi), "unitary")


def unitary_eigenphases(u) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Principal eigenphases of a unitary, plus eigenvectors and flags.

    Returns (phi, vectors, degenerate) with phi sorted ascending in
    (-pi, pi]. Convenience wrapper used by the action tracker.
    """
    es = spectral_decompose(u, "unitary")
    return np.angle(es.eigenvalues), es.eigenvectors, es.degenerate


def unitary_eigenphases_stack(u_stack) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """unitary_eigenphases over a stack of unitaries, batching the eigh call.

    u_stack: (n, d, d) array of matrices already known to be unitary (no
    per-sample unitarity check; the intended input is evolve output). The
    cosine-part eigendecomposition, the dominant cost, runs as one batched
    LAPACK call; refinement and phase extraction are per-sample.
    """
    u_stack = np.asarray(u_stack, dtype=complex)
    u_dag = np.swapaxes(u_stack.conj(), -1, -2)
    c_stack = (u_stack + u_dag) / 2.0
    s_stack = (u_stack - u_dag) / 2.0j
    c_vals, c_vecs = np.linalg.eigh(c_stack)
    n, d = u_stack.shape[0], u_stack.shape[1]
    phis = np.empty((n, d))
    vecs = np.empty((n, d, d), dtype=complex)
    degen = np.empty((n, d), dtype=bool)
    for k in range(n):
        v = _refine_unitary_basis(c_vals[k], c_vecs[k], s_stack[k])
        phi = _unitary_eigen_from_parts(u_stack[k], c_stack[k], s_stack[k], v)
        order = np.argsort(phi, kind="stable")
        phis[k] = phi[order]
        vecs[k] = v[:, order]
        degen[k] = _degenerate_flags_circular(phis[k])
    return phis, vecs, degen


def exp_i(a) -> np.ndarray:
    """Matrix exponential e^{+iA} of a Hermitian A, via its spectrum.

    The positive sign in the exponent is the package-wide convention.
    Spectral construction keeps the output unitary by construction.
    """
    a = check_hermitian(a, name="exponent")
    w, v = np.linalg.eigh(a)
    return (v * np.exp(1j * w)) @ v.conj().T


def principal_log_unitary(u) -> np.ndarray:
    """Hermitian A with e^{iA} = U and all eigenvalues in (-pi, pi].

    Single-point principal branch (all winding integers zero); an
    eigenvalue argument of exactly pi maps to +pi. Use the action tracker
    for branch continuity along a trajectory.
    """
    es = spectral_decompose(u, "unitary")
    phi = np.angle(es.eigenvalues)
    a = (es.eigenvectors * phi) @ es.eigenvectors.conj().T
    return (a + a.conj().T) / 2.0


def reunitarize(m) -> np.ndarray:
    """Closest unitary in Frobenius norm (the polar factor).

    Rejects inputs with ||M†M - I||_F >= 0.1: drift that large means an
    integrator step failed, and polishing it would hide the failure.
    """
    m = as_matrix(m)
    drift = np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0]))
    if drift >= 0.1:
        raise NumericalError(
            f"matrix is too far from unitary to repair (||M†M - I||_F = {drift:.3e})"
        )
    u, _, vh = np.linalg.svd(m)
    return u @ vh
