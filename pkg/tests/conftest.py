"""Shared random-object builders for the tests.

Every helper takes an explicit numpy Generator; the tests own their seeds,
nothing here holds randomness of its own.
"""

import numpy as np
from scipy.linalg import expm

from qeffort import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    constant_hamiltonian,
    interpolated_hamiltonian,
    piecewise_hamiltonian,
)


def haar_unitary(rng, dim):
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_hermitian(rng, dim, scale=1.0):
    """Random Hermitian with spectral norm exactly `scale`."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = (z + z.conj().T) / 2.0
    return h * (scale / np.linalg.norm(h, 2))


def random_state(rng, dim):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_trajectory(rng, dim, kind, t_end, scale=2.0):
    """A random H(t) of the requested kind defined on [0, t_end]."""
    if kind == "constant":
        return constant_hamiltonian(random_hermitian(rng, dim, scale))
    if kind == "piecewise":
        durs = rng.uniform(0.5, 1.5, int(rng.integers(2, 5)))
        durs *= t_end / durs.sum()
        return piecewise_hamiltonian(
            (d, random_hermitian(rng, dim, scale)) for d in durs
        )
    knots = np.linspace(0.0, t_end, int(rng.integers(8, 15)))
    return interpolated_hamiltonian(
        (t, random_hermitian(rng, dim, scale)) for t in knots
    )


def driven_qubit_hamiltonian(a, b, omega, t):
    """H(t) = b sz + a (cos(wt) sx - sin(wt) sy): a rotating transverse field."""
    return b * SIGMA_Z + a * (
        np.cos(omega * t) * SIGMA_X - np.sin(omega * t) * SIGMA_Y
    )


def driven_qubit_exact(a, b, omega, t):
    """Closed-form propagator for the rotating field under dU/dt = +iHU.

    Rotating-frame factorization: U(t) = e^{i(w/2) sz t} e^{iGt} with
    G = (b - w/2) sz + a sx. test_evolution re-derives this by finite
    differences before anything else leans on it.
    """
    g = (b - omega / 2.0) * SIGMA_Z + a * SIGMA_X
    return expm(0.5j * omega * t * np.asarray(SIGMA_Z)) @ expm(1j * t * g)


def driven_qubit_trajectory(a, b, omega, t_end, n_knots):
    return interpolated_hamiltonian(
        (t, driven_qubit_hamiltonian(a, b, omega, t))
        for t in np.linspace(0.0, t_end, n_knots)
    )
