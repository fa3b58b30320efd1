"""Shared random generators for the test suite.

Channels are drawn through random Stinespring isometries, so they are
completely positive and trace preserving by construction, independent of the
library's own CPTP tests.
"""

import numpy as np

from ompkit import Ensemble, QubitChannel, make_ensemble

SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def random_cptp_channel(rng: np.random.Generator, env_dim: int = 2) -> QubitChannel:
    """Random channel from a Haar-ish Stinespring isometry."""
    g = rng.normal(size=(2 * env_dim, 2)) + 1j * rng.normal(size=(2 * env_dim, 2))
    v, _ = np.linalg.qr(g)
    w = v.reshape(2, env_dim, 2)

    def bloch_out(bloch_in):
        rho = 0.5 * (np.eye(2, dtype=complex) + sum(bloch_in[k] * SIGMA[k] for k in range(3)))
        out = np.einsum("aei,ij,bej->ab", w, rho, w.conj())
        return np.array([np.trace(out @ s).real for s in SIGMA])

    shift = bloch_out(np.zeros(3))
    cols = [bloch_out(e) - shift for e in np.eye(3)]
    return QubitChannel(np.column_stack(cols), shift)


def random_ensemble(
    rng: np.random.Generator,
    n: int,
    equiprobable: bool = False,
    min_norm: float = 0.2,
) -> Ensemble:
    """Random ensemble with Bloch norms in [min_norm, 1]."""
    priors = np.full(n, 1.0 / n) if equiprobable else rng.dirichlet(np.ones(n))
    vecs = rng.normal(size=(n, 3))
    vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    vecs *= rng.uniform(min_norm, 1.0, size=(n, 1))
    return make_ensemble(list(zip(priors, vecs)))
