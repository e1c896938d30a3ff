"""Constructors for the measurement families used in tests and demos.

The unsharp qubit family is the workhorse: it interpolates from the identity
device (lambda = 0, no information, no disturbance) to a projective
measurement (lambda = 1) and saturates the information-disturbance bound at
every intermediate strength, with closed forms ``g_post = (1 + lambda)/2`` and
``F = (2 + sqrt(1 - lambda^2))/3``.
"""

from __future__ import annotations

import numpy as np

from .errors import NotUnitary, OutOfDomain, ShapeMismatch
from .estimator import make_rank_one_device
from .haar import RngStream, haar_isometry
from .matkernel import as_cmatrix, frobenius_distance
from .measurement import Measurement

# Bloch vectors of a regular tetrahedron (pairwise overlap -1/3, summing to 0).
TETRAHEDRON_DIRECTIONS = np.array(
    [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=np.float64
) / np.sqrt(3.0)


def projective(d: int) -> Measurement:
    """The d-outcome projective measurement onto the computational basis."""
    if d < 2:
        raise OutOfDomain(f"projective devices need d >= 2, got {d}")
    eye = np.eye(d, dtype=np.complex128)
    ops = [np.outer(eye[:, s], eye[:, s]) for s in range(d)]
    return Measurement(ops, labels=[str(s + 1) for s in range(d)])


def identity_device(d: int) -> Measurement:
    """The trivial single-outcome device that leaves every state untouched."""
    if d < 1:
        raise OutOfDomain(f"dimension must be positive, got {d}")
    return Measurement([np.eye(d, dtype=np.complex128)], labels=["1"])


def unsharp_qubit(lam: float) -> Measurement:
    """Two-outcome unsharp qubit measurement of strength ``lam`` in [0, 1]."""
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise OutOfDomain(f"unsharp strength must lie in [0, 1], got {lam}")
    hi = np.sqrt((1.0 + lam) / 2.0)
    lo = np.sqrt((1.0 - lam) / 2.0)
    plus = np.diag([hi, lo]).astype(np.complex128)
    minus = np.diag([lo, hi]).astype(np.complex128)
    return Measurement([plus, minus], labels=["+", "-"])


def random_device(d: int, n: int, seed: int) -> Measurement:
    """A Haar-random n-outcome device on dimension d, deterministic per seed.

    The Kraus operators are the n row-blocks of a random isometry from
    dimension d into n*d, so completeness holds structurally rather than by
    post-hoc correction.
    """
    if d < 2 or n < 1:
        raise OutOfDomain(f"need d >= 2 and n >= 1, got d={d}, n={n}")
    iso = haar_isometry(n * d, d, RngStream(seed))
    ops = [iso[s * d : (s + 1) * d, :] for s in range(n)]
    return Measurement(ops)


def with_kicks(m: Measurement, unitaries) -> Measurement:
    """Left-multiply each Kraus operator by a unitary kick ``V_s``.

    Effects (hence outcome statistics and both estimation fidelities) are
    unchanged; the operation fidelity generally is not.
    """
    kicks = [as_cmatrix(v, rows=m.dim, cols=m.dim) for v in unitaries]
    if len(kicks) != m.n_outcomes:
        raise ShapeMismatch(f"{len(kicks)} kicks for {m.n_outcomes} outcomes")
    eye = np.eye(m.dim)
    for v in kicks:
        defect = frobenius_distance(v.conj().T @ v, eye)
        if defect > 1e-10:
            raise NotUnitary(f"kick unitarity defect {defect:.3e} exceeds 1e-10")
    ops = [v @ k for v, k in zip(kicks, m.kraus)]
    return Measurement(ops, labels=m.labels, tolerance=m.tolerance)


def bloch_state(direction) -> np.ndarray:
    """Qubit state with the given Bloch vector (normalized internally)."""
    nx, ny, nz = np.asarray(direction, dtype=np.float64) / np.linalg.norm(direction)
    theta = np.arccos(np.clip(nz, -1.0, 1.0))
    phi = np.arctan2(ny, nx)
    return np.array([np.cos(theta / 2.0), np.exp(1j * phi) * np.sin(theta / 2.0)])


def tetrahedron_rank_one(post_states=None) -> Measurement:
    """Four-outcome rank-one qubit device with tetrahedral pre-states.

    Weights 1/2 on the four tetrahedral directions resolve the identity, so the
    device is informationally complete with more outcomes than dimensions. The
    post-states default to the pre-states and may be replaced freely without
    affecting the effects.
    """
    pres = [bloch_state(v) for v in TETRAHEDRON_DIRECTIONS]
    posts = pres if post_states is None else list(post_states)
    return make_rank_one_device(pres, posts, weights=[0.5] * 4)
