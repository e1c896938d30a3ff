"""Generalized (POVM) measurements on a single d-level system.

A :class:`Measurement` is an ordered set of Kraus operators ``M_1..M_n`` acting
on dimension ``d``, validated against the completeness relation
``sum_s M_s^dag M_s = 1``. Reading outcome ``s`` collapses a pure state to
``M_s |psi> / sqrt(<psi|E_s|psi>)`` where ``E_s = M_s^dag M_s`` is the effect
(POVM element) of the outcome.

Outcome indices are 1-based throughout. Devices and all derived data are
immutable after validation; sampling takes a caller-owned RNG stream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    IncompleteDevice,
    InternalConsistencyError,
    OutcomeOutOfRange,
    ShapeMismatch,
    ZeroProbabilityOutcome,
)
from .matkernel import (
    EigenSystem,
    as_cmatrix,
    frobenius_distance,
    frozen,
    hermitian_eig,
    polar_decompose,
)

DEFAULT_COMPLETENESS_TOL = 1e-10
# Below this, an outcome probability counts as "impossible for this state"
# and conditioning on it is refused rather than amplified from noise.
PROBABILITY_FLOOR = 1e-14
# Round-off can push <psi|E|psi> slightly negative; anything worse is corrupt input.
NEGATIVITY_TOL = 1e-12
# Effect eigenvalues this far below the top one (relatively) are rounding noise
# and are zeroed before square roots enter any reconstruction.
EIGENVALUE_FLOOR_FACTOR = 1e-14


def as_state(vec, dim: int | None = None, norm_tol: float = 1e-10) -> np.ndarray:
    """Coerce ``vec`` to a normalized complex amplitude vector."""
    v = np.asarray(vec, dtype=np.complex128)
    if v.ndim != 1:
        raise DimensionMismatch(f"state must be a 1-D amplitude vector, got ndim={v.ndim}")
    if dim is not None and v.shape[0] != dim:
        raise DimensionMismatch(f"state has dimension {v.shape[0]}, expected {dim}")
    if not (np.all(np.isfinite(v.real)) and np.all(np.isfinite(v.imag))):
        raise ValueError("state amplitudes must be finite")
    norm = float(np.sqrt(np.sum(v.real**2 + v.imag**2)))
    if abs(norm - 1.0) > norm_tol:
        raise ValueError(f"state norm is {norm:.12g}, not 1 within {norm_tol:.1e}")
    return v.copy()


def floored_psd_eigenvalues(values: np.ndarray) -> np.ndarray:
    """Clip a positive-semidefinite spectrum: negatives and relative noise -> 0."""
    a = np.clip(np.asarray(values, dtype=np.float64), 0.0, None)
    if a.size:
        a[a < EIGENVALUE_FLOOR_FACTOR * a[0]] = 0.0
    return a


@dataclass(frozen=True)
class Effect:
    """A POVM element ``E_s = M_s^dag M_s`` with its spectral decomposition."""

    matrix: np.ndarray
    spectrum: EigenSystem

    @property
    def a_max(self) -> float:
        """Largest eigenvalue, clipped to be nonnegative."""
        return max(float(self.spectrum.eigenvalues[0]), 0.0)

    def sqrt_matrix(self) -> np.ndarray:
        """Principal square root, with rounding-noise eigenvalues floored to zero."""
        roots = np.sqrt(floored_psd_eigenvalues(self.spectrum.eigenvalues))
        v = self.spectrum.eigenvectors
        out = (v * roots) @ v.conj().T
        return 0.5 * (out + out.conj().T)


@dataclass(frozen=True)
class BiOrthogonalFactors:
    """Bi-orthogonal data of one Kraus operator ``M_s = U_s sqrt(E_s)``.

    ``eigenvalues[i]`` pairs the right eigenvector ``right_basis[:, i]`` (an
    eigenvector of ``E_s``) with the left eigenvector
    ``left_basis[:, i] = unitary @ right_basis[:, i]`` so that
    ``M_s = sum_i sqrt(eigenvalues[i]) |left_i><right_i|``.
    """

    eigenvalues: np.ndarray
    right_basis: np.ndarray
    left_basis: np.ndarray
    unitary: np.ndarray


class Measurement:
    """A validated generalized measurement (ordered Kraus set) on dimension d.

    Immutable after construction: operators and cached effects are exposed as
    read-only arrays, so instances are safe to share across threads.
    """

    def __init__(self, kraus_ops, labels=None, tolerance: float | None = None):
        ops = [as_cmatrix(k) for k in kraus_ops]
        if not ops:
            raise ShapeMismatch("a measurement needs at least one Kraus operator")
        d = ops[0].shape[0]
        for k in ops:
            if k.shape != (d, d):
                raise ShapeMismatch(f"all Kraus operators must be {d}x{d}, got {k.shape}")
        if tolerance is None:
            tolerance = DEFAULT_COMPLETENESS_TOL

        effects = []
        total = np.zeros((d, d), dtype=np.complex128)
        for k in ops:
            e = k.conj().T @ k
            e = 0.5 * (e + e.conj().T)
            effects.append(e)
            total += e
        defect = frobenius_distance(total, np.eye(d))
        if defect > tolerance:
            raise IncompleteDevice(defect)

        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != len(ops):
                raise ShapeMismatch(f"{len(labels)} labels for {len(ops)} outcomes")

        self._dim = d
        self._kraus = tuple(frozen(k) for k in ops)
        self._effects = tuple(frozen(e) for e in effects)
        self._labels = labels
        self._tolerance = float(tolerance)
        self._defect = defect
        self._spectra: list[EigenSystem | None] = [None] * len(ops)
        self._factors: list[BiOrthogonalFactors | None] = [None] * len(ops)

    def __repr__(self):
        return f"Measurement(dim={self._dim}, n_outcomes={self.n_outcomes})"

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def n_outcomes(self) -> int:
        return len(self._kraus)

    @property
    def kraus(self) -> tuple[np.ndarray, ...]:
        return self._kraus

    @property
    def labels(self):
        return self._labels

    @property
    def tolerance(self) -> float:
        return self._tolerance

    @property
    def completeness_defect(self) -> float:
        return self._defect

    def _index(self, s: int) -> int:
        if not 1 <= s <= self.n_outcomes:
            raise OutcomeOutOfRange(f"outcome {s} not in 1..{self.n_outcomes}")
        return s - 1

    def kraus_op(self, s: int) -> np.ndarray:
        """Kraus operator of outcome ``s`` (1-based)."""
        return self._kraus[self._index(s)]

    def effect_matrix(self, s: int) -> np.ndarray:
        """Effect matrix ``E_s`` without spectral data (cached at validation)."""
        return self._effects[self._index(s)]

    def effect(self, s: int) -> Effect:
        """Effect of outcome ``s`` with cached spectral decomposition."""
        i = self._index(s)
        if self._spectra[i] is None:
            spectrum = hermitian_eig(self._effects[i])
            lo = float(spectrum.eigenvalues[-1])
            hi = float(spectrum.eigenvalues[0])
            if lo < -NEGATIVITY_TOL or hi > 1.0 + 1e-10:
                raise InternalConsistencyError(
                    f"effect {s} spectrum [{lo:.3e}, {hi:.3e}] outside [0, 1]"
                )
            self._spectra[i] = spectrum
        return Effect(self._effects[i], self._spectra[i])

    def outcome_distribution(self, psi) -> np.ndarray:
        """Outcome probabilities ``p_s = <psi|E_s|psi>`` for a normalized state."""
        psi = as_state(psi, self._dim)
        p = np.empty(self.n_outcomes)
        for i, e in enumerate(self._effects):
            p[i] = np.vdot(psi, e @ psi).real
        if np.any(p < -NEGATIVITY_TOL):
            raise InternalConsistencyError(f"probability {p.min():.3e} below -{NEGATIVITY_TOL:.0e}")
        p = np.clip(p, 0.0, None)
        if abs(p.sum() - 1.0) > 1e-10:
            raise InternalConsistencyError(f"probabilities sum to {p.sum():.12f}, not 1")
        return p

    def collapse(self, psi, s: int, floor: float = PROBABILITY_FLOOR) -> np.ndarray:
        """Conditional post-measurement state ``M_s|psi> / sqrt(p_s)``."""
        i = self._index(s)
        psi = as_state(psi, self._dim)
        out = self._kraus[i] @ psi
        p = float(np.sum(out.real**2 + out.imag**2))
        if p <= floor:
            raise ZeroProbabilityOutcome(f"outcome {s} has probability {p:.3e} <= {floor:.0e}")
        return out / np.sqrt(p)

    def sample_outcome(self, psi, rng, floor: float = PROBABILITY_FLOOR):
        """Draw one outcome by inverse CDF on a single uniform variate.

        ``rng`` is a ``numpy.random.Generator`` (or anything with a
        ``.generator()`` method producing one, e.g. :class:`qmeter.haar.RngStream`);
        the caller owns its state, so fixed streams reproduce bit-identically.
        Returns ``(s, collapsed_state)``.
        """
        gen = rng.generator() if hasattr(rng, "generator") else rng
        p = self.outcome_distribution(psi)
        u = gen.random()
        i = min(int(np.searchsorted(np.cumsum(p), u, side="right")), self.n_outcomes - 1)
        if p[i] <= floor:
            viable = np.flatnonzero(p > floor)
            following = viable[viable >= i]
            i = int(following[0]) if following.size else int(viable[-1])
        s = i + 1
        return s, self.collapse(psi, s, floor=floor)

    def bi_orthogonal_factors(self, s: int) -> BiOrthogonalFactors:
        """Polar-split outcome ``s``: right/left eigenbases joined by ``U_s``."""
        i = self._index(s)
        if self._factors[i] is None:
            unitary, _ = polar_decompose(self._kraus[i])
            spectrum = self.effect(s).spectrum
            right = spectrum.eigenvectors
            left = unitary @ right
            self._factors[i] = BiOrthogonalFactors(
                eigenvalues=frozen(floored_psd_eigenvalues(spectrum.eigenvalues)),
                right_basis=frozen(right),
                left_basis=frozen(left),
                unitary=frozen(unitary),
            )
        return self._factors[i]


def validate(kraus_ops, dim: int | None = None, tolerance: float | None = None) -> Measurement:
    """Validate a Kraus set and return the immutable device.

    Raises :class:`IncompleteDevice` (carrying the Frobenius defect) when the
    effects do not sum to the identity within ``tolerance``.
    """
    m = Measurement(kraus_ops, tolerance=tolerance)
    if dim is not None and m.dim != dim:
        raise ShapeMismatch(f"device dimension {m.dim} does not match declared {dim}")
    return m
