"""Time-dependent N-level Hamiltonians driven through an avoided crossing.

Two model kinds share the drive term -2*alpha*t*Jz:

* Hermitian:     H(t) = -2 alpha t Jz + 2 v Jx
* PT-symmetric:  H(t) = -2 alpha t Jz + 2i gamma Jx

The PT model has N-th order exceptional points at t = +-gamma/alpha and
purely imaginary eigenvalues between them.  Instantaneous eigensystems are
built from lifted 2x2 similarity transformations rather than a generic
eigensolver, so they stay exact up to rounding and deterministic in phase.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import EplzError, NearEPError, NoEPError
from .repr_lift import lift
from .su2_ops import SpinSpace, build_generators, jy_eigenbasis, jz_eigenvalues

# Fraction of gamma/alpha within which eigensystem construction is refused:
# lambda -> 0 there and the exponent of the diagonalizing map diverges.
EP_GUARD_FRACTION = 1e-6


class ModelKind(enum.Enum):
    HERMITIAN = "hermitian"
    PT_SYMMETRIC = "pt"


@dataclass(frozen=True)
class ModelParams:
    """Drive rate alpha, coupling (v or gamma) and the spin space (hbar = 1)."""

    kind: ModelKind
    alpha: float
    coupling: float
    space: SpinSpace

    def __post_init__(self):
        if isinstance(self.kind, str):
            object.__setattr__(self, "kind", ModelKind(self.kind))
        if not self.alpha > 0:
            raise EplzError(f"drive rate alpha must be positive, got {self.alpha}")
        # gamma = 0 would merge the exceptional points into a diabolical point,
        # so the PT model requires it strictly positive; v = 0 is the valid
        # uncoupled limit of the Hermitian model.
        if self.kind is ModelKind.PT_SYMMETRIC:
            if not self.coupling > 0:
                raise EplzError(f"gamma must be positive, got {self.coupling}")
        elif self.coupling < 0:
            raise EplzError(f"v must be nonnegative, got {self.coupling}")

    @property
    def is_pt(self) -> bool:
        return self.kind is ModelKind.PT_SYMMETRIC


@dataclass(frozen=True)
class EigenSystem:
    """Instantaneous eigendata at time t.

    Columns j of ``right_vectors``/``left_vectors`` hold |phi_j> and |chi_j>,
    normalized to <chi_j|phi_k> = delta_jk with equal Euclidean norms per pair.
    """

    t: float
    lam: complex
    energies: np.ndarray
    right_vectors: np.ndarray
    left_vectors: np.ndarray
    at_ep: bool = False


@dataclass(frozen=True)
class EPData:
    """Exceptional-point times and the single eigenvector at each of them."""

    t_minus: float
    t_plus: float
    ep_vector_minus: np.ndarray
    ep_vector_plus: np.ndarray


@dataclass(frozen=True)
class SpectrumTable:
    """Eigenvalues on a time grid; rows flagged when inside the EP guard."""

    t: np.ndarray
    energies: np.ndarray  # shape (len(t), N), ordered by the j label
    at_ep: np.ndarray


def parity_matrix(space: SpinSpace) -> np.ndarray:
    """P = diag((-1)^j); the PT model satisfies P H* P = H."""
    return np.diag((-1.0) ** np.arange(space.n_levels))


def hamiltonian_at(params: ModelParams, t: float) -> np.ndarray:
    """H(t) = -2 alpha t Jz + (2i gamma | 2 v) Jx, trace-free by construction."""
    ops = build_generators(params.space)
    coupling = 2j * params.coupling if params.is_pt else 2.0 * params.coupling
    return -2.0 * params.alpha * t * ops.jz + coupling * ops.jx


def ep_times(params: ModelParams) -> tuple[float, float]:
    if not params.is_pt:
        raise NoEPError("the Hermitian model has no exceptional points")
    t_ep = params.coupling / params.alpha
    return -t_ep, t_ep


def ep_guard(params: ModelParams) -> float:
    """Half-width of the refused window around each exceptional point."""
    if not params.is_pt:
        return 0.0
    return EP_GUARD_FRACTION * params.coupling / params.alpha


def _check_away_from_ep(params: ModelParams, t: float):
    if not params.is_pt:
        return
    guard = ep_guard(params)
    for t_ep in ep_times(params):
        if abs(t - t_ep) < guard:
            raise NearEPError(t, t_ep, guard)


def lambda_at(params: ModelParams, t: float) -> complex:
    """Scaled eigenvalue unit lambda(t); energies are E_j = 2 (J - j) lambda.

    Hermitian: the positive root of (alpha t)^2 + v^2.  PT: the nonnegative
    real root of (alpha t)^2 - gamma^2 outside the exceptional points and
    +i sqrt(gamma^2 - (alpha t)^2) between them, so that j = 0 labels the
    eigenstate with the largest imaginary energy part.  Exactly 0 at the EPs.
    """
    at = params.alpha * t
    if not params.is_pt:
        return complex(math.hypot(at, params.coupling))
    disc = (at - params.coupling) * (at + params.coupling)
    if disc >= 0:
        return complex(math.sqrt(disc))
    return 1j * math.sqrt(-disc)


def x_parameter(params: ModelParams, t: float) -> complex:
    """x = (gamma - alpha t) / lambda for the PT model.

    Outside the exceptional points the direct ratio is a 0/0 at t_EP^+, so it
    is evaluated in the sign-tracked form +-sqrt((alpha t - gamma)/(alpha t + gamma)).
    """
    if not params.is_pt:
        raise NoEPError("x is only defined for the PT-symmetric model")
    _check_away_from_ep(params, t)
    gamma = params.coupling
    at = params.alpha * t
    if abs(at) > gamma:
        mag = math.sqrt((at - gamma) / (at + gamma))
        return complex(math.copysign(mag, gamma - at))
    return (gamma - at) / lambda_at(params, t)


def _pt_phi2(params: ModelParams, t: float, lam: complex) -> np.ndarray:
    """2x2 matrix of exp(i pi/2 (alpha t Jx + i gamma Jz)/lambda) in the Jz basis."""
    g = params.coupling / lam
    a = params.alpha * t / lam
    return np.array([[1.0 - g, 1j * a], [1j * a, 1.0 + g]], dtype=complex) / math.sqrt(2.0)


def _pt_x2(params: ModelParams, t: float, lam: complex) -> np.ndarray:
    """2x2 matrix of exp(i pi/2 (alpha t Jx - i gamma Jz)/lambda) in the Jz basis."""
    g = params.coupling / lam
    a = params.alpha * t / lam
    return np.array([[1.0 + g, 1j * a], [1j * a, 1.0 - g]], dtype=complex) / math.sqrt(2.0)


def pt_similarity_pair(params: ModelParams, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Lifted N x N transforms (Phi, X) diagonalizing H and H^dagger.

    H = 2 lambda Phi Jy Phi^-1, and for real lambda X^-1 = Phi^dagger.
    """
    if not params.is_pt:
        raise NoEPError("the similarity pair is specific to the PT model")
    _check_away_from_ep(params, t)
    lam = lambda_at(params, t)
    return lift(_pt_phi2(params, t, lam), params.space), lift(
        _pt_x2(params, t, lam), params.space
    )


def eigensystem_at(params: ModelParams, t: float) -> EigenSystem:
    """Instantaneous right/left eigenvectors and energies at time t.

    PT kind: |phi_j> ~ Phi |j_y> and |chi_j> ~ (Phi^dagger)^-1 |j_y>; the
    latter equals X |j_y> wherever lambda is real, and unlike the X form it
    keeps the pairing <chi_j|phi_k> = delta_jk between the exceptional
    points as well.  Hermitian kind: the real rotation exp(i phi Jy), an
    independent code path (no lift involved).
    """
    N = params.space.n_levels
    energies = 2.0 * jz_eigenvalues(params.space).astype(complex)
    if not params.is_pt:
        lam = lambda_at(params, t)
        phi = math.atan2(-params.coupling, -params.alpha * t)
        ops = build_generators(params.space)
        rot = scipy.linalg.expm(1j * phi * ops.jy)
        rot = np.ascontiguousarray(rot.real).astype(complex)  # real rotation
        return EigenSystem(
            t=t,
            lam=lam,
            energies=energies * lam,
            right_vectors=rot,
            left_vectors=rot,
        )

    _check_away_from_ep(params, t)
    lam = lambda_at(params, t)
    phi2 = _pt_phi2(params, t, lam)
    # (Phi^dagger)^-1 of a unimodular 2x2: conjugate entries, adjugate layout
    g = params.coupling / lam
    a = params.alpha * t / lam
    left2 = np.array(
        [
            [np.conj(1.0 + g), 1j * np.conj(a)],
            [1j * np.conj(a), np.conj(1.0 - g)],
        ],
        dtype=complex,
    ) / math.sqrt(2.0)
    y = jy_eigenbasis(params.space)
    right = lift(phi2, params.space) @ y
    left = lift(left2, params.space) @ y
    # enforce <chi_j|phi_j> = 1 exactly, then equalize Euclidean norms
    for j in range(N):
        left[:, j] /= np.conj(np.vdot(left[:, j], right[:, j]))
        f = math.sqrt(np.linalg.norm(left[:, j]) / np.linalg.norm(right[:, j]))
        right[:, j] *= f
        left[:, j] /= f
    return EigenSystem(
        t=t,
        lam=lam,
        energies=energies * lam,
        right_vectors=right,
        left_vectors=left,
    )


def ep_data(params: ModelParams) -> EPData:
    """Exceptional-point times +-gamma/alpha and the coalesced eigenvectors.

    At t_EP^+ the single eigenvector is the lowest Jy eigenstate |n_y>; at
    t_EP^- it is computed as the null vector of H (no closed form asserted).
    """
    t_minus, t_plus = ep_times(params)
    v_plus = jy_eigenbasis(params.space)[:, params.space.n].copy()
    h_minus = hamiltonian_at(params, t_minus)
    _, _, vh = np.linalg.svd(h_minus)
    v_minus = vh[-1].conj()
    lead = v_minus[np.flatnonzero(np.abs(v_minus) > 1e-12)[0]]
    v_minus = v_minus * (abs(lead) / lead)
    return EPData(
        t_minus=t_minus,
        t_plus=t_plus,
        ep_vector_minus=v_minus,
        ep_vector_plus=v_plus,
    )


def overlap_matrix(params: ModelParams, t: float) -> np.ndarray:
    """Pairwise |<phi_j|phi_k>| with unit-normalized eigenvectors.

    Identity for the Hermitian model; for the PT model the off-diagonals
    peak towards 1 near the exceptional points and decay to 0 as |t| grows.
    """
    es = eigensystem_at(params, t)
    vecs = es.right_vectors / np.linalg.norm(es.right_vectors, axis=0)
    g = np.abs(vecs.conj().T @ vecs)
    g = (g + g.T) / 2
    np.fill_diagonal(g, 1.0)
    return np.clip(g, 0.0, 1.0)


def spectrum_sweep(params: ModelParams, t_grid) -> SpectrumTable:
    """E_j(t) = 2 (J - j) lambda(t) over a time grid, EP rows flagged."""
    t_grid = np.asarray(t_grid, dtype=float)
    two_m = 2.0 * jz_eigenvalues(params.space)
    energies = np.empty((t_grid.size, params.space.n_levels), dtype=complex)
    at_ep = np.zeros(t_grid.size, dtype=bool)
    guard = ep_guard(params)
    eps = ep_times(params) if params.is_pt else ()
    for i, t in enumerate(t_grid):
        energies[i] = two_m * lambda_at(params, t)
        at_ep[i] = any(abs(t - t_ep) < guard for t_ep in eps)
    return SpectrumTable(t=t_grid, energies=energies, at_ep=at_ep)
