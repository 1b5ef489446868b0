"""Closed-form transition matrices and probabilities for both model kinds.

The two-level survival probability exp(-pi v^2 / alpha) generalizes to N
levels through binomial sums in A and B, the squared moduli of the 2x2
time-evolution entries.  For the PT model A and B grow like exp(pi gamma^2 /
alpha), so everything is evaluated in the overflow-free ratio
r = B/A = 1 - exp(-pi gamma^2 / alpha) in [0, 1); only ratios of the raw
matrix elements are physical there anyway.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DegenerateNormalizationError, EplzError
from .model import ModelParams, ep_times, x_parameter
from .su2_ops import SpinSpace

RAW = "raw"
NORMALIZED = "normalized"


@dataclass(frozen=True)
class TransitionMatrix:
    """N x N nonnegative matrix of transition weights.

    ``entries[j, k]`` refers to initial state k and final state j.  Raw
    matrices are symmetric and, for the PT model, defined up to the overall
    scale exp(log_scale); normalized matrices have unit column sums.
    """

    entries: np.ndarray
    flavor: str
    log_scale: float = 0.0

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def lz2_survival(v: float, alpha: float) -> float:
    """Two-level survival probability exp(-pi v^2 / alpha)."""
    if not alpha > 0:
        raise EplzError(f"drive rate alpha must be positive, got {alpha}")
    return math.exp(-math.pi * v * v / alpha)


def _pair_sum(n: int, j: int, k: int, a_pow, b_pow, signed: bool) -> float:
    """sum over l, l' of (-1)^(l+l') c_{ll'} A^(n-j-k+l+l') B^(j+k-l-l').

    ``a_pow``/``b_pow`` are precomputed power tables; both exponents stay in
    [0, n] over the admissible index range.
    """
    lo = max(0, j + k - n)
    hi = min(j, k)
    acc = 0.0
    for l in range(lo, hi + 1):
        cl = math.comb(k, l) * math.comb(n - k, j - l)
        for lp in range(lo, hi + 1):
            clp = math.comb(n - j, k - lp) * math.comb(j, lp)
            term = cl * clp * a_pow[n - j - k + l + lp] * b_pow[j + k - l - lp]
            if signed and (l + lp) % 2:
                acc -= term
            else:
                acc += term
    return acc


def _symmetric_sum_matrix(n: int, a_pow, b_pow, signed: bool) -> np.ndarray:
    m = np.zeros((n + 1, n + 1))
    for j in range(n + 1):
        for k in range(j, n + 1):
            val = _pair_sum(n, j, k, a_pow, b_pow, signed)
            m[j, k] = val
            m[k, j] = val  # mirrored, so symmetric exactly
    return m


def hermitian_M(space: SpinSpace, v: float, alpha: float) -> TransitionMatrix:
    """Transition probabilities of the Hermitian N-level model.

    Doubly stochastic; the first column is the binomial C(n,j) A^(n-j) B^j
    with A = exp(-pi v^2 / alpha) and B = 1 - A.
    """
    if not alpha > 0 or v < 0:
        raise EplzError(f"need alpha > 0 and v >= 0, got alpha={alpha}, v={v}")
    n = space.n
    A = lz2_survival(v, alpha)
    B = 1.0 - A
    a_pow = A ** np.arange(n + 1, dtype=float)
    b_pow = B ** np.arange(n + 1, dtype=float)
    m = _symmetric_sum_matrix(n, a_pow, b_pow, signed=True)
    # the alternating sum can round marginally below zero
    if m.min() < -1e-9:
        raise EplzError(f"transition weights went negative ({m.min()})")
    return TransitionMatrix(entries=np.clip(m, 0.0, None), flavor=RAW)


def pt_M(space: SpinSpace, gamma: float, alpha: float) -> TransitionMatrix:
    """Unnormalized PT-model transition weights, up to the scale A^n.

    Evaluated as a polynomial in r = B/A = 1 - exp(-pi gamma^2/alpha); the
    true matrix is exp(log_scale) times the returned entries, with
    log_scale = n pi gamma^2 / alpha, which overflows double precision long
    before r loses accuracy.
    """
    if not alpha > 0 or not gamma > 0:
        raise EplzError(f"need alpha > 0 and gamma > 0, got alpha={alpha}, gamma={gamma}")
    n = space.n
    r = -math.expm1(-math.pi * gamma * gamma / alpha)
    # A^(n-j-k+l+l') B^(j+k-l-l') = A^n r^(j+k-l-l'): reuse the pair sum with
    # the A-power table set to one
    a_pow = np.ones(n + 1)
    r_pow = r ** np.arange(n + 1, dtype=float)
    m = _symmetric_sum_matrix(n, a_pow, r_pow, signed=False)
    return TransitionMatrix(
        entries=m, flavor=RAW, log_scale=n * math.pi * gamma * gamma / alpha
    )


def normalize(m: TransitionMatrix) -> TransitionMatrix:
    """Column-normalize a raw matrix: P_jk = M_jk / sum_l M_lk.

    The raw matrix is symmetric, so column and row normalization coincide;
    symmetry is checked first to keep that choice immaterial.
    """
    entries = m.entries
    if not np.allclose(entries, entries.T, rtol=0.0, atol=1e-12 * max(entries.max(), 1.0)):
        raise EplzError("raw transition matrix is not symmetric")
    col_sums = entries.sum(axis=0)
    if np.any(col_sums <= 0.0):
        raise DegenerateNormalizationError("a transition-matrix column sums to zero")
    return TransitionMatrix(entries=entries / col_sums, flavor=NORMALIZED)


def pt_P_column0(space: SpinSpace, gamma: float, alpha: float) -> np.ndarray:
    """PT transition probabilities from the first asymptotic eigenstate.

    P_j0 = C(n,j) A^(n-j) B^j / (A+B)^n, evaluated stably as
    C(n,j) r^j / (1+r)^n.
    """
    if not alpha > 0 or not gamma > 0:
        raise EplzError(f"need alpha > 0 and gamma > 0, got alpha={alpha}, gamma={gamma}")
    n = space.n
    r = -math.expm1(-math.pi * gamma * gamma / alpha)
    out = np.array([math.comb(n, j) * r**j for j in range(n + 1)])
    return out / (1.0 + r) ** n


def adiabatic_P_exact(space: SpinSpace) -> list[Fraction]:
    """Adiabatic-limit populations C(n,k)/2^n as exact rationals."""
    n = space.n
    return [Fraction(math.comb(n, k), 2**n) for k in range(n + 1)]


def adiabatic_P(space: SpinSpace) -> np.ndarray:
    """Adiabatic-limit populations C(n,k)/2^n, independent of the initial state."""
    return np.array([float(p) for p in adiabatic_P_exact(space)])


@dataclass(frozen=True)
class AdiabaticProjection:
    """Squared projections |c_j|^2 of the EP eigenstate onto the left basis."""

    raw: np.ndarray
    normalized: np.ndarray
    x_abs: float


def adiabatic_projection(params: ModelParams, t: float) -> AdiabaticProjection:
    """|c_j|^2 = C(n,j) |x|^n / 2^n at a time t after the second EP.

    The raw values depend on the x-branch convention through |x|^n; the
    normalized vector is the physical statement and equals C(n,j)/2^n, the
    x factor cancelling exactly.
    """
    if not params.is_pt:
        raise EplzError("the adiabatic projection is specific to the PT model")
    if t <= ep_times(params)[1]:
        raise EplzError(
            f"need t beyond the second exceptional point t={ep_times(params)[1]}, got {t}"
        )
    n = params.space.n
    x_abs = abs(x_parameter(params, t))
    raw = np.array([math.comb(n, j) for j in range(n + 1)]) * (x_abs**n / 2.0**n)
    return AdiabaticProjection(raw=raw, normalized=raw / raw.sum(), x_abs=x_abs)


def analytic_transition_matrix(params: ModelParams) -> TransitionMatrix:
    """Normalized transition probabilities for either model kind."""
    if params.is_pt:
        return normalize(pt_M(params.space, params.coupling, params.alpha))
    return normalize(hermitian_M(params.space, params.coupling, params.alpha))
