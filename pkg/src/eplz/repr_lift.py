"""Lift 2x2 SL(2) group elements to their N x N irreducible representation.

The N-dimensional matrix elements are closed-form binomial sums in the four
entries of the 2x2 matrix.  The lift is a group homomorphism and maps SU(2)
coherent states equivariantly, which is what ties the N-level models to
their two-level counterparts.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import InvalidDimensionError, NotUnimodularError
from .su2_ops import DIRECT_BINOMIAL_MAX_N, SpinSpace

SL2_DET_TOL = 1e-9


def _ipow(z: complex, p: int) -> complex:
    # 0**0 := 1 so vanishing matrix elements merely delete summands
    if p == 0:
        return 1.0 + 0.0j
    return z**p


def _entry_direct(d: np.ndarray, n: int, j: int, k: int) -> complex:
    lmin = max(k - (n - j), 0)
    lmax = min(k, j)
    weight0 = math.sqrt(math.comb(n, j)) / math.sqrt(math.comb(n, k))
    acc = 0.0 + 0.0j
    for l in range(lmin, lmax + 1):
        coeff = weight0 * math.comb(n - j, k - l) * math.comb(j, l)
        acc += (
            coeff
            * _ipow(d[0, 0], n - j - k + l)
            * _ipow(d[0, 1], k - l)
            * _ipow(d[1, 0], j - l)
            * _ipow(d[1, 1], l)
        )
    return acc


def _entry_logdomain(d: np.ndarray, n: int, j: int, k: int) -> complex:
    """Same sum evaluated through log-magnitude/phase pairs.

    The factorial ratios overflow double precision well before the summands
    themselves become large, so each term is assembled in the log domain and
    the sum is rescaled by the largest magnitude.
    """
    lmin = max(k - (n - j), 0)
    lmax = min(k, j)
    half_logw = 0.5 * (
        math.lgamma(k + 1)
        + math.lgamma(n - k + 1)
        + math.lgamma(n - j + 1)
        + math.lgamma(j + 1)
    )
    logs = []
    phases = []
    for l in range(lmin, lmax + 1):
        logmag = half_logw - (
            math.lgamma(n - j - k + l + 1)
            + math.lgamma(k - l + 1)
            + math.lgamma(j - l + 1)
            + math.lgamma(l + 1)
        )
        phase = 0.0
        dead = False
        for z, p in (
            (d[0, 0], n - j - k + l),
            (d[0, 1], k - l),
            (d[1, 0], j - l),
            (d[1, 1], l),
        ):
            if p == 0:
                continue
            if z == 0:
                dead = True
                break
            logmag += p * math.log(abs(z))
            phase += p * cmath.phase(z)
        if not dead:
            logs.append(logmag)
            phases.append(phase)
    if not logs:
        return 0.0 + 0.0j
    logs = np.asarray(logs)
    phases = np.asarray(phases)
    lead = logs.max()
    return cmath.exp(lead) * np.sum(np.exp(logs - lead + 1j * phases))


def _check_input(d: np.ndarray, space: SpinSpace) -> np.ndarray:
    d = np.asarray(d, dtype=complex)
    if d.shape != (2, 2):
        raise InvalidDimensionError(f"expected a 2x2 matrix, got shape {d.shape}")
    det = d[0, 0] * d[1, 1] - d[0, 1] * d[1, 0]
    if abs(det - 1.0) > SL2_DET_TOL:
        # Rescaling instead would change the lift by det^(n/2) and silently
        # corrupt downstream probability ratios.
        raise NotUnimodularError(f"determinant {det} is not 1 within {SL2_DET_TOL}")
    return d


def lift_entry(d: np.ndarray, space: SpinSpace, j: int, k: int) -> complex:
    """Single matrix element of the N-dimensional representation of ``d``."""
    d = _check_input(d, space)
    n = space.n
    if not (0 <= j <= n and 0 <= k <= n):
        raise IndexError(f"indices ({j}, {k}) out of range for n={n}")
    if n <= DIRECT_BINOMIAL_MAX_N:
        return _entry_direct(d, n, j, k)
    return _entry_logdomain(d, n, j, k)


def lift(d: np.ndarray, space: SpinSpace) -> np.ndarray:
    """N x N irreducible representation of the SL(2) element ``d``.

    For N = 2 this is ``d`` itself; in general the entries are the binomial
    sums over products of powers of the four entries of ``d``.
    """
    d = _check_input(d, space)
    N = space.n_levels
    if N == 2:
        return d.copy()
    n = space.n
    entry = _entry_direct if n <= DIRECT_BINOMIAL_MAX_N else _entry_logdomain
    out = np.empty((N, N), dtype=complex)
    for j in range(N):
        for k in range(N):
            out[j, k] = entry(d, n, j, k)
    return out
