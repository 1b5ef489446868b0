"""Angular-momentum generator matrices, their eigenbases, and SU(2) coherent states.

Conventions used throughout the package: the N levels are labelled
j = 0 .. n with n = N-1, and |j> is the eigenvector of Jz with eigenvalue
J - j, where J = n/2.  Hence j = 0 is the *highest* weight state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateSpinorError, InvalidDimensionError

# Directly evaluated binomials stay exact in double precision at these sizes;
# larger spaces switch to log-gamma accumulation.
DIRECT_BINOMIAL_MAX_N = 20


@dataclass(frozen=True)
class SpinSpace:
    """An N-dimensional spin-J space, J = (N-1)/2."""

    n_levels: int

    def __post_init__(self):
        if not isinstance(self.n_levels, (int, np.integer)) or self.n_levels < 2:
            raise InvalidDimensionError(
                f"need an integer number of levels >= 2, got {self.n_levels!r}"
            )

    @property
    def n(self) -> int:
        """Highest basis label, n = N - 1 = 2J."""
        return self.n_levels - 1

    @property
    def J(self) -> float:
        """Angular momentum quantum number (integer or half-integer)."""
        return self.n / 2


class SpinOperators(NamedTuple):
    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray
    jplus: np.ndarray
    jminus: np.ndarray


def jz_eigenvalues(space: SpinSpace) -> np.ndarray:
    """Eigenvalues J - j of Jz in basis order j = 0 .. n."""
    return space.J - np.arange(space.n_levels, dtype=float)


def ladder_elements(space: SpinSpace) -> np.ndarray:
    """Superdiagonal elements of J+, i.e. (J+)_{j-1,j} = sqrt(J(J+1) - m_j(m_j + 1)).

    Entry ``w[j]`` couples levels j and j+1 (length n).
    """
    J = space.J
    m = jz_eigenvalues(space)[1:]  # m_j for j = 1 .. n, the state being raised
    return np.sqrt(J * (J + 1) - m * (m + 1))


def build_generators(space: SpinSpace) -> SpinOperators:
    """Matrices of Jx, Jy, Jz, J+, J- in the Jz eigenbasis.

    Jz is diagonal with entries J - j; J+/J- sit on the super/subdiagonal
    with the standard sqrt(J(J+1) - m(m+1)) elements.
    """
    N = space.n_levels
    jz = np.diag(jz_eigenvalues(space)).astype(complex)
    jplus = np.zeros((N, N), dtype=complex)
    w = ladder_elements(space)
    for j in range(1, N):
        jplus[j - 1, j] = w[j - 1]
    jminus = jplus.conj().T
    jx = (jplus + jminus) / 2
    jy = (jplus - jminus) / 2j
    return SpinOperators(jx=jx, jy=jy, jz=jz, jplus=jplus, jminus=jminus)


def _fix_column_phases(mat: np.ndarray) -> np.ndarray:
    """Rotate each column so its first component of significant modulus is real >= 0."""
    out = mat.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        idx = np.flatnonzero(np.abs(col) > 1e-12 * np.abs(col).max())
        lead = col[idx[0]]
        out[:, k] = col * (abs(lead) / lead)
    return out


def jy_eigenbasis(space: SpinSpace) -> np.ndarray:
    """Columns are the Jy eigenvectors |j_y>, eigenvalue J - j for column j.

    Built by lifting the 2x2 sigma_z -> sigma_y change of basis (rescaled to
    unit determinant), which keeps the basis exactly consistent with lifted
    group elements; a generic eigensolver would assign arbitrary phases.
    """
    from .repr_lift import lift  # local import to avoid a module cycle

    u2 = np.array([[1.0, 1.0], [1j, -1j]], dtype=complex) / np.sqrt(2.0)
    u2 = u2 * np.exp(1j * np.pi / 4)  # det -i -> 1
    return _fix_column_phases(lift(u2, space))


def coherent_state(space: SpinSpace, psi1: complex, psi2: complex) -> np.ndarray:
    """SU(2) coherent state with components sqrt(C(n,j)) psi1^(n-j) psi2^j.

    For a unit 2-spinor the result is a unit vector; in general its squared
    norm is (|psi1|^2 + |psi2|^2)^n.
    """
    psi1 = complex(psi1)
    psi2 = complex(psi2)
    if psi1 == 0 and psi2 == 0:
        raise DegenerateSpinorError("coherent state undefined for the zero spinor")
    n = space.n
    out = np.empty(space.n_levels, dtype=complex)
    if n <= DIRECT_BINOMIAL_MAX_N:
        for j in range(space.n_levels):
            out[j] = math.sqrt(math.comb(n, j)) * psi1 ** (n - j) * psi2**j
        return out
    # log-domain accumulation keeps the large-n binomials and high powers in range
    for j in range(space.n_levels):
        if (psi1 == 0 and j < n) or (psi2 == 0 and j > 0):
            out[j] = 0.0
            continue
        logmag = 0.5 * (
            math.lgamma(n + 1) - math.lgamma(j + 1) - math.lgamma(n - j + 1)
        )
        val = complex(logmag, 0.0)
        if n - j > 0:
            val += (n - j) * np.log(psi1)
        if j > 0:
            val += j * np.log(psi2)
        out[j] = np.exp(val)
    return out
