"""Direct numerical integration of i dpsi/dt = H(t) psi.

This is the independent oracle for every closed-form result in the package:
nothing here touches the representation lift.  Asymptotic populations are
read off as the mean of the per-sample normalized populations over one full
period of the fastest-resolved level-pair beat at the end of the span.  The
plain endpoint populations in the bare basis carry an O(coupling/(alpha T))
oscillation, which the window average cancels, so span doubling converges
at the configured column tolerance instead of chasing that tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import _rk
from .analytic import NORMALIZED, TransitionMatrix, analytic_transition_matrix
from .errors import AsymptoteNotReachedError, EplzError, IntegrationFailureError
from .model import ModelParams, hamiltonian_at, lambda_at
from .su2_ops import jz_eigenvalues, ladder_elements


@dataclass(frozen=True)
class IntegratorConfig:
    """Adaptive-stepper and span-convergence settings."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = math.inf
    renorm_threshold: float = math.exp(10.0)
    t_span_factor: float = 100.0
    column_tol: float = 1e-4
    max_doublings: int = 4
    window_samples: int = 32

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1e-3:
            raise EplzError(f"rel_tol must be in (0, 1e-3), got {self.rel_tol}")
        if not self.renorm_threshold > 1.0:
            raise EplzError("renorm_threshold must exceed 1")
        if not (self.t_span_factor > 0 and self.window_samples >= 1):
            raise EplzError("t_span_factor and window_samples must be positive")


@dataclass(frozen=True)
class PropagationResult:
    """Final unit-norm state plus the log of every stripped norm factor."""

    final_state: np.ndarray
    log_norm: float
    t_final: float
    step_count: int
    tolerance_used: float


def _bands(params: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    """Tridiagonal Hamiltonian data: H_jj = t*hz[j], H_{j,j+1} = cb[j]."""
    hz = -2.0 * params.alpha * jz_eigenvalues(params.space)
    coupling = 1j * params.coupling if params.is_pt else complex(params.coupling)
    cb = coupling * ladder_elements(params.space).astype(complex)
    return hz, cb


def _integrate(params, y0, t0, checkpoints, cfg):
    hz, cb = _bands(params)
    states, lognorms, nsteps, status, t_last = _rk.integrate(
        hz,
        cb,
        np.asarray(y0, dtype=complex),
        float(t0),
        np.asarray(checkpoints, dtype=float),
        cfg.rel_tol,
        cfg.abs_tol,
        cfg.max_step,
        cfg.renorm_threshold,
    )
    if status != _rk.STATUS_OK:
        raise IntegrationFailureError(t_last)
    return states, lognorms, nsteps


def evolve(
    params: ModelParams,
    psi0: np.ndarray,
    t0: float,
    t1: float,
    cfg: IntegratorConfig | None = None,
) -> PropagationResult:
    """Solve i dpsi/dt = H(t) psi from t0 to t1 (either direction).

    The returned state has unit norm; ``log_norm`` accumulates ln of every
    stripped factor including the final rescale, so the physical solution is
    exp(log_norm) * final_state up to that bookkeeping.  The Hermitian model
    conserves the norm, leaving log_norm at the integration-error level.
    """
    cfg = cfg or IntegratorConfig()
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.ndim != 1 or psi0.shape[0] != params.space.n_levels:
        raise EplzError(f"psi0 must be a length-{params.space.n_levels} vector")
    if not np.any(psi0):
        raise EplzError("psi0 must be nonzero")
    if t0 == t1:
        raise EplzError("need t0 != t1")
    states, lognorms, nsteps = _integrate(params, psi0[:, None], t0, [t1], cfg)
    state = states[0][:, 0]
    nrm = np.linalg.norm(state)
    return PropagationResult(
        final_state=state / nrm,
        log_norm=float(lognorms[0, 0] + math.log(nrm)),
        t_final=t1,
        step_count=int(nsteps),
        tolerance_used=cfg.rel_tol,
    )


def _adiabatic_frame(params, t):
    """Instantaneous eigenvectors of H(t) labelled by their diabatic limits.

    Uses a direct dense eigensolve on the small matrix (nothing shared with
    the representation-lift construction, keeping this module an independent
    oracle).  Valid far from the exceptional points, where the spectrum is
    real and well separated; column j tends to the basis vector e_j as
    t -> -infinity.
    """
    evals, evecs = np.linalg.eig(hamiltonian_at(params, t))
    order = np.argsort(-evals.real)
    evecs = evecs[:, order]
    return evecs / np.linalg.norm(evecs, axis=0)


def _averaged_populations(params, cfg, span):
    """Column-stochastic populations averaged over one beat period at +span.

    Each column starts in the instantaneous eigenvector at -span: a bare
    basis-state start differs from the t -> -infinity scattering solution by
    O(coupling/(alpha*span)), which would contaminate the populations at
    first order no matter how the endpoint is sampled.
    """
    lam_end = lambda_at(params, span)
    if abs(lam_end.imag) > 0:
        raise EplzError(f"span {span} ends inside the non-real-spectrum region")
    period = math.pi / lam_end.real
    k = cfg.window_samples
    checkpoints = span + np.arange(k) * (period / k)
    y0 = _adiabatic_frame(params, -span)
    states, _, nsteps = _integrate(params, y0, -span, checkpoints, cfg)
    pops = np.abs(states) ** 2
    pops /= pops.sum(axis=1, keepdims=True)  # per-sample, per-column normalization
    mean = pops.mean(axis=0)
    return mean / mean.sum(axis=0), int(nsteps)


def numeric_transition_matrix(
    params: ModelParams,
    cfg: IntegratorConfig | None = None,
    return_info: bool = False,
):
    """Asymptotic transition probabilities from direct integration.

    Every basis state is evolved from -T to +T with
    T = t_span_factor * max(coupling, 1)/alpha; T doubles until the
    column-normalized populations move by less than ``column_tol``.
    """
    cfg = cfg or IntegratorConfig()
    t_base = cfg.t_span_factor * max(params.coupling, 1.0) / params.alpha
    prev = None
    total_steps = 0
    for doubling in range(cfg.max_doublings + 1):
        span = t_base * 2.0**doubling
        pops, nsteps = _averaged_populations(params, cfg, span)
        total_steps += nsteps
        if prev is not None:
            change = float(np.abs(pops - prev).max())
            if change < cfg.column_tol:
                result = TransitionMatrix(entries=pops, flavor=NORMALIZED)
                info = {
                    "span": span,
                    "doublings": doubling,
                    "column_change": change,
                    "steps": total_steps,
                    "rel_tol": cfg.rel_tol,
                }
                return (result, info) if return_info else result
        prev = pops
    raise AsymptoteNotReachedError(
        f"populations still moving after {cfg.max_doublings} span doublings "
        f"(base span {t_base})"
    )


@dataclass(frozen=True)
class SweepPoint:
    """One drive rate of an alpha sweep; numeric results absent on failure."""

    alpha: float
    analytic: np.ndarray | None
    numeric: np.ndarray | None
    max_abs_dev: float | None
    status: str = "ok"
    info: dict = field(default_factory=dict)


def alpha_sweep(
    params_template: ModelParams,
    alphas,
    cfg: IntegratorConfig | None = None,
    include_analytic: bool = True,
    include_numeric: bool = True,
) -> list[SweepPoint]:
    """Analytic and/or numeric transition matrices over a grid of drive rates.

    Failures of individual integrations are recorded in the row status
    instead of aborting the sweep.
    """
    cfg = cfg or IntegratorConfig()
    points = []
    for alpha in np.asarray(alphas, dtype=float):
        params = replace(params_template, alpha=float(alpha))
        analytic = analytic_transition_matrix(params).entries if include_analytic else None
        numeric = None
        info = {}
        status = "ok"
        if include_numeric:
            try:
                result, info = numeric_transition_matrix(params, cfg, return_info=True)
                numeric = result.entries
            except EplzError as exc:
                status = f"error: {exc}"
        dev = None
        if analytic is not None and numeric is not None:
            dev = float(np.abs(analytic - numeric).max())
        points.append(
            SweepPoint(
                alpha=float(alpha),
                analytic=analytic,
                numeric=numeric,
                max_abs_dev=dev,
                status=status,
                info=info,
            )
        )
    return points
