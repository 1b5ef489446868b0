#!/usr/bin/env python3
"""Convergence studies for the direct integrator against the closed forms.

Two sweeps, printed as small tables:

* span study: deviation of the window-averaged populations from the exact
  transition probabilities as the half-span T grows (expected ~ 1/T^2);
* tolerance study: deviation of a fixed trajectory from a tight-tolerance
  reference as rel_tol shrinks.

Useful when touching the stepper or the asymptotic measurement.
"""

import argparse

import numpy as np

from eplz import IntegratorConfig, ModelParams, SpinSpace, evolve, pt_P_column0
from eplz.propagate import _averaged_populations


def span_study(n_levels, alpha, gamma):
    params = ModelParams(kind="pt", alpha=alpha, coupling=gamma, space=SpinSpace(n_levels))
    exact = pt_P_column0(params.space, gamma, alpha)
    cfg = IntegratorConfig()
    print(f"# span study: PT N={n_levels} alpha={alpha} gamma={gamma}")
    print(f"{'T':>10} {'max |dP_j0|':>14} {'steps':>10}")
    base = cfg.t_span_factor * max(gamma, 1.0) / alpha
    for factor in (0.5, 1.0, 2.0, 4.0):
        span = base * factor
        pops, steps = _averaged_populations(params, cfg, span)
        dev = np.abs(pops[:, 0] - exact).max()
        print(f"{span:10.1f} {dev:14.3e} {steps:10d}")


def tolerance_study(n_levels, alpha, gamma):
    params = ModelParams(kind="pt", alpha=alpha, coupling=gamma, space=SpinSpace(n_levels))
    psi0 = np.zeros(n_levels, dtype=complex)
    psi0[0] = 1.0
    ref = evolve(params, psi0, -8.0, 8.0, IntegratorConfig(rel_tol=1e-13, abs_tol=1e-14))
    print(f"# tolerance study: PT N={n_levels} alpha={alpha} gamma={gamma}, span [-8, 8]")
    print(f"{'rel_tol':>10} {'state dev':>12} {'steps':>8}")
    for rel_tol in (1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10):
        res = evolve(
            params, psi0, -8.0, 8.0, IntegratorConfig(rel_tol=rel_tol, abs_tol=rel_tol * 1e-2)
        )
        phase = np.vdot(ref.final_state, res.final_state)
        phase /= abs(phase)
        dev = np.abs(res.final_state - phase * ref.final_state).max() + abs(
            res.log_norm - ref.log_norm
        )
        print(f"{rel_tol:10.0e} {dev:12.3e} {res.step_count:8d}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--alpha", type=float, default=1.0)
    ap.add_argument("--gamma", type=float, default=1.0)
    args = ap.parse_args()
    span_study(args.n, args.alpha, args.gamma)
    print()
    tolerance_study(args.n, args.alpha, args.gamma)


if __name__ == "__main__":
    main()
