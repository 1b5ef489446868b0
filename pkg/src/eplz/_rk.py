"""Adaptive DOP853 stepper for i dpsi/dt = H(t) psi, numba-compiled.

The Hamiltonian is tridiagonal: H(t)_{jj} = t * hz[j] and
H_{j,j+1} = H_{j+1,j} = cb[j], so the right-hand side is O(N) per column.
All initial columns are propagated together with shared adaptive steps.
Whenever a column's norm leaves [1/renorm_threshold, renorm_threshold] it is
rescaled to unit norm and the stripped log-norm is accumulated, which keeps
the PT model's exponential growth between the exceptional points in range.

Tableau and error-estimator constants are taken from scipy's DOP853
implementation; the stepper itself is reimplemented here because the sweeps
need millions of steps on tiny systems, where per-step Python overhead
dominates scipy's solver.
"""

import numpy as np
from numba import njit
from scipy.integrate._ivp import dop853_coefficients as _dc

_N_STAGES = int(_dc.N_STAGES)  # 12 stages plus the FSAL evaluation
_A = np.ascontiguousarray(_dc.A[:_N_STAGES, :_N_STAGES])
_B = np.ascontiguousarray(_dc.B)
_C = np.ascontiguousarray(_dc.C[:_N_STAGES])
_E3 = np.ascontiguousarray(_dc.E3)
_E5 = np.ascontiguousarray(_dc.E5)

STATUS_OK = 0
STATUS_STEP_UNDERFLOW = 1

# Hairer-style PI control, eighth-order exponent
_SAFETY = 0.9
_BETA = 0.02
_EXPO1 = 1.0 / 8.0 - _BETA * 0.2


@njit(cache=True)
def _rhs(t, y, hz, cb, out):
    n, ncol = y.shape
    for k in range(ncol):
        for j in range(n):
            acc = (t * hz[j]) * y[j, k]
            if j > 0:
                acc += cb[j - 1] * y[j - 1, k]
            if j < n - 1:
                acc += cb[j] * y[j + 1, k]
            out[j, k] = -1j * acc
    return out


@njit(cache=True)
def _initial_step(t0, y, f0, hz, cb, tdir, rtol, atol, span):
    n, ncol = y.shape
    d0 = 0.0
    d1 = 0.0
    for k in range(ncol):
        for j in range(n):
            scale = atol + rtol * abs(y[j, k])
            d0 += (abs(y[j, k]) / scale) ** 2
            d1 += (abs(f0[j, k]) / scale) ** 2
    d0 = np.sqrt(d0 / (n * ncol))
    d1 = np.sqrt(d1 / (n * ncol))
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    h0 = min(h0, span)
    y1 = y + tdir * h0 * f0
    f1 = np.empty_like(y)
    _rhs(t0 + tdir * h0, y1, hz, cb, f1)
    d2 = 0.0
    for k in range(ncol):
        for j in range(n):
            scale = atol + rtol * abs(y[j, k])
            d2 += (abs(f1[j, k] - f0[j, k]) / scale) ** 2
    d2 = np.sqrt(d2 / (n * ncol)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1.0 / 8.0)
    return min(100.0 * h0, h1, span)


@njit(cache=True)
def integrate(hz, cb, y0, t0, checkpoints, rtol, atol, max_step, renorm_threshold):
    """Propagate y' = -i H(t) y from t0 through every checkpoint time.

    Checkpoints must be strictly ordered in the direction of integration.
    Returns (states, lognorms, step_count, status, t_last) where states[i]
    is the (renormalized) solution at checkpoints[i] and lognorms[i, k] the
    accumulated stripped log-norm of column k at that point.
    """
    n, ncol = y0.shape
    ncp = checkpoints.shape[0]
    states = np.zeros((ncp, n, ncol), dtype=np.complex128)
    lognorms = np.zeros((ncp, ncol))
    lognorm = np.zeros(ncol)

    y = y0.astype(np.complex128).copy()
    t = t0
    tdir = 1.0 if checkpoints[ncp - 1] >= t0 else -1.0
    span = abs(checkpoints[ncp - 1] - t0)
    hmin = 1e-14 * max(span, abs(t0), 1.0)

    kk = np.empty((_N_STAGES + 1, n, ncol), dtype=np.complex128)
    ytmp = np.empty_like(y)
    ynew = np.empty_like(y)
    _rhs(t, y, hz, cb, kk[0])

    h = _initial_step(t, y, kk[0], hz, cb, tdir, rtol, atol, max(span, hmin))

    facold = 1e-4
    reject = False
    nsteps = 0
    icp = 0

    while icp < ncp:
        if h > max_step:
            h = max_step
        h_try = h
        target = checkpoints[icp]
        hit = False
        if (t + tdir * h - target) * tdir >= 0.0:
            h_step = abs(target - t)
            hit = True
        else:
            h_step = h
        if h_step <= hmin and not hit:
            return states, lognorms, nsteps, STATUS_STEP_UNDERFLOW, t
        hs = tdir * h_step

        for s in range(1, _N_STAGES):
            for k in range(ncol):
                for j in range(n):
                    acc = 0.0 + 0.0j
                    for i in range(s):
                        a = _A[s, i]
                        if a != 0.0:
                            acc += a * kk[i, j, k]
                    ytmp[j, k] = y[j, k] + hs * acc
            _rhs(t + _C[s] * hs, ytmp, hz, cb, kk[s])
        for k in range(ncol):
            for j in range(n):
                acc = 0.0 + 0.0j
                for i in range(_N_STAGES):
                    b = _B[i]
                    if b != 0.0:
                        acc += b * kk[i, j, k]
                ynew[j, k] = y[j, k] + hs * acc
        _rhs(t + hs, ynew, hz, cb, kk[_N_STAGES])

        # DOP853 combined 5th/3rd-order error estimate
        err5sq = 0.0
        err3sq = 0.0
        for k in range(ncol):
            for j in range(n):
                e5 = 0.0 + 0.0j
                e3 = 0.0 + 0.0j
                for i in range(_N_STAGES + 1):
                    e5 += _E5[i] * kk[i, j, k]
                    e3 += _E3[i] * kk[i, j, k]
                scale = atol + rtol * max(abs(y[j, k]), abs(ynew[j, k]))
                q5 = abs(e5) / scale
                q3 = abs(e3) / scale
                err5sq += q5 * q5
                err3sq += q3 * q3
        if err5sq == 0.0 and err3sq == 0.0:
            err = 0.0
        else:
            denom = err5sq + 0.01 * err3sq
            err = h_step * err5sq / np.sqrt(denom * n * ncol)
        if not err == err:  # NaN guard: force a rejection
            err = 10.0

        if err <= 1.0:
            nsteps += 1
            t = target if hit else t + hs
            yold = y
            y = ynew
            ynew = yold
            for k in range(ncol):
                for j in range(n):
                    kk[0, j, k] = kk[_N_STAGES, j, k]  # FSAL
                nsq = 0.0
                for j in range(n):
                    v = y[j, k]
                    nsq += v.real * v.real + v.imag * v.imag
                nrm = np.sqrt(nsq)
                if nrm > renorm_threshold or (0.0 < nrm < 1.0 / renorm_threshold):
                    inv = 1.0 / nrm
                    for j in range(n):
                        y[j, k] *= inv
                        kk[0, j, k] *= inv  # the FSAL stage is linear in y
                    lognorm[k] += np.log(nrm)
            if hit:
                states[icp] = y
                lognorms[icp] = lognorm
                icp += 1
            if err == 0.0:
                fac = 0.1  # grow by the full factor 10
            else:
                fac11 = err**_EXPO1
                fac = fac11 / facold**_BETA
                fac = max(0.1, min(5.0, fac / _SAFETY))
            hnew = h_step / fac
            if reject:
                hnew = min(hnew, h_step)
            reject = False
            facold = max(err, 1e-4)
            # resume the controller's pre-clamp step after landing on a checkpoint
            h = max(hnew, h_try) if hit else hnew
        else:
            fac11 = err**_EXPO1
            h = h_step / min(5.0, fac11 / _SAFETY)
            reject = True
            if h <= hmin:
                return states, lognorms, nsteps, STATUS_STEP_UNDERFLOW, t

    return states, lognorms, nsteps, STATUS_OK, t


def warmup():
    """Trigger JIT compilation with a tiny two-level run."""
    hz = np.array([-1.0, 1.0])
    cb = np.array([1.0 + 0.0j])
    y0 = np.eye(2, dtype=np.complex128)
    cps = np.array([1.0])
    integrate(hz, cb, y0, 0.0, cps, 1e-8, 1e-10, np.inf, np.exp(10.0))
