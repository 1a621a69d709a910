"""Compiled fixed-step time steppers for the driven Schrodinger equation.

The Hamiltonian split is H(t) = H0 + f(t) W with a scalar drive f(t) and
both operators time-independent, so every exponential factors through two
precomputed eigenbases. All kernels work in the H0 eigenbasis, where the
free flight is a diagonal phase multiply; `G` and `ew` are the eigenvectors
(real orthogonal, since H0 and W are real symmetric) and eigenvalues of W
expressed in that basis.

`split4` is the triple-jump composition of the Strang splitting
exp(-i H0 c h/2) exp(-i f W c h) exp(-i H0 c h/2): a product of exact
unitaries, so the norm is conserved to rounding for any step size, with
fourth-order accuracy. The drive is frozen during each kick at the time
accumulated by the surrounding free flights, which preserves the order for
the time-dependent problem. `rk4` is the classical Runge-Kutta scheme on
the same right-hand side, kept for convergence studies; it is not unitary.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

# Triple-jump composition coefficients: w1, w0, w1 with w0 = 1 - 2 w1.
W1 = 1.0 / (2.0 - 2.0 ** (1.0 / 3.0))
W0 = 1.0 - 2.0 * W1


@njit(cache=True, inline="always")
def _field_value(t, p):
    """Chirped Gaussian field from packed parameters.

    p = [peak envelope, 1/(2 tau_c^2), omega_eff, beta_t/2, phase0, t_cut].
    """
    if abs(t) > p[5]:
        return 0.0
    return p[0] * math.exp(-t * t * p[1]) * math.cos((p[2] - p[3] * t) * t + p[4])


@njit(cache=True, inline="always")
def _kick(psi, tmp, G, ew, s):
    """psi <- G exp(-i s ew) G^T psi (exact exponential of s*W)."""
    dim = psi.shape[0]
    for i in range(dim):
        acc = 0.0 + 0.0j
        for j in range(dim):
            acc += G[j, i] * psi[j]
        arg = -s * ew[i]
        tmp[i] = acc * complex(math.cos(arg), math.sin(arg))
    for i in range(dim):
        acc = 0.0 + 0.0j
        for j in range(dim):
            acc += G[i, j] * tmp[j]
        psi[i] = acc


@njit(cache=True)
def split4(psi, e0, G, ew, p_plus, p_minus, t0, h, nsteps, sample_steps, out):
    """Propagate in place; record psi into `out` at the given step indices.

    sample_steps must be strictly increasing; an entry equal to nsteps
    records the final state.
    """
    dim = psi.shape[0]
    tmp = np.empty(dim, dtype=np.complex128)

    edge = np.empty(dim, dtype=np.complex128)
    mid = np.empty(dim, dtype=np.complex128)
    for i in range(dim):
        a = -e0[i] * (0.5 * W1 * h)
        edge[i] = complex(math.cos(a), math.sin(a))
        b = -e0[i] * (0.5 * (W1 + W0) * h)
        mid[i] = complex(math.cos(b), math.sin(b))

    d1 = 0.5 * W1 * h
    d2 = (W1 + 0.5 * W0) * h
    d3 = (1.0 - 0.5 * W1) * h

    si = 0
    nsamp = sample_steps.shape[0]
    for step in range(nsteps):
        if si < nsamp and sample_steps[si] == step:
            for i in range(dim):
                out[si, i] = psi[i]
            si += 1
        t = t0 + step * h

        for i in range(dim):
            psi[i] *= edge[i]
        s = (_field_value(t + d1, p_plus) + _field_value(t + d1, p_minus)) * (W1 * h)
        if s != 0.0:
            _kick(psi, tmp, G, ew, s)
        for i in range(dim):
            psi[i] *= mid[i]
        s = (_field_value(t + d2, p_plus) + _field_value(t + d2, p_minus)) * (W0 * h)
        if s != 0.0:
            _kick(psi, tmp, G, ew, s)
        for i in range(dim):
            psi[i] *= mid[i]
        s = (_field_value(t + d3, p_plus) + _field_value(t + d3, p_minus)) * (W1 * h)
        if s != 0.0:
            _kick(psi, tmp, G, ew, s)
        for i in range(dim):
            psi[i] *= edge[i]

    if si < nsamp and sample_steps[si] == nsteps:
        for i in range(dim):
            out[si, i] = psi[i]
        si += 1
    return si


@njit(cache=True, inline="always")
def _rhs(psi, e0, Wt, f, out):
    """out <- -i (e0 * psi + f * Wt psi)."""
    dim = psi.shape[0]
    for i in range(dim):
        acc = e0[i] * psi[i]
        if f != 0.0:
            w = 0.0 + 0.0j
            for j in range(dim):
                w += Wt[i, j] * psi[j]
            acc += f * w
        out[i] = complex(acc.imag, -acc.real)


@njit(cache=True)
def rk4(psi, e0, Wt, p_plus, p_minus, t0, h, nsteps, sample_steps, out):
    """Classical fourth-order Runge-Kutta on the same split window."""
    dim = psi.shape[0]
    k1 = np.empty(dim, dtype=np.complex128)
    k2 = np.empty(dim, dtype=np.complex128)
    k3 = np.empty(dim, dtype=np.complex128)
    k4 = np.empty(dim, dtype=np.complex128)
    work = np.empty(dim, dtype=np.complex128)

    si = 0
    nsamp = sample_steps.shape[0]
    for step in range(nsteps):
        if si < nsamp and sample_steps[si] == step:
            for i in range(dim):
                out[si, i] = psi[i]
            si += 1
        t = t0 + step * h
        f0 = _field_value(t, p_plus) + _field_value(t, p_minus)
        fh = _field_value(t + 0.5 * h, p_plus) + _field_value(t + 0.5 * h, p_minus)
        f1 = _field_value(t + h, p_plus) + _field_value(t + h, p_minus)

        _rhs(psi, e0, Wt, f0, k1)
        for i in range(dim):
            work[i] = psi[i] + 0.5 * h * k1[i]
        _rhs(work, e0, Wt, fh, k2)
        for i in range(dim):
            work[i] = psi[i] + 0.5 * h * k2[i]
        _rhs(work, e0, Wt, fh, k3)
        for i in range(dim):
            work[i] = psi[i] + h * k3[i]
        _rhs(work, e0, Wt, f1, k4)
        for i in range(dim):
            psi[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])

    if si < nsamp and sample_steps[si] == nsteps:
        for i in range(dim):
            out[si, i] = psi[i]
        si += 1
    return si
