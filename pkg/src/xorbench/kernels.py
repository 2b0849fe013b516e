"""Batched scoring kernels for the two-qubit classifier circuit.

These evaluate the analytic Pauli-Z expectation on qubit 0 for a batch of
input points under the fixed circuit layout

    RX(pi x1) on qubit 0, RX(pi x2) on qubit 1,
    then per layer: RZ RY RZ on qubit 0, RZ RY RZ on qubit 1, CNOT(0 -> 1),

specialised to 4 amplitudes and unrolled per point. Training spends nearly
all of its time here (one gradient step needs 1 + 2 * 6L batch evaluations),
so the kernels are numba-jitted when numba is importable.

Backend selection: the environment variable XORBENCH_BACKEND picks
"numba", "numpy", or "auto" (default: numba when available). The two paths
perform the same arithmetic in the same order; tests hold them to 1e-12
agreement against each other and against the general simulator in qsim.

Basis ordering matches qsim: index = 2 * bit(qubit0) + bit(qubit1).
"""

from __future__ import annotations

import os

import numpy as np

BACKEND_ENV = "XORBENCH_BACKEND"

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False


def active_backend() -> str:
    """Resolve the backend from the environment ("numba" or "numpy")."""
    choice = os.environ.get(BACKEND_ENV, "auto").strip().lower()
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(f"{BACKEND_ENV} must be auto|numba|numpy, got {choice!r}")
    if choice == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not installed")
    if choice == "auto":
        return "numba" if HAVE_NUMBA else "numpy"
    return choice


def _scores_numpy(points: np.ndarray, params: np.ndarray) -> np.ndarray:
    """Pure-numpy path: amplitudes held as a (4, N) complex array."""
    n = points.shape[0]
    depth = params.shape[0] // 6
    a = np.zeros((4, n), dtype=np.complex128)
    a[0] = 1.0

    def rot_q0(c, s, imag):
        f = -1j * s if imag else -s
        g = -1j * s if imag else s
        a[0], a[2] = c * a[0] + f * a[2], g * a[0] + c * a[2]
        a[1], a[3] = c * a[1] + f * a[3], g * a[1] + c * a[3]

    def rot_q1(c, s, imag):
        f = -1j * s if imag else -s
        g = -1j * s if imag else s
        a[0], a[1] = c * a[0] + f * a[1], g * a[0] + c * a[1]
        a[2], a[3] = c * a[2] + f * a[3], g * a[2] + c * a[3]

    t0 = 0.5 * np.pi * points[:, 0]
    rot_q0(np.cos(t0), np.sin(t0), imag=True)
    t1 = 0.5 * np.pi * points[:, 1]
    rot_q1(np.cos(t1), np.sin(t1), imag=True)

    for layer in range(depth):
        p = params[6 * layer : 6 * layer + 6]
        em, ep = np.exp(-0.5j * p[0]), np.exp(0.5j * p[0])
        a[0] *= em; a[1] *= em; a[2] *= ep; a[3] *= ep
        c, s = np.cos(p[1] / 2), np.sin(p[1] / 2)
        rot_q0(c, s, imag=False)
        em, ep = np.exp(-0.5j * p[2]), np.exp(0.5j * p[2])
        a[0] *= em; a[1] *= em; a[2] *= ep; a[3] *= ep
        em, ep = np.exp(-0.5j * p[3]), np.exp(0.5j * p[3])
        a[0] *= em; a[2] *= em; a[1] *= ep; a[3] *= ep
        c, s = np.cos(p[4] / 2), np.sin(p[4] / 2)
        rot_q1(c, s, imag=False)
        em, ep = np.exp(-0.5j * p[5]), np.exp(0.5j * p[5])
        a[0] *= em; a[2] *= em; a[1] *= ep; a[3] *= ep
        a[2], a[3] = a[3].copy(), a[2].copy()  # rows alias; plain swap would clobber

    return (
        np.abs(a[0]) ** 2 + np.abs(a[1]) ** 2 - np.abs(a[2]) ** 2 - np.abs(a[3]) ** 2
    )


def _scores_shifted_numpy(points: np.ndarray, params: np.ndarray) -> np.ndarray:
    n_params = params.shape[0]
    out = np.empty((1 + 2 * n_params, points.shape[0]))
    out[0] = _scores_numpy(points, params)
    for k in range(n_params):
        shifted = params.copy()
        shifted[k] = params[k] + np.pi / 2
        out[1 + 2 * k] = _scores_numpy(points, shifted)
        shifted[k] = params[k] - np.pi / 2
        out[2 + 2 * k] = _scores_numpy(points, shifted)
    return out


if HAVE_NUMBA:
    # Keep in lockstep with _scores_numpy: same gates, same operation order.
    # Parameter-derived factors are hoisted out of the point loop; only the
    # encoding angles vary per point.
    @njit(cache=True)
    def _scores_njit(points, params):  # pragma: no cover - numba-compiled
        n = points.shape[0]
        depth = params.shape[0] // 6
        ems = np.empty((depth, 4), dtype=np.complex128)
        eps_ = np.empty((depth, 4), dtype=np.complex128)
        cos_ry = np.empty((depth, 2))
        sin_ry = np.empty((depth, 2))
        for layer in range(depth):
            b = 6 * layer
            ems[layer, 0] = np.exp(-0.5j * params[b])
            eps_[layer, 0] = np.exp(0.5j * params[b])
            cos_ry[layer, 0] = np.cos(params[b + 1] / 2)
            sin_ry[layer, 0] = np.sin(params[b + 1] / 2)
            ems[layer, 1] = np.exp(-0.5j * params[b + 2])
            eps_[layer, 1] = np.exp(0.5j * params[b + 2])
            ems[layer, 2] = np.exp(-0.5j * params[b + 3])
            eps_[layer, 2] = np.exp(0.5j * params[b + 3])
            cos_ry[layer, 1] = np.cos(params[b + 4] / 2)
            sin_ry[layer, 1] = np.sin(params[b + 4] / 2)
            ems[layer, 3] = np.exp(-0.5j * params[b + 5])
            eps_[layer, 3] = np.exp(0.5j * params[b + 5])

        out = np.empty(n)
        for i in range(n):
            a0 = 1.0 + 0.0j
            a1 = 0.0j
            a2 = 0.0j
            a3 = 0.0j

            t = 0.5 * np.pi * points[i, 0]
            c, s = np.cos(t), np.sin(t)
            a0, a2 = c * a0 + (-1j * s) * a2, (-1j * s) * a0 + c * a2
            a1, a3 = c * a1 + (-1j * s) * a3, (-1j * s) * a1 + c * a3
            t = 0.5 * np.pi * points[i, 1]
            c, s = np.cos(t), np.sin(t)
            a0, a1 = c * a0 + (-1j * s) * a1, (-1j * s) * a0 + c * a1
            a2, a3 = c * a2 + (-1j * s) * a3, (-1j * s) * a2 + c * a3

            for layer in range(depth):
                em, ep = ems[layer, 0], eps_[layer, 0]
                a0 *= em; a1 *= em; a2 *= ep; a3 *= ep
                c, s = cos_ry[layer, 0], sin_ry[layer, 0]
                a0, a2 = c * a0 - s * a2, s * a0 + c * a2
                a1, a3 = c * a1 - s * a3, s * a1 + c * a3
                em, ep = ems[layer, 1], eps_[layer, 1]
                a0 *= em; a1 *= em; a2 *= ep; a3 *= ep
                em, ep = ems[layer, 2], eps_[layer, 2]
                a0 *= em; a2 *= em; a1 *= ep; a3 *= ep
                c, s = cos_ry[layer, 1], sin_ry[layer, 1]
                a0, a1 = c * a0 - s * a1, s * a0 + c * a1
                a2, a3 = c * a2 - s * a3, s * a2 + c * a3
                em, ep = ems[layer, 3], eps_[layer, 3]
                a0 *= em; a2 *= em; a1 *= ep; a3 *= ep
                a2, a3 = a3, a2

            out[i] = (
                a0.real * a0.real + a0.imag * a0.imag
                + a1.real * a1.real + a1.imag * a1.imag
                - a2.real * a2.real - a2.imag * a2.imag
                - a3.real * a3.real - a3.imag * a3.imag
            )
        return out

    @njit(cache=True)
    def _scores_shifted_njit(points, params):  # pragma: no cover - numba-compiled
        n_params = params.shape[0]
        out = np.empty((1 + 2 * n_params, points.shape[0]))
        out[0] = _scores_njit(points, params)
        for k in range(n_params):
            shifted = params.copy()
            shifted[k] = params[k] + np.pi / 2
            out[1 + 2 * k] = _scores_njit(points, shifted)
            shifted[k] = params[k] - np.pi / 2
            out[2 + 2 * k] = _scores_njit(points, shifted)
        return out


def _as_inputs(points: np.ndarray, params: np.ndarray):
    pts = np.ascontiguousarray(np.atleast_2d(points), dtype=np.float64)
    prm = np.ascontiguousarray(params, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError(f"points must have shape (N, 2), got {pts.shape}")
    if prm.ndim != 1 or prm.size % 6 != 0 or prm.size == 0:
        raise ValueError(f"params length must be a positive multiple of 6, got {prm.size}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("points must be finite")
    if not np.all(np.isfinite(prm)):
        raise ValueError("params must be finite")
    return pts, prm


def circuit_scores(points: np.ndarray, params: np.ndarray) -> np.ndarray:
    """Analytic <Z0> for each point, shape (N,)."""
    pts, prm = _as_inputs(points, params)
    if active_backend() == "numba":
        return _scores_njit(pts, prm)
    return _scores_numpy(pts, prm)


def circuit_scores_shifted(points: np.ndarray, params: np.ndarray) -> np.ndarray:
    """Scores at base params and at every +/- pi/2 single-parameter shift.

    Row 0 is the base; rows 1 + 2k / 2 + 2k are the +pi/2 / -pi/2 shifts of
    parameter k. Shape (1 + 2 * len(params), N).
    """
    pts, prm = _as_inputs(points, params)
    if active_backend() == "numba":
        return _scores_shifted_njit(pts, prm)
    return _scores_shifted_numpy(pts, prm)
