"""Resolvent kernels of the four functional calculi.

All kernels are built from the pseudo S-resolvent Q_{c,s}(T)^{-1}, the
inverse of the pencil s^2 I - s(T + conj(T)) + T conj(T):

    S_L^-1(s,T)  = (sI - conj(T)) Q^-1          S_R^-1 = Q^-1 (sI - conj(T))
    F_L(s,T)     = -4 (sI - conj(T)) Q^-2       F_R    = -4 Q^-2 (sI - conj(T))
    P2_L(s,T)    = -F_L(s,T) s + T0 F_L(s,T)    P2_R   = -s F_R(s,T) + T0 F_R(s,T)

The P2 kernels are the conjugate-Fueter images of the Cauchy kernels
and drive the order-2 polyanalytic calculus; F produces the Laplacian
image, and Q^-1 itself the harmonic one.  One batched evaluation
factors the pencil once per node and derives Q^-2 from the computed
inverse, which is what the quadrature loop leans on.

Scalar (n = 1) closed forms of the same kernels are provided separately
as the function-theory oracles.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .errors import DivergenceError
from .operators import CommutingOperator, qcs_pencil_at
from .qlinalg import (QuatMatrix, eye_arr, matmul, real_left, scal_left,
                      scal_right, solve_arr)
from .quat import Quaternion, qinv, qs_poly

__all__ = [
    "KernelKind",
    "kernel",
    "kernel_at_nodes",
    "kernel_fn",
    "p2_series",
    "s_series",
    "cauchy_kernel_left",
    "cauchy_kernel_right",
    "f_kernel_left",
    "f_kernel_right",
    "p2_kernel_left",
    "p2_kernel_right",
    "pseudo_kernel",
]


class KernelKind(Enum):
    QCS_INV = "qcs_inv"
    S_LEFT = "s_left"
    S_RIGHT = "s_right"
    F_LEFT = "f_left"
    F_RIGHT = "f_right"
    P2_LEFT = "p2_left"
    P2_RIGHT = "p2_right"


def kernel_at_nodes(kind: KernelKind, T: CommutingOperator, s_arr: np.ndarray) -> np.ndarray:
    """Evaluate one kernel kind at a batch of points s_arr (N, 4).

    Returns an (N, n, n, 4) stack.  Raises SingularMatrixError when any
    node sits on (or numerically grazes) the S-spectrum.
    """
    kind = KernelKind(kind)
    s_arr = np.asarray(s_arr, dtype=np.float64)
    squeeze = s_arr.ndim == 1
    if squeeze:
        s_arr = s_arr[None, :]
    n = T.n
    Q = qcs_pencil_at(T, s_arr)
    Qinv = solve_arr(Q, np.broadcast_to(eye_arr(n), Q.shape))
    if kind is KernelKind.QCS_INV:
        out = Qinv
    else:
        cbar = np.stack((T.T0, -T.T1, -T.T2, -T.T3), axis=-1)
        B = np.broadcast_to(-cbar, Qinv.shape).copy()
        idx = np.arange(n)
        B[:, idx, idx, :] += s_arr[:, None, :]
        if kind is KernelKind.S_LEFT:
            out = matmul(B, Qinv)
        elif kind is KernelKind.S_RIGHT:
            out = matmul(Qinv, B)
        else:
            Qinv2 = matmul(Qinv, Qinv)
            if kind is KernelKind.F_LEFT:
                out = -4.0 * matmul(B, Qinv2)
            elif kind is KernelKind.F_RIGHT:
                out = -4.0 * matmul(Qinv2, B)
            elif kind is KernelKind.P2_LEFT:
                FL = -4.0 * matmul(B, Qinv2)
                out = -scal_right(FL, s_arr) + real_left(T.T0, FL)
            else:
                FR = -4.0 * matmul(Qinv2, B)
                out = -scal_left(s_arr, FR) + real_left(T.T0, FR)
    return out[0] if squeeze else out


def kernel(kind: KernelKind, T: CommutingOperator, s: Quaternion) -> QuatMatrix:
    """Kernel value at one point s in the S-resolvent set of T."""
    return QuatMatrix(kernel_at_nodes(kind, T, s.as_array()))


class kernel_fn:
    """Callable s -> kernel(kind, T, s) with a batched node fast path."""

    def __init__(self, kind: KernelKind, T: CommutingOperator):
        self.kind = KernelKind(kind)
        self.T = T

    @property
    def n(self) -> int:
        return self.T.n

    def __call__(self, s: Quaternion) -> QuatMatrix:
        return kernel(self.kind, self.T, s)

    def at_nodes(self, s_arr: np.ndarray) -> np.ndarray:
        return kernel_at_nodes(self.kind, self.T, s_arr)


# ---------------------------------------------------------------------------
# truncated series oracles


def _check_series_domain(T: CommutingOperator, s: Quaternion):
    tnorm = T.as_matrix().norm()
    if tnorm >= s.norm():
        raise DivergenceError(
            f"series requires |s| > ||T||; got |s| = {s.norm():.3e}, "
            f"||T|| = {tnorm:.3e}")


def p2_series(T: CommutingOperator, s: Quaternion, N: int,
              side: str = "left") -> QuatMatrix:
    """Partial sum of the P2 kernel expansion through order N:

        2 sum_{n=1..N} (n T^(n-1) + sum_{k=1..n} T^(n-k) conj(T)^(k-1)) s^(-1-n)

    with the scalar powers on the left for side='right'."""
    _check_series_domain(T, s)
    n = T.n
    acc = QuatMatrix.zeros(n)
    if N < 1:
        return acc
    Mt = T.as_matrix()
    Mtbar = T.conjugate().as_matrix()
    s_inv = qinv(s)
    spow = s_inv * s_inv
    tpow = [QuatMatrix.identity(n)]
    tbarpow = [QuatMatrix.identity(n)]
    for m in range(1, N + 1):
        C = tpow[m - 1] * float(m)
        for k in range(1, m + 1):
            C = C + tpow[m - k] @ tbarpow[k - 1]
        C = C * 2.0
        acc = acc + (C.rmul(spow) if side == "left" else C.lmul(spow))
        spow = spow * s_inv
        tpow.append(tpow[-1] @ Mt)
        tbarpow.append(tbarpow[-1] @ Mtbar)
    return acc


def s_series(T: CommutingOperator, s: Quaternion, N: int,
             side: str = "left") -> QuatMatrix:
    """Partial sum sum_{m=0..N} T^m s^(-1-m) (scalars left for side='right')."""
    _check_series_domain(T, s)
    n = T.n
    Mt = T.as_matrix()
    acc = QuatMatrix.zeros(n)
    tpow = QuatMatrix.identity(n)
    spow = qinv(s)
    s_inv = spow
    for m in range(N + 1):
        acc = acc + (tpow.rmul(spow) if side == "left" else tpow.lmul(spow))
        spow = spow * s_inv
        tpow = tpow @ Mt
    return acc


# ---------------------------------------------------------------------------
# scalar function-theory kernels (the n = 1 oracles)


def pseudo_kernel(s: Quaternion, q: Quaternion) -> Quaternion:
    """Commutative pseudo Cauchy kernel (s^2 - 2 Re(q) s + |q|^2)^{-1}."""
    return qinv(qs_poly(q, s))


def cauchy_kernel_left(s: Quaternion, q: Quaternion) -> Quaternion:
    return (s - q.conjugate()) * pseudo_kernel(s, q)


def cauchy_kernel_right(s: Quaternion, q: Quaternion) -> Quaternion:
    return pseudo_kernel(s, q) * (s - q.conjugate())


def f_kernel_left(s: Quaternion, q: Quaternion) -> Quaternion:
    k = pseudo_kernel(s, q)
    return (s - q.conjugate()) * k * k * -4.0


def f_kernel_right(s: Quaternion, q: Quaternion) -> Quaternion:
    k = pseudo_kernel(s, q)
    return k * k * (s - q.conjugate()) * -4.0


def p2_kernel_left(s: Quaternion, q: Quaternion) -> Quaternion:
    fl = f_kernel_left(s, q)
    return -(fl * s) + fl * q.w


def p2_kernel_right(s: Quaternion, q: Quaternion) -> Quaternion:
    fr = f_kernel_right(s, q)
    return -(s * fr) + fr * q.w
