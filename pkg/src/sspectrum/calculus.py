"""The four functional calculi and their Riesz projectors.

Each calculus pairs a stem f with one kernel over a contour enclosing
the whole S-spectrum:

    kind   prefactor   kernel          semantics (left stems)
    S      1/(2 pi)    S_L^-1          f(T)
    Q      -1/pi       Q_{c,s}^-1      (D f)(T)
    P2     1/(2 pi)    P2_L            (Dbar f)(T)
    F      1/(2 pi)    F_L             (Delta f)(T)

Right stems use the mirrored kernels and the right pairing.  The
closed-form moments below are the quadrature-free values the calculi
must reproduce on monomial stems; for S, Q and F the moment of index m
is the value on the stem q^m, while the P2 moment of index m is the
integral against s^(m+1), so it matches the stem q^(m+1) (the constant
stem maps to zero).  ``stem_moment`` resolves that indexing.

Riesz projectors integrate each kernel against a fixed monomial around
one spectral cluster:

    kind   prefactor    monomial
    S      1/(2 pi)     s^0
    Q      1/(2 pi)     s^1
    P2     1/(8 pi)     s^1
    F      -1/(8 pi)    s^2

For the Q, P2 and F kinds the projector theory requires T3 = 0 and
components with real spectrum; violations raise rather than silently
returning a non-projector.
"""

from __future__ import annotations

import math
from enum import Enum

from .contour import Contour, integrate
from .errors import GeometryError, HypothesisError, PreconditionError
from .kernels import KernelKind, kernel_fn
from .operators import CommutingOperator, s_spectrum
from .qlinalg import QuatMatrix
from .slicefn import SlicePoly

__all__ = [
    "CalculusKind",
    "apply_calculus",
    "apply_stems",
    "moment_closed_form",
    "stem_moment",
    "riesz_projector",
]


class CalculusKind(Enum):
    S = "s"
    Q = "q"
    P2 = "p2"
    F = "f"


_PREFACTOR = {
    CalculusKind.S: 1.0 / (2.0 * math.pi),
    CalculusKind.Q: -1.0 / math.pi,
    CalculusKind.P2: 1.0 / (2.0 * math.pi),
    CalculusKind.F: 1.0 / (2.0 * math.pi),
}

_KERNELS = {
    (CalculusKind.S, "left"): KernelKind.S_LEFT,
    (CalculusKind.S, "right"): KernelKind.S_RIGHT,
    (CalculusKind.Q, "left"): KernelKind.QCS_INV,
    (CalculusKind.Q, "right"): KernelKind.QCS_INV,
    (CalculusKind.P2, "left"): KernelKind.P2_LEFT,
    (CalculusKind.P2, "right"): KernelKind.P2_RIGHT,
    (CalculusKind.F, "left"): KernelKind.F_LEFT,
    (CalculusKind.F, "right"): KernelKind.F_RIGHT,
}

_PROJECTOR = {
    CalculusKind.S: (1.0 / (2.0 * math.pi), KernelKind.S_LEFT, 0),
    CalculusKind.Q: (1.0 / (2.0 * math.pi), KernelKind.QCS_INV, 1),
    CalculusKind.P2: (1.0 / (8.0 * math.pi), KernelKind.P2_LEFT, 1),
    CalculusKind.F: (-1.0 / (8.0 * math.pi), KernelKind.F_LEFT, 2),
}


def _check_encloses(c: Contour, T: CommutingOperator, full: bool):
    """Contour boundaries must avoid the spectrum; with full=True every
    sphere must additionally lie inside."""
    spheres = s_spectrum(T)
    enclosed = []
    for sp in spheres:
        for (u, v) in {(sp.u, sp.v), (sp.u, -sp.v)}:
            near = 1e-9 * (1.0 + math.hypot(u, v))
            inside = c.contains_point(u, v, clearance=near)
            on_boundary = not inside and any(
                abs(math.hypot(u - cu, v - cv) - r) < near
                for (cu, cv, r) in c.plane_circles())
            if on_boundary:
                raise GeometryError(
                    f"contour boundary passes through spectrum point ({u}, {v})")
            if full and not inside:
                raise GeometryError(
                    f"contour does not enclose spectrum point ({u}, {v})")
        enclosed.append(c.contains_point(sp.u, sp.v, clearance=0.0))
    return spheres, enclosed


def apply_calculus(kind: CalculusKind, f: SlicePoly, T: CommutingOperator,
                   c: Contour) -> QuatMatrix:
    """Evaluate one calculus: prefactor times the pairing of the stem f
    with the kind's kernel over a contour enclosing all of sigma_S(T)."""
    kind = CalculusKind(kind)
    if c.components:
        _check_encloses(c, T, full=True)
    K = kernel_fn(_KERNELS[(kind, f.side)], T)
    out = integrate(c, K, f.evaluate, side=f.side, n=T.n)
    return out * _PREFACTOR[kind]


def apply_stems(kind: CalculusKind, stems, T: CommutingOperator,
                c: Contour):
    """Evaluate one calculus on several stems of a common side, reusing
    a single kernel evaluation over the contour nodes."""
    stems = list(stems)
    if not stems:
        return []
    side = stems[0].side
    if any(g.side != side for g in stems):
        raise PreconditionError("apply_stems needs a common stem side")
    kind = CalculusKind(kind)
    if c.components:
        _check_encloses(c, T, full=True)
    kvals = None
    K = kernel_fn(_KERNELS[(kind, side)], T)

    class _Shared:
        n = T.n

        def at_nodes(self, s_arr):
            nonlocal kvals
            if kvals is None:
                kvals = K.at_nodes(s_arr)
            return kvals

    shared = _Shared()
    return [integrate(c, shared, g.evaluate, side=side, n=T.n) * _PREFACTOR[kind]
            for g in stems]


def moment_closed_form(kind: CalculusKind, T: CommutingOperator, m: int) -> QuatMatrix:
    """Quadrature-free moment of index m >= 0.

    S: T^m
    Q: -2 sum_{k=1..m} T^(m-k) conj(T)^(k-1)
    F: -4 sum_{k=1..m-1} (m-k) T^(m-1-k) conj(T)^(k-1)
    P2: 2 ((m+1) T^m + sum_{k=0..m} T^(m-k) conj(T)^k)

    All coefficients are real, so the same matrix serves left stems
    (coefficient on the right) and right stems (coefficient on the left).
    """
    kind = CalculusKind(kind)
    if m < 0:
        raise PreconditionError("moment index must be non-negative")
    n = T.n
    Mt = T.as_matrix()
    Mtbar = T.conjugate().as_matrix()
    tpow = [QuatMatrix.identity(n)]
    tbarpow = [QuatMatrix.identity(n)]
    for _ in range(m + 1):
        tpow.append(tpow[-1] @ Mt)
        tbarpow.append(tbarpow[-1] @ Mtbar)

    if kind is CalculusKind.S:
        return tpow[m]
    acc = QuatMatrix.zeros(n)
    if kind is CalculusKind.Q:
        for k in range(1, m + 1):
            acc = acc + tpow[m - k] @ tbarpow[k - 1]
        return acc * -2.0
    if kind is CalculusKind.F:
        for k in range(1, m):
            acc = acc + (tpow[m - 1 - k] @ tbarpow[k - 1]) * float(m - k)
        return acc * -4.0
    acc = tpow[m] * float(m + 1)
    for k in range(0, m + 1):
        acc = acc + tpow[m - k] @ tbarpow[k]
    return acc * 2.0


def stem_moment(kind: CalculusKind, T: CommutingOperator, m: int) -> QuatMatrix:
    """Closed form of apply_calculus(kind, q^m, T, .).

    Identical to moment_closed_form except for the P2 kind, whose moment
    indexing is shifted by one: the stem q^m maps to the P2 moment of
    index m - 1, and the constant stem maps to zero.
    """
    kind = CalculusKind(kind)
    if kind is CalculusKind.P2:
        if m == 0:
            return QuatMatrix.zeros(T.n)
        return moment_closed_form(kind, T, m - 1)
    return moment_closed_form(kind, T, m)


def riesz_projector(kind: CalculusKind, T: CommutingOperator, c: Contour,
                    enforce_hypotheses: bool = True) -> QuatMatrix:
    """Spectral projector of the requested kind over the contour c.

    c must enclose a spectral subset at positive distance from the rest.
    The Q, P2 and F kinds additionally require T3 = 0 and components
    with real spectrum.
    """
    kind = CalculusKind(kind)
    if enforce_hypotheses and kind is not CalculusKind.S:
        if not T.has_zero_e3():
            raise HypothesisError(
                f"{kind.value} projector requires a vanishing e3 component")
        if not T.has_real_component_spectra():
            raise HypothesisError(
                f"{kind.value} projector requires components with real spectrum")
    if not c.components:
        return QuatMatrix.zeros(T.n)
    _check_encloses(c, T, full=False)
    prefactor, kk, degree = _PROJECTOR[kind]
    K = kernel_fn(kk, T)
    monomial = lambda s: s ** degree
    return integrate(c, K, monomial, side="left", n=T.n) * prefactor
