"""Operators T = T0 + T1 e1 + T2 e2 + T3 e3 with commuting real components.

The S-spectrum of such an operator is computed from the real quadratic
pencil s^2 I - 2 s T0 + K, K = T0^2 + T1^2 + T2^2 + T3^2, by companion
linearization to a 2n x 2n real matrix followed by a dense nonsymmetric
eigenvalue computation.  Conjugate eigenvalue pairs u +- iv collapse to
one sphere [u + J v]; real eigenvalues give spheres with v = 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import CommutationError, EigenvalueError, InputError
from .qlinalg import QuatMatrix
from .quat import Quaternion, SpectralSphere

__all__ = [
    "CommutingOperator",
    "conj_op",
    "gram",
    "qcs_op",
    "s_spectrum",
    "load_operator",
    "save_operator",
]

COMMUTATION_RTOL = 1e-10
PAIRING_RTOL = 1e-8
REAL_SPECTRUM_RTOL = 1e-8


@dataclass(frozen=True)
class CommutingOperator:
    """Finite-dimensional operator with pairwise commuting components."""

    T0: np.ndarray
    T1: np.ndarray
    T2: np.ndarray
    T3: np.ndarray
    n: int = field(init=False)

    def __post_init__(self):
        comps = []
        n = None
        for name in ("T0", "T1", "T2", "T3"):
            M = np.asarray(getattr(self, name), dtype=np.float64)
            if M.ndim != 2 or M.shape[0] != M.shape[1]:
                raise InputError(f"component {name} must be a square matrix")
            if n is None:
                n = M.shape[0]
            elif M.shape[0] != n:
                raise InputError("all components must share one dimension")
            M = M.copy()
            M.setflags(write=False)
            object.__setattr__(self, name, M)
            comps.append(M)
        object.__setattr__(self, "n", n)
        _check_commutation(comps)

    @property
    def components(self):
        return (self.T0, self.T1, self.T2, self.T3)

    def norm(self) -> float:
        return float(np.sqrt(sum(np.sum(C * C) for C in self.components)))

    def conjugate(self) -> "CommutingOperator":
        return CommutingOperator(self.T0, -self.T1, -self.T2, -self.T3)

    def as_matrix(self) -> QuatMatrix:
        """T as a quaternion matrix acting by left multiplication."""
        return QuatMatrix(np.stack(self.components, axis=-1))

    def vector_part(self) -> QuatMatrix:
        """underline(T) = T1 e1 + T2 e2 + T3 e3 as a quaternion matrix."""
        zero = np.zeros_like(self.T0)
        return QuatMatrix(np.stack((zero, self.T1, self.T2, self.T3), axis=-1))

    @staticmethod
    def zero(n: int) -> "CommutingOperator":
        z = np.zeros((n, n))
        return CommutingOperator(z, z, z, z)

    @staticmethod
    def from_quaternion(q: Quaternion) -> "CommutingOperator":
        """The 1 x 1 operator given by a quaternion scalar."""
        return CommutingOperator([[q.w]], [[q.x]], [[q.y]], [[q.z]])

    def has_zero_e3(self, rtol: float = 1e-10) -> bool:
        scale = max(self.norm(), 1.0)
        return float(np.linalg.norm(self.T3)) <= rtol * scale

    def has_real_component_spectra(self, rtol: float = REAL_SPECTRUM_RTOL) -> bool:
        """Whether every component matrix has (numerically) real spectrum."""
        for C in self.components:
            scale = max(float(np.linalg.norm(C)), 1.0)
            if np.max(np.abs(np.linalg.eigvals(C).imag)) > rtol * scale:
                return False
        return True


def _check_commutation(comps):
    norms = [float(np.linalg.norm(C)) for C in comps]
    for i in range(4):
        for j in range(i + 1, 4):
            bound = COMMUTATION_RTOL * norms[i] * norms[j]
            defect = float(np.linalg.norm(comps[i] @ comps[j] - comps[j] @ comps[i]))
            if defect > bound:
                raise CommutationError(
                    f"components T{i} and T{j} do not commute: "
                    f"defect {defect:.3e} exceeds {bound:.3e}")


def conj_op(T: CommutingOperator) -> CommutingOperator:
    """conj(T): flips the sign of the three vector components."""
    return T.conjugate()


def gram(T: CommutingOperator) -> np.ndarray:
    """K = T0^2 + T1^2 + T2^2 + T3^2, the T*conj(T) coefficient of the
    quadratic pencil (valid under the commutation invariant)."""
    return sum(C @ C for C in T.components)


def qcs_op(T: CommutingOperator, s: Quaternion) -> QuatMatrix:
    """The pseudo S-resolvent pencil s^2 I - s (T + conj(T)) + T conj(T).

    T + conj(T) = 2 T0 and T conj(T) = gram(T) are real matrices, so the
    quaternion scalar s acts on real entries and the side is immaterial.
    """
    n = T.n
    out = np.zeros((n, n, 4))
    out[..., 0] = gram(T)
    s2 = (s * s).as_array()
    sa = s.as_array()
    two_t0 = 2.0 * T.T0
    for c in range(4):
        out[..., c] -= sa[c] * two_t0
    out[np.arange(n), np.arange(n), :] += s2
    return QuatMatrix(out)


def qcs_pencil_at(T: CommutingOperator, s_arr: np.ndarray) -> np.ndarray:
    """Batched pencil evaluation: s_arr (N, 4) -> (N, n, n, 4)."""
    n = T.n
    N = s_arr.shape[0]
    out = np.zeros((N, n, n, 4))
    out[..., 0] = gram(T)
    two_t0 = 2.0 * T.T0
    out -= s_arr[:, None, None, :] * two_t0[None, :, :, None]
    s2 = np.stack([
        s_arr[:, 0] ** 2 - s_arr[:, 1] ** 2 - s_arr[:, 2] ** 2 - s_arr[:, 3] ** 2,
        2 * s_arr[:, 0] * s_arr[:, 1],
        2 * s_arr[:, 0] * s_arr[:, 2],
        2 * s_arr[:, 0] * s_arr[:, 3],
    ], axis=-1)
    idx = np.arange(n)
    out[:, idx, idx, :] += s2[:, None, :]
    return out


def s_spectrum(T: CommutingOperator, pairing_rtol: float = PAIRING_RTOL):
    """All spheres of the S-spectrum, sorted by (u, v).

    Roots of det(s^2 I - 2 s T0 + K) come from the 2n x 2n companion
    matrix [[0, I], [-K, 2 T0]].  Conjugate pairs are matched within
    |lam - conj(mu)| <= rtol (1 + |lam|) and equal spheres are merged
    with their multiplicities summed.
    """
    n = T.n
    K = gram(T)
    companion = np.block([
        [np.zeros((n, n)), np.eye(n)],
        [-K, 2.0 * T.T0],
    ])
    try:
        roots = np.linalg.eigvals(companion)
    except np.linalg.LinAlgError as exc:
        raise EigenvalueError(f"eigenvalue iteration failed: {exc}") from exc

    points = []
    tol = lambda lam: pairing_rtol * (1.0 + abs(lam))
    real_mask = np.abs(roots.imag) <= pairing_rtol * (1.0 + np.abs(roots))
    for lam in roots[real_mask]:
        points.append((float(lam.real), 0.0))
    upper = sorted(roots[~real_mask & (roots.imag > 0)], key=lambda z: (z.real, z.imag))
    lower = list(roots[~real_mask & (roots.imag < 0)])
    for lam in upper:
        match = None
        for i, mu in enumerate(lower):
            if abs(lam - np.conj(mu)) <= tol(lam):
                match = i
                break
        if match is None:
            raise EigenvalueError(f"unpaired complex root {lam}")
        lower.pop(match)
        points.append((float(lam.real), float(lam.imag)))
    if lower:
        raise EigenvalueError(f"unpaired complex roots {lower}")

    points.sort()
    spheres = []
    for u, v in points:
        if spheres:
            last = spheres[-1]
            t = pairing_rtol * (1.0 + abs(u) + v)
            if abs(last.u - u) <= t and abs(last.v - v) <= t:
                spheres[-1] = SpectralSphere(last.u, last.v, last.multiplicity + 1)
                continue
        spheres.append(SpectralSphere(u, v, 1))
    return spheres


# ---------------------------------------------------------------------------
# file format: {"n": int, "T0": [[...]], ...}; omitted components are zero


def operator_from_dict(doc) -> CommutingOperator:
    if not isinstance(doc, dict):
        raise InputError("operator document must be a JSON object")
    n = doc.get("n")
    comps = {}
    for name in ("T0", "T1", "T2", "T3"):
        if name in doc:
            M = np.asarray(doc[name], dtype=np.float64)
            if M.ndim != 2 or M.shape[0] != M.shape[1]:
                raise InputError(f"component {name} must be a square matrix")
            comps[name] = M
            if n is None:
                n = M.shape[0]
    if n is None:
        raise InputError("operator document needs 'n' or at least one component")
    n = int(n)
    zero = np.zeros((n, n))
    for name in ("T0", "T1", "T2", "T3"):
        comps.setdefault(name, zero)
        if comps[name].shape[0] != n:
            raise InputError(f"component {name} has dimension "
                             f"{comps[name].shape[0]}, expected {n}")
    try:
        return CommutingOperator(comps["T0"], comps["T1"], comps["T2"], comps["T3"])
    except CommutationError:
        raise
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def operator_to_dict(T: CommutingOperator) -> dict:
    return {
        "n": T.n,
        "T0": T.T0.tolist(),
        "T1": T.T1.tolist(),
        "T2": T.T2.tolist(),
        "T3": T.T3.tolist(),
    }


def load_operator(path) -> CommutingOperator:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read operator file {path}: {exc}") from exc
    return operator_from_dict(doc)


def save_operator(T: CommutingOperator, path) -> None:
    with open(path, "w") as fh:
        json.dump(operator_to_dict(T), fh)
