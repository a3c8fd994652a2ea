"""Exact 2x2 algebra for rotations and the single-slip constraint set.

The constraint set consists of the matrices F with det F = 1 and |F e1| = 1,
which are exactly the products R(I + gamma e1 (x) e2) of a rotation and a
simple shear along e1.  All operations are pure functions on immutable
values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, NotInMe1

DEFAULT_ME1_TOL = 1e-9

E1 = np.array([1.0, 0.0])
E2 = np.array([0.0, 1.0])


def normalize_angle(theta: float) -> float:
    """Reduce an angle to [-pi, pi)."""
    t = math.fmod(theta + math.pi, 2.0 * math.pi)
    if t < 0.0:
        t += 2.0 * math.pi
    return t - math.pi


@dataclass(frozen=True)
class Mat2:
    """2x2 real matrix, row-major entries, finite by construction."""

    a11: float
    a12: float
    a21: float
    a22: float

    def __post_init__(self):
        for v in (self.a11, self.a12, self.a21, self.a22):
            if not math.isfinite(v):
                raise InvalidInput(f"non-finite matrix entry {v!r}")

    @staticmethod
    def from_array(arr) -> "Mat2":
        a = np.asarray(arr, dtype=float)
        if a.shape != (2, 2):
            raise InvalidInput(f"expected shape (2, 2), got {a.shape}")
        return Mat2(a[0, 0], a[0, 1], a[1, 0], a[1, 1])

    @staticmethod
    def identity() -> "Mat2":
        return Mat2(1.0, 0.0, 0.0, 1.0)

    def as_array(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a21, self.a22]])

    def det(self) -> float:
        return self.a11 * self.a22 - self.a12 * self.a21

    def frobenius(self) -> float:
        return math.sqrt(self.a11**2 + self.a12**2 + self.a21**2 + self.a22**2)

    def apply(self, v) -> np.ndarray:
        return self.as_array() @ np.asarray(v, dtype=float)

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2.from_array(self.as_array() @ other.as_array())

    def __sub__(self, other: "Mat2") -> "Mat2":
        return Mat2.from_array(self.as_array() - other.as_array())

    def __add__(self, other: "Mat2") -> "Mat2":
        return Mat2.from_array(self.as_array() + other.as_array())


@dataclass(frozen=True)
class SlipDecomposition:
    """Rotation angle in [-pi, pi) and slip amount of F = R(I + gamma e1 (x) e2)."""

    angle: float
    gamma: float

    def recompose(self) -> Mat2:
        return Mat2.from_array(
            rotation_from_angle(self.angle).as_array() @ shear(self.gamma).as_array()
        )


def rotation_from_angle(theta: float) -> Mat2:
    """Counterclockwise rotation [[cos t, -sin t], [sin t, cos t]]."""
    if not math.isfinite(theta):
        raise InvalidInput(f"non-finite angle {theta!r}")
    c, s = math.cos(theta), math.sin(theta)
    return Mat2(c, -s, s, c)


def shear(gamma: float) -> Mat2:
    """Simple shear I + gamma e1 (x) e2."""
    return Mat2(1.0, gamma, 0.0, 1.0)


def in_me1(f: Mat2, tol: float = DEFAULT_ME1_TOL) -> bool:
    """Membership test: |det F - 1| <= tol and ||F e1| - 1| <= tol."""
    if tol <= 0.0:
        raise InvalidInput("tol must be positive")
    col1 = math.hypot(f.a11, f.a21)
    return abs(f.det() - 1.0) <= tol and abs(col1 - 1.0) <= tol


def decompose_me1(f: Mat2, tol: float = DEFAULT_ME1_TOL) -> SlipDecomposition:
    """Split F = R(I + gamma e1 (x) e2) into angle and slip amount.

    The angle is the angle of the unit vector F e1; the slip is the e1
    component of R^T F e2.
    """
    if not in_me1(f, tol):
        raise NotInMe1(f"matrix {f} violates det/column constraints at tol={tol}")
    theta = math.atan2(f.a21, f.a11)
    c, s = math.cos(theta), math.sin(theta)
    gamma = c * f.a12 + s * f.a22
    return SlipDecomposition(normalize_angle(theta), gamma)


def rank_one_defect(f: Mat2, g: Mat2, tangent) -> float:
    """|(F - G) tau| for a unit interface tangent tau.

    Zero means F and G are rank-one connected across an interface with that
    tangent, i.e. F - G = a (x) n with n perpendicular to tau.
    """
    t = np.asarray(tangent, dtype=float)
    if abs(math.hypot(t[0], t[1]) - 1.0) > 1e-12:
        raise InvalidInput("tangent must be a unit vector")
    d = (f - g).apply(t)
    return math.hypot(d[0], d[1])


def optimal_translation_gap(a) -> float:
    """Exact minimum over b of the line integral of |t a + b| for t in [0, 1].

    The minimum equals |a|/4; the minimizing translation centers the segment
    and shifts it perpendicular to a.
    """
    v = np.asarray(a, dtype=float)
    if not np.all(np.isfinite(v)):
        raise InvalidInput("vector must be finite")
    return math.hypot(v[0], v[1]) / 4.0


def intrinsic_slip_magnitude(f: Mat2) -> float:
    """sqrt(|F|^2 - 2 det F); equals |gamma| on the constraint set.

    Evaluated through the identity |F|^2 - 2 det F = (a11-a22)^2 + (a12+a21)^2,
    which avoids the cancellation of the naive formula near rotations.
    """
    return math.hypot(f.a11 - f.a22, f.a12 + f.a21)


# Vectorized helpers on stacks of shape (n, 2, 2); used by the field modules.

def batch_det(stack: np.ndarray) -> np.ndarray:
    return stack[:, 0, 0] * stack[:, 1, 1] - stack[:, 0, 1] * stack[:, 1, 0]


def batch_col1_norm(stack: np.ndarray) -> np.ndarray:
    return np.hypot(stack[:, 0, 0], stack[:, 1, 0])


def batch_angle(stack: np.ndarray) -> np.ndarray:
    return np.arctan2(stack[:, 1, 0], stack[:, 0, 0])


def batch_gamma(stack: np.ndarray) -> np.ndarray:
    """Slip amounts of a stack of constraint-set matrices."""
    theta = batch_angle(stack)
    return np.cos(theta) * stack[:, 0, 1] + np.sin(theta) * stack[:, 1, 1]


def batch_frobenius(stack: np.ndarray) -> np.ndarray:
    return np.sqrt(np.einsum("nij,nij->n", stack, stack))
