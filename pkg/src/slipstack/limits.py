"""Limiting deformations u(x) = R(x2) x + psi(x2) and their classification.

The rotation profile is piecewise constant (its derivative vanishes a.e. on
the strongest classes); psi is a 1D BV function with two components.  Class
tags form a chain: every representable map is layered-rigid (B); A adds the
incompressibility condition psi' . R e2 = 0; A_SBV_INF additionally forbids
staircase parts; A_PARALLEL requires one global rotation with all singular
amplitudes parallel to R e1.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import bv1d
from .algebra import Mat2, rotation_from_angle
from .bv1d import BVFunction1D, RotationProfile1D, Staircase
from .errors import InfiniteJumps, InvalidInput
from .quadrature import gauss_interval, integral_norm_affine, polygon_integral

_CLASS_TOL = 1e-10

E1 = np.array([1.0, 0.0])
E2 = np.array([0.0, 1.0])


class ClassTag(enum.Enum):
    B = "B"
    A = "A"
    A_SBV_INF = "A_SBV_INF"
    A_PARALLEL = "A_PARALLEL"


_STRENGTH = [ClassTag.B, ClassTag.A, ClassTag.A_SBV_INF, ClassTag.A_PARALLEL]


@dataclass(frozen=True)
class Domain2D:
    """Open axis-aligned rectangle (c, d) x (a, b)."""

    x1_range: tuple[float, float]
    x2_range: tuple[float, float]

    def __post_init__(self):
        c, d = self.x1_range
        a, b = self.x2_range
        if not (c < d and a < b):
            raise InvalidInput("domain rectangle must be nonempty")

    @property
    def area(self) -> float:
        return (self.x1_range[1] - self.x1_range[0]) * (
            self.x2_range[1] - self.x2_range[0]
        )

    @property
    def width(self) -> float:
        return self.x1_range[1] - self.x1_range[0]

    def corners(self) -> np.ndarray:
        c, d = self.x1_range
        a, b = self.x2_range
        return np.array([[c, a], [d, a], [d, b], [c, b]])


def canonical_domain() -> Domain2D:
    return Domain2D((0.0, 1.0), (-1.0, 1.0))


@dataclass(frozen=True, eq=False)
class LimitDeformation:
    """u(x) = R(x2) x + psi(x2) with a class tag."""

    domain: Domain2D
    rotation: RotationProfile1D
    psi: BVFunction1D
    class_tag: ClassTag

    def __post_init__(self):
        a, b = self.domain.x2_range
        ra, rb = self.rotation.domain
        pa, pb = self.psi.domain
        if max(abs(ra - a), abs(rb - b), abs(pa - a), abs(pb - b)) > 1e-12:
            raise InvalidInput("rotation and psi profiles must span the x2-range")
        if self.psi.dim != 2:
            raise InvalidInput("psi must be vector-valued with 2 components")

    def value(self, x1, x2) -> np.ndarray:
        r = self.rotation.rotation_at(x2)
        return r @ np.array([x1, x2]) + self.psi.value(x2)

    def gamma_profile(self):
        """Slip amount psi' . R e1 on each AC piece; pieces as (t0, t1, gamma)."""
        out = []
        slopes = self.psi.ac_slopes()
        for k in range(len(self.psi.ac_breaks) - 1):
            t0, t1 = float(self.psi.ac_breaks[k]), float(self.psi.ac_breaks[k + 1])
            cuts = [t0] + [
                t for t in self.rotation.breaks if t0 < t < t1
            ] + [t1]
            for s0, s1 in zip(cuts[:-1], cuts[1:]):
                r = self.rotation.rotation_at(0.5 * (s0 + s1))
                out.append((s0, s1, float(slopes[k] @ (r @ E1))))
        return out

    def mean(self) -> np.ndarray:
        """Exact integral of u over the rectangle divided by its area."""
        c, d = self.domain.x1_range
        total = np.zeros(2)
        for k in range(len(self.rotation.angles)):
            t0, t1 = self.rotation.breaks[k], self.rotation.breaks[k + 1]
            r = rotation_from_angle(float(self.rotation.angles[k])).as_array()
            mom = np.array(
                [0.5 * (d * d - c * c) * (t1 - t0), 0.5 * (t1 * t1 - t0 * t0) * (d - c)]
            )
            total += r @ mom
        total += self.domain.width * self.psi.integral()
        return total / self.domain.area


def classify(
    domain: Domain2D, rotation: RotationProfile1D, psi: BVFunction1D
) -> ClassTag:
    """Strongest class tag whose invariants hold for the candidate."""
    LimitDeformation(domain, rotation, psi, ClassTag.B)  # structural validation

    in_a = True
    slopes = psi.ac_slopes()
    for k in range(len(psi.ac_breaks) - 1):
        t0, t1 = float(psi.ac_breaks[k]), float(psi.ac_breaks[k + 1])
        cuts = [t0] + [t for t in rotation.breaks if t0 < t < t1] + [t1]
        for s0, s1 in zip(cuts[:-1], cuts[1:]):
            r = rotation.rotation_at(0.5 * (s0 + s1))
            if abs(float(slopes[k] @ (r @ E2))) > _CLASS_TOL * max(
                1.0, float(np.linalg.norm(slopes[k]))
            ):
                in_a = False
    if not in_a:
        return ClassTag.B

    def parallel_to(vec, direction) -> bool:
        cross = vec[0] * direction[1] - vec[1] * direction[0]
        return abs(cross) <= _CLASS_TOL * max(1.0, float(np.linalg.norm(vec)))

    if rotation.is_constant():
        re1 = rotation.rotation_at(rotation.breaks[0]) @ E1
        ok = all(parallel_to(amp, re1) for _, amp in psi.jumps)
        if psi.staircase is not None:
            ok = ok and parallel_to(psi.staircase.rise, re1)
        if ok:
            return ClassTag.A_PARALLEL
    if psi.staircase is None:
        return ClassTag.A_SBV_INF
    return ClassTag.A


def make_limit(domain: Domain2D, rotation: RotationProfile1D, psi: BVFunction1D) -> LimitDeformation:
    return LimitDeformation(domain, rotation, psi, classify(domain, rotation, psi))


def single_jump_limit(
    angle_minus: float,
    angle_plus: float,
    psi_minus,
    psi_plus,
    jump_at: float = 0.0,
    domain: Optional[Domain2D] = None,
) -> LimitDeformation:
    """Two rigid half-planes meeting along the horizontal line x2 = jump_at."""
    dom = domain or canonical_domain()
    a, b = dom.x2_range
    if not a < jump_at < b:
        raise InvalidInput("jump location must be inside the x2-range")
    rotation = RotationProfile1D(
        np.array([a, jump_at, b]), np.array([angle_minus, angle_plus])
    )
    pm = np.asarray(psi_minus, dtype=float)
    pp = np.asarray(psi_plus, dtype=float)
    psi = bv1d.step_function((a, b), pm, [(jump_at, pp - pm)])
    return make_limit(dom, rotation, psi)


def parallel_limit(
    angle: float,
    theta: BVFunction1D,
    domain: Optional[Domain2D] = None,
    offset=(0.0, 0.0),
) -> LimitDeformation:
    """Map R x + theta(x2) R e1 + c from a scalar shear profile theta."""
    dom = domain or canonical_domain()
    a, b = dom.x2_range
    if theta.dim != 1:
        raise InvalidInput("theta must be scalar-valued")
    re1 = rotation_from_angle(angle).as_array() @ E1
    values = theta.ac_values @ re1[None, :] + np.asarray(offset, dtype=float)
    jumps = tuple((loc, amp[0] * re1) for loc, amp in theta.jumps)
    stair = None
    if theta.staircase is not None:
        st = theta.staircase
        stair = Staircase(st.depth, st.rise[0] * re1, st.carrier)
    psi = BVFunction1D((a, b), theta.ac_breaks, values, jumps, stair)
    rotation = RotationProfile1D(np.array([a, b]), np.array([angle]))
    return make_limit(dom, rotation, psi)


@dataclass(frozen=True)
class JumpPoint:
    location: float
    angle_left: float
    angle_right: float
    dpsi: np.ndarray

    def amplitude_coefficients(self):
        """J(x1) = p + x1 q across this jump line."""
        rl = rotation_from_angle(self.angle_left).as_array()
        rr = rotation_from_angle(self.angle_right).as_array()
        q = (rr - rl) @ E1
        p = (rr - rl) @ (self.location * E2) + self.dpsi
        return p, q


@dataclass(frozen=True)
class JumpTrace:
    points: tuple[JumpPoint, ...]

    def mass(self, x1_range) -> float:
        """Total jump mass: sum of the exact line integrals of |J_i(x1)|."""
        c, d = x1_range
        return sum(
            integral_norm_affine(p + c * q, q, 0.0, d - c)
            for p, q in (pt.amplitude_coefficients() for pt in self.points)
        )


def jump_trace(u: LimitDeformation) -> JumpTrace:
    """Merged rotation and psi jumps with total amplitudes."""
    if u.psi.staircase is not None:
        raise InfiniteJumps("staircase part present; the jump list is not finite")
    locs = sorted(
        set(u.rotation.jump_locations()) | {loc for loc, _ in u.psi.jumps}
    )
    zero = np.zeros(2)
    psi_jumps = dict(u.psi.jumps)
    pts = []
    for a_i in locs:
        idx = int(np.searchsorted(u.rotation.breaks, a_i, side="left")) - 1
        idx = min(max(idx, 0), len(u.rotation.angles) - 1)
        th_l = float(u.rotation.angles[idx])
        th_r = u.rotation.angle_at(a_i)
        amp = psi_jumps.get(a_i, zero)
        pts.append(JumpPoint(float(a_i), th_l, th_r, np.asarray(amp, dtype=float)))
    return JumpTrace(tuple(pts))


def du_pairing(u: LimitDeformation, phi: Callable[[np.ndarray], np.ndarray]) -> Mat2:
    """Pairing of the distributional derivative Du with a scalar test function.

    Works from the explicit measure decomposition: the AC density over x2
    slabs, one line integral per jump, and the staircase contribution through
    its exact piecewise-linear truncation.
    """
    c, d = u.domain.x1_range
    total = np.zeros((2, 2))

    # AC part: R + psi' (x) e2, constant per (rotation x psi) slab
    slopes = u.psi.ac_slopes()
    cuts = sorted(
        set(map(float, u.psi.ac_breaks)) | set(map(float, u.rotation.breaks))
    )
    for t0, t1 in zip(cuts[:-1], cuts[1:]):
        tm = 0.5 * (t0 + t1)
        r = u.rotation.rotation_at(tm)
        k = min(
            int(np.searchsorted(u.psi.ac_breaks, tm, side="right")) - 1,
            len(slopes) - 1,
        )
        dens = r + np.outer(slopes[k], E2)
        rect = np.array([[c, t0], [d, t0], [d, t1], [c, t1]])
        total += dens * polygon_integral(phi, rect)

    # jump part: (p + x1 q) (x) e2 against phi(x1, a_i)
    if u.psi.staircase is None or not u.rotation.is_constant():
        trace_pts = jump_trace(
            LimitDeformation(
                u.domain,
                u.rotation,
                BVFunction1D(u.psi.domain, u.psi.ac_breaks, u.psi.ac_values, u.psi.jumps, None),
                u.class_tag,
            )
        ).points
    else:
        trace_pts = [
            JumpPoint(loc, u.rotation.angles[0], u.rotation.angles[0], amp)
            for loc, amp in u.psi.jumps
        ]
    for pt in trace_pts:
        p, q = pt.amplitude_coefficients()
        x, w = gauss_interval(c, d, 8)
        vals = phi(np.column_stack([x, np.full_like(x, pt.location)]))
        i0 = float(np.dot(w, vals))
        i1 = float(np.dot(w * x, vals))
        total += np.outer(p * i0 + q * i1, E2)

    # staircase part: rise (x) e2 against the product measure
    if u.psi.staircase is not None:
        st = u.psi.staircase
        lo, hi = st.carrier
        dens = 2.0 ** (-st.depth)
        for s0, s1 in bv1d.cantor_segments(st.depth):
            y0, y1 = lo + (hi - lo) * s0, lo + (hi - lo) * s1
            rect = np.array([[c, y0], [d, y0], [d, y1], [c, y1]])
            mass = polygon_integral(phi, rect) * dens / (y1 - y0)
            total += np.outer(st.rise, E2) * mass
    return Mat2.from_array(total)


@dataclass(frozen=True, eq=False)
class StructuredField:
    """Deformation R(theta(x2)) x + psi(x2) with continuous PL profiles.

    The profiles have derivative 0 on the rigid cells of the eps-grid, so the
    gradient is exactly a rotation there.
    """

    domain: Domain2D
    eps: float
    lam: float
    angle: BVFunction1D
    psi: BVFunction1D

    def _slope(self, w: BVFunction1D, x2: float) -> np.ndarray:
        k = int(np.searchsorted(w.ac_breaks, x2, side="right")) - 1
        k = min(max(k, 0), len(w.ac_breaks) - 2)
        return w.ac_slopes()[k]

    def gradient(self, x1: float, x2: float) -> np.ndarray:
        th = float(self.angle.value(x2)[0])
        dth = float(self._slope(self.angle, x2)[0])
        c, s = math.cos(th), math.sin(th)
        r = np.array([[c, -s], [s, c]])
        dr = dth * np.array([[-s, -c], [c, -s]])
        col = dr @ np.array([x1, x2]) + self._slope(self.psi, x2)
        return r + np.outer(col, E2)

    def value(self, x1: float, x2: float) -> np.ndarray:
        th = float(self.angle.value(x2)[0])
        c, s = math.cos(th), math.sin(th)
        return np.array([[c, -s], [s, c]]) @ np.array([x1, x2]) + self.psi.value(x2)

    def rigid_intervals(self):
        """Rigid cells of the eps-grid intersected with the x2-range."""
        a, b = self.domain.x2_range
        out = []
        i = math.floor(a / self.eps) - 1
        while i * self.eps < b:
            lo = max(a, (i + self.lam) * self.eps)
            hi = min(b, (i + 1.0) * self.eps)
            if lo < hi:
                out.append((lo, hi))
            i += 1
        return out

    def l1_distance_to(self, u: LimitDeformation, match_means: bool = True) -> float:
        """Quadrature L1 distance; the x1 line integrals are exact."""
        a, b = self.domain.x2_range
        c, d = self.domain.x1_range
        shift = np.zeros(2)
        if match_means:
            shift = self._mean() - u.mean()
        cuts = sorted(
            set(map(float, self.angle.ac_breaks))
            | set(map(float, self.psi.ac_breaks))
            | set(map(float, u.rotation.breaks))
            | set(map(float, bv1d.flatten(u.psi).ac_breaks))
            | {loc for loc, _ in u.psi.jumps}
        )
        psi_flat = bv1d.flatten(u.psi)
        total = 0.0
        for t0, t1 in zip(cuts[:-1], cuts[1:]):
            if t1 - t0 < 1e-14:
                continue
            x, w = gauss_interval(t0, t1, 8)
            for xi, wi in zip(x, w):
                ru = u.rotation.rotation_at(xi)
                th = float(self.angle.value(xi)[0])
                cs, sn = math.cos(th), math.sin(th)
                re = np.array([[cs, -sn], [sn, cs]])
                dr = re - ru
                p = dr @ np.array([0.0, xi]) + self.psi.value(xi) - psi_flat.value(xi) - shift
                q = dr @ E1
                total += wi * integral_norm_affine(p + c * q, q, 0.0, d - c)
        return total

    def _mean(self) -> np.ndarray:
        a, b = self.domain.x2_range
        c, d = self.domain.x1_range
        cuts = sorted(set(map(float, self.angle.ac_breaks)) | set(map(float, self.psi.ac_breaks)))
        total = np.zeros(2)
        for t0, t1 in zip(cuts[:-1], cuts[1:]):
            x, w = gauss_interval(t0, t1, 12)
            for xi, wi in zip(x, w):
                th = float(self.angle.value(xi)[0])
                cs, sn = math.cos(th), math.sin(th)
                re = np.array([[cs, -sn], [sn, cs]])
                total += wi * (
                    re @ np.array([0.5 * (c + d) * (d - c), xi * (d - c)])
                    + (d - c) * self.psi.value(xi)
                )
        return total / self.domain.area


def b_recovery(u: LimitDeformation, eps: float, lam: float) -> StructuredField:
    """Recovery of a layered-rigid limit by profiles frozen on the rigid cells.

    Rotation and psi jumps are first smoothed into ramps of width eps**2, the
    staircase is flattened exactly, and both profiles are then composed with
    the stop-and-go time change.
    """
    a, b = u.domain.x2_range
    angle_jumps = tuple(
        (
            float(u.rotation.breaks[i + 1]),
            np.array([u.rotation.angles[i + 1] - u.rotation.angles[i]]),
        )
        for i in range(len(u.rotation.angles) - 1)
        if u.rotation.angles[i + 1] != u.rotation.angles[i]
    )
    angle_fn = bv1d.step_function((a, b), [u.rotation.angles[0]], angle_jumps)
    width = eps * eps
    angle_cont = bv1d.ramp_jumps(angle_fn, width)
    psi_cont = bv1d.ramp_jumps(bv1d.flatten(u.psi), width)
    angle_eps = bv1d.stop_go_reparametrize(angle_cont, eps, lam)
    psi_eps = bv1d.stop_go_reparametrize(psi_cont, eps, lam)
    return StructuredField(u.domain, eps, lam, angle_eps, psi_eps)
