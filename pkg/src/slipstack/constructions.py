"""Explicit admissible piecewise-affine approximation sequences.

Each builder produces a field on the canonical rectangle (0,1) x (-1,1)
whose cells are exactly rank-one compatible for every eps: the transition
bands use the tan(theta/2) corrections that make the slanted interfaces
gradient-compatible, and the band amplitudes scale like 1/eps so the band
contributions converge to the prescribed jump measure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import bv1d
from .algebra import normalize_angle, rotation_from_angle
from .bv1d import BVFunction1D
from .errors import (
    BadAuxiliaryRotation,
    BandOverflow,
    CellsCollide,
    InvalidInput,
    NonParallelJump,
    ParallelJump,
    RotationsNotGeneric,
    WrongClass,
)
from .fields import PiecewiseAffineField, integrate_offsets
from .limits import ClassTag, LimitDeformation, jump_trace

E1 = np.array([1.0, 0.0])
E2 = np.array([0.0, 1.0])

_ANGLE_TOL = 1e-9


def dyadic_eps_sweep(lam: float, k_min: int = 3, k_max: int = 11) -> list[float]:
    """Default eps sequence lam * 2**-k; keeps the band geometry dyadic."""
    return [lam * 2.0**-k for k in range(k_min, k_max + 1)]


def _shear_matrix(angle: float, gamma: float) -> np.ndarray:
    r = rotation_from_angle(angle).as_array()
    return r @ np.array([[1.0, gamma], [0.0, 1.0]])


def _strip_regions(y0, y1, eps, lam, angle, gamma_pieces=None):
    """Per-layer horizontal strips on (0,1) x (y0, y1) with slip gamma/lam.

    gamma_pieces is a list of (t0, t1, gamma) giving the limit slip profile;
    soft strips carry gamma/lam, rigid strips are pure rotations.
    """
    if y1 - y0 <= 1e-14:
        return []
    marks = {y0, y1}
    j0 = math.floor(y0 / eps) - 1
    j1 = math.ceil(y1 / eps) + 1
    for j in range(j0, j1):
        for t in (j * eps, (j + lam) * eps):
            if y0 < t < y1:
                marks.add(t)
    if gamma_pieces:
        for t0, t1, _ in gamma_pieces:
            for t in (t0, t1):
                if y0 < t < y1:
                    marks.add(t)
    heights = sorted(marks)

    def gamma_at(t: float) -> float:
        if not gamma_pieces:
            return 0.0
        for t0, t1, g in gamma_pieces:
            if t0 <= t < t1:
                return g
        return 0.0

    regions = []
    for h0, h1 in zip(heights[:-1], heights[1:]):
        if h1 - h0 <= 1e-15:
            continue
        m = 0.5 * (h0 + h1)
        j = math.floor(m / eps)
        soft = m < (j + lam) * eps
        rect = np.array([[0.0, h0], [1.0, h0], [1.0, h1], [0.0, h1]])
        if soft:
            regions.append((rect, _shear_matrix(angle, gamma_at(m) / lam), "soft"))
        else:
            regions.append((rect, rotation_from_angle(angle).as_array(), "rigid"))
    return regions


def _require_canonical(u: LimitDeformation) -> None:
    c, d = u.domain.x1_range
    a, b = u.domain.x2_range
    if (c, d, a, b) != (0.0, 1.0, -1.0, 1.0):
        raise InvalidInput("constructions require the canonical domain (0,1)x(-1,1)")


def _single_jump_data(u: LimitDeformation):
    """Angles and jump amplitude of a pure single-jump limit at x2 = 0."""
    _require_canonical(u)
    if u.psi.staircase is not None:
        raise InvalidInput("single-jump constructions need a pure jump limit")
    if u.psi.ac_total_variation() > 1e-13:
        raise InvalidInput("single-jump constructions need constant psi pieces")
    locs = sorted(set(u.rotation.jump_locations()) | {loc for loc, _ in u.psi.jumps})
    if len(locs) != 1 or abs(locs[0]) > 1e-13:
        raise InvalidInput("expected exactly one jump at x2 = 0")
    pts = jump_trace(u).points
    pt = pts[0]
    return pt.angle_left, pt.angle_right, pt.dpsi


def _check_aux(s_angle: float, th_plus: float, th_minus: float) -> tuple[float, float]:
    """Rotation angles of S^T R^+- with the Lemma constraints enforced."""
    theta_p = normalize_angle(th_plus - s_angle)
    theta_m = normalize_angle(th_minus - s_angle)
    for th in (theta_p, theta_m):
        if abs(th) < _ANGLE_TOL or abs(th + math.pi) < _ANGLE_TOL:
            raise BadAuxiliaryRotation("S must differ from +-R+ and +-R-")
    if abs(math.sin(s_angle - th_plus)) < _ANGLE_TOL:
        raise BadAuxiliaryRotation("S e1 and R+ e1 must be linearly independent")
    return theta_p, theta_m


def default_s_angle(th_plus: float, th_minus: float) -> float:
    """First angle in the pi/6 scan satisfying the auxiliary constraints."""
    for k in range(1, 6):
        cand = normalize_angle(th_plus + k * math.pi / 6.0)
        try:
            _check_aux(cand, th_plus, th_minus)
            return cand
        except BadAuxiliaryRotation:
            continue
    raise BadAuxiliaryRotation("no valid auxiliary rotation in the scan")


@dataclass(frozen=True)
class SingleJumpParams:
    """Derived quantities of the eight-region single-jump construction."""

    angle_plus: float
    angle_minus: float
    s_angle: float
    dpsi: np.ndarray
    alpha: float
    beta: float
    theta_plus: float
    theta_minus: float

    def eps_coefficients(self, eps: float, lam: float) -> dict:
        band = eps * lam
        return {
            "gamma_plus": 4.0 * self.alpha / band,
            "gamma_minus": 4.0 * self.beta / band,
            "mu_plus": 4.0 / band + math.tan(0.5 * self.theta_plus),
            "mu_minus": -4.0 / band + math.tan(0.5 * self.theta_minus),
            "mu_tilde_plus": 4.0 / band - math.tan(0.5 * self.theta_plus),
            "mu_tilde_minus": -4.0 / band - math.tan(0.5 * self.theta_minus),
        }


def single_jump_params(u: LimitDeformation, s_angle: Optional[float] = None) -> SingleJumpParams:
    th_m, th_p, dpsi = _single_jump_data(u)
    if s_angle is None:
        s_angle = default_s_angle(th_p, th_m)
    theta_p, theta_m = _check_aux(s_angle, th_p, th_m)
    cols = np.column_stack(
        [rotation_from_angle(th_p).as_array() @ E1, rotation_from_angle(s_angle).as_array() @ E1]
    )
    alpha, beta = np.linalg.solve(cols, dpsi)
    if np.linalg.norm(cols @ np.array([alpha, beta]) - dpsi) > 1e-12 * max(
        1.0, float(np.linalg.norm(dpsi))
    ):
        raise BadAuxiliaryRotation("decomposition system is ill-conditioned")
    return SingleJumpParams(
        th_p, th_m, s_angle, dpsi, float(alpha), float(beta), theta_p, theta_m
    )


def single_jump_general(
    u: LimitDeformation, eps: float, s_angle: Optional[float] = None, lam: float = 0.5
) -> PiecewiseAffineField:
    """Eight-region transition construction for a single jump at x2 = 0.

    The jump is absorbed by the first soft band (0, eps*lam): two flat bands
    carry the decomposition amplitudes and four full-width wedges rotate
    R- -> S -> R+ with shear amounts +-4/(eps lam) -+ tan(theta/2).
    """
    p = single_jump_params(u, s_angle)
    band = eps * lam
    if band >= 1.0:
        raise BandOverflow("transition band does not fit below the top boundary")
    co = p.eps_coefficients(eps, lam)
    q0, q1, q2, q3, q4 = 0.0, 0.25 * band, 0.5 * band, 0.75 * band, band

    regions = _strip_regions(-1.0, q0, eps, lam, p.angle_minus)
    regions += [
        (np.array([[0.0, q0], [1.0, q0], [1.0, q1]]),
         _shear_matrix(p.angle_minus, co["mu_minus"]), "soft"),
        (np.array([[0.0, q0], [1.0, q1], [0.0, q1]]),
         _shear_matrix(p.s_angle, co["mu_tilde_minus"]), "soft"),
        (np.array([[0.0, q1], [1.0, q1], [1.0, q2], [0.0, q2]]),
         _shear_matrix(p.s_angle, co["gamma_minus"]), "soft"),
        (np.array([[0.0, q2], [1.0, q2], [0.0, q3]]),
         _shear_matrix(p.s_angle, co["mu_tilde_plus"]), "soft"),
        (np.array([[0.0, q3], [1.0, q2], [1.0, q3]]),
         _shear_matrix(p.angle_plus, co["mu_plus"]), "soft"),
        (np.array([[0.0, q3], [1.0, q3], [1.0, q4], [0.0, q4]]),
         _shear_matrix(p.angle_plus, co["gamma_plus"]), "soft"),
    ]
    regions += _strip_regions(q4, 1.0, eps, lam, p.angle_plus)
    return integrate_offsets(regions, None, u.domain, eps, lam)


@dataclass(frozen=True)
class VariantParams:
    """Parameters of the variant constructions.

    aux_angle is the second decomposition direction: the auxiliary rotation S
    for variant (ii), the lower rotation R- for variant (i), unused for (iii).
    """

    kind: str
    angle: float
    aux_angle: Optional[float]
    dpsi: np.ndarray
    alpha: float
    beta: float
    theta: float
    iota: float
    rho: float


def variant_i_params(u: LimitDeformation, rho: float = 0.5) -> VariantParams:
    th_m, th_p, dpsi = _single_jump_data(u)
    if abs(math.sin(th_p - th_m)) < _ANGLE_TOL:
        raise RotationsNotGeneric("variant (i) needs R+ != +-R-")
    if not 0.0 < rho < 1.0:
        raise InvalidInput("rho must lie in (0, 1)")
    cols = np.column_stack(
        [rotation_from_angle(th_p).as_array() @ E1, rotation_from_angle(th_m).as_array() @ E1]
    )
    alpha, beta = np.linalg.solve(cols, dpsi)
    theta = normalize_angle(th_p - th_m)
    return VariantParams("variant_i", th_p, th_m, dpsi, float(alpha), float(beta), theta, 1.0, rho)


def single_jump_variant_i(
    u: LimitDeformation, eps: float, rho: float = 0.5, lam: float = 0.5
) -> PiecewiseAffineField:
    """Four-band construction when R+ and R- are not (anti)parallel.

    The jump amplitude is decomposed against R+ e1 and R- e1; a single
    full-width slanted interface of slope rho*eps*lam joins the two shear
    wedges, and two thin flat bands carry alpha and beta - 1.
    """
    p = variant_i_params(u, rho)
    th_p, th_m = p.angle, p.aux_angle
    band = eps * lam
    if band >= 1.0:
        raise BandOverflow("transition band does not fit below the top boundary")
    h = 0.5 * (band - rho * band)
    y1, y2, y3 = h, h + rho * band, band
    t = math.tan(0.5 * p.theta)
    g_plus = 1.0 / (rho * band) + t
    g_minus = 1.0 / (rho * band) - t
    g_top = p.alpha / h
    g_bot = (p.beta - 1.0) / h

    regions = _strip_regions(-1.0, 0.0, eps, lam, th_m)
    regions += [
        (np.array([[0.0, 0.0], [1.0, 0.0], [1.0, y1], [0.0, y1]]),
         _shear_matrix(th_m, g_bot), "soft"),
        (np.array([[0.0, y1], [1.0, y1], [0.0, y2]]),
         _shear_matrix(th_m, g_minus), "soft"),
        (np.array([[0.0, y2], [1.0, y1], [1.0, y2]]),
         _shear_matrix(th_p, g_plus), "soft"),
        (np.array([[0.0, y2], [1.0, y2], [1.0, y3], [0.0, y3]]),
         _shear_matrix(th_p, g_top), "soft"),
    ]
    regions += _strip_regions(y3, 1.0, eps, lam, th_p)
    return integrate_offsets(regions, None, u.domain, eps, lam)


def variant_ii_params(u: LimitDeformation, s_angle: Optional[float] = None) -> VariantParams:
    th_m, th_p, dpsi = _single_jump_data(u)
    if abs(normalize_angle(th_p - th_m)) > 1e-12:
        raise InvalidInput("variant (ii) needs a constant rotation")
    if s_angle is None:
        s_angle = default_s_angle(th_p, th_m)
    if abs(math.sin(s_angle - th_p)) < _ANGLE_TOL:
        raise BadAuxiliaryRotation("S e1 and R e1 must be linearly independent")
    cols = np.column_stack(
        [rotation_from_angle(th_p).as_array() @ E1, rotation_from_angle(s_angle).as_array() @ E1]
    )
    alpha, beta = np.linalg.solve(cols, dpsi)
    if abs(beta) < 1e-12:
        raise ParallelJump("jump is parallel to R e1; use variant (iii)")
    iota = math.copysign(1.0, beta)
    rho = iota / (2.0 * beta + iota)
    # exact compatibility across the slanted interfaces needs the rotation
    # angle of S^T R here, matching the single-jump construction
    theta = normalize_angle(th_p - s_angle)
    return VariantParams(
        "variant_ii", th_p, s_angle, dpsi, float(alpha), float(beta), theta, iota, float(rho)
    )


def single_jump_variant_ii(
    u: LimitDeformation, eps: float, s_angle: Optional[float] = None, lam: float = 0.5
) -> PiecewiseAffineField:
    """Constant-rotation construction with a sheared parallelogram of S-phase.

    For iota = +1 the two slanted interfaces fall across the band; for
    iota = -1 the geometry is mirrored so the wedge areas stay positive.
    """
    p = variant_ii_params(u, s_angle)
    band = eps * lam
    if band >= 1.0:
        raise BandOverflow("transition band does not fit below the top boundary")
    rho = p.rho
    h = 0.5 * (band - rho * band)
    t = math.tan(0.5 * p.theta)
    g_plus = p.iota / (rho * band) + t
    g_minus = p.iota / (rho * band) - t
    g_tilde = (p.alpha - p.iota) / h
    th, s = p.angle, p.aux_angle

    if p.iota > 0:
        lo_slant = [(0.0, rho * band), (1.0, 0.0)]
        regions_mid = [
            (np.array([[0.0, 0.0], [1.0, 0.0], [0.0, rho * band]]),
             _shear_matrix(th, g_plus), "soft"),
            (np.array([[0.0, rho * band], [1.0, 0.0], [1.0, h], [0.0, band - h]]),
             _shear_matrix(s, g_minus), "soft"),
            (np.array([[0.0, band - h], [1.0, h], [1.0, band - h]]),
             _shear_matrix(th, g_plus), "soft"),
        ]
    else:
        regions_mid = [
            (np.array([[0.0, 0.0], [1.0, 0.0], [1.0, rho * band]]),
             _shear_matrix(th, g_plus), "soft"),
            (np.array([[0.0, 0.0], [1.0, rho * band], [1.0, band - h], [0.0, h]]),
             _shear_matrix(s, g_minus), "soft"),
            (np.array([[0.0, h], [1.0, band - h], [0.0, band - h]]),
             _shear_matrix(th, g_plus), "soft"),
        ]
    regions = _strip_regions(-1.0, 0.0, eps, lam, th)
    regions += regions_mid
    regions += [
        (np.array([[0.0, band - h], [1.0, band - h], [1.0, band], [0.0, band]]),
         _shear_matrix(th, g_tilde), "soft"),
    ]
    regions += _strip_regions(band, 1.0, eps, lam, th)
    return integrate_offsets(regions, None, u.domain, eps, lam)


def variant_iii_params(u: LimitDeformation) -> VariantParams:
    th_m, th_p, dpsi = _single_jump_data(u)
    if abs(normalize_angle(th_p - th_m)) > 1e-12:
        raise InvalidInput("variant (iii) needs a constant rotation")
    re1 = rotation_from_angle(th_p).as_array() @ E1
    cross = dpsi[0] * re1[1] - dpsi[1] * re1[0]
    if abs(cross) > 1e-10 * max(1.0, float(np.linalg.norm(dpsi))):
        raise NonParallelJump("jump must be parallel to R e1")
    dot = float(dpsi @ re1)
    iota = math.copysign(1.0, dot) if dot != 0.0 else 1.0
    alpha = iota * float(np.linalg.norm(dpsi))
    return VariantParams("variant_iii", th_p, None, dpsi, alpha, 0.0, 0.0, iota, 1.0)


def single_jump_variant_iii(
    u: LimitDeformation, eps: float, lam: float = 0.5
) -> PiecewiseAffineField:
    """Single shear band (0, eps*lam); an exact recovery for every eps."""
    p = variant_iii_params(u)
    band = eps * lam
    if band >= 1.0:
        raise BandOverflow("transition band does not fit below the top boundary")
    th = p.angle
    regions = _strip_regions(-1.0, 0.0, eps, lam, th)
    regions.append(
        (np.array([[0.0, 0.0], [1.0, 0.0], [1.0, band], [0.0, band]]),
         _shear_matrix(th, p.alpha / band), "soft")
    )
    regions += _strip_regions(band, 1.0, eps, lam, th)
    return integrate_offsets(regions, None, u.domain, eps, lam)


def multi_jump(
    u: LimitDeformation,
    eps: float,
    s_angles: Optional[dict] = None,
    lam: float = 0.5,
) -> PiecewiseAffineField:
    """One transition gadget per jump, placed in the soft layer of its eps-cell.

    Between gadgets the field is the plain laminate R_i(I + gamma/lam on the
    soft strips); the gadget for jump i absorbs the effective amplitude
    (R_i - R_{i-1}) a_i e2 + dpsi_i.
    """
    _require_canonical(u)
    if u.class_tag not in (ClassTag.A_SBV_INF, ClassTag.A_PARALLEL):
        raise WrongClass("multi-jump construction needs finitely many jumps in class A")
    if u.psi.staircase is not None:
        raise WrongClass("multi-jump construction needs no staircase part")
    band = eps * lam
    pts = jump_trace(u).points
    if not pts:
        raise InvalidInput("limit has no jumps; use the parallel construction")
    kappas = [math.floor(pt.location / eps) for pt in pts]
    if len(set(kappas)) != len(kappas):
        raise CellsCollide("two jumps share an eps-cell; shrink eps")
    if kappas[0] * eps < -1.0 or (kappas[-1] + 1) * eps > 1.0:
        raise BandOverflow("a jump's eps-cell sticks out of the domain")
    gamma_pieces = u.gamma_profile()

    regions = []
    prev_top = -1.0
    for pt, kappa in zip(pts, kappas):
        base = kappa * eps
        q0, q1, q2, q3, q4 = (
            base,
            base + 0.25 * band,
            base + 0.5 * band,
            base + 0.75 * band,
            base + band,
        )
        s_angle = None if s_angles is None else s_angles.get(pt.location)
        if s_angle is None:
            s_angle = default_s_angle(pt.angle_right, pt.angle_left)
        theta_p, theta_m = _check_aux(s_angle, pt.angle_right, pt.angle_left)
        dpsi_eff = pt.amplitude_coefficients()[0]
        cols = np.column_stack(
            [
                rotation_from_angle(pt.angle_right).as_array() @ E1,
                rotation_from_angle(s_angle).as_array() @ E1,
            ]
        )
        alpha, beta = np.linalg.solve(cols, dpsi_eff)
        g_plus = 4.0 * alpha / band
        g_mid = 4.0 * beta / band
        mu_p = 4.0 / band + math.tan(0.5 * theta_p)
        mu_m = -4.0 / band + math.tan(0.5 * theta_m)
        mu_tp = 4.0 / band - math.tan(0.5 * theta_p)
        mu_tm = -4.0 / band - math.tan(0.5 * theta_m)

        regions += _strip_regions(prev_top, q0, eps, lam, pt.angle_left, gamma_pieces)
        regions += [
            (np.array([[0.0, q0], [1.0, q0], [1.0, q1]]),
             _shear_matrix(pt.angle_left, mu_m), "soft"),
            (np.array([[0.0, q0], [1.0, q1], [0.0, q1]]),
             _shear_matrix(s_angle, mu_tm), "soft"),
            (np.array([[0.0, q1], [1.0, q1], [1.0, q2], [0.0, q2]]),
             _shear_matrix(s_angle, g_mid), "soft"),
            (np.array([[0.0, q2], [1.0, q2], [0.0, q3]]),
             _shear_matrix(s_angle, mu_tp), "soft"),
            (np.array([[0.0, q3], [1.0, q2], [1.0, q3]]),
             _shear_matrix(pt.angle_right, mu_p), "soft"),
            (np.array([[0.0, q3], [1.0, q3], [1.0, q4], [0.0, q4]]),
             _shear_matrix(pt.angle_right, g_plus), "soft"),
        ]
        prev_top = q4
    last_angle = pts[-1].angle_right
    regions += _strip_regions(prev_top, 1.0, eps, lam, last_angle, gamma_pieces)
    return integrate_offsets(regions, None, u.domain, eps, lam)


def parallel_recovery(
    u: LimitDeformation, eps: float, lam: float = 0.5, n_levels: Optional[int] = None
) -> PiecewiseAffineField:
    """Laminate recovery for one global rotation with parallel singular part.

    The scalar shear profile is split into its AC part (spread over the soft
    strips as theta_a'/lam) and its singular part, which is flattened to an
    equi-variation step function, ramped, and composed with the stop-and-go
    map so its derivative concentrates on the soft strips.  The first
    gradient column is R e1 on every cell.
    """
    _require_canonical(u)
    if u.class_tag is not ClassTag.A_PARALLEL:
        raise WrongClass("parallel recovery needs class tag A_PARALLEL")
    th = float(u.rotation.angles[0])
    re1 = rotation_from_angle(th).as_array() @ E1
    a, b = u.domain.x2_range

    theta_ac = BVFunction1D((a, b), u.psi.ac_breaks, u.psi.ac_values @ re1)
    sing_jumps = tuple((loc, np.array([float(amp @ re1)])) for loc, amp in u.psi.jumps)
    stair = None
    if u.psi.staircase is not None:
        st = u.psi.staircase
        stair = bv1d.Staircase(st.depth, np.array([float(st.rise @ re1)]), st.carrier)
    singular = BVFunction1D(
        (a, b), np.array([a, b]), np.zeros((2, 1)), sing_jumps, stair
    )

    if singular.jumps or singular.staircase is not None:
        n = n_levels if n_levels is not None else max(4, round(1.0 / eps))
        flat = bv1d.piecewise_constant_approximation(singular, n)
        ramped = bv1d.ramp_jumps(flat, eps * eps * lam)
        theta_eps = bv1d.stop_go_reparametrize(ramped, eps, lam)
    else:
        theta_eps = bv1d.constant((a, b), 0.0)

    ac_slopes = theta_ac.ac_slopes()[:, 0]
    eps_slopes = theta_eps.ac_slopes()[:, 0]
    marks = sorted(
        set(map(float, theta_ac.ac_breaks)) | set(map(float, theta_eps.ac_breaks))
    )
    j0 = math.floor(a / eps) - 1
    j1 = math.ceil(b / eps) + 1
    grid = set()
    for j in range(j0, j1):
        for t in (j * eps, (j + lam) * eps):
            if a < t < b:
                grid.add(t)
    heights = sorted(set(marks) | grid)

    def slope_of(w_breaks, slopes, t):
        k = int(np.searchsorted(w_breaks, t, side="right")) - 1
        return float(slopes[min(max(k, 0), len(slopes) - 1)])

    regions = []
    for h0, h1 in zip(heights[:-1], heights[1:]):
        if h1 - h0 <= 1e-15:
            continue
        m = 0.5 * (h0 + h1)
        j = math.floor(m / eps)
        soft = m < (j + lam) * eps
        rect = np.array([[0.0, h0], [1.0, h0], [1.0, h1], [0.0, h1]])
        if soft:
            g = slope_of(theta_ac.ac_breaks, ac_slopes, m) / lam + slope_of(
                theta_eps.ac_breaks, eps_slopes, m
            )
            regions.append((rect, _shear_matrix(th, g), "soft"))
        else:
            regions.append((rect, rotation_from_angle(th).as_array(), "rigid"))
    return integrate_offsets(regions, None, u.domain, eps, lam)


def predicted_limit(kind: str, u: LimitDeformation, s_angle: Optional[float] = None, rho: float = 0.5) -> float:
    """Closed-form limit energies of the four single-jump constructions."""
    if kind == "general":
        p = single_jump_params(u, s_angle)
        return abs(p.alpha) + abs(p.beta) + 2.0
    if kind == "variant_i":
        p = variant_i_params(u, rho)
        return abs(p.alpha) + abs(p.beta - 1.0) + 1.0
    if kind == "variant_ii":
        p = variant_ii_params(u, s_angle)
        return abs(p.alpha - p.iota) + abs(p.beta) + 1.0
    if kind == "variant_iii":
        p = variant_iii_params(u)
        return abs(p.alpha)
    raise InvalidInput(f"unknown construction kind {kind!r}")


BUILDERS = {
    "general": single_jump_general,
    "variant_i": lambda u, eps, lam=0.5, **kw: single_jump_variant_i(u, eps, lam=lam, **kw),
    "variant_ii": lambda u, eps, lam=0.5, **kw: single_jump_variant_ii(u, eps, lam=lam, **kw),
    "variant_iii": lambda u, eps, lam=0.5: single_jump_variant_iii(u, eps, lam=lam),
    "multi_jump": lambda u, eps, lam=0.5, **kw: multi_jump(u, eps, lam=lam, **kw),
    "parallel": lambda u, eps, lam=0.5, **kw: parallel_recovery(u, eps, lam=lam, **kw),
}
