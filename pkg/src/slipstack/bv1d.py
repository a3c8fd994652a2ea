"""One-dimensional BV calculus with explicit AC + jump + staircase parts.

A function is stored as a piecewise-linear absolutely continuous part, a
finite sorted jump list, and an optional symbolic staircase (depth, rise,
carrier).  Keeping the staircase symbolic makes its total variation exact;
it is flattened to piecewise-linear only on demand.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainMismatch, InvalidInput
from .quadrature import integral_norm_affine

_MERGE_TOL = 1e-13
_MAX_FLATTEN_DEPTH = 20


def cantor_value(x: float, depth: int) -> float:
    """Middle-thirds staircase truncated at the given depth, on [0, 1]."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    y, scale = 0.0, 1.0
    for _ in range(depth):
        if x < 1.0 / 3.0:
            x = 3.0 * x
            scale *= 0.5
        elif x <= 2.0 / 3.0:
            return y + 0.5 * scale
        else:
            x = 3.0 * x - 2.0
            y += 0.5 * scale
            scale *= 0.5
    return y + scale * x


def cantor_quantile(q: float, depth: int) -> float:
    """Smallest t in [0, 1] with cantor_value(t, depth) >= q."""
    if q <= 0.0:
        return 0.0
    if q >= 1.0:
        return 1.0
    t, width = 0.0, 1.0
    for _ in range(depth):
        if q < 0.5:
            q = 2.0 * q
            width /= 3.0
        elif q == 0.5:
            return t + width / 3.0
        else:
            q = 2.0 * q - 1.0
            t += 2.0 * width / 3.0
            width /= 3.0
    return t + width * q


def cantor_segments(depth: int):
    """Rising segments of the depth-truncated staircase, as (lo, hi) in [0, 1]."""
    segs = [(0.0, 1.0)]
    for _ in range(depth):
        segs = [
            piece
            for lo, hi in segs
            for piece in ((lo, lo + (hi - lo) / 3.0), (hi - (hi - lo) / 3.0, hi))
        ]
    return segs


@dataclass(frozen=True, eq=False)
class Staircase:
    """Symbolic staircase part: the truncated Cantor function scaled by a rise vector."""

    depth: int
    rise: np.ndarray
    carrier: tuple[float, float]

    def __post_init__(self):
        if self.depth < 1:
            raise InvalidInput("staircase depth must be >= 1")
        if self.depth > 24:
            raise InvalidInput("staircase depth capped at 24")
        object.__setattr__(self, "rise", np.atleast_1d(np.asarray(self.rise, dtype=float)))
        lo, hi = self.carrier
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise InvalidInput("staircase carrier must be a nonempty interval")

    def value(self, t: float) -> np.ndarray:
        lo, hi = self.carrier
        return self.rise * cantor_value((t - lo) / (hi - lo), self.depth)

    def tv(self) -> float:
        return float(np.linalg.norm(self.rise))


@dataclass(frozen=True, eq=False)
class BVFunction1D:
    """BV function on an open interval: PL AC part + jumps + optional staircase."""

    domain: tuple[float, float]
    ac_breaks: np.ndarray
    ac_values: np.ndarray
    jumps: tuple = ()
    staircase: Optional[Staircase] = None

    def __post_init__(self):
        a, b = self.domain
        breaks = np.asarray(self.ac_breaks, dtype=float)
        values = np.asarray(self.ac_values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        object.__setattr__(self, "ac_breaks", breaks)
        object.__setattr__(self, "ac_values", values)
        if not (math.isfinite(a) and math.isfinite(b) and a < b):
            raise InvalidInput("domain must be a nonempty open interval")
        if len(breaks) < 2 or len(breaks) != len(values):
            raise InvalidInput("ac part needs matching breakpoints and values")
        if abs(breaks[0] - a) > _MERGE_TOL or abs(breaks[-1] - b) > _MERGE_TOL:
            raise InvalidInput("ac breakpoints must span the domain")
        if np.any(np.diff(breaks) <= 0):
            raise InvalidInput("ac breakpoints must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise InvalidInput("ac values must be finite")
        jumps = tuple(
            (float(loc), np.atleast_1d(np.asarray(amp, dtype=float)))
            for loc, amp in self.jumps
        )
        locs = [loc for loc, _ in jumps]
        if any(not (a < loc < b) for loc in locs):
            raise InvalidInput("jump locations must be strictly inside the domain")
        if any(l2 <= l1 for l1, l2 in zip(locs, locs[1:])):
            raise InvalidInput("jump locations must be strictly increasing")
        if any(amp.shape != (self.dim,) for _, amp in jumps):
            raise InvalidInput("jump amplitudes must match the codomain dimension")
        object.__setattr__(self, "jumps", jumps)
        if self.staircase is not None:
            lo, hi = self.staircase.carrier
            if lo < a - _MERGE_TOL or hi > b + _MERGE_TOL:
                raise InvalidInput("staircase carrier must lie inside the domain")
            if self.staircase.rise.shape != (self.dim,):
                raise InvalidInput("staircase rise must match the codomain dimension")

    @property
    def dim(self) -> int:
        return self.ac_values.shape[1]

    def ac_value(self, t):
        """AC part evaluated at t (vectorized over t)."""
        t = np.asarray(t, dtype=float)
        out = np.empty(t.shape + (self.dim,))
        for k in range(self.dim):
            out[..., k] = np.interp(t, self.ac_breaks, self.ac_values[:, k])
        return out

    def value(self, t: float, side: str = "right") -> np.ndarray:
        """Pointwise value; jumps counted as <= t ("right") or < t ("left")."""
        v = self.ac_value(float(t))
        for loc, amp in self.jumps:
            if loc < t or (side == "right" and loc == t):
                v = v + amp
        if self.staircase is not None:
            v = v + self.staircase.value(float(t))
        return v

    def ac_slopes(self):
        """Slope of each linear piece, shape (npieces, dim)."""
        dt = np.diff(self.ac_breaks)[:, None]
        return np.diff(self.ac_values, axis=0) / dt

    def ac_total_variation(self) -> float:
        return float(np.sum(np.linalg.norm(np.diff(self.ac_values, axis=0), axis=1)))

    def jump_total_variation(self) -> float:
        return float(sum(np.linalg.norm(amp) for _, amp in self.jumps))

    def integral(self) -> np.ndarray:
        """Exact integral over the domain (trapezoid on the PL part)."""
        dt = np.diff(self.ac_breaks)[:, None]
        total = np.sum(0.5 * dt * (self.ac_values[:-1] + self.ac_values[1:]), axis=0)
        b = self.domain[1]
        for loc, amp in self.jumps:
            total = total + amp * (b - loc)
        if self.staircase is not None:
            lo, hi = self.staircase.carrier
            # integral of the truncated staircase over its carrier is (hi-lo)/2
            total = total + self.staircase.rise * (0.5 * (hi - lo) + (b - hi))
        return total


def total_variation(w: BVFunction1D) -> float:
    """Exact total variation: the three parts are mutually singular by fiat."""
    tv = w.ac_total_variation() + w.jump_total_variation()
    if w.staircase is not None:
        tv += w.staircase.tv()
    return tv


def pl_function(domain, breaks, values) -> BVFunction1D:
    """Purely absolutely continuous piecewise-linear function."""
    return BVFunction1D(tuple(domain), np.asarray(breaks, float), np.asarray(values, float))


def constant(domain, value) -> BVFunction1D:
    v = np.atleast_1d(np.asarray(value, dtype=float))
    a, b = domain
    return BVFunction1D((a, b), np.array([a, b]), np.stack([v, v]))


def step_function(domain, base, jumps) -> BVFunction1D:
    """Piecewise-constant function: base value plus the given jumps."""
    w = constant(domain, base)
    return BVFunction1D(w.domain, w.ac_breaks, w.ac_values, tuple(jumps))


def cantor_staircase(depth: int) -> BVFunction1D:
    """Depth-truncated middle-thirds staircase on (0, 1), rising 0 to 1."""
    if not 1 <= depth <= 24:
        raise InvalidInput("depth must be between 1 and 24")
    return BVFunction1D(
        (0.0, 1.0),
        np.array([0.0, 1.0]),
        np.zeros((2, 1)),
        (),
        Staircase(depth, np.array([1.0]), (0.0, 1.0)),
    )


def flatten(w: BVFunction1D) -> BVFunction1D:
    """Replace the symbolic staircase by its exact piecewise-linear truncation."""
    if w.staircase is None:
        return w
    st = w.staircase
    if st.depth > _MAX_FLATTEN_DEPTH:
        raise InvalidInput(f"refusing to flatten staircase of depth {st.depth}")
    lo, hi = st.carrier
    pts = {float(x) for x in w.ac_breaks}
    for s0, s1 in cantor_segments(st.depth):
        pts.add(lo + (hi - lo) * s0)
        pts.add(lo + (hi - lo) * s1)
    breaks = np.array(sorted(pts))
    keep = np.concatenate([[True], np.diff(breaks) > _MERGE_TOL])
    breaks = breaks[keep]
    breaks[0], breaks[-1] = w.domain
    values = w.ac_value(breaks) + np.stack([st.value(t) for t in breaks])
    return BVFunction1D(w.domain, breaks, values, w.jumps, None)


def _phi(t: float, eps: float, lam: float, origin: float) -> float:
    """The stop-and-go time change: slope 1/lam on soft cells, flat on rigid."""
    i = math.floor((t - origin) / eps)
    s = t - origin - i * eps
    if s <= lam * eps:
        return origin + i * eps + s / lam
    return origin + (i + 1) * eps


def _phi_preimage(y: float, eps: float, lam: float, origin: float) -> float:
    """Smallest t with _phi(t) = y."""
    i = math.floor((y - origin) / eps)
    if origin + i * eps >= y:
        i -= 1
    return origin + i * eps + lam * (y - origin - i * eps)


def stop_go_reparametrize(
    w: BVFunction1D, eps: float, lam: float, origin: float = 0.0
) -> BVFunction1D:
    """Compose a continuous PL function with the stop-and-go map.

    The output is again piecewise linear, has derivative exactly 0 on the
    rigid cells of the epsilon-grid anchored at `origin`, and preserves the
    total variation whenever the left domain endpoint lies on the grid
    (a monotone surjective reparametrization of a continuous path).
    """
    if w.jumps or w.staircase is not None:
        raise InvalidInput("stop-and-go needs a continuous input; flatten first")
    if not (eps > 0.0 and 0.0 < lam < 1.0):
        raise InvalidInput("need eps > 0 and lam in (0, 1)")
    a, b = w.domain
    b_eps = _phi_preimage(b, eps, lam, origin)

    # breakpoint/image pairs: grid points, the clamp point, and exact
    # preimages of the input's own breakpoints
    pairs = {a: min(_phi(a, eps, lam, origin), b), b: b}
    if a < b_eps < b:
        pairs[b_eps] = b
    i0 = math.floor((a - origin) / eps)
    i1 = math.ceil((b - origin) / eps)
    for i in range(i0, i1 + 1):
        for t in (origin + i * eps, origin + i * eps + lam * eps):
            if a < t < b:
                pairs[t] = min(_phi(t, eps, lam, origin), b)
    for y in w.ac_breaks:
        t = _phi_preimage(float(y), eps, lam, origin)
        if a < t < b and t < b_eps:
            pairs[t] = float(y)
    ts = np.array(sorted(pairs))
    ys = np.array([pairs[t] for t in ts])
    values = w.ac_value(np.clip(ys, a, b))
    return BVFunction1D(w.domain, ts, values)


def piecewise_constant_approximation(w: BVFunction1D, n: int) -> BVFunction1D:
    """Equi-variation quantile flattening of a purely singular function.

    Original jumps are kept verbatim; the staircase is replaced by n+1
    levels spanning its full rise, with breakpoints at the variation
    mid-quantiles.  The output total variation never exceeds the input's and
    here is in fact exact; the L1 distance decays like 1/n.
    """
    if n < 1:
        raise InvalidInput("need n >= 1")
    if w.ac_total_variation() > 0.0:
        raise InvalidInput("input must be purely singular (constant AC part)")
    merged = {}
    for loc, amp in w.jumps:
        merged[loc] = merged.get(loc, 0.0) + amp
    if w.staircase is not None:
        st = w.staircase
        lo, hi = st.carrier
        for k in range(1, n + 1):
            q = (k - 0.5) / n
            loc = lo + (hi - lo) * cantor_quantile(q, st.depth)
            merged[loc] = merged.get(loc, 0.0) + st.rise / n
    jumps = tuple((loc, merged[loc]) for loc in sorted(merged))
    return BVFunction1D(w.domain, w.ac_breaks, w.ac_values, jumps, None)


def ramp_jumps(w: BVFunction1D, width: float) -> BVFunction1D:
    """Replace each jump by a linear ramp of at most the given width.

    The output is the AC part plus clipped linear steps, so it is continuous
    piecewise linear and agrees with w outside the ramp windows.  Windows are
    shrunk so they stay disjoint and inside the domain.
    """
    if w.staircase is not None:
        raise InvalidInput("flatten the staircase before ramping")
    if not w.jumps:
        return BVFunction1D(w.domain, w.ac_breaks, w.ac_values)
    a, b = w.domain
    locs = [a] + [loc for loc, _ in w.jumps] + [b]
    windows = []
    for k, (loc, amp) in enumerate(w.jumps):
        half = 0.5 * min(width, (loc - locs[k]) / 1.5, (locs[k + 2] - loc) / 1.5)
        windows.append((loc - half, loc + half, np.asarray(amp, float)))
    pts = sorted(
        set(map(float, w.ac_breaks)) | {t for t0, t1, _ in windows for t in (t0, t1)}
    )
    breaks = np.array(pts)
    keep = np.concatenate([[True], np.diff(breaks) > 1e-15])
    breaks = breaks[keep]
    base = BVFunction1D(w.domain, w.ac_breaks, w.ac_values)
    values = base.ac_value(breaks)
    for t0, t1, amp in windows:
        frac = np.clip((breaks - t0) / (t1 - t0), 0.0, 1.0)
        values = values + frac[:, None] * amp[None, :]
    return BVFunction1D(w.domain, breaks, values)


def _merged_breaks(u: BVFunction1D, v: BVFunction1D) -> np.ndarray:
    pts = set(map(float, u.ac_breaks)) | set(map(float, v.ac_breaks))
    pts |= {loc for loc, _ in u.jumps} | {loc for loc, _ in v.jumps}
    breaks = np.array(sorted(pts))
    keep = np.concatenate([[True], np.diff(breaks) > _MERGE_TOL])
    return breaks[keep]


def strict_gap(seq_member: BVFunction1D, target: BVFunction1D):
    """(L1 distance, |TV difference|) computed exactly from the representations."""
    if (
        abs(seq_member.domain[0] - target.domain[0]) > _MERGE_TOL
        or abs(seq_member.domain[1] - target.domain[1]) > _MERGE_TOL
    ):
        raise DomainMismatch("functions live on different intervals")
    if seq_member.dim != target.dim:
        raise DomainMismatch("functions have different codomain dimensions")
    tv_gap = abs(total_variation(seq_member) - total_variation(target))
    u, v = flatten(seq_member), flatten(target)
    breaks = _merged_breaks(u, v)
    l1 = 0.0
    for x0, x1 in zip(breaks[:-1], breaks[1:]):
        d0 = u.value(x0, "right") - v.value(x0, "right")
        d1 = u.value(x1, "left") - v.value(x1, "left")
        h = x1 - x0
        l1 += integral_norm_affine(d0, (d1 - d0) / h, 0.0, h)
    return l1, tv_gap


def l1_distance(u: BVFunction1D, v: BVFunction1D) -> float:
    return strict_gap(u, v)[0]


@dataclass(frozen=True, eq=False)
class RotationProfile1D:
    """Piecewise-constant rotation angle profile on an interval."""

    breaks: np.ndarray
    angles: np.ndarray

    def __post_init__(self):
        breaks = np.asarray(self.breaks, dtype=float)
        angles = np.asarray(self.angles, dtype=float)
        object.__setattr__(self, "breaks", breaks)
        object.__setattr__(self, "angles", angles)
        if len(breaks) != len(angles) + 1:
            raise InvalidInput("need one more breakpoint than angle pieces")
        if np.any(np.diff(breaks) <= 0):
            raise InvalidInput("breakpoints must be strictly increasing")
        if not np.all(np.isfinite(angles)):
            raise InvalidInput("angles must be finite")

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.breaks[0]), float(self.breaks[-1])

    def piece_index(self, t: float) -> int:
        i = int(np.searchsorted(self.breaks, t, side="right")) - 1
        return min(max(i, 0), len(self.angles) - 1)

    def angle_at(self, t: float) -> float:
        return float(self.angles[self.piece_index(t)])

    def rotation_at(self, t: float) -> np.ndarray:
        th = self.angle_at(t)
        c, s = math.cos(th), math.sin(th)
        return np.array([[c, -s], [s, c]])

    def jump_locations(self) -> list[float]:
        return [
            float(self.breaks[i + 1])
            for i in range(len(self.angles) - 1)
            if self.angles[i + 1] != self.angles[i]
        ]

    def pointwise_tv(self) -> float:
        """Total variation of the matrix-valued profile in Frobenius norm."""
        tv = 0.0
        for t1, t2 in zip(self.angles[:-1], self.angles[1:]):
            # |R(t2) - R(t1)|_F = 2 sqrt(2) |sin((t2 - t1)/2)|
            tv += 2.0 * math.sqrt(2.0) * abs(math.sin(0.5 * (t2 - t1)))
        return tv

    def is_constant(self) -> bool:
        return bool(np.all(self.angles == self.angles[0]))
