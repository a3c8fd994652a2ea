"""Piecewise-affine deformation fields on the layered rectangle.

A field is a tiling of the domain by convex cells, each carrying a constant
gradient and an affine offset.  Cells are tagged soft or rigid according to
the eps-periodic layer structure (soft is the lower lam-fraction of each
period).  Adjacency is recovered geometrically: cell interfaces are
horizontal lines, vertical lines, or graphs x2 = s x1 + c, and builders
reuse the same floats for shared interface parameters, so exact keying is
reliable.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field as dataclass_field
from typing import Iterable, Optional

import numpy as np

from . import bv1d
from .algebra import (
    batch_angle,
    batch_col1_norm,
    batch_det,
    batch_frobenius,
    batch_gamma,
)
from .bv1d import RotationProfile1D
from .errors import IncompatibleComplex, InvalidInput, NoRigidLayer
from .limits import Domain2D, LimitDeformation
from .quadrature import polygon_area, polygon_centroid, polygon_nodes

_GEOM_TOL = 1e-11


@dataclass(eq=False)
class Cell:
    """Convex polygon with constant gradient and affine offset u(x) = F x + b."""

    polygon: np.ndarray
    gradient: np.ndarray
    layer_tag: str
    offset: np.ndarray = dataclass_field(default_factory=lambda: np.zeros(2))

    def __post_init__(self):
        self.polygon = np.asarray(self.polygon, dtype=float)
        self.gradient = np.asarray(self.gradient, dtype=float)
        self.offset = np.asarray(self.offset, dtype=float)
        k = len(self.polygon)
        if not 3 <= k <= 8:
            raise InvalidInput(f"cell polygon must have 3..8 vertices, got {k}")
        if self.layer_tag not in ("soft", "rigid"):
            raise InvalidInput(f"unknown layer tag {self.layer_tag!r}")
        area = polygon_area(self.polygon)
        if area <= 0.0:
            raise InvalidInput("cell polygon must be counterclockwise with positive area")
        v = self.polygon
        n = len(v)
        for i in range(n):
            d1 = v[(i + 1) % n] - v[i]
            d2 = v[(i + 2) % n] - v[(i + 1) % n]
            if d1[0] * d2[1] - d1[1] * d2[0] < -1e-12 * max(1.0, area):
                raise InvalidInput("cell polygon must be convex")

    @property
    def area(self) -> float:
        return polygon_area(self.polygon)

    def map_point(self, p) -> np.ndarray:
        return self.gradient @ np.asarray(p, dtype=float) + self.offset

    def y_range(self) -> tuple[float, float]:
        ys = self.polygon[:, 1]
        return float(ys.min()), float(ys.max())


@dataclass(frozen=True)
class SharedEdge:
    i: int
    j: int
    p0: np.ndarray
    p1: np.ndarray

    def tangent(self) -> np.ndarray:
        d = self.p1 - self.p0
        return d / np.linalg.norm(d)


def _edge_key(p, q):
    dx, dy = q[0] - p[0], q[1] - p[1]
    if abs(dy) <= _GEOM_TOL * max(1.0, abs(dx)):
        return ("h", round(float(p[1]), 12))
    if abs(dx) <= _GEOM_TOL * max(1.0, abs(dy)):
        return ("v", round(float(p[0]), 12))
    slope = dy / dx
    intercept = p[1] - slope * p[0]
    return ("s", round(float(slope), 12), round(float(intercept), 12))


def _build_adjacency(cells: list[Cell]) -> list[SharedEdge]:
    buckets: dict = defaultdict(list)
    for ci, cell in enumerate(cells):
        v = cell.polygon
        for k in range(len(v)):
            p, q = v[k], v[(k + 1) % len(v)]
            key = _edge_key(p, q)
            axis = 1 if key[0] == "v" else 0
            lo, hi = sorted((float(p[axis]), float(q[axis])))
            buckets[key].append((ci, lo, hi, p, q, axis))
    edges: list[SharedEdge] = []
    for key, items in buckets.items():
        items.sort(key=lambda it: it[1])
        for a in range(len(items)):
            ci, lo1, hi1, p1, q1, axis = items[a]
            for b in range(a + 1, len(items)):
                cj, lo2, hi2, p2, q2, _ = items[b]
                if lo2 >= hi1 - _GEOM_TOL:
                    break
                if ci == cj:
                    continue
                lo, hi = max(lo1, lo2), min(hi1, hi2)
                if hi - lo <= _GEOM_TOL:
                    continue
                # reconstruct the overlap segment along the carrier line
                def at(t):
                    if axis == 1:
                        x = p1[0]
                        return np.array([x, t])
                    slope = (q1[1] - p1[1]) / (q1[0] - p1[0])
                    return np.array([t, p1[1] + slope * (t - p1[0])])

                edges.append(SharedEdge(ci, cj, at(lo), at(hi)))
    return edges


class PiecewiseAffineField:
    """Cell tiling of the layered rectangle at a fixed period eps."""

    def __init__(
        self,
        domain: Domain2D,
        eps: float,
        lam: float,
        cells: list[Cell],
        adjacency: Optional[list[SharedEdge]] = None,
    ):
        if not (eps > 0.0 and 0.0 < lam < 1.0):
            raise InvalidInput("need eps > 0 and lam in (0, 1)")
        self.domain = domain
        self.eps = float(eps)
        self.lam = float(lam)
        self.cells = cells
        self.adjacency = _build_adjacency(cells) if adjacency is None else adjacency
        self._grad_stack = None
        self._areas = None
        self._node_cache: dict = {}

    # cached stacks ------------------------------------------------------

    @property
    def grad_stack(self) -> np.ndarray:
        if self._grad_stack is None:
            self._grad_stack = np.stack([c.gradient for c in self.cells])
        return self._grad_stack

    @property
    def areas(self) -> np.ndarray:
        if self._areas is None:
            self._areas = np.array([c.area for c in self.cells])
        return self._areas

    def quadrature(self, order: int = 6, refine: int = 0):
        """Concatenated quadrature nodes, weights and owning-cell indices."""
        key = (order, refine)
        if key not in self._node_cache:
            pts, wts, owner = [], [], []
            for ci, cell in enumerate(self.cells):
                p, w = polygon_nodes(cell.polygon, order, refine)
                pts.append(p)
                wts.append(w)
                owner.append(np.full(len(w), ci, dtype=np.int64))
            self._node_cache[key] = (
                np.concatenate(pts),
                np.concatenate(wts),
                np.concatenate(owner),
            )
        return self._node_cache[key]

    def cell_integrals(self, func, order: int = 6, refine: int = 0) -> np.ndarray:
        """Per-cell integrals of a scalar function of position."""
        pts, wts, owner = self.quadrature(order, refine)
        vals = np.asarray(func(pts), dtype=float)
        return np.bincount(owner, weights=wts * vals, minlength=len(self.cells))

    def total_area(self) -> float:
        return float(self.areas.sum())

    def mean_value(self) -> np.ndarray:
        total = np.zeros(2)
        for c in self.cells:
            a = c.area
            total += a * (c.gradient @ polygon_centroid(c.polygon) + c.offset)
        return total / self.domain.area

    def shift(self, delta) -> None:
        d = np.asarray(delta, dtype=float)
        for c in self.cells:
            c.offset = c.offset + d

    def gammas(self) -> np.ndarray:
        return batch_gamma(self.grad_stack)


@dataclass(frozen=True)
class AdmissibilityReport:
    ok: bool
    cell_ok: np.ndarray
    max_det_err: float
    max_col_err: float
    max_rigid_gamma: float


def validate_admissibility(f: PiecewiseAffineField, tol: float = 1e-9) -> AdmissibilityReport:
    """Constraint-set membership per cell, plus zero slip on rigid cells."""
    g = f.grad_stack
    det_err = np.abs(batch_det(g) - 1.0)
    col_err = np.abs(batch_col1_norm(g) - 1.0)
    gam = np.abs(batch_gamma(g))
    rigid = np.array([c.layer_tag == "rigid" for c in f.cells])
    ok = (det_err <= tol) & (col_err <= tol) & (~rigid | (gam <= tol))
    return AdmissibilityReport(
        ok=bool(np.all(ok)),
        cell_ok=ok,
        max_det_err=float(det_err.max(initial=0.0)),
        max_col_err=float(col_err.max(initial=0.0)),
        max_rigid_gamma=float(gam[rigid].max(initial=0.0)) if rigid.any() else 0.0,
    )


def validate_compatibility(f: PiecewiseAffineField) -> float:
    """Max rank-one defect over shared edges; a gradient field returns ~0."""
    worst = 0.0
    for e in f.adjacency:
        t = e.tangent()
        d = (f.cells[e.i].gradient - f.cells[e.j].gradient) @ t
        worst = max(worst, float(np.hypot(d[0], d[1])))
    return worst


def validate_continuity(f: PiecewiseAffineField) -> float:
    """Max mismatch of u across shared edges, checked at both segment ends."""
    worst = 0.0
    for e in f.adjacency:
        ci, cj = f.cells[e.i], f.cells[e.j]
        for p in (e.p0, e.p1):
            d = ci.map_point(p) - cj.map_point(p)
            worst = max(worst, float(np.hypot(d[0], d[1])))
    return worst


def check_layer_tags(f: PiecewiseAffineField, tol: float = 1e-9) -> bool:
    """Each cell's interior must lie inside one soft or rigid layer."""
    for c in f.cells:
        y0, y1 = c.y_range()
        j = math.floor((y0 + tol) / f.eps)
        soft_hi = (j + f.lam) * f.eps
        if c.layer_tag == "soft":
            if y0 < j * f.eps - tol or y1 > soft_hi + tol:
                return False
        else:
            if y0 < soft_hi - tol or y1 > (j + 1.0) * f.eps + tol:
                return False
    return True


def integrate_offsets(
    regions: Iterable[tuple[np.ndarray, np.ndarray, str]],
    anchor,
    domain: Domain2D,
    eps: float,
    lam: float,
    tol: float = 1e-8,
) -> PiecewiseAffineField:
    """Propagate affine offsets over a compatible cell complex.

    Breadth-first from the cell containing the anchor point (cell 0 and its
    centroid when anchor is None); every non-tree edge is checked for cycle
    consistency.  The result is shifted to zero mean.
    """
    cells = [Cell(poly, grad, tag) for poly, grad, tag in regions]
    f = PiecewiseAffineField(domain, eps, lam, cells)
    n = len(cells)
    if n == 0:
        raise InvalidInput("empty cell complex")
    neighbors: dict[int, list[SharedEdge]] = defaultdict(list)
    for e in f.adjacency:
        neighbors[e.i].append(e)
        neighbors[e.j].append(SharedEdge(e.j, e.i, e.p0, e.p1))

    if anchor is None:
        seed = 0
        anchor = polygon_centroid(cells[0].polygon)
    else:
        anchor = np.asarray(anchor, dtype=float)
        seed = _containing_cell(cells, anchor)
    cells[seed].offset = -cells[seed].gradient @ anchor
    known = np.zeros(n, dtype=bool)
    known[seed] = True
    queue = [seed]
    while queue:
        i = queue.pop()
        for e in neighbors[i]:
            j = e.j
            mid = 0.5 * (e.p0 + e.p1)
            target = cells[i].map_point(mid)
            if not known[j]:
                cells[j].offset = target - cells[j].gradient @ mid
                known[j] = True
                queue.append(j)
            else:
                gap = float(np.linalg.norm(cells[j].map_point(mid) - target))
                if gap > tol:
                    raise IncompatibleComplex(
                        f"cycle inconsistency {gap:.3e} between cells {i} and {j}"
                    )
    if not known.all():
        raise IncompatibleComplex("cell adjacency graph is not connected")
    f.shift(-f.mean_value())
    return f


def _containing_cell(cells: list[Cell], p: np.ndarray) -> int:
    for i, c in enumerate(cells):
        v = c.polygon
        inside = True
        for k in range(len(v)):
            d = v[(k + 1) % len(v)] - v[k]
            r = p - v[k]
            if d[0] * r[1] - d[1] * r[0] < -1e-9:
                inside = False
                break
        if inside:
            return i
    raise InvalidInput("anchor point lies in no cell")


def gradient_total_variation(f: PiecewiseAffineField) -> float:
    """Integral of the Frobenius norm of the gradient."""
    return float(np.dot(batch_frobenius(f.grad_stack), f.areas))


def _clip_horizontal(poly: np.ndarray, y0: float, y1: float) -> Optional[np.ndarray]:
    """Sutherland-Hodgman clip of a convex polygon to the slab y0 <= y <= y1."""
    def clip(pts, y, keep_below):
        out = []
        n = len(pts)
        for k in range(n):
            p, q = pts[k], pts[(k + 1) % n]
            pin = (p[1] <= y + 1e-15) if keep_below else (p[1] >= y - 1e-15)
            qin = (q[1] <= y + 1e-15) if keep_below else (q[1] >= y - 1e-15)
            if pin:
                out.append(p)
            if pin != qin:
                t = (y - p[1]) / (q[1] - p[1])
                out.append(p + t * (q - p))
        return out

    pts = list(np.asarray(poly, dtype=float))
    pts = clip(pts, y1, keep_below=True)
    if len(pts) < 3:
        return None
    pts = clip(pts, y0, keep_below=False)
    if len(pts) < 3:
        return None
    arr = np.array(pts)
    keep = [0]
    for k in range(1, len(arr)):
        if np.linalg.norm(arr[k] - arr[keep[-1]]) > 1e-14:
            keep.append(k)
    if np.linalg.norm(arr[keep[-1]] - arr[keep[0]]) <= 1e-14:
        keep.pop()
    if len(keep) < 3:
        return None
    arr = arr[keep]
    if polygon_area(arr) <= 1e-16:
        return None
    return arr


def l1_distance_to_limit(f: PiecewiseAffineField, u: LimitDeformation) -> float:
    """Integral of |f - u| after aligning both means to zero.

    Cells are clipped at the limit's x2-breakpoints so the difference is
    affine per piece; the norm is integrated by a refined Gauss rule.
    """
    psi_flat = bv1d.flatten(u.psi)
    cuts = sorted(
        set(map(float, u.rotation.breaks))
        | set(map(float, psi_flat.ac_breaks))
        | {loc for loc, _ in psi_flat.jumps}
    )
    u_mean = u.mean()
    f_mean = f.mean_value()
    total = 0.0
    for c in f.cells:
        y0, y1 = c.y_range()
        local = [y0] + [t for t in cuts if y0 < t < y1] + [y1]
        for s0, s1 in zip(local[:-1], local[1:]):
            piece = (
                c.polygon
                if (s0 <= y0 + 1e-15 and s1 >= y1 - 1e-15)
                else _clip_horizontal(c.polygon, s0, s1)
            )
            if piece is None:
                continue
            sm = 0.5 * (s0 + s1)
            r = u.rotation.rotation_at(sm)
            k = min(
                int(np.searchsorted(psi_flat.ac_breaks, sm, side="right")) - 1,
                len(psi_flat.ac_breaks) - 2,
            )
            slope = psi_flat.ac_slopes()[k]
            t_k = float(psi_flat.ac_breaks[k])
            base = psi_flat.value(sm, "right") - slope * (sm - t_k)

            amat = c.gradient - r - np.outer(slope, np.array([0.0, 1.0]))
            bvec = c.offset - base + slope * t_k - f_mean + u_mean

            pts, wts = polygon_nodes(piece, 6, refine=1)
            vals = np.linalg.norm(pts @ amat.T + bvec, axis=1)
            total += float(np.dot(wts, vals))
    return total


def extract_rotation_profile(f: PiecewiseAffineField) -> tuple[RotationProfile1D, float]:
    """Per-period rigid rotations and the pointwise total variation.

    A clipped top period with no rigid cells inherits the previous period's
    rotation; a missing rigid layer elsewhere is an error.
    """
    a, b = f.domain.x2_range
    eps, lam = f.eps, f.lam
    j0 = math.floor(a / eps + 1e-12)
    j1 = math.ceil(b / eps - 1e-12)
    rigid_angle: dict[int, float] = {}
    for c in f.cells:
        if c.layer_tag != "rigid":
            continue
        y0, _ = c.y_range()
        j = math.floor((y0 + 1e-12) / eps)
        if j not in rigid_angle:
            rigid_angle[j] = float(batch_angle(c.gradient[None])[0])
    breaks = [a]
    angles = []
    prev = None
    for j in range(j0, j1):
        lo, hi = max(a, j * eps), min(b, (j + 1) * eps)
        if hi - lo <= 1e-14:
            continue
        if j in rigid_angle:
            ang = rigid_angle[j]
        elif prev is not None and (j + lam) * eps >= b - 1e-12:
            ang = prev
        else:
            raise NoRigidLayer(f"period {j} has no rigid cells")
        breaks.append(hi)
        angles.append(ang)
        prev = ang
    profile = RotationProfile1D(np.array(breaks), np.array(angles))
    return profile, profile.pointwise_tv()
