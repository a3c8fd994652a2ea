"""Polygon quadrature and exact 1D integrals used throughout the suite.

Convex cells are fan-triangulated and each triangle carries a tensor
Gauss-Legendre rule pushed forward through the Duffy map.  With n points per
axis the rule integrates bivariate polynomials of total degree 2n - 2
exactly, which covers every polynomial test function in the battery.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import InvalidInput


@lru_cache(maxsize=None)
def gauss01(n: int):
    """Gauss-Legendre nodes and weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def gauss_interval(a: float, b: float, n: int):
    x, w = gauss01(n)
    return a + (b - a) * x, (b - a) * w


def polygon_area(vertices: np.ndarray) -> float:
    """Signed shoelace area; positive for counterclockwise polygons."""
    v = np.asarray(vertices, dtype=float)
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def polygon_centroid(vertices: np.ndarray) -> np.ndarray:
    """Centroid of a simple polygon (exact shoelace formula)."""
    v = np.asarray(vertices, dtype=float)
    x, y = v[:, 0], v[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    a = 0.5 * float(np.sum(cross))
    if abs(a) < 1e-300:
        return v.mean(axis=0)
    cx = float(np.sum((x + xn) * cross)) / (6.0 * a)
    cy = float(np.sum((y + yn) * cross)) / (6.0 * a)
    return np.array([cx, cy])


def _triangle_nodes(v0, v1, v2, n: int):
    """Duffy-mapped tensor Gauss rule on one triangle."""
    u, wu = gauss01(n)
    v, wv = gauss01(n)
    U, V = np.meshgrid(u, v, indexing="ij")
    WU, WV = np.meshgrid(wu, wv, indexing="ij")
    d10 = np.asarray(v1) - np.asarray(v0)
    d20 = np.asarray(v2) - np.asarray(v0)
    pts = (
        np.asarray(v0)[None, :]
        + U.reshape(-1, 1) * ((1.0 - V).reshape(-1, 1) * d10 + V.reshape(-1, 1) * d20)
    )
    jac = float(d10[0] * d20[1] - d10[1] * d20[0])
    wts = (WU * WV * U).reshape(-1) * jac
    return pts, wts


def _subdivide(tri):
    """Split a triangle into four similar ones at edge midpoints."""
    a, b, c = tri
    ab, bc, ca = 0.5 * (a + b), 0.5 * (b + c), 0.5 * (c + a)
    return [(a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca)]


def polygon_nodes(vertices, n: int = 6, refine: int = 0):
    """Quadrature nodes and weights for a convex polygon.

    refine > 0 subdivides every fan triangle 4**refine times; useful when the
    integrand has a kink inside the cell (e.g. the norm of an affine field).
    """
    v = np.asarray(vertices, dtype=float)
    if len(v) < 3:
        raise InvalidInput("polygon needs at least 3 vertices")
    tris = [(v[0], v[i], v[i + 1]) for i in range(1, len(v) - 1)]
    for _ in range(refine):
        tris = [t for tri in tris for t in _subdivide(tri)]
    all_pts, all_wts = [], []
    for a, b, c in tris:
        pts, wts = _triangle_nodes(a, b, c, n)
        all_pts.append(pts)
        all_wts.append(wts)
    return np.concatenate(all_pts), np.concatenate(all_wts)


def polygon_integral(func, vertices, n: int = 6, refine: int = 0):
    """Integrate func(pts) over the polygon; func maps (m, 2) to (m, ...)."""
    pts, wts = polygon_nodes(vertices, n, refine)
    vals = np.asarray(func(pts))
    return np.tensordot(wts, vals, axes=(0, 0))


def integral_norm_affine(p, q, t0: float, t1: float) -> float:
    """Exact integral of |p + t q| over [t0, t1] for vectors p, q.

    The integrand is the square root of a nonnegative quadratic; the
    antiderivative is elementary.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    a = float(np.dot(q, q))
    if a == 0.0:
        return float(np.linalg.norm(p)) * (t1 - t0)
    b = float(np.dot(p, q))
    c = float(np.dot(p, p))
    # |p + t q|^2 = a (t + b/a)^2 + d with d >= 0 up to roundoff
    d = max(c - b * b / a, 0.0)
    sa = math.sqrt(a)

    def anti(t: float) -> float:
        s = t + b / a
        r = math.sqrt(a * s * s + d)
        if d <= 1e-300 * max(c, 1.0):
            return 0.5 * sa * s * abs(s)
        return 0.5 * (s * r + d / sa * math.asinh(sa * s / math.sqrt(d)))

    return anti(t1) - anti(t0)
