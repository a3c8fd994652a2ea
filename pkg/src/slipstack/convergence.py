"""Convergence certification: weak* gaps, Richardson sweeps, gap tables.

Test functions are polynomial bumps vanishing on the boundary.  The battery
multiplies the bump by q in {1, x1, x2}: the first two probe the rotation
mismatch of the transition bands, the x2 factor is odd across the jump line
at 0 and probes the band-averaging error of pure-shear constructions, so
every builder's gap decays at first order against every battery member.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import constructions as cons
from .energy import EnergyValue, PenaltySpec, e_delta_eps, e_eps
from .errors import InvalidInput, SlipstackError
from .fields import PiecewiseAffineField, gradient_total_variation
from .limits import Domain2D, LimitDeformation, canonical_domain, du_pairing
from .quadrature import gauss_interval

RATE_WINDOW = 0.25


@dataclass(frozen=True)
class TestFunction:
    """Polynomial bump (x1-c)(d-x1)(x2-a)(b-x2) q(x), zero on the boundary."""

    name: str
    domain: Domain2D
    q: Callable[[np.ndarray, np.ndarray], np.ndarray]

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        x1, x2 = pts[..., 0], pts[..., 1]
        c, d = self.domain.x1_range
        a, b = self.domain.x2_range
        return (x1 - c) * (d - x1) * (x2 - a) * (b - x2) * self.q(x1, x2)

    def line_integral(self, x2: float, n: int = 8) -> float:
        """Integral over the x1-range at fixed height, exact for the battery."""
        c, d = self.domain.x1_range
        x, w = gauss_interval(c, d, n)
        pts = np.column_stack([x, np.full_like(x, x2)])
        return float(np.dot(w, self(pts)))


def battery(domain: Optional[Domain2D] = None) -> list[TestFunction]:
    dom = domain or canonical_domain()
    return [
        TestFunction("phi1", dom, lambda x1, x2: np.ones_like(x1)),
        TestFunction("phi2", dom, lambda x1, x2: x1),
        TestFunction("phi3", dom, lambda x1, x2: x2),
    ]


def gradient_pairing(f: PiecewiseAffineField, phi: TestFunction) -> np.ndarray:
    """Matrix integral of (grad f) phi over the domain."""
    integrals = f.cell_integrals(phi)
    return np.einsum("n,nij->ij", integrals, f.grad_stack)


def weak_star_gap(
    f: PiecewiseAffineField, u: LimitDeformation, phi: TestFunction
) -> float:
    """Frobenius distance between the field pairing and the limit pairing."""
    return float(
        np.linalg.norm(gradient_pairing(f, phi) - du_pairing(u, phi).as_array())
    )


def richardson(values: Sequence[float]) -> float:
    """Iterated extrapolation for eps-halving sequences, orders 1, 2, ...

    Exact for any sequence polynomial in eps of degree < len(values); returns
    the value itself for constant sequences.
    """
    table = [float(v) for v in values]
    m = 1
    while len(table) > 1:
        w = 2.0**m
        table = [(w * table[k + 1] - table[k]) / (w - 1.0) for k in range(len(table) - 1)]
        m += 1
    return table[0]


def empirical_rate(eps_list: Sequence[float], values: Sequence[float]) -> float:
    """Median order from successive difference ratios; nan for constant tails."""
    diffs = np.diff(np.asarray(values, dtype=float))
    rates = []
    for d1, d2 in zip(diffs[:-1], diffs[1:]):
        if abs(d1) > 1e-14 and abs(d2) > 1e-14:
            ratio = d1 / d2
            if ratio > 0:
                rates.append(math.log2(ratio))
    return float(np.median(rates)) if rates else math.nan


def decay_rate(eps_list: Sequence[float], values: Sequence[float]) -> float:
    """Least-squares slope of log|value| against log eps (for vanishing gaps)."""
    e = np.asarray(eps_list, dtype=float)
    v = np.abs(np.asarray(values, dtype=float))
    mask = v > 1e-300
    if mask.sum() < 2:
        return math.nan
    coeff = np.polyfit(np.log(e[mask]), np.log(v[mask]), 1)
    return float(coeff[0])


@dataclass(frozen=True)
class SweepResult:
    eps_list: tuple[float, ...]
    values: tuple[float, ...]
    extrapolated: float
    rate: float

    def __post_init__(self):
        if any(e2 >= e1 for e1, e2 in zip(self.eps_list, self.eps_list[1:])):
            raise InvalidInput("eps values must be strictly decreasing")

    @property
    def reliable(self) -> bool:
        """First-order extrapolation trustworthy: constant or rate within 25%."""
        return math.isnan(self.rate) or abs(self.rate - 1.0) <= RATE_WINDOW


def sweep(
    builder: Callable[[LimitDeformation, float], PiecewiseAffineField],
    u: LimitDeformation,
    quantity,
    eps_list: Sequence[float],
    penalty: Optional[PenaltySpec] = None,
    phi: Optional[TestFunction] = None,
) -> SweepResult:
    """Evaluate a quantity over an eps sweep and extrapolate.

    quantity: one of "e_eps", "e_delta_eps", "gradient_tv", "weak_star_gap",
    or a callable (field, u) -> float.  Builder failures skip the eps with a
    warning.
    """
    kept_eps, values = [], []
    for eps in eps_list:
        try:
            f = builder(u, eps)
        except SlipstackError as exc:
            warnings.warn(f"builder failed at eps={eps:g}: {exc}")
            continue
        if quantity == "e_eps":
            val = e_eps(f).value
        elif quantity == "e_delta_eps":
            if penalty is None:
                raise InvalidInput("e_delta_eps sweep needs a penalty spec")
            val = e_delta_eps(f, penalty).value
        elif quantity == "gradient_tv":
            val = gradient_total_variation(f)
        elif quantity == "weak_star_gap":
            if phi is None:
                raise InvalidInput("weak_star_gap sweep needs a test function")
            val = weak_star_gap(f, u, phi)
        elif callable(quantity):
            val = float(quantity(f, u))
        else:
            raise InvalidInput(f"unknown sweep quantity {quantity!r}")
        kept_eps.append(float(eps))
        values.append(float(val))
    if len(values) < 2:
        raise InvalidInput("sweep needs at least two successful eps values")
    return SweepResult(
        tuple(kept_eps),
        tuple(values),
        richardson(values),
        empirical_rate(kept_eps, values),
    )


@dataclass(frozen=True)
class GapRow:
    construction: str
    measured_limit: float
    limit_energy: float
    gap: float
    predicted: float
    strict_expected: bool
    strict_ok: bool


def gap_table(
    u: LimitDeformation,
    s_angle: Optional[float] = None,
    rho: float = 0.5,
    lam: float = 0.5,
    k_range: tuple[int, int] = (5, 9),
    measure: bool = True,
) -> list[GapRow]:
    """Limit-energy table for every single-jump construction that applies.

    Exact recovery is reached only by the parallel-jump band; every other
    construction overshoots the limit energy by a provably strict margin.
    """
    from .energy import e_limit

    eps_list = cons.dyadic_eps_sweep(lam, *k_range)
    e_u = e_limit(u).value
    rows = []
    for kind in ("general", "variant_i", "variant_ii", "variant_iii"):
        try:
            predicted = cons.predicted_limit(kind, u, s_angle=s_angle, rho=rho) if kind != "variant_i" else cons.predicted_limit(kind, u, rho=rho)
        except SlipstackError:
            continue
        measured = math.nan
        if measure:
            kwargs = {}
            if kind in ("general", "variant_ii") and s_angle is not None:
                kwargs["s_angle"] = s_angle
            if kind == "variant_i":
                kwargs["rho"] = rho
            builder = lambda uu, eps, _k=kind, _kw=kwargs: cons.BUILDERS[_k](uu, eps, lam=lam, **_kw)
            measured = sweep(builder, u, "e_eps", eps_list).extrapolated
        strict_expected = kind != "variant_iii"
        base = measured if measure and math.isfinite(measured) else predicted
        strict_ok = (base > e_u + 1e-9) if strict_expected else (abs(base - e_u) <= 1e-9)
        rows.append(
            GapRow(kind, measured, e_u, base - e_u, predicted, strict_expected, strict_ok)
        )
    return rows


@dataclass(frozen=True)
class MismatchResult:
    slip_mass_limit: float
    pairing_value: float
    mismatch: float
    predicted_mismatch: float


def slip_mass(f: PiecewiseAffineField, phi: TestFunction) -> float:
    """Integral of the signed slip density against a test function."""
    from .algebra import batch_gamma

    integrals = f.cell_integrals(phi)
    return float(np.dot(batch_gamma(f.grad_stack), integrals))


def cc_mismatch(
    u: LimitDeformation,
    phi: TestFunction,
    s_angle: Optional[float] = None,
    lam: float = 0.5,
    k_range: tuple[int, int] = (5, 11),
) -> MismatchResult:
    """Compensated-compactness mismatch of the oscillating-rotation construction.

    The slip masses of the variant-(ii) fields converge to (alpha + beta)
    times the jump-line average of phi, while the slip read off the limit is
    only the R e1 component of the jump; the defect is beta (1 - Re1 . Se1)
    times the same line integral.
    """
    p = cons.variant_ii_params(u, s_angle)
    eps_list = cons.dyadic_eps_sweep(lam, *k_range)
    builder = lambda uu, eps: cons.single_jump_variant_ii(uu, eps, s_angle=p.aux_angle, lam=lam)
    res = sweep(builder, u, lambda f, _u: slip_mass(f, phi), eps_list)
    jump_loc = 0.0
    i0 = phi.line_integral(jump_loc)
    re1 = np.array([math.cos(p.angle), math.sin(p.angle)])
    se1 = np.array([math.cos(p.aux_angle), math.sin(p.aux_angle)])
    pairing = float(p.dpsi @ re1) * i0
    predicted = p.beta * (1.0 - float(re1 @ se1)) * i0
    return MismatchResult(res.extrapolated, pairing, res.extrapolated - pairing, predicted)
