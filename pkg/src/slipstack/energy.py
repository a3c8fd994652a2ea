"""The four energies: eps-level, homogenized candidate, and their penalized versions.

The eps-level energy integrates the slip amount |gamma| over the field; its
intrinsic twin integrates sqrt(|F|^2 - 2 det F), which agrees cell by cell on
the constraint set.  The limit energy is the slip integral of the limit map
plus the exact mass of its singular part.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import batch_col1_norm, batch_det, batch_frobenius, batch_gamma
from .bv1d import BVFunction1D
from .errors import InvalidInput, WrongClass
from .fields import PiecewiseAffineField, validate_admissibility
from .limits import ClassTag, LimitDeformation, jump_trace

_COLUMN_JUMP_TOL = 1e-10


@dataclass(frozen=True)
class PenaltySpec:
    """Anisotropic penalization weight and exponent (p > 2 throughout)."""

    delta: float
    p: float

    def __post_init__(self):
        if not self.delta > 0.0:
            raise InvalidInput("delta must be positive")
        if not self.p > 2.0:
            raise InvalidInput("p must exceed 2")


@dataclass(frozen=True)
class EnergyValue:
    value: float
    parts: dict = field(default_factory=dict)

    @property
    def finite(self) -> bool:
        return math.isfinite(self.value)

    @staticmethod
    def infinite(reason: str) -> "EnergyValue":
        return EnergyValue(math.inf, {"reason": reason})


def e_eps(f: PiecewiseAffineField, tol: float = 1e-9) -> EnergyValue:
    """Slip integral sum |gamma_cell| * area; infinite off the admissible set."""
    report = validate_admissibility(f, tol)
    if not report.ok:
        return EnergyValue.infinite("field is not admissible")
    val = float(np.dot(np.abs(batch_gamma(f.grad_stack)), f.areas))
    return EnergyValue(val, {"slip": val})


def e_eps_intrinsic(f: PiecewiseAffineField, tol: float = 1e-9) -> EnergyValue:
    """Same energy through the rotation-free density sqrt(|F|^2 - 2 det F)."""
    report = validate_admissibility(f, tol)
    if not report.ok:
        return EnergyValue.infinite("field is not admissible")
    g = f.grad_stack
    dens = np.sqrt(np.maximum(batch_frobenius(g) ** 2 - 2.0 * batch_det(g), 0.0))
    val = float(np.dot(dens, f.areas))
    return EnergyValue(val, {"slip": val})


def e_limit(u: LimitDeformation) -> EnergyValue:
    """Limit candidate: slip integral plus the exact singular mass."""
    if u.class_tag is ClassTag.B:
        raise WrongClass("limit energy is defined on class A and stronger")
    width = u.domain.width
    ac = width * sum((t1 - t0) * abs(g) for t0, t1, g in u.gamma_profile())
    jump = 0.0
    if u.psi.jumps or u.rotation.jump_locations():
        staircase = u.psi.staircase
        if staircase is not None:
            stripped = BVFunction1D(
                u.psi.domain, u.psi.ac_breaks, u.psi.ac_values, u.psi.jumps, None
            )
            probe = LimitDeformation(u.domain, u.rotation, stripped, u.class_tag)
            jump = jump_trace(probe).mass(u.domain.x1_range)
        else:
            jump = jump_trace(u).mass(u.domain.x1_range)
    cantor = 0.0
    if u.psi.staircase is not None:
        cantor = width * float(np.linalg.norm(u.psi.staircase.rise))
    return EnergyValue(
        ac + jump + cantor, {"slip": ac, "jump": jump, "cantor": cantor}
    )


def first_column_jump(f: PiecewiseAffineField) -> float:
    """Largest jump of F e1 across an interior edge (0 for laminate fields)."""
    worst = 0.0
    for e in f.adjacency:
        d = f.cells[e.i].gradient[:, 0] - f.cells[e.j].gradient[:, 0]
        worst = max(worst, float(np.hypot(d[0], d[1])))
    return worst


def e_delta_eps(
    f: PiecewiseAffineField, spec: PenaltySpec, tol: float = 1e-9
) -> EnergyValue:
    """Penalized eps-level energy.

    The first gradient column is constant per cell, so the penalty seminorm
    vanishes cellwise and the only obstruction is a jump of F e1 across an
    interior edge, which sends the energy to infinity.
    """
    base = e_eps(f, tol)
    if not base.finite:
        return base
    if first_column_jump(f) > _COLUMN_JUMP_TOL:
        return EnergyValue.infinite("first gradient column jumps across an edge")
    col_norm = batch_col1_norm(f.grad_stack)
    penalty = spec.delta * float(np.dot(col_norm**spec.p, f.areas))
    return EnergyValue(
        base.value + penalty, {"slip": base.value, "penalty": penalty}
    )


def e_delta_limit(u: LimitDeformation, spec: PenaltySpec) -> EnergyValue:
    """Penalized limit energy on the parallel class: slip + singular + delta |Omega|."""
    if u.class_tag is not ClassTag.A_PARALLEL:
        raise WrongClass("penalized limit energy needs class tag A_PARALLEL")
    base = e_limit(u)
    penalty = spec.delta * u.domain.area
    parts = dict(base.parts)
    parts["penalty"] = penalty
    return EnergyValue(base.value + penalty, parts)
