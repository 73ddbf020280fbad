"""Closed affine subspaces and projection methods with affine targets.

An affine subspace V = v + L is stored as an anchor point plus a direction
subspace L = V - V.  The anchor is canonicalized to the least-norm point
of V (the projection of the origin), which makes the representation unique
and matches the scale factor ||x - P_V(0)|| appearing in the error bounds.

Projection uses the translation formula P_V(x) = v + P_L(x - v).  The
iteration routines project in affine form directly, never by pre-
translating to the linear case, so the translation-consistency tests in
the suite are a genuine cross-check rather than a tautology.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .angles import friedrichs_gram
from .errors import InfeasibleError, InputError
from .methods import IterationTrace, cyclic_bound
from .numlin import DEFAULT_TOL, RankTolerance, as_matrix, as_vector
from .subspaces import Subspace, intersection

__all__ = [
    "AffineSubspace",
    "intersection_affine",
    "simultaneous_affine",
    "cyclic_affine",
    "FEASIBILITY_TOL",
]

# Relative residual above which a joint membership system is declared
# inconsistent (empty intersection).
FEASIBILITY_TOL = 1e-8

_ANCHOR_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class AffineSubspace:
    """A closed affine subspace, anchor plus direction.

    Any anchor on the set is accepted; the constructor replaces it by the
    least-norm point (anchor orthogonal to direction), which leaves the set
    unchanged.
    """

    anchor: np.ndarray
    direction: Subspace

    def __post_init__(self) -> None:
        v = as_vector(self.anchor, "anchor")
        if v.shape[0] != self.direction.ambient_dim:
            raise InputError(
                f"anchor has dimension {v.shape[0]}, "
                f"expected {self.direction.ambient_dim}"
            )
        v = v - self.direction.project(v)
        v.setflags(write=False)
        object.__setattr__(self, "anchor", v)

    @property
    def ambient_dim(self) -> int:
        return self.direction.ambient_dim

    @property
    def dim(self) -> int:
        return self.direction.dim

    @classmethod
    def from_point_span(
        cls, point, spanning, tol: RankTolerance = DEFAULT_TOL
    ) -> "AffineSubspace":
        """The affine subspace through ``point`` spanned by ``spanning``'s columns."""
        p = as_vector(point, "point")
        M = as_matrix(spanning, "spanning")
        if M.shape[0] != p.shape[0]:
            raise InputError(
                f"point has dimension {p.shape[0]}, spanning rows {M.shape[0]}"
            )
        return cls(anchor=p, direction=Subspace.from_spanning(M, tol))

    def project(self, x) -> np.ndarray:
        """Nearest point of the set to x, via P_V(x) = v + P_L(x - v)."""
        v = as_vector(x, "x")
        if v.shape[0] != self.ambient_dim:
            raise InputError(
                f"vector has dimension {v.shape[0]}, expected {self.ambient_dim}"
            )
        return self.anchor + self.direction.project(v - self.anchor)

    def contains_point(self, x, tol: float = _ANCHOR_TOL) -> bool:
        v = as_vector(x, "x")
        return bool(np.linalg.norm(v - self.project(v)) <= tol)


def _checked_affine_family(affines, minimum: int = 1) -> list[AffineSubspace]:
    fam = list(affines)
    if len(fam) < minimum:
        raise InputError(f"need at least {minimum} affine subspace(s), got {len(fam)}")
    n = fam[0].ambient_dim
    for V in fam[1:]:
        if V.ambient_dim != n:
            raise InputError("ambient dimensions differ across affine subspaces")
    return fam


def intersection_affine(
    affines, tol: RankTolerance = DEFAULT_TOL, feasibility_tol: float = FEASIBILITY_TOL
) -> AffineSubspace:
    """Intersection of affine subspaces, or InfeasibleError when empty.

    Solves the stacked membership system (I - P_i) x = (I - P_i) v_i in the
    least-squares sense; the minimum-norm solution is the canonical anchor
    and the direction is the intersection of the direction subspaces.  A
    relative residual above ``feasibility_tol`` means no common point
    exists.
    """
    fam = _checked_affine_family(affines)
    n = fam[0].ambient_dim
    eye = np.eye(n)
    rows = []
    rhs = []
    for V in fam:
        complement = eye - V.direction.projector()
        rows.append(complement)
        rhs.append(complement @ V.anchor)
    A = np.vstack(rows)
    b = np.concatenate(rhs)
    solution, _, _, _ = np.linalg.lstsq(A, b, rcond=None)
    residual = float(np.linalg.norm(A @ solution - b))
    scale = max(1.0, float(np.linalg.norm(b)))
    if residual > feasibility_tol * scale:
        raise InfeasibleError(
            f"affine subspaces have empty intersection "
            f"(membership residual {residual:.3e} exceeds "
            f"{feasibility_tol:.0e} * {scale:.3e})"
        )
    direction = intersection([V.direction for V in fam], tol)
    return AffineSubspace(anchor=solution, direction=direction)


def _affine_trace(fam, x0, k_max, sweep, rate) -> IterationTrace:
    if k_max < 0:
        raise InputError("k_max must be nonnegative")
    target_set = intersection_affine(fam)
    x = as_vector(x0, "x0")
    if x.shape[0] != fam[0].ambient_dim:
        raise InputError(
            f"start has dimension {x.shape[0]}, expected {fam[0].ambient_dim}"
        )
    target = target_set.project(x)
    scale = np.linalg.norm(x - target_set.anchor)
    errors = np.empty(k_max + 1)
    errors[0] = np.linalg.norm(x - target)
    current = x
    for k in range(1, k_max + 1):
        current = sweep(current)
        errors[k] = np.linalg.norm(current - target)
    bounds = rate ** np.arange(k_max + 1) * scale
    return IterationTrace(start=x, errors=errors, bounds=bounds)


def simultaneous_affine(affines, x0, k_max: int) -> IterationTrace:
    """Averaged affine projections x <- (1/r) sum_i P_{V_i}(x).

    The bound attached is q^k ||x0 - P_V(0)|| with
    q = (r-1)/r cos(L_1, ..., L_r) + 1/r over the direction subspaces
    (q = 0 when every direction equals the common direction, since the
    error then vanishes after one step).
    """
    fam = _checked_affine_family(affines)
    r = len(fam)

    def sweep(x: np.ndarray) -> np.ndarray:
        acc = np.zeros_like(x)
        for V in fam:
            acc += V.project(x)
        return acc / r

    if r == 1:
        rate = 0.0
    else:
        fr = friedrichs_gram([V.direction for V in fam])
        rate = 0.0 if fr.degenerate else (r - 1.0) / r * fr.value + 1.0 / r
    return _affine_trace(fam, x0, k_max, sweep, rate)


def cyclic_affine(affines, x0, k_max: int) -> IterationTrace:
    """Cyclic sweeps x <- P_{V_r}(... P_{V_1}(x) ...).

    The bound attached is the reduced-projector product bound of the
    directions times ||x0 - P_V(0)||; it is valid but not necessarily
    attained for r > 2.
    """
    fam = _checked_affine_family(affines)

    def sweep(x: np.ndarray) -> np.ndarray:
        for V in fam:
            x = V.project(x)
        return x

    rate = 0.0 if len(fam) == 1 else cyclic_bound([V.direction for V in fam], 1)
    return _affine_trace(fam, x0, k_max, sweep, rate)
