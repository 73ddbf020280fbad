"""Friedrichs numbers of subspace families, by independent routes.

For two subspaces the quantity is the largest principal-angle cosine
between the parts of each subspace orthogonal to their intersection.  For
r subspaces it generalizes to

    cos(M_1, ..., M_r)
        = sup  (1/(r-1)) * sum_{i != j} <x_i, x_j>  /  sum_i ||x_i||^2

over x_i in M_i intersect M-perp with not all x_i zero, where M is the
common intersection.  Three routes are provided:

* ``gram_block``      - eigenvalue of the block Gram matrix of reduced
                        bases; closest to the defining supremum and the
                        designated reference route.
* ``norm_inversion``  - inverted from the operator norm of the averaged
                        projector minus the intersection projector.
* ``principal_angle`` - two-subspace route via the cross-Gram of reduced
                        bases.

When every reduced part M_i intersect M-perp is trivial, the supremum
ranges over an empty set.  By convention the value is then 0 with the
``degenerate`` flag set; the norm-inversion route refuses such input
because the inversion formula does not cover it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError, InputError
from .numlin import DEFAULT_TOL, RankTolerance, spectral_norm
from .subspaces import Subspace, intersection, reduced_component

__all__ = [
    "FriedrichsResult",
    "ROUTE_GRAM",
    "ROUTE_NORM",
    "ROUTE_PRINCIPAL",
    "cos_two",
    "friedrichs_gram",
    "friedrichs_from_norm",
]

ROUTE_GRAM = "gram_block"
ROUTE_NORM = "norm_inversion"
ROUTE_PRINCIPAL = "principal_angle"


@dataclass(frozen=True)
class FriedrichsResult:
    """A Friedrichs number in [0, 1] plus provenance.

    ``value`` is clamped to [0, 1]; ``raw`` keeps the unclamped number so
    strict inequalities (value < 1 on non-degenerate finite-dimensional
    instances) can be checked without the clamp masking them.
    """

    value: float
    degenerate: bool
    route: str
    raw: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.value <= 1.0:
            raise InputError("Friedrichs value must lie in [0, 1]")
        if self.degenerate and self.value != 0.0:
            raise InputError("degenerate results must carry value 0")


def _clamped(raw: float, degenerate: bool, route: str) -> FriedrichsResult:
    value = min(max(raw, 0.0), 1.0)
    return FriedrichsResult(value=value, degenerate=degenerate, route=route, raw=raw)


def _check_family(subspaces, minimum: int) -> list[Subspace]:
    subs = list(subspaces)
    if len(subs) < minimum:
        raise InputError(f"need at least {minimum} subspaces, got {len(subs)}")
    n = subs[0].ambient_dim
    for S in subs[1:]:
        if S.ambient_dim != n:
            raise InputError("ambient dimensions differ across subspaces")
    return subs


def cos_two(
    M1: Subspace, M2: Subspace, tol: RankTolerance = DEFAULT_TOL
) -> FriedrichsResult:
    """Friedrichs-angle cosine of a pair of subspaces.

    Computes M = M1 intersect M2, removes it from both subspaces, and
    returns the largest singular value of the cross-Gram of the reduced
    bases.  Degenerate (value 0, flag set) when either reduced part is
    trivial.
    """
    subs = _check_family([M1, M2], 2)
    common = intersection(subs, tol)
    r1 = reduced_component(subs[0], common, tol)
    r2 = reduced_component(subs[1], common, tol)
    if r1.dim == 0 or r2.dim == 0:
        return _clamped(0.0, True, ROUTE_PRINCIPAL)
    raw = spectral_norm(r1.basis.T @ r2.basis)
    return _clamped(raw, False, ROUTE_PRINCIPAL)


def friedrichs_gram(subspaces, tol: RankTolerance = DEFAULT_TOL) -> FriedrichsResult:
    """Friedrichs number via the block Gram matrix of reduced bases.

    With Q_i an orthonormal basis of M_i intersect M-perp and B the
    horizontal stack of the Q_i, the supremum equals

        (lambda_max(B^T B) - 1) / (r - 1),

    clamped to [0, 1].  Components with trivial reduced part contribute no
    columns but still count toward r.  Degenerate when every reduced part
    is trivial.
    """
    subs = _check_family(subspaces, 2)
    r = len(subs)
    common = intersection(subs, tol)
    blocks = [
        reduced_component(S, common, tol).basis
        for S in subs
    ]
    blocks = [Q for Q in blocks if Q.shape[1] > 0]
    if not blocks:
        return _clamped(0.0, True, ROUTE_GRAM)
    B = np.hstack(blocks)
    lam_max = float(np.linalg.eigvalsh(B.T @ B)[-1])
    raw = (lam_max - 1.0) / (r - 1.0)
    return _clamped(raw, False, ROUTE_GRAM)


def friedrichs_from_norm(
    subspaces, tol: RankTolerance = DEFAULT_TOL
) -> FriedrichsResult:
    """Friedrichs number inverted from an operator norm.

    Uses the identity relating the averaged projector to the Friedrichs
    number:

        || (1/r) sum_i P_i  -  P_M ||  =  (r-1)/r * cos(M_1,...,M_r) + 1/r,

    solved for the cosine.  Raises DegenerateError when every M_i equals M,
    because the left side is then 0 and the inversion formula does not
    apply (it would report a spurious negative value).
    """
    subs = _check_family(subspaces, 2)
    r = len(subs)
    common = intersection(subs, tol)
    if all(S.dim == common.dim for S in subs):
        raise DegenerateError(
            "every subspace equals the intersection; the norm identity "
            "does not determine a Friedrichs number here"
        )
    averaged = sum(S.projector() for S in subs) / r
    nu = spectral_norm(averaged - common.projector())
    raw = (r * nu - 1.0) / (r - 1.0)
    return _clamped(raw, False, ROUTE_NORM)
