"""Product-space reformulation of the simultaneous method.

The family M_1, ..., M_r in R^n lifts into R^(n*r) as two subspaces: the
cartesian product C = M_1 x ... x M_r (block-diagonal basis) and the
diagonal D = {(x, ..., x)}.  Alternating projections between C and D
reproduce the averaged-projector iteration on the base space, and the
angle between C and D encodes the simultaneous convergence rate.  The
central identity checked here is the five-link chain

    || T^k - P_M ||  =  || T - P_M ||^k
                     =  ( (r-1)/r cos(M_1,...,M_r) + 1/r )^k
                     =  cos(C, D)^(2k)
                     =  || P_D P_C P_D - P_CD ||^k
                     =  || (P_D P_C P_D)^k - P_CD ||,

with T the averaged projector and P_CD the projector onto C intersect D.

On the inner product: the product space is often equipped with the
averaged form <x, y> = (1/r) sum_i <x_i, y_i>.  That is a uniform positive
multiple of the standard inner product on R^(n*r), and scaling an inner
product by a constant a > 0 changes nothing this module computes: the
norm scales uniformly (||.||' = sqrt(a) ||.||), so nearest-point
minimizers, hence metric projections, are unchanged; operator norms are
suprema of ||Ax||'/||x||' in which sqrt(a) cancels; angle quantities are
Rayleigh quotients, which also cancel.  Everything here therefore uses
the standard inner product.  The only scale-sensitive quantity is the
norm of a lifted vector, sqrt(r) ||x|| under the standard metric, and all
verification compares vectors on one side of the lift so the factor never
enters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .angles import cos_two, friedrichs_gram
from .errors import DegenerateError, InputError
from .numlin import DEFAULT_TOL, RankTolerance, as_vector, spectral_norm
from .subspaces import Subspace, intersection

__all__ = [
    "ProductSpaceModel",
    "MAX_PRODUCT_DIM",
    "build_product",
    "lift_diag",
    "cos_CD",
    "verify_norm_chain",
    "chain_residual_profile",
    "verify_pierra_lift",
    "pierra_lift_residual",
]

# Dense n*r x n*r matrices beyond this size are out of scope.
MAX_PRODUCT_DIM = 2000


@dataclass(frozen=True, eq=False)
class ProductSpaceModel:
    """The lifted pair (C, D) in R^(n*r) for a family of r subspaces."""

    base_dim: int
    factor_count: int
    C: Subspace
    D: Subspace


def build_product(subspaces, tol: RankTolerance = DEFAULT_TOL) -> ProductSpaceModel:
    """Assemble C (block-diagonal lift) and D (diagonal) for the family.

    C's basis stacks each factor's basis into its own block row; D's basis
    columns are (1/sqrt(r)) (e_j, ..., e_j), orthonormal under the standard
    metric.  dim C = sum_i dim M_i and dim D = n.
    """
    subs = list(subspaces)
    if len(subs) < 2:
        raise InputError(f"need at least 2 subspaces, got {len(subs)}")
    n = subs[0].ambient_dim
    for S in subs[1:]:
        if S.ambient_dim != n:
            raise InputError("ambient dimensions differ across subspaces")
    r = len(subs)
    if n * r > MAX_PRODUCT_DIM:
        raise InputError(
            f"product dimension {n * r} exceeds the dense cap {MAX_PRODUCT_DIM}"
        )
    total_cols = sum(S.dim for S in subs)
    C_basis = np.zeros((n * r, total_cols))
    col = 0
    for i, S in enumerate(subs):
        C_basis[i * n : (i + 1) * n, col : col + S.dim] = S.basis
        col += S.dim
    D_basis = np.vstack([np.eye(n)] * r) / np.sqrt(r)
    return ProductSpaceModel(
        base_dim=n, factor_count=r, C=Subspace(C_basis), D=Subspace(D_basis)
    )


def lift_diag(model: ProductSpaceModel, x) -> np.ndarray:
    """The diagonal lift (x, ..., x) of a base-space vector.

    Under the standard metric the lift has norm sqrt(r) ||x||; under the
    averaged metric it has norm ||x||.  Callers compare lifted vectors with
    lifted vectors, so either convention gives the same verdict.
    """
    v = as_vector(x, "x")
    if v.shape[0] != model.base_dim:
        raise InputError(
            f"vector has dimension {v.shape[0]}, expected {model.base_dim}"
        )
    return np.tile(v, model.factor_count)


def cos_CD(model: ProductSpaceModel, tol: RankTolerance = DEFAULT_TOL) -> float:
    """Friedrichs-angle cosine between C and D, computed inside R^(n*r)."""
    return cos_two(model.C, model.D, tol).value


def _chain_setup(subs: list[Subspace], tol: RankTolerance):
    """Shared per-family quantities for the norm chain; each chain member
    still gets its own code path from these."""
    fr = friedrichs_gram(subs, tol)
    if fr.degenerate:
        raise DegenerateError(
            "every subspace equals the intersection: all six chain members "
            "are identically zero and the chain holds trivially"
        )
    r = len(subs)
    T = sum(S.projector() for S in subs) / r
    P_M = intersection(subs, tol).projector()
    one_step = spectral_norm(T - P_M)
    q = (r - 1.0) / r * fr.value + 1.0 / r
    model = build_product(subs, tol)
    c_prod = cos_CD(model, tol)
    P_C = model.C.projector()
    P_D = model.D.projector()
    P_CD = intersection([model.C, model.D], tol).projector()
    T_prod = P_D @ P_C @ P_D
    prod_one_step = spectral_norm(T_prod - P_CD)
    return T, P_M, one_step, q, c_prod, T_prod, P_CD, prod_one_step


def chain_residual_profile(
    subspaces, k_values, tol: RankTolerance = DEFAULT_TOL
) -> dict[int, np.ndarray]:
    """Adjacent chain residuals for several exponents at once.

    Returns {k: residuals} where residuals are the five absolute adjacent
    differences of the chain members at exponent k.  The two direct power
    norms are built incrementally over k; everything else about each chain
    member remains an independent code path (direct power norm, single-step
    norm to the k, Friedrichs-formula rate, product-space angle, and the
    two product-operator analogues).
    """
    subs = list(subspaces)
    wanted = sorted(set(int(k) for k in k_values))
    if not wanted or wanted[0] < 1:
        raise InputError("exponents must be integers >= 1")
    T, P_M, one_step, q, c_prod, T_prod, P_CD, prod_one_step = _chain_setup(subs, tol)
    out: dict[int, np.ndarray] = {}
    Tk = None
    Tpk = None
    for k in range(1, wanted[-1] + 1):
        Tk = T if Tk is None else Tk @ T
        Tpk = T_prod if Tpk is None else Tpk @ T_prod
        if k in wanted:
            members = np.array(
                [
                    spectral_norm(Tk - P_M),
                    one_step**k,
                    q**k,
                    c_prod ** (2 * k),
                    prod_one_step**k,
                    spectral_norm(Tpk - P_CD),
                ]
            )
            out[k] = np.abs(np.diff(members))
    return out


def verify_norm_chain(
    subspaces, k: int, tol: RankTolerance = DEFAULT_TOL
) -> np.ndarray:
    """Five adjacent residuals of the six-member norm chain at exponent k.

    Each member is computed independently (see module docstring for the
    chain); the caller asserts each residual is at most 1e-8.  Raises
    DegenerateError when every subspace equals the intersection, in which
    case all six members are zero and the chain holds trivially.
    """
    if k < 1:
        raise InputError("k must be at least 1")
    return chain_residual_profile(subspaces, [k], tol)[k]


def pierra_lift_residual(
    subspaces, starts, k_values, tol: RankTolerance = DEFAULT_TOL
) -> float:
    """Largest lift-consistency residual over the given starts and steps.

    For each start x and step count k, compares (P_D P_C)^k applied to the
    lifted start against the lift of T^k(x), plus the projector onto
    C intersect D against the lift of P_M(x).  Projectors are assembled
    once and shared across the grid.
    """
    subs = list(subspaces)
    model = build_product(subs, tol)
    P_C = model.C.projector()
    P_D = model.D.projector()
    P_CD = intersection([model.C, model.D], tol).projector()
    T = sum(S.projector() for S in subs) / len(subs)
    P_M = intersection(subs, tol).projector()
    ks = sorted(set(int(k) for k in k_values))
    if ks and ks[0] < 0:
        raise InputError("step counts must be nonnegative")
    worst = 0.0
    for x in starts:
        v = as_vector(x, "start")
        if v.shape[0] != model.base_dim:
            raise InputError(
                f"start has dimension {v.shape[0]}, expected {model.base_dim}"
            )
        lifted = lift_diag(model, v)
        anchor = np.linalg.norm(P_CD @ lifted - lift_diag(model, P_M @ v))
        y = lifted
        t = v
        step = 0
        for k in ks:
            while step < k:
                y = P_D @ (P_C @ y)
                t = T @ t
                step += 1
            drift = np.linalg.norm(y - lift_diag(model, t))
            worst = max(worst, drift + anchor)
    return worst


def verify_pierra_lift(
    subspaces, x, k: int, tol: RankTolerance = DEFAULT_TOL
) -> float:
    """Lift-consistency residual for one start and one step count.

    Returns || (P_D P_C)^k lift(x) - lift(T^k x) ||
          + || P_CD lift(x) - lift(P_M x) ||; the caller asserts <= 1e-9.
    """
    if k < 0:
        raise InputError("k must be nonnegative")
    return pierra_lift_residual(subspaces, [x], [k], tol)
