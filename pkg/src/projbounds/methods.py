"""Iteration operators for projection methods and their exact error bounds.

Two algorithmic operators act on a family M_1, ..., M_r with intersection M:

* simultaneous:  T = (1/r) (P_1 + ... + P_r)
* cyclic:        T = P_r ... P_1            (index 1 applied first)

Both satisfy T P_M = P_M T = P_M, which yields the algebraic identity
T^k - P_M = (T - P_M)^k.  All error-operator norms here are computed from
that identity (powers of T - P_M avoid the cancellation that forming T^k
and subtracting would suffer), while :func:`verify_error_identity` checks
the identity itself with both sides formed independently.

The optimal starting-point-independent rate of the simultaneous method is

    q = (r-1)/r * cos(M_1, ..., M_r) + 1/r,

and ||T^k - P_M|| = q^k exactly.  For two subspaces the cyclic method
satisfies ||(P_2 P_1)^k - P_M|| = cos(M_1, M_2)^(2k-1); for r > 2 only the
one-sided product bound of :func:`cyclic_bound` is available.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .angles import cos_two, friedrichs_gram
from .errors import InputError
from .numlin import as_vector, spectral_norm
from .subspaces import Subspace, intersection, reduced_component

__all__ = [
    "IterOperator",
    "IterationTrace",
    "KIND_SIMULTANEOUS",
    "KIND_CYCLIC",
    "simultaneous_operator",
    "cyclic_operator",
    "iterate",
    "error_operator_norm",
    "optimal_bound_simultaneous",
    "kw_bound",
    "cyclic_bound",
    "verify_error_identity",
    "compare_methods",
]

KIND_SIMULTANEOUS = "simultaneous"
KIND_CYCLIC = "cyclic"

_NORM_SLACK = 1e-12
_ABSORPTION_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class IterOperator:
    """A nonexpansive iteration matrix together with its limit projector.

    The limit projector P_M absorbs the operator on both sides
    (T P_M = P_M T = P_M); simultaneous operators are additionally
    symmetric.  Violations raise InputError at construction.
    """

    matrix: np.ndarray
    kind: str
    limit_projector: np.ndarray

    def __post_init__(self) -> None:
        if self.kind not in (KIND_SIMULTANEOUS, KIND_CYCLIC):
            raise InputError(f"unknown operator kind {self.kind!r}")
        T = np.asarray(self.matrix, dtype=float)
        P = np.asarray(self.limit_projector, dtype=float)
        if T.shape != P.shape or T.ndim != 2 or T.shape[0] != T.shape[1]:
            raise InputError("operator and limit projector must be square and congruent")
        if spectral_norm(T) > 1.0 + _NORM_SLACK:
            raise InputError("operator norm exceeds 1")
        if (
            spectral_norm(T @ P - P) > _ABSORPTION_TOL
            or spectral_norm(P @ T - P) > _ABSORPTION_TOL
        ):
            raise InputError("limit projector is not absorbed by the operator")
        if self.kind == KIND_SIMULTANEOUS and spectral_norm(T - T.T) > _NORM_SLACK:
            raise InputError("simultaneous operator must be symmetric")
        for name, A in (("matrix", T), ("limit_projector", P)):
            A = A.copy()
            A.setflags(write=False)
            object.__setattr__(self, name, A)

    @property
    def ambient_dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class IterationTrace:
    """Per-iteration error norms with matching theoretical bound values.

    errors[k] = || x_k - P_M(x_0) || and bounds[k] = rate^k * scale for the
    rate and scale the producing routine attached.
    """

    start: np.ndarray
    errors: np.ndarray
    bounds: np.ndarray

    def __post_init__(self) -> None:
        for name in ("start", "errors", "bounds"):
            A = np.asarray(getattr(self, name), dtype=float).copy()
            A.setflags(write=False)
            object.__setattr__(self, name, A)
        if self.errors.shape != self.bounds.shape:
            raise InputError("errors and bounds must have equal length")

    @property
    def k_max(self) -> int:
        return len(self.errors) - 1

    def max_violation(self) -> float:
        """Largest amount by which an error exceeds its bound."""
        return float(np.max(self.errors - self.bounds))


def _checked_family(subspaces, minimum: int = 1) -> list[Subspace]:
    subs = list(subspaces)
    if len(subs) < minimum:
        raise InputError(f"need at least {minimum} subspace(s), got {len(subs)}")
    n = subs[0].ambient_dim
    for S in subs[1:]:
        if S.ambient_dim != n:
            raise InputError("ambient dimensions differ across subspaces")
    return subs


def simultaneous_operator(subspaces) -> IterOperator:
    """Averaged-projector operator (1/r) sum_i P_i with limit P_M."""
    subs = _checked_family(subspaces)
    T = sum(S.projector() for S in subs) / len(subs)
    P_M = intersection(subs).projector()
    return IterOperator(matrix=T, kind=KIND_SIMULTANEOUS, limit_projector=P_M)


def cyclic_operator(subspaces) -> IterOperator:
    """Composed-projector operator P_r ... P_1 (index 1 applied first)."""
    subs = _checked_family(subspaces)
    T = subs[0].projector()
    for S in subs[1:]:
        T = S.projector() @ T
    P_M = intersection(subs).projector()
    return IterOperator(matrix=T, kind=KIND_CYCLIC, limit_projector=P_M)


def iterate(T: IterOperator, x0, k_max: int) -> IterationTrace:
    """Run k_max steps of the method from x0, recording error norms.

    Each step is a matrix-vector product (never a matrix power), matching
    how the method runs in practice.  The attached bounds are
    ||T - P_M||^k * ||x0||, valid for both operator kinds since
    T^k - P_M = (T - P_M)^k.
    """
    x = as_vector(x0, "x0")
    if x.shape[0] != T.ambient_dim:
        raise InputError(
            f"start has dimension {x.shape[0]}, expected {T.ambient_dim}"
        )
    if k_max < 0:
        raise InputError("k_max must be nonnegative")
    target = T.limit_projector @ x
    errors = np.empty(k_max + 1)
    errors[0] = np.linalg.norm(x - target)
    current = x
    for k in range(1, k_max + 1):
        current = T.matrix @ current
        errors[k] = np.linalg.norm(current - target)
    rate = spectral_norm(T.matrix - T.limit_projector)
    bounds = rate ** np.arange(k_max + 1) * np.linalg.norm(x)
    return IterationTrace(start=x, errors=errors, bounds=bounds)


def _matrix_power(A: np.ndarray, k: int) -> np.ndarray:
    """A^k for k >= 1 by binary square-and-multiply."""
    result = None
    base = A
    while True:
        if k & 1:
            result = base if result is None else result @ base
        k >>= 1
        if not k:
            return result
        base = base @ base


def error_operator_norm(T: IterOperator, k: int) -> float:
    """|| T^k - P_M ||, computed as the norm of (T - P_M)^k.

    Powering the difference operator keeps full relative accuracy even when
    T^k is already close to P_M; k = 0 is excluded by contract.
    """
    if k < 1:
        raise InputError("k must be at least 1")
    E = _matrix_power(T.matrix - T.limit_projector, k)
    return spectral_norm(E)


def optimal_bound_simultaneous(subspaces, k: int) -> float:
    """q^k with q = (r-1)/r * cos(M_1,...,M_r) + 1/r.

    This is the smallest constant c such that ||T^k(x) - P_M(x)|| <= c ||x||
    for every x, T being the simultaneous operator.  On a degenerate family
    (every M_i equal to M) the error operator vanishes identically and the
    bound is 0; the rate formula does not cover that case.
    """
    subs = _checked_family(subspaces, 2)
    if k < 1:
        raise InputError("k must be at least 1")
    fr = friedrichs_gram(subs)
    if fr.degenerate:
        return 0.0
    r = len(subs)
    q = (r - 1.0) / r * fr.value + 1.0 / r
    return q**k


def kw_bound(M1: Subspace, M2: Subspace, k: int) -> float:
    """cos(M1, M2)^(2k-1), the exact two-subspace alternating error norm."""
    if k < 1:
        raise InputError("k must be at least 1")
    c = cos_two(M1, M2).value
    return c ** (2 * k - 1)


def cyclic_bound(subspaces, k: int) -> float:
    """Product bound for the cyclic method, || P_r' ... P_1' ||^k.

    P_i' projects onto the reduced component M_i intersect M-perp.  The
    base equals the cyclic error norm at k = 1; for larger k the bound is
    one-sided (not necessarily attained), and for r = 2 the exact value
    cos^(2k-1) of :func:`kw_bound` is strictly smaller whenever
    0 < cos < 1.
    """
    subs = _checked_family(subspaces, 2)
    if k < 1:
        raise InputError("k must be at least 1")
    common = intersection(subs)
    n = subs[0].ambient_dim
    product = np.eye(n)
    for S in subs:
        product = reduced_component(S, common).projector() @ product
    return spectral_norm(product) ** k


def verify_error_identity(T: IterOperator, k: int) -> float:
    """Residual || (T^k - P_M) - (T - P_M)^k || with independent sides.

    The left side powers T by iterated multiplication and subtracts P_M;
    the right side powers T - P_M by binary squaring.  Agreement of the
    two is evidence for the absorption identity, not a tautology.
    """
    if k < 1:
        raise InputError("k must be at least 1")
    Tk = T.matrix
    for _ in range(k - 1):
        Tk = Tk @ T.matrix
    lhs = Tk - T.limit_projector
    rhs = _matrix_power(T.matrix - T.limit_projector, k)
    return spectral_norm(lhs - rhs)


def compare_methods(M1: Subspace, M2: Subspace, k: int) -> tuple[float, float]:
    """(cyclic exact norm, simultaneous optimal bound) at step k.

    The first entry never exceeds the second, strictly so on any
    non-degenerate pair with cos(M1, M2) < 1: alternating projections
    converge at least as fast as the averaged variant.  On a degenerate
    pair both entries are 0.
    """
    if k < 1:
        raise InputError("k must be at least 1")
    return kw_bound(M1, M2, k), optimal_bound_simultaneous([M1, M2], k)
