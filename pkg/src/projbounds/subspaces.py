"""Closed linear subspaces of R^n and their orthogonal projectors.

A subspace is represented by an orthonormal basis matrix; the trivial
subspace (zero columns) is a first-class value whose projector is the zero
matrix.  Bases are never canonicalized beyond orthonormality: two bases of
the same subspace may differ by a rotation, so equality and containment are
always decided at projector level, where the representation is unique.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContainmentError, InputError
from .numlin import (
    DEFAULT_TOL,
    RankTolerance,
    as_matrix,
    as_vector,
    null_space,
    orthonormal_basis,
    spectral_norm,
)

__all__ = ["Subspace", "intersection", "reduced_component", "PROJECTOR_EQ_TOL"]

# Orthonormality required of any basis handed to the constructor.
ORTHONORMALITY_TOL = 1e-12
# Projector-level comparisons (equality, containment) use one order more
# slack than the kernel accuracy.
PROJECTOR_EQ_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Subspace:
    """A closed linear subspace of R^n, stored as an n x d orthonormal basis.

    ``d`` may be zero (the trivial subspace) or equal ``n`` (the full
    space).  Instances are immutable and safe to share across threads.
    """

    basis: np.ndarray

    def __post_init__(self) -> None:
        Q = as_matrix(self.basis, "basis")
        n, d = Q.shape
        if n < 1:
            raise InputError("ambient dimension must be at least 1")
        if d > n:
            raise InputError(f"basis has {d} columns in ambient dimension {n}")
        if d and spectral_norm(Q.T @ Q - np.eye(d)) > ORTHONORMALITY_TOL:
            raise InputError("basis columns are not orthonormal")
        Q = Q.copy()
        Q.setflags(write=False)
        object.__setattr__(self, "basis", Q)

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def from_spanning(cls, vectors, tol: RankTolerance = DEFAULT_TOL) -> "Subspace":
        """Subspace spanned by the columns of ``vectors`` (n x m, m >= 0).

        Dependent, repeated, or zero columns are harmless; the resulting
        basis has exactly rank-many columns.
        """
        M = as_matrix(vectors, "spanning vectors")
        if M.shape[0] < 1:
            raise InputError("spanning vectors need at least one row")
        if M.shape[1] == 0:
            return cls(np.zeros((M.shape[0], 0)))
        return cls(orthonormal_basis(M, tol))

    @classmethod
    def trivial(cls, n: int) -> "Subspace":
        return cls(np.zeros((n, 0)))

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(np.eye(n))

    def projector(self) -> np.ndarray:
        """The orthogonal projector P = Q Q^T onto this subspace.

        Symmetric and idempotent by construction; the trivial subspace
        yields the zero matrix.
        """
        P = self.basis @ self.basis.T
        return (P + P.T) / 2.0

    def project(self, x) -> np.ndarray:
        """Nearest point of the subspace to ``x``."""
        v = as_vector(x, "x")
        if v.shape[0] != self.ambient_dim:
            raise InputError(
                f"vector has dimension {v.shape[0]}, expected {self.ambient_dim}"
            )
        return self.basis @ (self.basis.T @ v)

    def orth_complement(self) -> "Subspace":
        """The orthogonal complement; its projector is I - P."""
        comp = null_space(self.basis.T) if self.dim else np.eye(self.ambient_dim)
        return Subspace(comp)

    def contains(self, other: "Subspace", tol: float = PROJECTOR_EQ_TOL) -> bool:
        """Whether ``other`` is contained in this subspace (projector test)."""
        if other.ambient_dim != self.ambient_dim:
            raise InputError("ambient dimensions differ")
        if other.dim == 0:
            return True
        P_other = other.projector()
        return spectral_norm(self.projector() @ P_other - P_other) <= tol

    def same_as(self, other: "Subspace", tol: float = PROJECTOR_EQ_TOL) -> bool:
        """Projector-level equality."""
        if other.ambient_dim != self.ambient_dim:
            raise InputError("ambient dimensions differ")
        return spectral_norm(self.projector() - other.projector()) <= tol


def intersection(subspaces, tol: RankTolerance = DEFAULT_TOL) -> Subspace:
    """Intersection of a nonempty list of subspaces.

    Computed as the null space of the stacked matrix [(I - P_1); ...;
    (I - P_r)], so a single SVD decides the rank and no error accumulates
    across pairwise steps.
    """
    subs = list(subspaces)
    if not subs:
        raise InputError("intersection requires at least one subspace")
    n = subs[0].ambient_dim
    for S in subs[1:]:
        if S.ambient_dim != n:
            raise InputError("ambient dimensions differ across subspaces")
    if len(subs) == 1:
        return subs[0]
    eye = np.eye(n)
    stacked = np.vstack([eye - S.projector() for S in subs])
    return Subspace(null_space(stacked, tol))


def reduced_component(
    Mi: Subspace, M: Subspace, tol: RankTolerance = DEFAULT_TOL
) -> Subspace:
    """The part of ``Mi`` orthogonal to a contained subspace ``M``.

    Requires M to be contained in Mi; the result R satisfies the orthogonal
    decomposition P_Mi = P_M + P_R.  Since M is contained in Mi, the image
    (I - P_M) Mi spans exactly that component and its nonzero singular
    values are all 1, so the basis extraction is perfectly conditioned.
    """
    if Mi.ambient_dim != M.ambient_dim:
        raise InputError("ambient dimensions differ")
    if not Mi.contains(M):
        raise ContainmentError("M is not contained in Mi")
    if Mi.dim == 0:
        return Subspace.trivial(Mi.ambient_dim)
    residual = Mi.basis - M.basis @ (M.basis.T @ Mi.basis)
    return Subspace(orthonormal_basis(residual, tol))
