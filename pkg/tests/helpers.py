"""Shared builders for the test suite."""

import numpy as np

from projbounds import Subspace

SQRT2 = np.sqrt(2.0)
SQRT3 = np.sqrt(3.0)


def rotation(rng: np.random.Generator, n: int) -> np.ndarray:
    """A seeded random orthogonal matrix with a fixed sign convention."""
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def random_subspace(rng: np.random.Generator, n: int, d: int) -> Subspace:
    return Subspace.from_spanning(rng.standard_normal((n, d)))


def random_family(rng: np.random.Generator, r: int, n: int, dims=None):
    if dims is None:
        dims = [int(rng.integers(1, n)) for _ in range(r)]
    return [random_subspace(rng, n, d) for d in dims]


def lines_at(theta_deg: float):
    """Two lines through the origin of R^2 meeting at the given angle."""
    t = np.deg2rad(theta_deg)
    M1 = Subspace.from_spanning(np.array([[1.0], [0.0]]))
    M2 = Subspace.from_spanning(np.array([[np.cos(t)], [np.sin(t)]]))
    return M1, M2


def lines_exact_60():
    """Lines whose direction vectors have exactly representable dot 0.5."""
    M1 = Subspace.from_spanning(np.array([[1.0], [0.0]]))
    M2 = Subspace.from_spanning(np.array([[0.5], [SQRT3 / 2.0]]))
    return M1, M2


def triple_at_120(phase_deg: float = 90.0):
    """Three lines in R^2 whose direction vectors sit 120 degrees apart."""
    out = []
    for offset in (0.0, 120.0, 240.0):
        t = np.deg2rad(phase_deg + offset)
        out.append(Subspace.from_spanning(np.array([[np.cos(t)], [np.sin(t)]])))
    return out


def orthogonal_axes():
    """span(e1) and span(e2) in R^2."""
    M1 = Subspace.from_spanning(np.array([[1.0], [0.0]]))
    M2 = Subspace.from_spanning(np.array([[0.0], [1.0]]))
    return M1, M2


def planted_pair(rng: np.random.Generator, theta_deg: float, n: int, shared_dim: int):
    """A rotated pair sharing an exact shared_dim-dimensional intersection
    with reduced parts at the prescribed angle."""
    t = np.deg2rad(theta_deg)
    s = shared_dim
    shared = np.eye(n)[:, :s]
    u1 = np.eye(n)[:, s]
    u2 = np.cos(t) * np.eye(n)[:, s] + np.sin(t) * np.eye(n)[:, s + 1]
    Q = rotation(rng, n)
    M1 = Subspace.from_spanning(Q @ np.column_stack([shared, u1]))
    M2 = Subspace.from_spanning(Q @ np.column_stack([shared, u2]))
    return M1, M2
