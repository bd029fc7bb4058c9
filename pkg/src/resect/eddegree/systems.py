"""Square critical systems for the geometric error on a parametrized
variety.

The gradient of g = |psi(x) - d|^2 has nx components but satisfies the
Euler relation grad g . x = 0 identically (psi is scale-invariant), so its
rank on the chart is at most nx - 1.  The square system therefore consists
of nx - 1 random complex combinations of the cleared gradient plus one
random affine chart equation c . x = 1.  A spurious solution would need
the leftover gradient direction to lie in the kernel of the combination
matrix *and* satisfy the Euler relation, one condition too many, so for
generic choices the square system has exactly the critical points.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass
class CriticalSystem:
    """nx equations / nx unknowns: R @ G(x; d) stacked over c . x - 1."""

    map: object
    d: np.ndarray
    R: np.ndarray        # (nx-1, nx) random complex combination matrix
    chart: np.ndarray    # (nx,) random affine chart covector
    seed: Optional[int] = None

    @property
    def nx(self) -> int:
        return self.map.nx

    def normalize_chart(self, X: np.ndarray) -> np.ndarray:
        """Rescale representatives onto the chart c . x = 1."""
        s = X @ self.chart
        return X / s[:, None]

    def F(self, X: np.ndarray, D: Optional[np.ndarray] = None) -> np.ndarray:
        X = np.atleast_2d(X)
        D = self._data(X, D)
        G = self.map.G(X, D)
        top = G @ self.R.T
        last = X @ self.chart - 1.0
        return np.concatenate([top, last[:, None]], axis=1)

    def J(self, X: np.ndarray, D: Optional[np.ndarray] = None) -> np.ndarray:
        X = np.atleast_2d(X)
        D = self._data(X, D)
        JG = self.map.JG(X, D)
        top = np.einsum("ab,nbm->nam", self.R, JG)
        N = X.shape[0]
        last = np.broadcast_to(self.chart, (N, 1, self.nx))
        return np.concatenate([top, last], axis=1)

    def Ft(self, X: np.ndarray, D: np.ndarray, Ddot: np.ndarray) -> np.ndarray:
        Gt = self.map.Gt(np.atleast_2d(X), D, Ddot)
        top = Gt @ self.R.T
        zero = np.zeros((top.shape[0], 1), dtype=np.complex128)
        return np.concatenate([top, zero], axis=1)

    def residuals(self, X: np.ndarray, D: Optional[np.ndarray] = None) -> np.ndarray:
        """Scale-honest residual: the uncleared gradient combined by R,
        plus the chart defect, in the max norm."""
        X = np.atleast_2d(X)
        D = self._data(X, D)
        g = self.map.grad_batch(X, D)
        top = np.abs(g @ self.R.T).max(axis=1)
        last = np.abs(X @ self.chart - 1.0)
        return np.maximum(top, last)

    def chart_margin(self, X: np.ndarray) -> np.ndarray:
        return self.map.chart_margin(np.atleast_2d(X))

    def _data(self, X, D):
        if D is None:
            return np.broadcast_to(self.d, (X.shape[0], self.map.nd))
        return np.atleast_2d(D)


def build_critical_system(map_, d, seed: int = 0) -> CriticalSystem:
    """Random square critical system for the given data vector.

    The (nx-1) x nx combination matrix and the chart covector are complex
    Gaussian, deterministic in seed, and recorded with the system.
    """
    d = np.asarray(d, dtype=np.complex128).reshape(-1)
    if d.shape[0] != map_.nd:
        raise ValueError(f"data dimension {d.shape[0]} != {map_.nd}")
    rng = np.random.default_rng(seed)
    nx = map_.nx
    R = _cgauss(rng, (nx - 1, nx))
    chart = _cgauss(rng, (nx,))
    chart /= np.linalg.norm(chart)
    return CriticalSystem(map_, d, R, chart, seed)


def _cgauss(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def seed_solution(map_, seed: int = 0, max_tries: int = 50,
                  offset_scale: float = 0.5):
    """A verified start pair (x0, d0) for monodromy.

    Samples x0 complex Gaussian, sets d0 = psi(x0) + v with v a random
    vector in the cokernel of J_psi(x0), so that J_psi^T (psi(x0) - d0) = 0
    by construction.  Resamples when the cokernel is numerically deficient.
    """
    rng = np.random.default_rng(seed)
    nx, nd = map_.nx, map_.nd
    for _ in range(max_tries):
        x0 = _cgauss(rng, (nx,))
        margin = map_.chart_margin(x0[None, :])[0]
        if margin < 1e-3:
            continue
        J = map_.psi_jacobian(x0)  # (nd, nx)
        U, S, Vh = np.linalg.svd(J)
        # generic rank is nx - 1 (scale invariance); demand a clean gap
        if S[nx - 2] < 1e-8 * S[0]:
            continue
        # v must satisfy J^T v = 0 (plain transpose: the gradient is the
        # holomorphic one), i.e. v in the span of the conjugated late
        # left-singular vectors
        coker = np.conj(U[:, nx - 1:])  # (nd, nd - nx + 1)
        coeffs = _cgauss(rng, (coker.shape[1],))
        v = coker @ coeffs
        psi0 = map_.psi(x0)
        v *= offset_scale * (1.0 + np.linalg.norm(psi0)) / max(np.linalg.norm(v), 1e-30)
        d0 = psi0 + v
        resid = np.abs(J.T @ (psi0 - d0)).max()
        if resid < 1e-12 * (1.0 + np.linalg.norm(d0)):
            return x0, d0
    raise RuntimeError("could not construct a verified start pair")
