"""Rational parametrizations of the resectioning and multiview varieties,
with batched straight-line evaluation of the denominator-cleared gradient
systems and their Jacobians.

Resectioning: psi maps a 3x4 camera A (12 unknowns, scale-invariant) to
the 2n dehomogenized pixel coordinates of n fixed world points,

    psi(A) = ( A[1,:]q_j / A[3,:]q_j ,  A[2,:]q_j / A[3,:]q_j )_j .

Multiview: the same construction with the roles swapped, mapping a world
point q (4 unknowns) through m fixed cameras to 2m pixel coordinates.

For the squared-distance objective g = |psi(x) - d|^2, the critical
equations grad g = J_psi^T (psi - d) = 0 are cleared of denominators by
multiplying through by the product of the cubes of the chart denominators
w_j = A[3,:]q_j; the cleared system G and its x- and data-derivatives are
evaluated batched over paths, never expanded into polynomials.
"""

from __future__ import annotations

import numpy as np


class ChartViolationError(ValueError):
    """A chart denominator fell below the safe-evaluation threshold."""


CHART_EPS = 1e-12


def _as_complex_matrix(rows):
    arr = np.asarray(
        [[complex(x) if not isinstance(x, complex) else x for x in row] for row in rows],
        dtype=np.complex128,
    )
    return arr


class ResectioningMap:
    """psi for a fixed n-point arrangement; unknown camera, 12 parameters."""

    kind = "resectioning"

    def __init__(self, qbar):
        q = np.asarray(qbar, dtype=np.complex128)
        if q.ndim != 2 or q.shape[1] != 4:
            raise ValueError("qbar must be an (n, 4) array")
        self.q = q
        self.n = q.shape[0]
        self.nx = 12
        self.nd = 2 * self.n

    @classmethod
    def from_exact_points(cls, points):
        return cls(_as_complex_matrix([[float(x) for x in p] for p in points]))

    # -- single-point public surface ------------------------------------

    def _r(self, x):
        A = np.asarray(x, dtype=np.complex128).reshape(3, 4)
        return A @ self.q.T  # (3, n)

    def psi(self, x):
        """Dehomogenized projections (u_1, v_1, ..., u_n, v_n)."""
        r = self._r(x)
        w = r[2]
        if np.min(np.abs(w)) < CHART_EPS:
            raise ChartViolationError("A[3,:] q_j vanishes for some j")
        out = np.empty(2 * self.n, dtype=np.complex128)
        out[0::2] = r[0] / w
        out[1::2] = r[1] / w
        return out

    def psi_jacobian(self, x):
        """Exact quotient-rule Jacobian, shape (2n, 12)."""
        r = self._r(x)
        w = r[2]
        if np.min(np.abs(w)) < CHART_EPS:
            raise ChartViolationError("A[3,:] q_j vanishes for some j")
        J = np.zeros((2 * self.n, 12), dtype=np.complex128)
        q = self.q
        for j in range(self.n):
            J[2 * j, 0:4] = q[j] / w[j]
            J[2 * j, 8:12] = -r[0, j] * q[j] / w[j] ** 2
            J[2 * j + 1, 4:8] = q[j] / w[j]
            J[2 * j + 1, 8:12] = -r[1, j] * q[j] / w[j] ** 2
        return J

    # -- batched cleared-gradient system ---------------------------------

    def _core(self, X, D):
        A = X.reshape(-1, 3, 4)
        r = np.einsum("nkl,jl->nkj", A, self.q)
        r0, r1, w = r[:, 0, :], r[:, 1, :], r[:, 2, :]
        au, bv = D[:, 0::2], D[:, 1::2]
        eu = r0 - au * w
        ev = r1 - bv * w
        cw = w**3
        W = cw.prod(axis=1)
        P = W[:, None] / cw
        return r0, r1, w, au, bv, eu, ev, P

    def chart_margin(self, X):
        A = X.reshape(-1, 3, 4)
        r2 = np.einsum("nl,jl->nj", A[:, 2, :], self.q)
        return np.min(np.abs(r2), axis=1)

    def G(self, X, D):
        """Cleared gradient, shape (N, 12): (prod_j w_j^3 / 2) * grad g."""
        r0, r1, w, au, bv, eu, ev, P = self._core(X, D)
        q = self.q
        g1 = np.einsum("nj,jl->nl", eu * w * P, q)
        g2 = np.einsum("nj,jl->nl", ev * w * P, q)
        s = eu * r0 + ev * r1
        g3 = -np.einsum("nj,jl->nl", s * P, q)
        return np.concatenate([g1, g2, g3], axis=1)

    def JG(self, X, D):
        """x-Jacobian of G, shape (N, 12, 12)."""
        r0, r1, w, au, bv, eu, ev, P = self._core(X, D)
        q = self.q
        T = np.einsum("nj,jl->nl", 1.0 / w, q)

        def quad(coef):
            return np.einsum("nj,jl,jm->nlm", coef, q, q)

        g1 = np.einsum("nj,jl->nl", eu * w * P, q)
        g2 = np.einsum("nj,jl->nl", ev * w * P, q)
        s = eu * r0 + ev * r1
        g3 = -np.einsum("nj,jl->nl", s * P, q)

        N = X.shape[0]
        J = np.zeros((N, 12, 12), dtype=np.complex128)
        J[:, 0:4, 0:4] = quad(w * P)
        J[:, 0:4, 8:12] = quad((-au * w - 2.0 * eu) * P) + 3.0 * g1[:, :, None] * T[:, None, :]
        J[:, 4:8, 4:8] = quad(w * P)
        J[:, 4:8, 8:12] = quad((-bv * w - 2.0 * ev) * P) + 3.0 * g2[:, :, None] * T[:, None, :]
        J[:, 8:12, 0:4] = quad(-(r0 + eu) * P)
        J[:, 8:12, 4:8] = quad(-(r1 + ev) * P)
        J[:, 8:12, 8:12] = (
            quad((au * r0 + bv * r1 + 3.0 * s / w) * P)
            + 3.0 * g3[:, :, None] * T[:, None, :]
        )
        return J

    def Gt(self, X, D, Ddot):
        """Data-direction derivative of G, shape (N, 12)."""
        r0, r1, w, au, bv, eu, ev, P = self._core(X, D)
        q = self.q
        du, dv = Ddot[:, 0::2], Ddot[:, 1::2]
        g1 = np.einsum("nj,jl->nl", -(w**2) * P * du, q)
        g2 = np.einsum("nj,jl->nl", -(w**2) * P * dv, q)
        g3 = np.einsum("nj,jl->nl", w * P * (r0 * du + r1 * dv), q)
        return np.concatenate([g1, g2, g3], axis=1)

    def psi_batch(self, X):
        A = X.reshape(-1, 3, 4)
        r = np.einsum("nkl,jl->nkj", A, self.q)
        w = r[:, 2, :]
        out = np.empty((X.shape[0], self.nd), dtype=np.complex128)
        out[:, 0::2] = r[:, 0, :] / w
        out[:, 1::2] = r[:, 1, :] / w
        return out

    def grad_batch(self, X, D):
        """Uncleared gradient J_psi^T (psi - d), used for honest residuals."""
        r0, r1, w, au, bv, eu, ev, _ = self._core(X, D)
        q = self.q
        # grad wrt row 1: sum_j eu_j q_j / w_j^2, etc.
        g1 = np.einsum("nj,jl->nl", eu / w**2, q)
        g2 = np.einsum("nj,jl->nl", ev / w**2, q)
        g3 = -np.einsum("nj,jl->nl", (eu * r0 + ev * r1) / w**3, q)
        return np.concatenate([g1, g2, g3], axis=1)


class MultiviewMap:
    """psi for m fixed cameras; unknown world point, 4 parameters."""

    kind = "multiview"

    def __init__(self, cameras):
        A = np.asarray(cameras, dtype=np.complex128)
        if A.ndim != 3 or A.shape[1:] != (3, 4):
            raise ValueError("cameras must be an (m, 3, 4) array")
        self.A = A
        self.m = A.shape[0]
        self.nx = 4
        self.nd = 2 * self.m
        self.A1 = A[:, 0, :]
        self.A2 = A[:, 1, :]
        self.A3 = A[:, 2, :]
        # constant curls A_c[i,a] A_3[i,b] - A_3[i,a] A_c[i,b]
        self.K_u = np.einsum("ia,ib->iab", self.A1, self.A3) - np.einsum(
            "ia,ib->iab", self.A3, self.A1
        )
        self.K_v = np.einsum("ia,ib->iab", self.A2, self.A3) - np.einsum(
            "ia,ib->iab", self.A3, self.A2
        )

    def _r(self, x):
        xq = np.asarray(x, dtype=np.complex128).reshape(4)
        return self.A @ xq  # (m, 3)

    def psi(self, x):
        r = self._r(x)
        w = r[:, 2]
        if np.min(np.abs(w)) < CHART_EPS:
            raise ChartViolationError("A_i[3,:] q vanishes for some camera")
        out = np.empty(2 * self.m, dtype=np.complex128)
        out[0::2] = r[:, 0] / w
        out[1::2] = r[:, 1] / w
        return out

    def psi_jacobian(self, x):
        r = self._r(x)
        w = r[:, 2]
        if np.min(np.abs(w)) < CHART_EPS:
            raise ChartViolationError("A_i[3,:] q vanishes for some camera")
        J = np.zeros((2 * self.m, 4), dtype=np.complex128)
        for i in range(self.m):
            J[2 * i] = (self.A1[i] * w[i] - r[i, 0] * self.A3[i]) / w[i] ** 2
            J[2 * i + 1] = (self.A2[i] * w[i] - r[i, 1] * self.A3[i]) / w[i] ** 2
        return J

    def _core(self, X, D):
        r = np.einsum("icl,nl->nic", self.A, X)
        r0, r1, w = r[:, :, 0], r[:, :, 1], r[:, :, 2]
        au, bv = D[:, 0::2], D[:, 1::2]
        eu = r0 - au * w
        ev = r1 - bv * w
        cw = w**3
        W = cw.prod(axis=1)
        P = W[:, None] / cw
        Mu = w[:, :, None] * self.A1[None, :, :] - r0[:, :, None] * self.A3[None, :, :]
        Mv = w[:, :, None] * self.A2[None, :, :] - r1[:, :, None] * self.A3[None, :, :]
        return r0, r1, w, au, bv, eu, ev, P, Mu, Mv

    def chart_margin(self, X):
        r2 = np.einsum("il,nl->ni", self.A3, X)
        return np.min(np.abs(r2), axis=1)

    def G(self, X, D):
        r0, r1, w, au, bv, eu, ev, P, Mu, Mv = self._core(X, D)
        core = eu[:, :, None] * Mu + ev[:, :, None] * Mv
        return np.einsum("nia,ni->na", core, P)

    def JG(self, X, D):
        r0, r1, w, au, bv, eu, ev, P, Mu, Mv = self._core(X, D)
        core = eu[:, :, None] * Mu + ev[:, :, None] * Mv
        G = np.einsum("nia,ni->na", core, P)
        T = np.einsum("ni,ib->nb", 1.0 / w, self.A3)
        Cu = self.A1[None, :, :] - au[:, :, None] * self.A3[None, :, :]
        Cv = self.A2[None, :, :] - bv[:, :, None] * self.A3[None, :, :]
        J = np.einsum("nia,nib,ni->nab", Mu, Cu, P)
        J += np.einsum("nia,nib,ni->nab", Mv, Cv, P)
        J += np.einsum("ni,iab->nab", eu * P, self.K_u)
        J += np.einsum("ni,iab->nab", ev * P, self.K_v)
        J += 3.0 * G[:, :, None] * T[:, None, :]
        J -= 3.0 * np.einsum("nia,ni,ib->nab", core, P / w, self.A3)
        return J

    def Gt(self, X, D, Ddot):
        r0, r1, w, au, bv, eu, ev, P, Mu, Mv = self._core(X, D)
        du, dv = Ddot[:, 0::2], Ddot[:, 1::2]
        out = -np.einsum("nia,ni->na", Mu, w * du * P)
        out -= np.einsum("nia,ni->na", Mv, w * dv * P)
        return out

    def psi_batch(self, X):
        r = np.einsum("icl,nl->nic", self.A, X)
        w = r[:, :, 2]
        out = np.empty((X.shape[0], self.nd), dtype=np.complex128)
        out[:, 0::2] = r[:, :, 0] / w
        out[:, 1::2] = r[:, :, 1] / w
        return out

    def grad_batch(self, X, D):
        r0, r1, w, au, bv, eu, ev, P, Mu, Mv = self._core(X, D)
        core = eu[:, :, None] * Mu + ev[:, :, None] * Mv
        return np.einsum("nia,ni->na", core, 1.0 / w**3)
