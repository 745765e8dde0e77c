"""Tangent sphere bundles as hypersurfaces, their contact structures,
the radius-sqrt(a) isometry, and the K-contact/Sasakian verdicts.

Two flavors of hypersurface are supported: the radius-r bundle inside the
Sasaki-weighted ambient ("sasaki_r") and the unit bundle inside the
two-weight ambient ("ga_unit", where the energy density is frozen at 1/2).
Contact structures are built directly from the ambient almost complex
structure by tangent/normal projection; the displayed component formulas
are test targets, not the implementation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import base_geometry as bg
from . import oracle as orc
from .weights import WeightPair, named_family

__all__ = [
    "SphereBundlePoint",
    "sphere_point",
    "ContactStructure",
    "generators",
    "induced_metric",
    "ambient_metric_matrix",
    "unit_normal",
    "contact_structure",
    "isometry_residuals",
    "t1_connection",
    "FiberGraphChart",
    "t1_connection_fd",
    "deta_numeric",
    "k_contact_verdict",
    "sasakian_residuals",
]

_SASAKI = named_family("sasaki")


@dataclass(frozen=True)
class SphereBundlePoint:
    base: bg.ChartMetric
    x: np.ndarray
    u: np.ndarray
    r: float
    gx: np.ndarray

    @property
    def q(self):
        return np.concatenate([self.x, self.u])

    @property
    def gu(self):
        return self.gx @ self.u

    @property
    def t(self):
        return 0.5 * self.r**2


def sphere_point(base, x, u, r=None):
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    gx = base.validate_at(x)
    norm2 = float(u @ gx @ u)
    if r is None:
        r = float(np.sqrt(norm2))
    elif abs(norm2 - r * r) > 1e-12:
        raise bg.GeometryError(f"|g(u,u) - r^2| = {abs(norm2 - r*r)} > 1e-12")
    return SphereBundlePoint(base, x, u, float(r), gx)


def _weights_for(flavor, weights):
    if flavor == "sasaki_r":
        return _SASAKI
    if flavor == "ga_unit":
        if weights is None:
            raise ValueError("ga_unit flavor needs a weight pair")
        return weights
    raise ValueError(f"unknown flavor {flavor!r}")


def generators(P: SphereBundlePoint, flavor, weights=None):
    """Spanning fields (delta_i, fiber-tangent verticals) in coordinates.

    Returns (deltas, verts): two (m, 2m) arrays of row vectors.  The
    verticals satisfy u^i vert_i = 0 and span an (m-1)-dimensional space.
    """
    m = P.base.dim
    gamma = bg.christoffel(P.base, P.x)
    gy = np.einsum("kij,j->ki", gamma, P.u)
    deltas = np.hstack([np.eye(m), -gy.T])
    scale = 1.0 / P.r**2 if flavor == "sasaki_r" else 1.0
    verts = np.hstack([np.zeros((m, m)), np.eye(m) - scale * np.outer(P.gu, P.u)])
    return deltas, verts


def ambient_metric_matrix(P, flavor, weights=None):
    w = _weights_for(flavor, weights)
    return orc.InducedMetric(P.base, w).matrix(P.q)


def induced_metric(P, flavor, weights=None):
    """Displayed component formulas of the induced metric on the generators.

    Returns (G_dd, G_dv, G_vv); the ambient restriction reproduces these
    blocks (cross-checked in the verification suites).
    """
    m = P.base.dim
    g, gu = P.gx, P.gu
    G_dd = g.copy()
    G_dv = np.zeros((m, m))
    if flavor == "sasaki_r":
        G_vv = g - np.outer(gu, gu) / P.r**2
    else:
        w = _weights_for(flavor, weights)
        a = w.eval(P.t).a
        G_vv = a * (g - np.outer(gu, gu))
    return G_dd, G_dv, G_vv


def unit_normal(P, flavor, weights=None):
    w = _weights_for(flavor, weights)
    vals = w.eval(P.t)
    norm2 = vals.a * P.r**2 + vals.b * P.r**4
    return np.concatenate([np.zeros(P.base.dim), P.u]) / np.sqrt(norm2)


@dataclass(frozen=True)
class ContactStructure:
    """Pointwise almost contact metric data in ambient coordinates."""

    phi: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    G: np.ndarray
    normal: np.ndarray
    rescaled: bool

    def tangent_projector(self):
        N, G = self.normal, self.G
        scale = float(N @ G @ N)
        return np.eye(len(N)) - np.outer(N, G @ N) / scale

    def project(self, v):
        return self.tangent_projector() @ np.asarray(v, dtype=float)


def contact_structure(P, flavor, weights=None, rescaled=False, epsilon=None):
    """Almost contact metric structure induced by the ambient Hermitian pair.

    phi U = tan(J U), eta(U) N = nor(J U), xi = -J N; with the rescaled
    flag the structure is renormalized to a contact metric structure.
    """
    w = _weights_for(flavor, weights)
    if epsilon is not None and epsilon != w.epsilon:
        w = WeightPair(w.a, w.b, epsilon, w.t_domain, w.name, w.params)
    G = orc.InducedMetric(P.base, w).matrix(P.q)
    J = orc.j_matrix(P.base, w, P.q)
    N = unit_normal(P, flavor, w)
    phi = (np.eye(len(N)) - np.outer(N, G @ N)) @ J
    eta = J.T @ G @ N
    xi = -J @ N
    if rescaled:
        vals = w.eval(P.t)
        if flavor == "sasaki_r":
            r = P.r
            xi, eta, G = 2 * r * xi, eta / (2 * r), G / (4 * r**2)
        else:
            sa = np.sqrt(vals.a)
            eps = w.epsilon
            xi, eta, G = -2 * eps * sa * xi, -eps / (2 * sa) * eta, G / (4 * vals.a)
    return ContactStructure(phi, xi, eta, G, N, rescaled)


def _rand_tangent(S, rng):
    v = S.project(rng.standard_normal(len(S.xi)))
    n = np.sqrt(float(v @ S.G @ v))
    return v / n


def isometry_residuals(base, w, points, r=None, n_pairs=10, rng=None):
    """Residuals of the rescaling map (x, u) -> (x, r u) on the unit bundle.

    Compares the pulled-back rescaled sphere-bundle structure with the
    rescaled unit-bundle structure; all residuals vanish exactly when
    r = sqrt(a(1/2)).
    """
    rng = rng or np.random.default_rng(0)
    a = w.eval(0.5).a
    r_used = float(np.sqrt(a)) if r is None else float(r)
    m = base.dim
    dF = np.diag(np.concatenate([np.ones(m), r_used * np.ones(m)]))
    out = {"metric": 0.0, "phi": 0.0, "xi": 0.0, "r": r_used}
    for (x, u) in points:
        P1 = sphere_point(base, x, u, r=1.0)
        S_A = contact_structure(P1, "ga_unit", w, rescaled=True)
        Pr = sphere_point(base, x, r_used * np.asarray(u), r=r_used)
        S_r = contact_structure(Pr, "sasaki_r", rescaled=True)

        def rnorm(v):
            return float(np.sqrt(max(v @ S_r.G @ v, 0.0)))

        for _ in range(n_pairs):
            U = _rand_tangent(S_A, rng)
            V = _rand_tangent(S_A, rng)
            lhs = float(dF @ U @ S_r.G @ (dF @ V))
            rhs = float(U @ S_A.G @ V)
            out["metric"] = max(out["metric"], abs(lhs - rhs))
            out["phi"] = max(out["phi"], rnorm(dF @ (S_A.phi @ U) - S_r.phi @ (dF @ U)))
        out["xi"] = max(out["xi"], rnorm(dF @ S_A.xi - S_r.xi))
    return out


def _t1_frames(P):
    m = P.base.dim
    gamma = bg.christoffel(P.base, P.x)
    gy = np.einsum("kij,j->ki", gamma, P.u)
    deltas = np.hstack([np.eye(m), -gy.T])  # rows delta_i
    Ys = np.hstack([np.zeros((m, m)), np.eye(m) - np.outer(P.gu, P.u)])  # rows Y_i
    return deltas, Ys


def t1_connection(base, w, P, case, i, j):
    """Closed-form unit-bundle connection on the generator fields.

    ``case`` in {"dd", "Yd", "dY", "YY"} selects nabla_{delta_i} delta_j,
    nabla_{Y_i} delta_j, nabla_{delta_i} Y_j, nabla_{Y_i} Y_j; returns
    ambient coordinate components of the result.
    """
    m = base.dim
    a = w.eval(P.t).a
    gamma = bg.christoffel(base, P.x)
    R = bg.curvature(base, P.x)
    deltas, Ys = _t1_frames(P)
    y, gu = P.u, P.gu
    if case == "dd":
        R0ij = np.einsum("klij,l->kij", R, y)  # R^k_{0ij}
        return gamma[:, i, j] @ deltas - 0.5 * R0ij[:, i, j] @ Ys
    if case == "Yd":
        Rj0i = np.einsum("kjli,l->kji", R, y)  # R^k_{j0i}
        return (a / 2) * Rj0i[:, j, i] @ deltas
    if case == "dY":
        Ri0j = np.einsum("kjli,l->kji", R, y)
        return gamma[:, i, j] @ Ys + (a / 2) * Ri0j[:, i, j] @ deltas
    if case == "YY":
        return -float(gu[j]) * Ys[i]
    raise ValueError(f"unknown case {case!r}")


class FiberGraphChart:
    """Graph parametrization of the radius-r bundle near a point.

    Solves the fiber constraint for the largest-|g u| component; provides
    the embedding, its Jacobian, the induced metric and finite-difference
    Christoffel symbols in graph coordinates theta = (x, v-others).
    """

    def __init__(self, P: SphereBundlePoint):
        self.base = P.base
        self.r = P.r
        self.m = P.base.dim
        self.jstar = int(np.argmax(np.abs(P.gu)))
        self.ref = float(P.u[self.jstar])
        self.theta0 = np.concatenate(
            [P.x, np.delete(P.u, self.jstar)]
        )

    def embed(self, theta):
        m, js = self.m, self.jstar
        x = theta[:m]
        g = self.base.matrix(x)
        v = np.zeros(m)
        rest = np.delete(np.arange(m), js)
        v[rest] = theta[m:]
        A = g[js, js]
        B = 2.0 * float(g[js, rest] @ v[rest])
        C = float(v[rest] @ g[np.ix_(rest, rest)] @ v[rest]) - self.r**2
        disc = B * B - 4 * A * C
        if disc < 0:
            raise bg.GeometryError("graph chart left the bundle")
        roots = [(-B + s * np.sqrt(disc)) / (2 * A) for s in (+1.0, -1.0)]
        v[js] = min(roots, key=lambda rt: abs(rt - self.ref))
        return np.concatenate([x, v])

    def jacobian(self, theta):
        m, js = self.m, self.jstar
        q = self.embed(theta)
        x, v = q[:m], q[m:]
        g, dg = self.base.derivatives(x, 1)
        gv = g @ v
        rest = np.delete(np.arange(m), js)
        Jc = np.zeros((2 * m, 2 * m - 1))
        Jc[:m, :m] = np.eye(m)
        # x-columns: dv_js/dx_i = -(d_i g_kl v^k v^l) / (2 (g v)_js)
        Fx = np.einsum("ikl,k,l->i", dg, v, v)
        Jc[m + js, :m] = -Fx / (2.0 * gv[js])
        # fiber columns
        for col, k in enumerate(rest):
            Jc[m + k, m + col] = 1.0
            Jc[m + js, m + col] = -gv[k] / gv[js]
        return Jc

    def induced_matrix(self, theta, ambient):
        J = self.jacobian(theta)
        return J.T @ ambient.matrix(self.embed(theta)) @ J

    def christoffel_fd(self, theta, ambient, h=1e-4):
        n = 2 * self.m - 1

        def gmat(th):
            return self.induced_matrix(th, ambient)

        G = gmat(theta)
        Ginv = np.linalg.inv(G)
        dG = np.zeros((n, n, n))
        for k in range(n):
            e = np.zeros(n)
            e[k] = h
            d1 = (gmat(theta + e) - gmat(theta - e)) / (2 * h)
            e2 = e / 2
            d2 = (gmat(theta + e2) - gmat(theta - e2)) / h
            dG[k] = (4 * d2 - d1) / 3
        core = dG.transpose(0, 1, 2) + dG.transpose(1, 0, 2) - dG.transpose(1, 2, 0)
        return 0.5 * np.einsum("kl,ijl->kij", Ginv, core)

    def to_theta(self, theta, vec):
        J = self.jacobian(theta)
        sol, *_ = np.linalg.lstsq(J, np.asarray(vec, dtype=float), rcond=None)
        return sol

    def covariant_derivative(self, Ufield, Vfield, ambient, h=1e-4):
        """nabla_U V at the chart center for tangent fields given in
        ambient coordinates; returns ambient coordinate components."""
        th0 = self.theta0
        gam = self.christoffel_fd(th0, ambient, h=h)

        def vtheta(th):
            return self.to_theta(th, Vfield(self.embed(th)))

        U0 = self.to_theta(th0, Ufield(self.embed(th0)))
        n = len(th0)
        dV = np.zeros((n, n))
        for k in range(n):
            e = np.zeros(n)
            e[k] = h
            dV[k] = (vtheta(th0 + e) - vtheta(th0 - e)) / (2 * h)
        out_theta = np.einsum("k,kc->c", U0, dV) + np.einsum(
            "kij,i,j->k", gam, U0, vtheta(th0)
        )
        return self.jacobian(th0) @ out_theta


def t1_connection_fd(base, w, P, case, i, j, h=1e-4):
    """Graph-chart finite-difference counterpart of t1_connection."""
    chart = FiberGraphChart(P)
    ambient = orc.InducedMetric(base, w)
    m = base.dim

    def delta_field(k):
        def f(q):
            gamma = bg.christoffel(base, q[:m])
            out = np.zeros(2 * m)
            out[k] = 1.0
            out[m:] = -gamma[:, k, :] @ q[m:]
            return out

        return f

    def y_field(k):
        def f(q):
            g = base.matrix(q[:m])
            y = q[m:]
            out = np.zeros(2 * m)
            out[m + k] = 1.0
            out[m:] -= float((g @ y)[k]) * y
            return out

        return f

    U = delta_field(i) if case[0] == "d" else y_field(i)
    V = delta_field(j) if case[1] == "d" else y_field(j)
    return chart.covariant_derivative(U, V, ambient, h=h)


def deta_numeric(P, flavor, weights=None, vectors=None, h=1e-4, rescaled=True):
    """Numeric d(eta) on tangent vectors via the graph chart (1/2-convention)."""
    chart = FiberGraphChart(P)
    w = _weights_for(flavor, weights)

    def eta_at(q):
        m = P.base.dim
        Pq = sphere_point(P.base, q[:m], q[m:], r=P.r)
        return contact_structure(Pq, flavor, w, rescaled=rescaled).eta

    def eta_theta(th):
        q = chart.embed(th)
        return chart.jacobian(th).T @ eta_at(q)

    th0 = chart.theta0
    n = len(th0)
    deta = np.zeros((n, n))
    for al in range(n):
        e = np.zeros(n)
        e[al] = h
        d1 = (eta_theta(th0 + e) - eta_theta(th0 - e)) / (2 * h)
        d2 = (eta_theta(th0 + e / 2) - eta_theta(th0 - e / 2)) / h
        deta[al] = (4 * d2 - d1) / 3
    dmat = 0.5 * (deta - deta.T)  # dmat[al, be] = 1/2 (d_al eta_be - d_be eta_al)
    out = []
    for (U, V) in vectors:
        Ut = chart.to_theta(th0, U)
        Vt = chart.to_theta(th0, V)
        out.append(float(Ut @ dmat @ Vt))
    return np.array(out)


def _kcontact_vectors(base, w, P):
    """Analytic residual vectors of the K-contact condition at P."""
    m = base.dim
    a = w.eval(P.t).a
    sa = np.sqrt(a)
    R = bg.curvature(base, P.x)
    y, gu = P.u, P.gu
    deltas, Ys = _t1_frames(P)
    R0i0 = np.einsum("klij,l,j->ki", R, y, y)  # R^k_{0i0}
    res = []
    for i in range(m):
        # nabla_{delta_i} xi + phi delta_i = sqrt(a) [(1/a) d^k_i - R^k_{0i0}] Y_k
        coef = (np.eye(m)[:, i] / a - R0i0[:, i]) * sa
        res.append(coef @ Ys)
        # nabla_{Y_i} xi + phi Y_i = sqrt(a) [(d^k_i - g_{i0} y^k) - a R^k_{0i0}] delta_k
        coef2 = sa * ((np.eye(m)[:, i] - gu[i] * y) - a * R0i0[:, i])
        res.append(coef2 @ deltas)
    return res


def sasakian_residuals(base, w, P):
    """Analytic residual vectors of (nabla_U phi)V = G(U,V) xi - eta(V) U."""
    m = base.dim
    a = w.eval(P.t).a
    sa = np.sqrt(a)
    R = bg.curvature(base, P.x)
    y, gu, g = P.u, P.gu, P.gx
    deltas, Ys = _t1_frames(P)
    xi0 = y @ deltas  # y^k delta_k
    R0i0 = np.einsum("klij,l,j->ki", R, y, y)
    R_i0j = np.einsum("kilj,l->kij", R, y)  # R^k_{i0j}
    R_0ij = np.einsum("klij,l->kij", R, y)  # R^k_{0ij}
    R_j0i = np.einsum("kjli,l->kji", R, y)  # R^k_{j0i}
    res = []
    for i in range(m):
        for j in range(m):
            # (nabla_{delta_i} phi) delta_j - [G(d_i,d_j) xi - eta(d_j) d_i]
            v = (sa / 2) * (R_i0j[:, i, j] - R_0ij[:, i, j]) @ deltas - (
                1 / (2 * sa)
            ) * (g[i, j] * y - gu[j] * np.eye(m)[:, i]) @ deltas
            res.append(v)
            # (nabla_{delta_i} phi) Y_j residual
            v = (sa / 2) * (
                R_0ij[:, i, j] - R_i0j[:, i, j] - gu[j] * R0i0[:, i]
            ) @ Ys
            res.append(v)
            # (nabla_{Y_i} phi) delta_j residual
            v = -(gu[j] / (2 * sa)) * Ys[i] - (sa / 2) * R_j0i[:, j, i] @ Ys
            res.append(v)
            # (nabla_{Y_i} phi) Y_j residual
            v = -(a * sa / 2) * (R_j0i[:, j, i] + gu[j] * R0i0[:, i]) @ deltas + (
                sa / 2
            ) * (g[i, j] - gu[i] * gu[j]) * xi0
            res.append(v)
    return res


def k_contact_verdict(base, w, points, tol=1e-8):
    """K-contact and Sasakian residuals of the rescaled unit-bundle structure.

    The verdict is positive exactly when both residual families vanish;
    for a constant-curvature base this happens iff the curvature is 1/a.
    """
    kc = 0.0
    sas = 0.0
    a = w.eval(0.5).a
    for (x, u) in points:
        P = sphere_point(base, x, u, r=1.0)
        S = contact_structure(P, "ga_unit", w, rescaled=True)

        def gnorm(v):
            return float(np.sqrt(max(v @ S.G @ v, 0.0)))

        for v in _kcontact_vectors(base, w, P):
            kc = max(kc, gnorm(v))
        for v in sasakian_residuals(base, w, P):
            sas = max(sas, gnorm(v))
    predicted = isinstance(base, bg.SpaceForm) and abs(base.curvature - 1.0 / a) < 1e-12
    return {
        "k_contact_residual": kc,
        "sasakian_residual": sas,
        "is_k_contact": kc <= tol,
        "is_sasakian": kc <= tol and sas <= tol,
        "predicted_k_contact": predicted,
    }
