"""Independent coordinate oracle on the 2m-dimensional chart (x, y).

Everything here is ground truth for the adapted-frame closed forms: the
bundle metric is realized as an explicit 2m x 2m component matrix and all
derived objects (connection, curvature, exterior derivatives, Nijenhuis
tensor) are obtained by central finite differences with one Richardson
extrapolation step.

Differential-form conventions (fixed):
    d omega (X, Y)      = 1/2 (X om(Y) - Y om(X) - om([X,Y]))
    d Omega (X, Y, Z)   = 1/3 (antisymmetrized sum)
    (om ^ Om)(X, Y, Z)  = 1/3 (om(X) Om(Y,Z) + om(Y) Om(Z,X) + om(Z) Om(X,Y))
"""

from __future__ import annotations

import warnings

import numpy as np

from . import base_geometry as bg
from .weights import WeightPair, derived_coeffs

__all__ = [
    "InducedMetric",
    "split_to_coord",
    "coord_to_split",
    "lift_matrix",
    "j_matrix",
    "omega_matrix",
    "lee_covector",
    "wedge_1_2",
    "fd_connection",
    "fd_curvature",
    "fd_exterior_derivative",
    "fd_nijenhuis",
    "fd_directional",
    "lift_field",
    "fd_lift_connection",
]


class InducedMetric:
    """The bundle metric as a coordinate-component metric on (x, y)."""

    def __init__(self, base, weights: WeightPair):
        self.base = base
        self.weights = weights
        self.dim2 = 2 * base.dim

    def vertical_block(self, q):
        m = self.base.dim
        x, y = q[:m], q[m:]
        g = self.base.matrix(x)
        t = 0.5 * float(y @ g @ y)
        vals = self.weights.eval(t)
        gu = g @ y
        return vals.a * g + vals.b * np.outer(gu, gu)

    def matrix(self, q):
        q = np.asarray(q, dtype=float)
        m = self.base.dim
        x, y = q[:m], q[m:]
        g = self.base.matrix(x)
        gamma = bg.christoffel(self.base, x)
        gy = np.einsum("kij,j->ki", gamma, y)  # gy[k, i] = Gamma^k_{ij} y^j
        V = self.vertical_block(q)
        G = np.zeros((2 * m, 2 * m))
        G[:m, :m] = g + gy.T @ V @ gy
        G[:m, m:] = gy.T @ V
        G[m:, :m] = V @ gy
        G[m:, m:] = V
        return G


def lift_matrix(base, x, y):
    """Frame change M with columns = coordinate components of (delta_i, d/dy^i)."""
    m = base.dim
    gamma = bg.christoffel(base, x)
    gy = np.einsum("kij,j->ki", gamma, y)
    M = np.eye(2 * m)
    M[m:, :m] = -gy
    Minv = np.eye(2 * m)
    Minv[m:, :m] = gy
    return M, Minv


def split_to_coord(U):
    """Coordinate components of a split vector."""
    P = U.at
    M, _ = lift_matrix(P.base, P.x, P.u)
    return M @ np.concatenate([U.h, U.v])


def coord_to_split(base, q, vec):
    from .tangent_bundle import SplitVector, tangent_point

    m = base.dim
    P = tangent_point(base, q[:m], q[m:])
    _, Minv = lift_matrix(base, P.x, P.u)
    comps = Minv @ np.asarray(vec, dtype=float)
    return SplitVector(comps[:m], comps[m:], P)


def j_matrix(base, w, q):
    """Coordinate matrix of the almost complex structure at q = (x, y)."""
    q = np.asarray(q, dtype=float)
    m = base.dim
    x, y = q[:m], q[m:]
    g = base.matrix(x)
    t = 0.5 * float(y @ g @ y)
    vals = w.eval(t)
    d = derived_coeffs(w, t)
    sa = np.sqrt(vals.a)
    gu = g @ y
    JHV = np.eye(m) / sa - d.A_coef * np.outer(y, gu)
    JVH = -sa * np.eye(m) + d.B_coef * np.outer(y, gu)
    Jad = np.zeros((2 * m, 2 * m))
    Jad[m:, :m] = JHV
    Jad[:m, m:] = JVH
    M, Minv = lift_matrix(base, x, y)
    return M @ Jad @ Minv


def omega_matrix(base, w, q):
    """Coordinate matrix of the fundamental 2-form, Om_ab = Om(e_a, e_b)."""
    q = np.asarray(q, dtype=float)
    m = base.dim
    x, y = q[:m], q[m:]
    g = base.matrix(x)
    t = 0.5 * float(y @ g @ y)
    vals = w.eval(t)
    d = derived_coeffs(w, t)
    sa = np.sqrt(vals.a)
    gu = g @ y
    # Om(H_i, V_j) = g_A(H_i, J V_j); horizontal-horizontal and
    # vertical-vertical pairings vanish.
    OmHV = g @ (-sa * np.eye(m) + d.B_coef * np.outer(y, gu))
    Om = np.zeros((2 * m, 2 * m))
    Om[:m, m:] = OmHV
    Om[m:, :m] = -OmHV.T
    _, Minv = lift_matrix(base, x, y)
    return Minv.T @ Om @ Minv


def lee_covector(base, w, q):
    """Coordinate components of the Lee form at q."""
    q = np.asarray(q, dtype=float)
    m = base.dim
    x, y = q[:m], q[m:]
    g = base.matrix(x)
    t = 0.5 * float(y @ g @ y)
    d = derived_coeffs(w, t)
    gu = g @ y
    om_ad = np.concatenate([np.zeros(m), d.lee_coef * gu])
    _, Minv = lift_matrix(base, x, y)
    return Minv.T @ om_ad


def wedge_1_2(om_vec, Om_mat, v1, v2, v3):
    """(om ^ Om)(v1, v2, v3) in the 1/3-normalized convention."""
    return (
        float(om_vec @ v1) * float(v2 @ Om_mat @ v3)
        + float(om_vec @ v2) * float(v3 @ Om_mat @ v1)
        + float(om_vec @ v3) * float(v1 @ Om_mat @ v2)
    ) / 3.0


def _central(fun, q, k, h):
    e = np.zeros(q.size)
    e[k] = h
    if h <= 0 or (q + e)[k] == q[k]:
        raise ValueError(f"differencing step {h} underflows at {q[k]}")
    return (fun(q + e) - fun(q - e)) / (2 * h)


def _richardson(fun, q, k, h):
    d1 = _central(fun, q, k, h)
    d2 = _central(fun, q, k, h / 2)
    return (4.0 * d2 - d1) / 3.0


def fd_connection(im: InducedMetric, q, h=1e-4, richardson=True):
    """Finite-difference Christoffel symbols of the induced metric."""
    q = np.asarray(q, dtype=float)
    n = im.dim2
    G = im.matrix(q)
    cond = np.linalg.cond(G)
    if cond > 1e8:
        warnings.warn(f"induced metric conditioning {cond:.2e} at {q}")
    Ginv = np.linalg.inv(G)
    diff = _richardson if richardson else _central
    dG = np.array([diff(im.matrix, q, k, h) for k in range(n)])
    core = dG.transpose(0, 1, 2) + dG.transpose(1, 0, 2) - dG.transpose(1, 2, 0)
    return 0.5 * np.einsum("kl,ijl->kij", Ginv, core)


def fd_curvature(im: InducedMetric, q, h=1e-4, richardson=True):
    """Finite-difference curvature of the induced metric (nested differencing)."""
    q = np.asarray(q, dtype=float)
    n = im.dim2

    def conn(p):
        return fd_connection(im, p, h=h, richardson=richardson)

    gamma = conn(q)
    diff = _richardson if richardson else _central
    dgamma = np.array([diff(conn, q, k, h) for k in range(n)])
    term = dgamma.transpose(1, 3, 0, 2)
    quad = np.einsum("hil,ljk->hkij", gamma, gamma)
    return term - term.transpose(0, 1, 3, 2) + quad - quad.transpose(0, 1, 3, 2)


def fd_directional(fun, q, v, h=1e-4, richardson=True):
    """Directional derivative of a scalar- or array-valued function."""
    v = np.asarray(v, dtype=float)

    def once(step):
        return (fun(q + step * v) - fun(q - step * v)) / (2 * step)

    if not richardson:
        return once(h)
    return (4.0 * once(h / 2) - once(h)) / 3.0


def fd_exterior_derivative(form, q, vectors, h=1e-4, richardson=True):
    """Numeric exterior derivative on constant coordinate-extended vectors.

    ``form(q, v_1, .., v_k)`` evaluates the k-form; the result follows the
    1/(k+1)-normalized convention (brackets of constant fields vanish).
    """
    q = np.asarray(q, dtype=float)
    vectors = [np.asarray(v, dtype=float) for v in vectors]
    k1 = len(vectors)
    total = 0.0
    for i, vi in enumerate(vectors):
        rest = vectors[:i] + vectors[i + 1 :]

        def slot(p, _rest=rest):
            return form(p, *_rest)

        total += (-1.0) ** i * fd_directional(slot, q, vi, h=h, richardson=richardson)
    return total / k1


def fd_nijenhuis(base, w, q, U, V, h=1e-5):
    """Numeric Nijenhuis tensor of J on coordinate-extended constant fields."""
    q = np.asarray(q, dtype=float)
    U = np.asarray(U, dtype=float)
    V = np.asarray(V, dtype=float)

    def J(p):
        return j_matrix(base, w, p)

    J0 = J(q)
    JU, JV = J0 @ U, J0 @ V
    dJ_JU = fd_directional(J, q, JU, h=h)
    dJ_JV = fd_directional(J, q, JV, h=h)
    dJ_U = fd_directional(J, q, U, h=h)
    dJ_V = fd_directional(J, q, V, h=h)
    # N = [JU,JV] - J[JU,V] - J[U,JV]  (constant fields, [U,V] = 0), with
    # [JU,JV] = (D_{JU} J)V - (D_{JV} J)U, [JU,V] = -(D_V J)U, [U,JV] = (D_U J)V
    return dJ_JU @ V - dJ_JV @ U + J0 @ (dJ_V @ U) - J0 @ (dJ_U @ V)


def lift_field(base, X, kind):
    """Coordinate field of the horizontal or vertical lift of a constant X."""
    X = np.asarray(X, dtype=float)
    m = base.dim

    if kind == "H":

        def field(q):
            gamma = bg.christoffel(base, q[:m])
            return np.concatenate([X, -np.einsum("kij,j,i->k", gamma, q[m:], X)])

    elif kind == "V":

        def field(q):
            return np.concatenate([np.zeros(m), X])

    else:
        raise ValueError(f"kind must be 'H' or 'V', got {kind!r}")
    return field


def fd_lift_connection(im: InducedMetric, q, Ufield, Vfield, h=1e-4):
    """nabla_U V for coordinate vector fields, via fd_connection."""
    q = np.asarray(q, dtype=float)
    gamma = fd_connection(im, q, h=h)
    U0 = Ufield(q)
    dV = fd_directional(Vfield, q, U0, h=h)
    return dV + np.einsum("kij,i,j->k", gamma, U0, Vfield(q))
