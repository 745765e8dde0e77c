"""Base Riemannian manifold in a chart: metric, Christoffels, curvature.

The curvature sign convention is fixed so that a space of constant
sectional curvature c satisfies R(X,Y)Z = c (g(Y,Z) X - g(X,Z) Y), i.e.
R^k_{lij} = c (g_{jl} d^k_i - g_{il} d^k_j) with R(e_i, e_j) e_l = R^k_{lij} e_k.
"""

from __future__ import annotations

import numpy as np

from .jets import Jet

__all__ = [
    "GeometryError",
    "ChartDomainError",
    "SingularMetricError",
    "DegeneratePlaneError",
    "ChartMetric",
    "SpaceForm",
    "euclidean",
    "diagonal_polynomial",
    "metric_from_spec",
    "christoffel",
    "curvature",
    "nabla_curvature",
    "sectional",
    "ricci",
    "scalar_curvature_base",
    "lower_curvature",
    "fd_metric_derivatives",
    "christoffel_fd",
    "curvature_fd",
    "orthonormal_frame",
]


class GeometryError(ValueError):
    pass


class ChartDomainError(GeometryError):
    pass


class SingularMetricError(GeometryError):
    pass


class DegeneratePlaneError(GeometryError):
    pass


def _entry_jet_parts(entry, n):
    if isinstance(entry, Jet):
        return entry.v, entry.d1, entry.d2, entry.d3
    z1 = np.zeros(n)
    return float(entry), z1, np.zeros((n, n)), np.zeros((n, n, n))


class ChartMetric:
    """Metric components g_ij on a single chart of an m-manifold.

    ``components`` maps a list of m scalars (floats or jets) to an m x m
    nested sequence of scalars; writing it against the jet algebra gives
    analytic derivatives up to third order.
    """

    def __init__(self, dim, components, domain=None, name="custom"):
        self.dim = int(dim)
        self.components = components
        self.domain = domain
        self.name = name

    def check_domain(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ChartDomainError(f"point shape {x.shape} != ({self.dim},)")
        if self.domain is not None and not self.domain(x):
            raise ChartDomainError(f"{self.name}: point {x} outside chart domain")
        return x

    def matrix(self, x):
        x = self.check_domain(x)
        rows = self.components(list(x))
        g = np.array(
            [[e.v if isinstance(e, Jet) else float(e) for e in row] for row in rows]
        )
        return g

    def derivatives(self, x, order):
        """Return (g, dg, ...) with dg[l, i, j] = d_l g_ij, up to ``order`` <= 3."""
        x = self.check_domain(x)
        m = self.dim
        rows = self.components(Jet.seed(x))
        g = np.zeros((m, m))
        dg = np.zeros((m, m, m))
        d2g = np.zeros((m, m, m, m))
        d3g = np.zeros((m, m, m, m, m))
        for i in range(m):
            for j in range(m):
                v, d1, d2, d3 = _entry_jet_parts(rows[i][j], m)
                g[i, j] = v
                dg[:, i, j] = d1
                d2g[:, :, i, j] = d2
                d3g[:, :, :, i, j] = d3
        out = [g, dg]
        if order >= 2:
            out.append(d2g)
        if order >= 3:
            out.append(d3g)
        return tuple(out)

    def validate_at(self, x):
        g = self.matrix(x)
        if np.max(np.abs(g - g.T)) != 0.0:
            raise GeometryError(f"{self.name}: components not symmetric at {x}")
        w = np.linalg.eigvalsh(g)
        if w.min() <= 0.0:
            raise SingularMetricError(
                f"{self.name}: metric not positive definite at {x} (eigenvalues {w})"
            )
        return g


class SpaceForm(ChartMetric):
    """Constant-curvature model in its conformal chart g = I / (1 + (c/4)|x|^2)^2."""

    def __init__(self, curvature, dim):
        c = float(curvature)

        def components(xs):
            f = 1.0
            for xi in xs:
                f = f + (c / 4.0) * xi * xi
            w = 1.0 / (f * f)
            return [
                [w if i == j else 0.0 for j in range(dim)] for i in range(dim)
            ]

        def domain(x):
            return 1.0 + (c / 4.0) * float(np.dot(x, x)) > 0.0

        super().__init__(dim, components, domain=domain, name=f"space_form(c={c})")
        self.curvature = c


def euclidean(dim):
    return SpaceForm(0.0, dim)


def diagonal_polynomial(dim, entries, name="diagonal_polynomial"):
    """Diagonal metric with polynomial entries.

    ``entries[i]`` is a list of terms ``{"c": coeff, "powers": [p_1..p_m]}``
    giving g_ii(x) = sum_terms c * prod_j x_j^p_j.
    """
    terms = [
        [(float(t["c"]), [int(p) for p in t["powers"]]) for t in entry]
        for entry in entries
    ]
    if len(terms) != dim:
        raise GeometryError(f"need {dim} diagonal entries, got {len(terms)}")

    def components(xs):
        diag = []
        for entry in terms:
            acc = 0.0
            for c, powers in entry:
                term = c
                for xj, p in zip(xs, powers):
                    for _ in range(p):
                        term = term * xj
                acc = acc + term
            diag.append(acc)
        return [[diag[i] if i == j else 0.0 for j in range(dim)] for i in range(dim)]

    return ChartMetric(dim, components, name=name)


def metric_from_spec(doc):
    """Build a metric from a declarative JSON document."""
    try:
        dim = int(doc["dim"])
        kind = doc["kind"]
        params = doc.get("params", {})
    except (KeyError, TypeError) as exc:
        raise GeometryError(f"invalid metric spec: missing field {exc}") from exc
    if kind == "space_form":
        return SpaceForm(params.get("curvature", 0.0), dim)
    if kind == "diagonal_polynomial":
        return diagonal_polynomial(dim, params["entries"])
    raise GeometryError(f"unknown metric kind {kind!r}")


def _inverse(g, x):
    try:
        ginv = np.linalg.inv(g)
    except np.linalg.LinAlgError as exc:
        raise SingularMetricError(f"metric matrix singular at point {x}") from exc
    return ginv


def christoffel(metric, x):
    """Levi-Civita symbols Gamma^k_ij = 1/2 g^{kl}(d_i g_jl + d_j g_il - d_l g_ij)."""
    g, dg = metric.derivatives(x, 1)
    ginv = _inverse(g, x)
    # dg[l, i, j] = d_l g_ij ; core[i, j, l] = d_i g_jl + d_j g_il - d_l g_ij
    core = dg.transpose(0, 1, 2) + dg.transpose(1, 0, 2) - dg.transpose(1, 2, 0)
    return 0.5 * np.einsum("kl,ijl->kij", ginv, core)


def _christoffel_stack(metric, x, order):
    """Gamma and its chart derivatives from metric jets.

    Returns (Gamma,), (Gamma, dGamma) or (Gamma, dGamma, d2Gamma) where
    dGamma[p, k, i, j] = d_p Gamma^k_ij.
    """
    if order == 0:
        return (christoffel(metric, x),)
    if order == 1:
        g, dg, d2g = metric.derivatives(x, 2)
    else:
        g, dg, d2g, d3g = metric.derivatives(x, 3)
    m = metric.dim
    ginv = _inverse(g, x)
    core = dg.transpose(0, 1, 2) + dg.transpose(1, 0, 2) - dg.transpose(1, 2, 0)
    gamma = 0.5 * np.einsum("kl,ijl->kij", ginv, core)
    # d_p core[i,j,l] from d2g[p, a, i, j] = d_p d_a g_ij
    dcore = (
        d2g.transpose(0, 1, 2, 3)  # d_p d_i g_jl -> (p, i, j, l)
        + d2g.transpose(0, 2, 1, 3)  # d_p d_j g_il -> (p, i, j, l)
        - d2g.transpose(0, 2, 3, 1)  # d_p d_l g_ij -> (p, i, j, l)
    )
    dginv = -np.einsum("ka,pab,bl->pkl", ginv, dg, ginv)
    dgamma = 0.5 * (
        np.einsum("pkl,ijl->pkij", dginv, core)
        + np.einsum("kl,pijl->pkij", ginv, dcore)
    )
    if order == 1:
        return gamma, dgamma
    d2core = (
        d3g.transpose(0, 1, 2, 3, 4)
        + d3g.transpose(0, 1, 3, 2, 4)
        - d3g.transpose(0, 1, 3, 4, 2)
    )  # d_p d_q core[i, j, l]
    d2ginv = -(
        np.einsum("pka,qab,bl->pqkl", dginv, dg, ginv)
        + np.einsum("ka,pqab,bl->pqkl", ginv, d2g, ginv)
        + np.einsum("ka,qab,pbl->pqkl", ginv, dg, dginv)
    )
    d2gamma = 0.5 * (
        np.einsum("pqkl,ijl->pqkij", d2ginv, core)
        + np.einsum("qkl,pijl->pqkij", dginv, dcore)
        + np.einsum("pkl,qijl->pqkij", dginv, dcore)
        + np.einsum("kl,pqijl->pqkij", ginv, d2core)
    )
    return gamma, dgamma, d2gamma


def _curvature_from(gamma, dgamma):
    # R[h, k, i, j] = d_i Gamma^h_jk - d_j Gamma^h_ik + G^h_il G^l_jk - G^h_jl G^l_ik
    term = dgamma.transpose(1, 3, 0, 2)  # d_i G^h_jk -> (h, k, i, j)
    quad = np.einsum("hil,ljk->hkij", gamma, gamma)
    return term - term.transpose(0, 1, 3, 2) + quad - quad.transpose(0, 1, 3, 2)


def curvature(metric, x):
    """Curvature R[h, k, i, j] = R^h_{kij}, with R(e_i, e_j) e_k = R^h_{kij} e_h."""
    gamma, dgamma = _christoffel_stack(metric, x, 1)
    return _curvature_from(gamma, dgamma)


def nabla_curvature(metric, x):
    """Covariant derivative NR[l, h, k, i, j] = (nabla_l R)^h_{kij}."""
    gamma, dgamma, d2gamma = _christoffel_stack(metric, x, 2)
    # dR[p, h, k, i, j] = d_p R^h_{kij}
    dterm = d2gamma.transpose(0, 2, 4, 1, 3)  # d_p d_i G^h_jk -> (p, h, k, i, j)
    dquad = np.einsum("phil,ljk->phkij", dgamma, gamma) + np.einsum(
        "hil,pljk->phkij", gamma, dgamma
    )
    dR = dterm - dterm.transpose(0, 1, 2, 4, 3) + dquad - dquad.transpose(0, 1, 2, 4, 3)
    R = _curvature_from(gamma, dgamma)
    return (
        dR
        + np.einsum("hlp,pkij->lhkij", gamma, R)
        - np.einsum("plk,hpij->lhkij", gamma, R)
        - np.einsum("pli,hkpj->lhkij", gamma, R)
        - np.einsum("plj,hkip->lhkij", gamma, R)
    )


def lower_curvature(g, R):
    """R_{hkij} = g_{hp} R^p_{kij}."""
    return np.einsum("hp,pkij->hkij", g, R)


def ricci(metric, x):
    R = curvature(metric, x)
    return np.einsum("ikij->kj", R)


def scalar_curvature_base(metric, x):
    g = metric.matrix(x)
    ginv = _inverse(g, x)
    return float(np.einsum("kj,kj->", ginv, ricci(metric, x)))


def sectional(metric, x, X, Y):
    """Sectional curvature of span(X, Y) at x."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    g = metric.matrix(x)
    R = curvature(metric, x)
    rxyy = np.einsum("hkij,k,i,j->h", R, Y, X, Y)
    num = float(rxyy @ g @ X)
    nx = float(X @ g @ X)
    ny = float(Y @ g @ Y)
    xy = float(X @ g @ Y)
    den = nx * ny - xy * xy
    if den <= 1e-14 * nx * ny:
        raise DegeneratePlaneError(f"degenerate plane at {x}: Gram determinant {den}")
    return num / den


def orthonormal_frame(g, first=None):
    """g-orthonormal frame rows e_i, optionally with e_1 along ``first``."""
    m = g.shape[0]
    seeds = []
    if first is not None:
        seeds.append(np.asarray(first, dtype=float))
    seeds.extend(np.eye(m))
    frame = []
    for s in seeds:
        v = s.copy()
        for e in frame:
            v = v - (e @ g @ v) * e
        norm2 = float(v @ g @ v)
        if norm2 > 1e-20:
            frame.append(v / np.sqrt(norm2))
        if len(frame) == m:
            break
    if len(frame) != m:
        raise GeometryError("failed to build an orthonormal frame")
    return np.array(frame)


def fd_metric_derivatives(metric, x, h=1e-5):
    """Central-difference first derivatives dg[l, i, j] of the components."""
    x = np.asarray(x, dtype=float)
    m = metric.dim
    dg = np.zeros((m, m, m))
    for l in range(m):
        e = np.zeros(m)
        e[l] = h
        dg[l] = (metric.matrix(x + e) - metric.matrix(x - e)) / (2 * h)
    return dg


def christoffel_fd(metric, x, h=1e-5):
    g = metric.matrix(x)
    ginv = _inverse(g, x)
    dg = fd_metric_derivatives(metric, x, h)
    core = dg.transpose(0, 1, 2) + dg.transpose(1, 0, 2) - dg.transpose(1, 2, 0)
    return 0.5 * np.einsum("kl,ijl->kij", ginv, core)


def curvature_fd(metric, x, h=1e-5):
    """Curvature from central differences of christoffel_fd (nested steps)."""
    x = np.asarray(x, dtype=float)
    m = metric.dim
    gamma = christoffel_fd(metric, x, h)
    dgamma = np.zeros((m, m, m, m))
    for p in range(m):
        e = np.zeros(m)
        e[p] = h
        dgamma[p] = (christoffel_fd(metric, x + e, h) - christoffel_fd(metric, x - e, h)) / (
            2 * h
        )
    return _curvature_from(gamma, dgamma)
