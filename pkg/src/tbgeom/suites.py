"""Named verification suites executed by the batch runner.

Each suite draws deterministic samples, evaluates one family of closed
forms against its independent check, and reports residuals.  Negative
controls (configurations that must exhibit a LARGE residual for the suite
to pass) are first-class: a suite passes only if its residuals stay below
tolerance and every control stays above its bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import base_geometry as bg
from . import oracle as orc
from . import sphere_bundle as sb
from . import tangent_bundle as tb
from .weights import (
    WeightPair,
    almost_kahler_complete,
    derived_coeffs,
    kahler_family,
    kahler_system_residuals,
    named_family,
)

__all__ = ["SuiteResult", "SuiteContext", "SUITES", "SUITE_ORDER", "run_suite"]


@dataclass
class Control:
    name: str
    value: float
    bound: float
    require: str  # "min": value must exceed bound; "max": stay below

    @property
    def ok(self):
        return self.value >= self.bound if self.require == "min" else self.value <= self.bound

    def as_dict(self):
        return {
            "name": self.name,
            "value": self.value,
            "bound": self.bound,
            "require": self.require,
            "ok": bool(self.ok),
        }


@dataclass
class SuiteResult:
    name: str
    anchor: str
    tolerance: float
    residuals: list = field(default_factory=list)
    controls: list = field(default_factory=list)
    error: str | None = None
    seed: list = field(default_factory=list)

    @property
    def max_residual(self):
        return max(self.residuals) if self.residuals else 0.0

    @property
    def passed(self):
        if self.error is not None:
            return False
        return self.max_residual <= self.tolerance and all(c.ok for c in self.controls)

    def as_dict(self):
        hist_counts, hist_edges = _log_histogram(self.residuals)
        return {
            "name": self.name,
            "anchor": self.anchor,
            "tolerance": self.tolerance,
            "passed": bool(self.passed),
            "max_residual": self.max_residual,
            "n_samples": len(self.residuals),
            "residuals": list(map(float, self.residuals)),
            "histogram": {"log10_edges": hist_edges, "counts": hist_counts},
            "controls": [c.as_dict() for c in self.controls],
            "seed": list(self.seed),
            "sample_indices": list(range(len(self.residuals))),
            "error": self.error,
        }


def _log_histogram(residuals):
    edges = list(range(-16, 1))
    if not residuals:
        return [0] * (len(edges) - 1), edges
    logs = [math.log10(max(abs(r), 1e-300)) for r in residuals]
    counts, _ = np.histogram(np.clip(logs, -16, 0), bins=edges)
    return counts.tolist(), edges


@dataclass
class SuiteContext:
    base: bg.ChartMetric
    weights: WeightPair
    samples: int
    seed: int
    h: float
    chart_box: np.ndarray
    fiber_range: tuple

    def rng(self, suite_index):
        return np.random.default_rng([self.seed, suite_index])

    def sample_x(self, rng):
        lo, hi = self.chart_box[:, 0], self.chart_box[:, 1]
        for _ in range(1000):
            x = lo + (hi - lo) * rng.random(self.base.dim)
            try:
                self.base.validate_at(x)
                return x
            except bg.GeometryError:
                continue
        raise bg.ChartDomainError("chart box contains no admissible points")

    def sample_point(self, rng, weights=None, base=None, t_range=None):
        w = weights or self.weights
        base = base or self.base
        for _ in range(1000):
            x = self.sample_x(rng)
            try:
                g = base.validate_at(x)
                break
            except bg.GeometryError:
                continue
        else:
            raise bg.ChartDomainError("chart box misses the override-base domain")
        direction = rng.standard_normal(base.dim)
        direction /= math.sqrt(direction @ g @ direction)
        lo, hi = t_range if t_range else (None, None)
        if lo is None:
            rlo, rhi = self.fiber_range
            lo, hi = 0.5 * rlo**2, 0.5 * rhi**2
        dlo, dhi = w.t_domain
        lo = max(lo, dlo if dlo > 0 else (1e-6 if w.epsilon == +1 else lo))
        hi = min(hi, dhi * 0.98 if math.isfinite(dhi) else hi)
        t = lo + (hi - lo) * rng.random()
        u = math.sqrt(2.0 * t) * direction
        return tb.tangent_point(base, x, u)


def _sphere_sample(ctx, rng, base=None):
    base = base or ctx.base
    x = ctx.sample_x(rng)
    g = base.validate_at(x)
    u = rng.standard_normal(base.dim)
    u /= math.sqrt(u @ g @ u)
    return x, u


# ---------------------------------------------------------------- suites


def _suite_base_checks(ctx, rng, tol):
    res = SuiteResult("base_checks", "§2 / Prop. 2.12 prerequisites", tol)
    m = ctx.base.dim
    for _ in range(ctx.samples):
        x = ctx.sample_x(rng)
        g = ctx.base.matrix(x)
        gam = bg.christoffel(ctx.base, x)
        R = bg.curvature(ctx.base, x)
        low = bg.lower_curvature(g, R)
        worst = np.max(np.abs(gam - gam.transpose(0, 2, 1)))
        worst = max(worst, np.max(np.abs(R + R.transpose(0, 1, 3, 2))))
        worst = max(worst, np.max(np.abs(low + low.transpose(1, 0, 2, 3))))
        worst = max(worst, np.max(np.abs(low - low.transpose(2, 3, 0, 1))))
        # first Bianchi: cyclic sum over (k, i, j)
        bianchi = R + R.transpose(0, 3, 1, 2) + R.transpose(0, 2, 3, 1)
        worst = max(worst, np.max(np.abs(bianchi)))
        # second Bianchi: cyclic sum over (l, i, j)
        NR = bg.nabla_curvature(ctx.base, x)
        b2 = NR + NR.transpose(4, 1, 2, 0, 3) + NR.transpose(3, 1, 2, 4, 0)
        worst = max(worst, np.max(np.abs(b2)))
        worst = max(worst, np.max(np.abs(gam - bg.christoffel_fd(ctx.base, x, h=1e-5))))
        res.residuals.append(float(worst))
        if isinstance(ctx.base, bg.SpaceForm):
            c = ctx.base.curvature
            ident = c * (
                np.einsum("jl,hi->hlij", g, np.eye(m))
                - np.einsum("il,hj->hlij", g, np.eye(m))
            )
            res.residuals.append(float(np.max(np.abs(R - ident))))
            X = rng.standard_normal(m)
            Y = rng.standard_normal(m)
            res.residuals.append(abs(bg.sectional(ctx.base, x, X, Y) - c))
    return res


def _suite_lck(ctx, rng, tol):
    res = SuiteResult("lck", "Prop. 2.6", tol)
    base, w = ctx.base, ctx.weights
    n2 = 2 * base.dim

    def omega_form(q, v1, v2):
        return float(v1 @ orc.omega_matrix(base, w, q) @ v2)

    def lee_1form(q, v):
        return float(orc.lee_covector(base, w, q) @ v)

    for _ in range(ctx.samples):
        P = ctx.sample_point(rng)
        q = np.concatenate([P.x, P.u])
        vecs = [rng.standard_normal(n2) for _ in range(3)]
        dom = orc.fd_exterior_derivative(omega_form, q, vecs, h=ctx.h)
        wed = orc.wedge_1_2(
            orc.lee_covector(base, w, q), orc.omega_matrix(base, w, q), *vecs
        )
        res.residuals.append(abs(dom - wed))
        dlee = orc.fd_exterior_derivative(lee_1form, q, vecs[:2], h=ctx.h)
        res.residuals.append(abs(dlee))
    return res


def _suite_almost_kahler(ctx, rng, tol):
    res = SuiteResult("almost_kahler", "Thm. 2.6", tol)
    base = ctx.base
    pair = almost_kahler_complete(lambda t: 1.0 + t, epsilon=-1, name="ak(1+t)")
    cg = named_family("cheeger_gromoll")
    n2 = 2 * base.dim
    for _ in range(ctx.samples):
        P = ctx.sample_point(rng, weights=pair)
        q = np.concatenate([P.x, P.u])
        vecs = [rng.standard_normal(n2) for _ in range(3)]

        def om(qq, v1, v2, _w=pair):
            return float(v1 @ orc.omega_matrix(base, _w, qq) @ v2)

        res.residuals.append(abs(orc.fd_exterior_derivative(om, q, vecs, h=ctx.h)))
        res.residuals.append(abs(derived_coeffs(pair, P.t).lee_coef))
    # negative control: the Cheeger-Gromoll form must stay visibly non-closed
    P = ctx.sample_point(rng, weights=cg)
    q = np.concatenate([P.x, P.u])
    vh = np.concatenate([np.eye(base.dim)[0], np.zeros(base.dim)])
    v1 = np.concatenate([np.zeros(base.dim), np.eye(base.dim)[0]])
    v2 = np.concatenate([np.zeros(base.dim), np.eye(base.dim)[-1]])

    def om_cg(qq, va, vb):
        return float(va @ orc.omega_matrix(base, cg, qq) @ vb)

    control = abs(orc.fd_exterior_derivative(om_cg, q, [vh, v1, v2], h=ctx.h))
    res.controls.append(Control("cg_not_almost_kahler", control, 1e-2, "min"))
    return res


def _suite_kahler(ctx, rng, tol):
    res = SuiteResult("kahler", "Thm. 2.9 / Eqs. (13)-(17)", tol)
    c, kappa = -1.0, 2.0
    base = bg.SpaceForm(c, 2)
    pair = kahler_family(2, c, kappa)
    n2 = 4
    r13_max = r14_max = 0.0
    for _ in range(ctx.samples):
        P = ctx.sample_point(rng, weights=pair, base=base)
        q = np.concatenate([P.x, P.u])
        U = rng.standard_normal(n2)
        V = rng.standard_normal(n2)
        res.residuals.append(float(np.max(np.abs(orc.fd_nijenhuis(base, pair, q, U, V)))))
        r13, r14 = kahler_system_residuals(pair, P.t, c)
        r13_max, r14_max = max(r13_max, abs(r13)), max(r14_max, abs(r14))

        def om(qq, va, vb):
            return float(va @ orc.omega_matrix(base, pair, qq) @ vb)

        vecs = [rng.standard_normal(n2) for _ in range(3)]
        res.residuals.append(abs(orc.fd_exterior_derivative(om, q, vecs, h=ctx.h)))
    res.controls.append(Control("eq13_residual", r13_max, 1e-10, "max"))
    res.controls.append(Control("eq14_residual", r14_max, 1e-10, "max"))
    return res


def _suite_connection(ctx, rng, tol):
    res = SuiteResult("connection", "Prop. 2.11", tol)
    base, w = ctx.base, ctx.weights
    im = orc.InducedMetric(base, w)
    for _ in range(ctx.samples):
        P = ctx.sample_point(rng)
        q = np.concatenate([P.x, P.u])
        X = rng.standard_normal(base.dim)
        Y = rng.standard_normal(base.dim)
        for case, ku, kv in [("HH", "H", "H"), ("HV", "H", "V"), ("VH", "V", "H"), ("VV", "V", "V")]:
            closed = orc.split_to_coord(tb.bundle_connection(w, base, P, case, X, Y))
            num = orc.fd_lift_connection(
                im, q, orc.lift_field(base, X, ku), orc.lift_field(base, Y, kv), h=ctx.h
            )
            res.residuals.append(float(np.max(np.abs(closed - num))))
    return res


def _suite_curvature(ctx, rng, tol):
    res = SuiteResult("curvature", "Prop. 2.12", tol)
    base, w = ctx.base, ctx.weights
    im = orc.InducedMetric(base, w)
    sym_worst = 0.0
    for _ in range(max(1, ctx.samples // 4)):
        P = ctx.sample_point(rng)
        q = np.concatenate([P.x, P.u])
        Rhat = orc.fd_curvature(im, q, h=ctx.h)
        X = rng.standard_normal(base.dim)
        Y = rng.standard_normal(base.dim)
        Z = rng.standard_normal(base.dim)
        for case in ["HHH", "HHV", "HVH", "HVV", "VVH", "VVV"]:
            closed = orc.split_to_coord(tb.bundle_curvature(w, base, P, case, X, Y, Z))
            Uc = orc.lift_field(base, X, case[0])(q)
            Vc = orc.lift_field(base, Y, case[1])(q)
            Wc = orc.lift_field(base, Z, case[2])(q)
            num = np.einsum("hkij,k,i,j->h", Rhat, Wc, Uc, Vc)
            res.residuals.append(float(np.max(np.abs(closed - num))))
        # closed-form curvature symmetries + first Bianchi on random splits
        U = tb.random_split_vector(P, rng)
        V = tb.random_split_vector(P, rng)
        W = tb.random_split_vector(P, rng)
        S = tb.random_split_vector(P, rng)

        def riem(A, B, C, D):
            return tb.bundle_metric(w, P, tb.bundle_curvature_general(w, base, P, A, B, C), D)

        sym_worst = max(
            sym_worst,
            abs(riem(U, V, W, S) + riem(V, U, W, S)),
            abs(riem(U, V, W, S) + riem(U, V, S, W)),
            abs(riem(U, V, W, S) - riem(W, S, U, V)),
        )
        bsum = (
            tb.bundle_curvature_general(w, base, P, U, V, W)
            + tb.bundle_curvature_general(w, base, P, V, W, U)
            + tb.bundle_curvature_general(w, base, P, W, U, V)
        )
        sym_worst = max(sym_worst, math.sqrt(abs(tb.bundle_metric(w, P, bsum, bsum))))
    res.controls.append(Control("curvature_symmetries", sym_worst, 1e-8, "max"))
    return res


def _suite_flat_g1(ctx, rng, tol):
    res = SuiteResult("flat_g1", "Prop. 2.17", tol)
    base, w = ctx.base, ctx.weights
    im = orc.InducedMetric(base, w)
    for k in range(ctx.samples):
        P = ctx.sample_point(rng, t_range=(0.01, 3.0))
        X = rng.standard_normal(base.dim)
        Y = rng.standard_normal(base.dim)
        Z = rng.standard_normal(base.dim)
        worst = 0.0
        for case in ["HHH", "HHV", "HVH", "HVV", "VVH", "VVV"]:
            vec = tb.bundle_curvature(w, base, P, case, X, Y, Z)
            worst = max(worst, float(np.max(np.abs(np.concatenate([vec.h, vec.v])))))
        res.residuals.append(worst)
        if k < max(2, ctx.samples // 10):
            q = np.concatenate([P.x, P.u])
            res.residuals.append(float(np.max(np.abs(orc.fd_curvature(im, q, h=ctx.h)))))
    return res


def _suite_sectional(ctx, rng, tol):
    res = SuiteResult("sectional", "Prop. 2.15 / Lemma 2.14", tol)
    base, w = ctx.base, ctx.weights
    if not isinstance(base, bg.SpaceForm):
        res.error = "sectional display suite needs a space-form base"
        return res
    c = base.curvature
    for _ in range(ctx.samples):
        P = ctx.sample_point(rng)
        vals = w.eval(P.t)
        frame = bg.orthonormal_frame(P.gx, first=P.u)
        X, Y = frame[0], frame[-1]
        if base.dim > 2:
            X, Y = frame[1], frame[2]
        XH = tb.SplitVector.horizontal(X, P)
        YH = tb.SplitVector.horizontal(Y, P)
        YV = tb.SplitVector.vertical(Y, P)
        gxu, gyu = float(X @ P.gu), float(Y @ P.gu)
        disp = c - 0.75 * vals.a * c * c * (gxu**2 + gyu**2)
        res.residuals.append(abs(tb.bundle_sectional(w, base, P, XH, YH) - disp))
        khv = tb.bundle_sectional(w, base, P, XH, YV)
        dispHV = vals.a**2 * c * c * gxu**2 / (4 * (vals.a + vals.b * gyu**2))
        res.residuals.append(abs(khv - dispHV))
        res.controls.append(Control("K(XH,YV) nonnegative", khv, -1e-12, "min"))
        E = tb.adapted_basis(w, P)
        for i in range(base.dim):
            res.residuals.append(abs(tb.bundle_sectional(w, base, P, E[i], E[base.dim])))
        # parallelogram-area displays against the Gram determinant
        q_hh = tb.area_squared(w, P, XH, YH)
        q_hv = tb.area_squared(w, P, XH, YV)
        q_vv = tb.area_squared(w, P, tb.SplitVector.vertical(X, P), YV)
        res.residuals.append(abs(q_hh - 1.0))
        res.residuals.append(abs(q_hv - (vals.a + vals.b * gyu**2)))
        res.residuals.append(
            abs(q_vv - (vals.a**2 + vals.a * vals.b * (gxu**2 + gyu**2)))
        )
    return res


def _suite_scalar(ctx, rng, tol):
    res = SuiteResult("scalar", "Prop. 2.18 / Cor. 2.20", tol)
    base, w = ctx.base, ctx.weights
    for _ in range(ctx.samples):
        P = ctx.sample_point(rng)
        closed = tb.scalar_curvature(w, base, P, mode="closed")
        basis = tb.scalar_curvature(w, base, P, mode="basis")
        denom = max(1.0, abs(closed))
        res.residuals.append(abs(closed - basis) / denom)
        if isinstance(base, bg.SpaceForm):
            sf_form = tb.scalar_curvature_space_form(w, base.curvature, base.dim, P.t)
            res.controls.append(
                Control("space_form_display", abs(sf_form - closed) / denom, 1e-9, "max")
            )
    return res


def _suite_sphere_bundle(ctx, rng, tol):
    res = SuiteResult("sphere_bundle", "§3.1-3.2", tol)
    base, w = ctx.base, ctx.weights
    m = base.dim
    deta_worst = 0.0
    for k in range(max(2, ctx.samples // 4)):
        x, u = _sphere_sample(ctx, rng)
        for flavor, ww, r in [("ga_unit", w, 1.0), ("sasaki_r", None, 1.3)]:
            P = sb.sphere_point(base, x, r * u, r=r)
            for eps in ([-1, 1] if flavor == "ga_unit" else [None]):
                S = sb.contact_structure(P, flavor, ww, rescaled=False, epsilon=eps)
                Pt = S.tangent_projector()
                for _ in range(3):
                    U = Pt @ rng.standard_normal(2 * m)
                    V = Pt @ rng.standard_normal(2 * m)
                    res.residuals.append(
                        float(
                            np.max(
                                np.abs(S.phi @ (S.phi @ U) + U - float(S.eta @ U) * S.xi)
                            )
                        )
                    )
                    res.residuals.append(abs(float(S.eta @ (S.phi @ U))))
                    lhs = float((S.phi @ U) @ S.G @ (S.phi @ V))
                    rhs = float(U @ S.G @ V) - float(S.eta @ U) * float(S.eta @ V)
                    res.residuals.append(abs(lhs - rhs))
                res.residuals.append(float(np.max(np.abs(S.phi @ S.xi))))
                res.residuals.append(abs(float(S.eta @ S.xi) - 1.0))
            # induced metric displays vs ambient restriction
            G_dd, G_dv, G_vv = sb.induced_metric(P, flavor, ww)
            amb = sb.ambient_metric_matrix(P, flavor, ww)
            deltas, verts = sb.generators(P, flavor, ww)
            res.residuals.append(float(np.max(np.abs(deltas @ amb @ deltas.T - G_dd))))
            res.residuals.append(float(np.max(np.abs(deltas @ amb @ verts.T - G_dv))))
            res.residuals.append(float(np.max(np.abs(verts @ amb @ verts.T - G_vv))))
            # the vertical generators satisfy u^i vert_i = 0 and have rank m-1
            res.residuals.append(float(np.max(np.abs(P.u @ verts))))
            rank = np.linalg.matrix_rank(verts, tol=1e-10)
            res.residuals.append(float(abs(rank - (m - 1))))
            # rescaled contact metric condition, numeric d(eta)
            S2 = sb.contact_structure(P, flavor, ww, rescaled=True)
            Pt2 = S2.tangent_projector()
            pairs = [
                (Pt2 @ rng.standard_normal(2 * m), Pt2 @ rng.standard_normal(2 * m))
                for _ in range(2)
            ]
            dvals = sb.deta_numeric(P, flavor, ww, pairs, rescaled=True)
            for (U, V), dv in zip(pairs, dvals):
                deta_worst = max(deta_worst, abs(dv - float(U @ S2.G @ (S2.phi @ V))))
    res.controls.append(Control("contact_metric_condition", deta_worst, 1e-8, "max"))
    return res


def _suite_isometry(ctx, rng, tol):
    res = SuiteResult("isometry", "Thms. 3.3-3.4", tol)
    base = ctx.base
    w4 = WeightPair(lambda t: 4.0, lambda t: 0.0, -1, name="a4")
    pts = [_sphere_sample(ctx, rng) for _ in range(max(2, ctx.samples // 5))]
    good = sb.isometry_residuals(base, w4, pts, rng=rng)
    res.residuals.extend([good["metric"], good["phi"], good["xi"]])
    bad = sb.isometry_residuals(base, w4, pts, r=1.0, rng=rng)
    res.controls.append(Control("wrong_radius_metric", bad["metric"], 0.1, "min"))
    return res


def _suite_k_contact(ctx, rng, tol):
    res = SuiteResult("k_contact", "Thm. 3.7", tol)
    sf1 = bg.SpaceForm(1.0, ctx.base.dim)
    pts = [_sphere_sample(ctx, rng, base=sf1) for _ in range(max(2, ctx.samples // 4))]
    sas = named_family("sasaki")
    v = sb.k_contact_verdict(sf1, sas, pts)
    res.residuals.extend([v["k_contact_residual"], v["sasakian_residual"]])
    w2 = WeightPair(lambda t: 2.0, lambda t: 0.0, -1, name="a2")
    v2 = sb.k_contact_verdict(sf1, w2, pts)
    res.controls.append(Control("a2_not_k_contact", v2["k_contact_residual"], 1e-2, "min"))
    eu = bg.euclidean(ctx.base.dim)
    pts_e = [_sphere_sample(ctx, rng, base=eu) for _ in range(2)]
    v3 = sb.k_contact_verdict(eu, sas, pts_e)
    res.controls.append(Control("flat_not_k_contact", v3["k_contact_residual"], 1e-2, "min"))
    res.controls.append(Control("phi_not_parallel", v3["sasakian_residual"], 1e-2, "min"))
    # config-provided pair: verdict must match the theorem's prediction
    pts_c = [_sphere_sample(ctx, rng) for _ in range(2)]
    vc = sb.k_contact_verdict(ctx.base, ctx.weights, pts_c)
    agree = vc["is_k_contact"] == vc["predicted_k_contact"]
    res.controls.append(Control("verdict_matches_theorem", 1.0 if agree else 0.0, 0.5, "min"))
    return res


def _suite_oracle_cross(ctx, rng, tol):
    res = SuiteResult("oracle_cross", "Props. 2.11 / 2.12 / 2.15 / 2.18", tol)
    base, w = ctx.base, ctx.weights
    im = orc.InducedMetric(base, w)
    parts = {"connection": 1e-5, "curvature": 1e-4, "sectional": 1e-4, "scalar": 1e-4}
    worst = dict.fromkeys(parts, 0.0)
    for _ in range(max(2, ctx.samples // 4)):
        P = ctx.sample_point(rng)
        q = np.concatenate([P.x, P.u])
        X = rng.standard_normal(base.dim)
        Y = rng.standard_normal(base.dim)
        closed = orc.split_to_coord(tb.bundle_connection(w, base, P, "HV", X, Y))
        num = orc.fd_lift_connection(
            im, q, orc.lift_field(base, X, "H"), orc.lift_field(base, Y, "V"), h=ctx.h
        )
        worst["connection"] = max(worst["connection"], float(np.max(np.abs(closed - num))))
        Rhat = orc.fd_curvature(im, q, h=ctx.h)
        G = im.matrix(q)
        U = tb.random_split_vector(P, rng)
        V = tb.random_split_vector(P, rng)
        Wv = tb.random_split_vector(P, rng)
        cl = orc.split_to_coord(tb.bundle_curvature_general(w, base, P, U, V, Wv))
        Uc, Vc, Wc = (orc.split_to_coord(z) for z in (U, V, Wv))
        nm = np.einsum("hkij,k,i,j->h", Rhat, Wc, Uc, Vc)
        worst["curvature"] = max(worst["curvature"], float(np.max(np.abs(cl - nm))))
        k_closed = tb.bundle_sectional(w, base, P, U, V)
        num_k = float(np.einsum("hkij,k,i,j->h", Rhat, Vc, Uc, Vc) @ G @ Uc)
        den_k = float((Uc @ G @ Uc) * (Vc @ G @ Vc) - (Uc @ G @ Vc) ** 2)
        worst["sectional"] = max(worst["sectional"], abs(k_closed - num_k / den_k))
        ric = np.einsum("ikij->kj", Rhat)
        scal_num = float(np.einsum("kj,kj->", np.linalg.inv(G), ric))
        worst["scalar"] = max(
            worst["scalar"], abs(tb.scalar_curvature(w, base, P) - scal_num)
        )
    for name, t0 in parts.items():
        res.residuals.append(worst[name] / t0)
        res.controls.append(Control(f"{name}_residual", worst[name], t0, "max"))
    return res


SUITES = {
    "base_checks": (_suite_base_checks, "§2", 1e-6),
    "lck": (_suite_lck, "Prop. 2.6", 1e-5),
    "almost_kahler": (_suite_almost_kahler, "Thm. 2.6", 1e-5),
    "kahler": (_suite_kahler, "Thm. 2.9", 1e-5),
    "connection": (_suite_connection, "Prop. 2.11", 1e-5),
    "curvature": (_suite_curvature, "Prop. 2.12", 1e-4),
    "flat_g1": (_suite_flat_g1, "Prop. 2.17", 1e-6),
    "sectional": (_suite_sectional, "Prop. 2.15", 1e-8),
    "scalar": (_suite_scalar, "Prop. 2.18", 1e-6),
    "sphere_bundle": (_suite_sphere_bundle, "§3.1-3.2", 1e-8),
    "isometry": (_suite_isometry, "Thm. 3.3", 1e-10),
    "k_contact": (_suite_k_contact, "Thm. 3.7", 1e-8),
    "oracle_cross": (_suite_oracle_cross, "Props. 2.11-2.18", 1.0),
}

SUITE_ORDER = list(SUITES)


def run_suite(name, ctx, tolerance=None):
    fn, anchor, default_tol = SUITES[name]
    tol = default_tol if tolerance is None else float(tolerance)
    idx = SUITE_ORDER.index(name)
    rng = ctx.rng(idx)
    try:
        result = fn(ctx, rng, tol)
    except Exception as exc:  # domain violations etc: report, keep running
        result = SuiteResult(name, anchor, tol, error=f"{type(exc).__name__}: {exc}")
    result.anchor = anchor
    result.tolerance = tol
    result.seed = [ctx.seed, idx]
    return result
