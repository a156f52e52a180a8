"""Headline metrics: Lebesgue constants, level-curve extrema, Muckenhoupt
A_p constants, Marcinkiewicz-Zygmund ratios, and growth-law fits."""

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.optimize import minimize_scalar

from .conformal import (
    CORNER_ANGLE,
    ENDPOINT_RADIUS,
    LevelCurve,
    boundary_point,
    dist_to_level,
    level_point,
    psi,
)
from .families import NodeFamily, build_adjusted, build_raw, theta_grid
from .fold import fold_sister
from .nodal import (
    DerivativeTable,
    build_derivative_table,
    lebesgue_function,
    lebesgue_function_grid,
    log_abs_omega,
)


@dataclass
class MetricRecord:
    """One experiment outcome, with the settings needed to reproduce it."""

    metric_name: str
    n: int
    family_kind: str
    value: float
    p: float = None
    location: float = None
    settings: dict = field(default_factory=dict)


@dataclass
class FitResult:
    """Coefficients and residual of a growth-law regression."""

    model: str  # "affine_in_logn" or "power_law"
    a: float
    b: float
    beta: float = None
    residual_rms: float = 0.0
    n_range: tuple = ()


# ---------------------------------------------------------------------------
# Lebesgue constant
# ---------------------------------------------------------------------------


def lebesgue_constant(
    f: NodeFamily,
    grid_per_gap: int = 64,
    refine_tol: float = 1e-9,
    table: DerivativeTable = None,
    n_refine: int = 5,
) -> MetricRecord:
    """Max of the Lebesgue function over the arc.

    Samples grid_per_gap points inside every folded-angle gap (covering
    both sheets through the folded coordinate), then golden-section
    refines around the top candidates.
    """
    settings = {"grid_per_gap": grid_per_gap, "refine_tol": refine_tol}
    if f.n == 0:
        return MetricRecord("lebesgue_constant", 0, f.kind, 1.0, location=float(f.folded[0]), settings=settings)
    if grid_per_gap < 8:
        raise ValueError("grid_per_gap must be >= 8")
    if table is None:
        table = build_derivative_table(f)

    knots = np.unique(np.concatenate([[-CORNER_ANGLE, CORNER_ANGLE], np.sort(f.folded)]))
    ts = []
    for a, b in zip(knots[:-1], knots[1:]):
        if b - a < 1e-14:
            continue
        frac = np.arange(1, grid_per_gap + 1) / (grid_per_gap + 1.0)
        ts.append(a + (b - a) * frac)
    ts = np.concatenate(ts)
    lam = lebesgue_function_grid(f, table, boundary_point(ts))

    def neg(t):
        return -lebesgue_function(f, table, complex(boundary_point(t)))

    best_val, best_t = 1.0, float(f.folded[0])
    order = np.argsort(lam)[::-1][:n_refine]
    span = knots[-1] - knots[0]
    h = span / len(ts)
    for i in order:
        res = minimize_scalar(
            neg,
            bounds=(max(ts[i] - 2 * h, -CORNER_ANGLE), min(ts[i] + 2 * h, CORNER_ANGLE)),
            method="bounded",
            options={"xatol": refine_tol},
        )
        cand = max(-float(res.fun), float(lam[i]))
        if cand > best_val:
            best_val = cand
            best_t = float(res.x) if -res.fun >= lam[i] else float(ts[i])
    return MetricRecord("lebesgue_constant", f.n, f.kind, best_val, location=best_t, settings=settings)


def lower_bound_witness(n: int) -> MetricRecord:
    """Lebesgue sum of the raw family at the midpoint of the first gap.

    The evaluation point t0 = (theta_0 + theta_1)/2 sits where the basis
    magnitudes pile up; both the full sum and the partial sum over the
    first n/6 nodes grow like log^2(n).
    """
    if n < 6:
        raise ValueError("witness needs n >= 6")
    f = build_raw(n)
    table = build_derivative_table(f)
    th = theta_grid(n)
    t0 = (th[0] + th[1]) / 2.0
    z0 = complex(boundary_point(t0))
    with np.errstate(divide="ignore"):
        ld = np.log(np.abs(z0 - f.points))
    s = ld.sum()
    terms = np.exp(s - ld - table.logs)
    full = float(terms.sum())
    partial = float(terms[: n // 6 + 1].sum())
    return MetricRecord(
        "lower_bound_witness",
        n,
        "raw",
        full,
        location=t0,
        settings={"partial_sum": partial, "partial_upto": n // 6},
    )


# ---------------------------------------------------------------------------
# Level-curve extrema
# ---------------------------------------------------------------------------


def level_minmax(
    n: int,
    convention: str = "one_over_n_plus_1",
    samples: int = None,
    family: NodeFamily = None,
):
    """Min and max of the raw-family nodal magnitude over the level curve.

    Uniform angle sampling with local refinement at both extremal
    candidates.  Returns a (min_record, max_record) pair.
    """
    if samples is None:
        samples = 64 * (n + 1)
    fam = family if family is not None else build_raw(n)
    curve = LevelCurve(n, convention)
    tg = np.linspace(-np.pi, np.pi, samples, endpoint=False)
    lw = log_abs_omega(fam.points, level_point(curve, tg))
    h = 2.0 * np.pi / samples

    imin, imax = int(np.argmin(lw)), int(np.argmax(lw))

    def refine_log(i, want_min):
        sgn = 1.0 if want_min else -1.0

        def g(t):
            return sgn * log_abs_omega(fam.points, complex(level_point(curve, t)))

        res = minimize_scalar(
            g, bounds=(tg[i] - h, tg[i] + h), method="bounded", options={"xatol": 1e-12}
        )
        val = sgn * float(res.fun)
        better = val < lw[i] if want_min else val > lw[i]
        return (val, float(res.x)) if better else (float(lw[i]), float(tg[i]))

    lw_min, t_min = refine_log(imin, True)
    lw_max, t_max = refine_log(imax, False)
    settings = {"samples": samples, "rho_convention": convention}
    rec_min = MetricRecord("level_min", n, fam.kind, float(np.exp(lw_min)), location=t_min, settings=settings)
    rec_max = MetricRecord("level_max", n, fam.kind, float(np.exp(lw_max)), location=t_max, settings=settings)
    return rec_min, rec_max


# ---------------------------------------------------------------------------
# Muckenhoupt A_p constant
# ---------------------------------------------------------------------------


def muckenhoupt_constant(
    n: int,
    p: float,
    window_step_denom: int = 128,
    window_max: int = None,
    convention: str = "one_over_n_plus_1",
    family: NodeFamily = None,
) -> MetricRecord:
    """Discrete sup of the A_p window functional of |omega_n| on the level curve.

    The level curve is stepped by pi/(window_step_denom*(n+1)) around
    the angle t0 of minimal nodal magnitude; the sup runs over nested
    windows centered at t0, up to window_max steps per side.  Arc-length
    weights |z_{k+1} - z_k| discretize the integrals, and the log of the
    magnitude is mean-centered first (the functional is scale invariant)
    to keep the powers representable.
    """
    if p <= 1:
        raise ValueError("p must exceed 1")
    q = p / (p - 1.0)
    fam = family if family is not None else build_raw(n)
    curve = LevelCurve(n, convention)
    rho = curve.rho

    coarse = np.linspace(-np.pi, np.pi, 64 * (n + 1), endpoint=False)
    lw = log_abs_omega(fam.points, psi(rho * np.exp(1j * coarse)))
    t0 = float(coarse[np.argmin(lw)])

    step = np.pi / (window_step_denom * (n + 1))
    cap = min(8192, window_step_denom * (n + 1) // 2)
    m_max = cap if window_max is None else min(window_max, cap)
    k = np.arange(-m_max, m_max + 2)
    zs = psi(rho * np.exp(1j * (t0 + k * step)))
    lv = log_abs_omega(fam.points, zs)
    w = np.abs(np.diff(zs))
    lv = lv[:-1] - lv[:-1].mean()

    with np.errstate(over="ignore"):
        cp = np.concatenate([[0.0], np.cumsum(w * np.exp(p * lv))])
        cq = np.concatenate([[0.0], np.cumsum(w * np.exp(-q * lv))])
    cw = np.concatenate([[0.0], np.cumsum(w)])

    best = 1.0
    for m in range(1, m_max + 1):
        lo, hi = m_max - m, m_max + m
        length = cw[hi] - cw[lo]
        val = ((cp[hi] - cp[lo]) / length) ** (1.0 / p) * ((cq[hi] - cq[lo]) / length) ** (1.0 / q)
        best = max(best, float(val))
    return MetricRecord(
        "muckenhoupt_constant",
        n,
        fam.kind,
        best,
        p=p,
        location=t0,
        settings={
            "window_step_denom": window_step_denom,
            "window_max": m_max,
            "rho_convention": convention,
        },
    )


# ---------------------------------------------------------------------------
# Marcinkiewicz-Zygmund ratios
# ---------------------------------------------------------------------------


def choose_ratio_index(n: int, family: NodeFamily, convention: str = "one_over_n_plus_1") -> int:
    """Node index nearest the level-curve minimum of the nodal magnitude."""
    curve = LevelCurve(n, convention)
    tg = np.linspace(-np.pi, np.pi, 64 * (n + 1), endpoint=False)
    lw = log_abs_omega(family.points, level_point(curve, tg))
    zmin = complex(level_point(curve, float(tg[np.argmin(lw)])))
    return int(np.argmin(np.abs(family.points - zmin)))


def mz_ratio(
    n: int,
    p: float,
    k: int = None,
    quad_tol: float = 1e-8,
    convention: str = "one_over_n_plus_1",
    family: NodeFamily = None,
    table: DerivativeTable = None,
) -> MetricRecord:
    """Arc integral of |P_{n,k}|^p divided by the node's level-curve distance.

    P_{n,k} is the canonical Lagrange basis element of the adjusted
    family; the integral runs over both arm segments with adaptive
    quadrature split at every node position.
    """
    if p <= 1:
        raise ValueError("p must exceed 1")
    fam = family if family is not None else (build_adjusted(n) if n > 0 else build_raw(0))
    if table is None:
        table = build_derivative_table(fam)
    if k is None:
        k = 0 if n == 0 else choose_ratio_index(n, fam, convention)
    pts = fam.points
    log_dk = table.logs[k]

    total = 0.0
    for sgn in (1.0, -1.0):
        direction = ENDPOINT_RADIUS * np.exp(sgn * 3j * np.pi / 4.0)
        spos = np.abs(pts[np.sign(fam.folded) == sgn]) / ENDPOINT_RADIUS
        breaks = np.unique(np.concatenate([[0.0, 1.0], spos]))

        def integrand(s):
            z = direction * s
            with np.errstate(divide="ignore"):
                ld = np.log(np.abs(z - pts))
            lk = ld[k]
            return float(np.exp(p * (ld.sum() - log_dk - lk)))

        for a, b in zip(breaks[:-1], breaks[1:]):
            if b - a < 1e-15:
                continue
            val, _ = quad(integrand, a, b, epsabs=1e-12, epsrel=quad_tol, limit=200)
            total += val
    total *= ENDPOINT_RADIUS  # |dz| = 27^(1/4) ds on each segment

    curve = LevelCurve(n, convention)
    zk = complex(pts[k])
    seeds = [float(fam.angles[k]), fold_sister(float(fam.angles[k]))]
    d = dist_to_level(zk, curve, seeds)
    return MetricRecord(
        "mz_ratio",
        n,
        fam.kind,
        total / d,
        p=p,
        location=k,
        settings={"integral": total, "dist": d, "quad_tol": quad_tol, "rho_convention": convention},
    )


def mz_ratio_worst(n: int, p: float, k_subset, quad_tol: float = 1e-8) -> MetricRecord:
    """Max of mz_ratio over a subset of node indices."""
    k_subset = list(k_subset)
    if not k_subset:
        raise ValueError("k_subset must be nonempty")
    fam = build_adjusted(n) if n > 0 else build_raw(0)
    table = build_derivative_table(fam)
    best = None
    for k in k_subset:
        rec = mz_ratio(n, p, k=k, quad_tol=quad_tol, family=fam, table=table)
        if best is None or rec.value > best.value:
            best = rec
    return MetricRecord(
        "mz_ratio_worst", n, fam.kind, best.value, p=p, location=best.location,
        settings=dict(best.settings, k_subset=k_subset),
    )


def separation_ok(n: int, family: NodeFamily, k: int) -> bool:
    """Whether node k keeps the full folded separation from its neighbors.

    Ratios at poorly separated indices spike by orders of magnitude and
    drown any growth-law fit; sweeps filter on this predicate.
    """
    gaps = np.abs(np.delete(family.folded, k) - family.folded[k])
    return (n + 1) * gaps.min() >= 2.0 * np.pi / 3.0 - 1e-9


# ---------------------------------------------------------------------------
# Growth-law fits
# ---------------------------------------------------------------------------


def _extract(records):
    ns, vals = [], []
    for r in records:
        if isinstance(r, MetricRecord):
            ns.append(r.n)
            vals.append(r.value)
        else:
            ns.append(r[0])
            vals.append(r[1])
    return np.asarray(ns, dtype=float), np.asarray(vals, dtype=float)


def fit_growth(records, model: str) -> FitResult:
    """Least-squares growth law through (n, value) observations.

    affine_in_logn fits value/log(n) = a + b*log(n); power_law fits
    value = a + b*n^beta with a scalar search over beta and linear least
    squares inside.
    """
    ns, vals = _extract(records)
    if len(ns) < 3:
        raise ValueError("need at least 3 records to fit")
    n_range = (int(ns.min()), int(ns.max()))

    if model == "affine_in_logn":
        x = np.log(ns)
        y = vals / x
        design = np.column_stack([np.ones_like(x), x])
        (a, b), *_ = np.linalg.lstsq(design, y, rcond=None)
        resid = y - design @ np.array([a, b])
        return FitResult("affine_in_logn", float(a), float(b),
                         residual_rms=float(np.sqrt(np.mean(resid**2))), n_range=n_range)

    if model == "power_law":
        def sse(beta):
            design = np.column_stack([np.ones_like(ns), ns**beta])
            coef, *_ = np.linalg.lstsq(design, vals, rcond=None)
            r = vals - design @ coef
            return float(r @ r)

        res = minimize_scalar(sse, bounds=(0.05, 2.0), method="bounded", options={"xatol": 1e-6})
        beta = float(res.x)
        design = np.column_stack([np.ones_like(ns), ns**beta])
        (a, b), *_ = np.linalg.lstsq(design, vals, rcond=None)
        resid = vals - design @ np.array([a, b])
        return FitResult("power_law", float(a), float(b), beta=beta,
                         residual_rms=float(np.sqrt(np.mean(resid**2))), n_range=n_range)

    raise ValueError(f"unknown model {model!r}")
