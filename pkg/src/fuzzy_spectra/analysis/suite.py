"""Named verification checks, each producing a :class:`VerificationReport`.

Every check takes a cutoff range and returns one report; :func:`run_all`
strings them together into the full suite used by ``verify --all``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..circle import circle_algebra_residuals
from ..core import make_params
from ..eigen import DEFAULT_TOL
from ..sphere import (
    AlgebraError,
    build_Bm,
    coefficient_inequality_check,
    commutator_fit,
    sphere_algebra_residuals,
)
from .density import density_metrics
from .localization import localization_row, madore_comparison
from .report import VerificationReport, get_k_rule, ordered_map
from .spectra import (
    circle_spectrum,
    interlacing_check,
    madore_spectrum,
    norm_chain,
    parity_check,
    sphere_block_spectrum,
    union_residual,
)
from .theorems import top_eig_monotonicity_circle, top_eig_monotonicity_sphere

PARITY_TOL = 1e-10
ALGEBRA_TOL = 1e-10
UNION_TOL = 1e-10
BOUND_SLACK = 1e-12
ALGEBRA_CIRCLE_MAX = 12
ALGEBRA_SPHERE_MAX = 8
UNION_MAX = 8
CHAIN_MAX = 60
ALL_M_MAX = 60
DENSITY_GRID = (50, 100, 200, 400, 800)
DENSITY_TARGET = 0.01


@dataclass(frozen=True)
class CheckOptions:
    lam_min: int = 1
    lam_max: int = 20
    space: str | None = None
    m: int | None = None
    k_rule: str | None = None
    tol: float = DEFAULT_TOL


def _spaces(opts: CheckOptions, default=("circle", "sphere")) -> tuple[str, ...]:
    return (opts.space,) if opts.space else default


def _ms(opts: CheckOptions, lam: int) -> range:
    """Blocks to visit. ``B_{-m} = B_m``, so only ``m >= 0`` is needed; past
    ``ALL_M_MAX`` the sweep keeps ``m <= 2`` to stay ``O(Λ²)`` per cutoff."""
    if opts.m is not None:
        return range(opts.m, opts.m + 1)
    return range(0, lam + 1 if lam <= ALL_M_MAX else min(lam, 2) + 1)


def _lams(opts: CheckOptions, cap: int | None = None) -> range:
    hi = opts.lam_max if cap is None else min(opts.lam_max, cap)
    return range(opts.lam_min, hi + 1)


def check_parity(opts: CheckOptions) -> VerificationReport:
    """Spectra symmetric about zero: ``x₁`` (circle), every ``B_m`` (sphere), Madore ``x₃``."""
    rule = get_k_rule(opts.k_rule)

    def row(item):
        space, lam = item
        if space == "circle":
            ok = parity_check(circle_spectrum(make_params(lam, rule(lam), "circle"), opts.tol), PARITY_TOL)
        elif space == "sphere":
            p = make_params(lam, rule(lam), "sphere")
            ok = all(parity_check(sphere_block_spectrum(p, m, opts.tol), PARITY_TOL) for m in _ms(opts, lam))
        else:
            ok = parity_check(madore_spectrum(lam), PARITY_TOL)
        return {"space": space, "lambda": lam, "pass": ok}

    items = [(s, lam) for s in _spaces(opts, ("circle", "sphere", "madore")) for lam in _lams(opts)]
    rows = ordered_map(row, items)
    return _report("parity", opts, rule.name, rows, {"tol": PARITY_TOL}, by_space=True)


def check_simplicity(opts: CheckOptions) -> VerificationReport:
    """Minimum eigenvalue gap above ``10·tol`` for ``x₁`` and every ``B_m`` of size >= 2."""
    rule = get_k_rule(opts.k_rule)

    def row(item):
        space, lam = item
        if space == "circle":
            gap = circle_spectrum(make_params(lam, rule(lam), "circle"), opts.tol).min_gap
        else:
            p = make_params(lam, rule(lam), "sphere")
            blocks = [m for m in _ms(opts, lam) if abs(m) < lam]
            gap = min((sphere_block_spectrum(p, m, opts.tol).min_gap for m in blocks), default=float("inf"))
        return {"space": space, "lambda": lam, "min_gap": gap, "pass": bool(gap > 10 * opts.tol)}

    items = [(s, lam) for s in _spaces(opts) for lam in _lams(opts)]
    rows = ordered_map(row, items)
    return _report("simplicity", opts, rule.name, rows, {"min_gap": 10 * opts.tol}, by_space=True)


def check_monotonicity(opts: CheckOptions) -> list[VerificationReport]:
    """Circle under both threshold rules for ``k``; sphere under ``k = max(Λ⁶, floor)``."""
    lo, hi = opts.lam_min, max(opts.lam_max, opts.lam_min + 1)
    out = []
    if opts.space in (None, "circle"):
        rules = (opts.k_rule,) if opts.k_rule else ("theorem1c", "theorem1c_proof")
        out += [top_eig_monotonicity_circle(hi, r, lo, opts.tol) for r in rules]
    if opts.space in (None, "sphere"):
        out.append(top_eig_monotonicity_sphere(hi, opts.k_rule or "lambda6", lo, opts.tol))
    return out


def check_bounds(opts: CheckOptions) -> list[VerificationReport]:
    """The top-eigenvalue bounds at the default stiffness, circle and sphere."""
    lo, hi = opts.lam_min, max(opts.lam_max, opts.lam_min + 1)
    rule = opts.k_rule or "default"
    out = []
    if opts.space in (None, "circle"):
        r = top_eig_monotonicity_circle(hi, rule, lo, opts.tol)
        r.theorem = "circle_bounds"
        r.items.pop("monotone")
        out.append(r)
    if opts.space in (None, "sphere"):
        r = top_eig_monotonicity_sphere(hi, rule, max(lo, 2), opts.tol, m_chain=False)
        r.theorem = "sphere_bounds"
        r.items.pop("eventually_monotone")
        out.append(r)
    return out


def check_density(opts: CheckOptions) -> VerificationReport:
    """``sup_dev`` and the largest gap shrink along the grid and end below 0.01 at Λ = 400.

    Grid points above ``lam_max`` are dropped; the 0.01 target is asserted
    only when Λ = 400 is on the grid.
    """
    rule = get_k_rule(opts.k_rule)
    grid = [lam for lam in DENSITY_GRID if opts.lam_min <= lam <= opts.lam_max]
    if not grid:
        grid = [opts.lam_max]
    m = opts.m or 0

    def row(item):
        space, lam = item
        d = density_metrics(make_params(lam, rule(lam), space), m if space == "sphere" else 0, opts.tol)
        return {"space": space, **d.as_row()}

    items = [(s, lam) for s in _spaces(opts) for lam in grid]
    rows = ordered_map(row, items)
    verdicts = {}
    for space in _spaces(opts):
        sub = [r for r in rows if r["space"] == space]
        sd = np.array([r["sup_dev"] for r in sub])
        gp = np.array([r["max_gap"] for r in sub])
        verdicts[f"{space}_decreasing"] = bool(np.all(np.diff(sd) < 0) and np.all(np.diff(gp) < 0))
        at400 = [r for r in sub if r["lambda"] == 400]
        if at400:
            verdicts[f"{space}_target_at_400"] = bool(
                at400[0]["sup_dev"] < DENSITY_TARGET and at400[0]["max_gap"] < DENSITY_TARGET
            )
    return VerificationReport(
        "density", (grid[0], grid[-1]), rule.name, rows, verdicts, {"target": DENSITY_TARGET},
        notes={"m": m},
    )


def check_perturbation(opts: CheckOptions) -> VerificationReport:
    """Distance between the circle spectrum and its Toeplitz reference.

    ``stated_bound``: ``√Σ(α_i - α̃_i)² < 1/(2(Λ+1)²)``. ``hoffman_wielandt``:
    the same sum against ``||X - P||_F``; ``weyl``: ``max|α_i - α̃_i|``
    against ``||X - P||_2``.
    """
    rule = get_k_rule(opts.k_rule)

    def row(lam):
        d = density_metrics(make_params(lam, rule(lam), "circle"), 0, opts.tol)
        return {
            "lambda": lam,
            "hw_lhs": d.hw_lhs,
            "hw_rhs": d.hw_rhs,
            "frobenius": d.frobenius,
            "max_abs_dev": d.max_abs_dev,
            "spectral": d.spectral,
            "stated_bound": d.hw_lhs < d.hw_rhs,
            "hoffman_wielandt": d.hw_lhs <= d.frobenius + BOUND_SLACK,
            "weyl": d.max_abs_dev <= d.spectral + BOUND_SLACK,
        }

    rows = ordered_map(row, _lams(opts))
    items = {key: all(r[key] for r in rows) for key in ("stated_bound", "hoffman_wielandt", "weyl")}
    fails = [r["lambda"] for r in rows if not r["stated_bound"]]
    return VerificationReport(
        "perturbation", (opts.lam_min, opts.lam_max), rule.name, rows, items,
        {"slack": BOUND_SLACK}, notes={"stated_bound_first_failure": fails[0] if fails else None},
    )


def check_algebra(opts: CheckOptions) -> VerificationReport:
    """Operator-algebra residuals on dense matrices at small cutoffs."""
    rule = get_k_rule(opts.k_rule)
    rows = []
    items: dict[str, bool] = {}
    if opts.space in (None, "circle"):
        for lam in _lams(opts, ALGEBRA_CIRCLE_MAX):
            res = circle_algebra_residuals(make_params(lam, rule(lam), "circle"))
            worst = max(res.values())
            rows.append({"space": "circle", "lambda": lam, "max_residual": worst, **res,
                         "pass": worst <= ALGEBRA_TOL})
        items["circle"] = all(r["pass"] for r in rows if r["space"] == "circle")
    if opts.space in (None, "sphere"):
        for lam in _lams(opts, ALGEBRA_SPHERE_MAX):
            p = make_params(lam, rule(lam), "sphere")
            res = sphere_algebra_residuals(p)
            try:
                fit = commutator_fit(p, ALGEBRA_TOL)
                K, fit_ok = fit.K, True
            except AlgebraError:
                K, fit_ok = float("nan"), False
            worst = max(res.values())
            rows.append({"space": "sphere", "lambda": lam, "max_residual": worst, **res, "K": K,
                         "pass": worst <= ALGEBRA_TOL and fit_ok})
        items["sphere"] = all(r["pass"] for r in rows if r["space"] == "sphere")
    lams = [r["lambda"] for r in rows] or [opts.lam_min]
    return VerificationReport("algebra", (min(lams), max(lams)), rule.name, rows, items,
                              {"residual": ALGEBRA_TOL})


def check_union(opts: CheckOptions) -> VerificationReport:
    """Dense ``x₀`` spectrum equals the multiset union of the block spectra."""
    rule = get_k_rule(opts.k_rule)
    rows = []
    for lam in _lams(opts, UNION_MAX):
        r = union_residual(make_params(lam, rule(lam), "sphere"))
        rows.append({"lambda": lam, "residual": r, "pass": r <= UNION_TOL})
    return _report("union", opts, rule.name, rows, {"tol": UNION_TOL})


def check_interlacing(opts: CheckOptions) -> VerificationReport:
    """Cauchy interlacing of every ``B_m`` (size >= 2) with its leading submatrix."""
    rule = get_k_rule(opts.k_rule)

    def row(lam):
        p = make_params(lam, rule(lam), "sphere")
        ok = all(interlacing_check(build_Bm(p, m), opts.tol) for m in _ms(opts, lam) if abs(m) < lam)
        return {"lambda": lam, "pass": ok}

    rows = ordered_map(row, _lams(opts, CHAIN_MAX))
    return _report("interlacing", opts, rule.name, rows, {"eigen_tol": opts.tol})


def check_norm_chain(opts: CheckOptions) -> VerificationReport:
    """``||B_m|| < ||B_{m-1}^{n(Λ;m)}|| < ||B_{m-1}||`` and the coefficient inequality."""
    rule = get_k_rule(opts.k_rule)

    def row(lam):
        p = make_params(lam, rule(lam), "sphere")
        chain = norm_chain(p)
        coef = coefficient_inequality_check(p)
        return {
            "lambda": lam,
            "chain": all(c["chain"] for c in chain),
            "dominated": all(c["dominated"] for c in chain),
            "coefficients": coef,
            "pass": all(c["chain"] and c["dominated"] for c in chain) and coef,
        }

    rows = ordered_map(row, _lams(opts, CHAIN_MAX))
    return _report("norm_chain", opts, rule.name, rows, {})


def check_localization(opts: CheckOptions) -> VerificationReport:
    """Dispersion of the top coordinate eigenstate below ``C/Λ²``; ``<L₃>`` of the sphere state is 0."""
    rule = get_k_rule(opts.k_rule)
    lo = max(opts.lam_min, 2)
    items = [(s, lam) for s in _spaces(opts) for lam in range(lo, max(opts.lam_max, lo) + 1)]

    def row(item):
        space, lam = item
        r = {"space": space, **localization_row(space, lam, rule(lam))}
        if space == "sphere":
            r["pass"] = r["pass"] and r["L_expectation"] == 0.0
        return r

    rows = ordered_map(row, items)
    return _report("localization", opts, rule.name, rows, {"circle_C": np.pi**2 / 4, "sphere_C": np.pi**2 - 1},
                   by_space=True)


def check_madore(opts: CheckOptions) -> VerificationReport:
    """Fuzzy-sphere top state has ``<L₃> = 0``; the Madore one ``<L₃> = Λ``."""
    rule = get_k_rule(opts.k_rule)

    def row(lam):
        r = madore_comparison(lam, rule(lam))
        r["pass"] = r["L3_fuzzy"] == 0.0 and abs(r["L3_madore"] - lam) <= 1e-12 * lam
        return r

    rows = ordered_map(row, _lams(opts, 50))
    return _report("madore", opts, rule.name, rows, {"L3_madore": 1e-12})


def _report(name, opts, rule_name, rows, tolerances, by_space=False) -> VerificationReport:
    if by_space:
        spaces = sorted({r["space"] for r in rows}, key=["circle", "sphere", "madore"].index)
        items = {s: all(r["pass"] for r in rows if r["space"] == s) for s in spaces}
    else:
        items = {"all": all(r["pass"] for r in rows)}
    lams = [r["lambda"] for r in rows] or [opts.lam_min]
    return VerificationReport(name, (min(lams), max(lams)), rule_name, rows, items, tolerances)


CHECKS: dict[str, Callable[[CheckOptions], VerificationReport | list[VerificationReport]]] = {
    "parity": check_parity,
    "simplicity": check_simplicity,
    "monotonicity": check_monotonicity,
    "bounds": check_bounds,
    "density": check_density,
    "perturbation": check_perturbation,
    "algebra": check_algebra,
    "union": check_union,
    "interlacing": check_interlacing,
    "norm-chain": check_norm_chain,
    "localization": check_localization,
    "madore": check_madore,
}


def run_check(name: str, opts: CheckOptions) -> list[VerificationReport]:
    try:
        fn = CHECKS[name]
    except KeyError:
        raise ValueError(f"unknown check {name!r}; choose from {sorted(CHECKS)}") from None
    out = fn(opts)
    return out if isinstance(out, list) else [out]


def run_all(lam_max: int, k_rule: str | None = None, tol: float = DEFAULT_TOL) -> list[VerificationReport]:
    """Every check from Λ = 1 to ``lam_max``, each clipped to its own range cap."""
    opts = CheckOptions(1, lam_max, None, None, k_rule, tol)
    reports = []
    for name in CHECKS:
        reports.extend(run_check(name, opts))
    return reports
