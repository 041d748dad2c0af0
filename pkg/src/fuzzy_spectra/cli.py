"""Command-line front end: ``fuzzy-spectra <command> [options]``.

Exit status is 0 when every verification passes, 1 when any fails and 2
on a usage error. Output is byte-deterministic for a fixed command line:
floats carry 17 significant digits and records end in a newline.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile
from dataclasses import dataclass

from .analysis.localization import localization_row, madore_comparison
from .analysis.report import get_k_rule, thread_cap, to_csv_text, to_json_text
from .analysis.spectra import circle_spectrum, madore_spectrum, sphere_block_spectrum, sphere_spectrum
from .analysis.suite import CHECKS, CheckOptions, run_all, run_check
from .analysis.theorems import top_eig_monotonicity_circle, top_eig_monotonicity_sphere
from .circle import build_x1, circle_algebra_residuals
from .core import ParameterError, circle_basis, make_params
from .eigen import DEFAULT_TOL, eigen_select, eigenvector_of
from .sphere import AlgebraError, build_Bm, commutator_fit, sphere_algebra_residuals

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
ALGEBRA_TOL = 1e-10


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    space: str | None
    lam_min: int
    lam_max: int
    m: int | None
    k_rule: str | None
    tol: float
    output: str | None
    fmt: str
    theorem: str | None = None
    h: int = 1

    def __post_init__(self):
        if self.lam_min < 1 or self.lam_max < self.lam_min:
            raise UsageError(f"empty or invalid lambda range {self.lam_min}:{self.lam_max}")
        if not self.tol > 0:
            raise UsageError("--tol must be positive")
        if self.m is not None and self.space not in ("sphere", None):
            raise UsageError("--m is only valid with --space sphere")

    def k_for(self, lam: int) -> float | None:
        if self.space == "madore":
            return None
        return get_k_rule(self.k_rule)(lam)


# ---------------------------------------------------------------- output


def write_output(text: str, path: str | None) -> None:
    """Write to ``path`` atomically (temp file + rename), or to stdout."""
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".fuzzy-spectra-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        # mkstemp creates 0600; give the file the usual umask-derived mode
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(cfg: RunConfig, columns: list[str], rows: list[dict], meta: dict) -> str:
    if cfg.fmt == "json":
        return to_json_text({**meta, "rows": rows})
    return to_csv_text(columns, rows)


# ---------------------------------------------------------------- commands


def _single_lambda(cfg: RunConfig) -> int:
    if cfg.lam_min != cfg.lam_max:
        raise UsageError(f"{cfg.command} takes a single --lambda")
    return cfg.lam_min


def _spectrum_values(cfg: RunConfig, lam: int):
    k = cfg.k_for(lam)
    if cfg.space == "circle":
        return circle_spectrum(make_params(lam, k, "circle"), cfg.tol)
    if cfg.space == "sphere":
        p = make_params(lam, k, "sphere")
        if cfg.m is None:
            return sphere_spectrum(p, cfg.tol)
        return sphere_block_spectrum(p, cfg.m, cfg.tol)
    return madore_spectrum(lam)


def cmd_spectrum(cfg: RunConfig) -> tuple[str, int]:
    lam = _single_lambda(cfg)
    spec = _spectrum_values(cfg, lam)
    rows = [{"h": i + 1, "eigenvalue": float(v)} for i, v in enumerate(spec.values)]
    meta = {"space": cfg.space, "lambda": lam, "k": cfg.k_for(lam), "m": cfg.m}
    return _emit(cfg, ["h", "eigenvalue"], rows, meta), EXIT_OK


def cmd_eigvec(cfg: RunConfig) -> tuple[str, int]:
    lam = _single_lambda(cfg)
    if cfg.space == "madore":
        n = 2 * lam + 1
        if not 1 <= cfg.h <= n:
            raise UsageError(f"--h must lie in 1..{n}")
        labels = list(range(lam, -lam - 1, -1))
        comps = [1.0 if i == cfg.h - 1 else 0.0 for i in range(n)]
        value, residual = labels[cfg.h - 1] / math.sqrt(lam * lam + lam), 0.0
    else:
        if cfg.space == "circle":
            t = build_x1(make_params(lam, cfg.k_for(lam), "circle"))
            labels = list(circle_basis(lam))
        else:
            if cfg.m is None:
                raise UsageError("sphere eigenvectors need --m (one block at a time)")
            t = build_Bm(make_params(lam, cfg.k_for(lam), "sphere"), cfg.m)
            labels = list(range(abs(cfg.m), lam + 1))
        if not 1 <= cfg.h <= t.n:
            raise UsageError(f"--h must lie in 1..{t.n}")
        value = float(eigen_select(t, [t.n - cfg.h], cfg.tol)[0])
        pair = eigenvector_of(t, value)
        comps = pair.vector.coefficients.real.tolist()
        residual = pair.residual
    rows = [{"index": i, "label": lab, "component": c} for i, (lab, c) in enumerate(zip(labels, comps))]
    meta = {"space": cfg.space, "lambda": lam, "k": cfg.k_for(lam), "m": cfg.m, "h": cfg.h,
            "eigenvalue": value, "residual": residual}
    return _emit(cfg, ["index", "label", "component"], rows, meta), EXIT_OK


def _reports_text(cfg: RunConfig, reports) -> str:
    passed = all(r.passed for r in reports)
    if cfg.fmt == "json":
        return to_json_text({"passed": passed, "reports": [r.to_dict() for r in reports]})
    rows = []
    for r in reports:
        for item, ok in r.items.items():
            rows.append({"theorem": r.theorem, "k_rule": r.k_rule, "lambda_min": r.lam_range[0],
                         "lambda_max": r.lam_range[1], "item": item, "pass": ok})
    return to_csv_text(["theorem", "k_rule", "lambda_min", "lambda_max", "item", "pass"], rows)


def cmd_verify(cfg: RunConfig) -> tuple[str, int]:
    if cfg.theorem == "all":
        reports = run_all(cfg.lam_max, cfg.k_rule, cfg.tol)
    else:
        opts = CheckOptions(cfg.lam_min, cfg.lam_max, cfg.space, cfg.m, cfg.k_rule, cfg.tol)
        reports = run_check(cfg.theorem, opts)
    ok = all(r.passed for r in reports)
    return _reports_text(cfg, reports), EXIT_OK if ok else EXIT_FAIL


def cmd_sweep(cfg: RunConfig) -> tuple[str, int]:
    hi = max(cfg.lam_max, cfg.lam_min + 1)
    if cfg.space == "circle":
        rep = top_eig_monotonicity_circle(hi, cfg.k_rule or "default", cfg.lam_min, cfg.tol)
    elif cfg.space == "sphere":
        rep = top_eig_monotonicity_sphere(hi, cfg.k_rule or "lambda6", cfg.lam_min, cfg.tol)
    else:
        raise UsageError("sweep supports --space circle or sphere")
    text = rep.to_json() if cfg.fmt == "json" else rep.to_csv()
    return text, EXIT_OK if rep.passed else EXIT_FAIL


def cmd_localize(cfg: RunConfig) -> tuple[str, int]:
    rows = [localization_row(cfg.space, lam, cfg.k_for(lam)) for lam in range(cfg.lam_min, cfg.lam_max + 1)]
    cols = ["lambda", "top_eigenvalue", "dispersion", "bound", "ratio", "L_expectation", "pass"]
    ok = all(r["pass"] is not False for r in rows)
    return _emit(cfg, cols, rows, {"space": cfg.space}), EXIT_OK if ok else EXIT_FAIL


def cmd_madore_compare(cfg: RunConfig) -> tuple[str, int]:
    lam = _single_lambda(cfg)
    row = madore_comparison(lam, get_k_rule(cfg.k_rule)(lam))
    if cfg.fmt == "json":
        return to_json_text(row), EXIT_OK
    return to_csv_text(list(row), [row]), EXIT_OK


def cmd_algebra_check(cfg: RunConfig) -> tuple[str, int]:
    lam = _single_lambda(cfg)
    k = cfg.k_for(lam)
    if cfg.space == "circle":
        res = circle_algebra_residuals(make_params(lam, k, "circle"))
        fit_ok = True
    elif cfg.space == "sphere":
        p = make_params(lam, k, "sphere")
        res = sphere_algebra_residuals(p)
        try:
            res["commutator_K"] = commutator_fit(p, ALGEBRA_TOL).K
            fit_ok = True
        except AlgebraError:
            fit_ok = False
    else:
        raise UsageError("algebra-check supports --space circle or sphere")
    rows = [{"identity": name, "value": v} for name, v in res.items()]
    ok = fit_ok and all(v <= ALGEBRA_TOL for name, v in res.items() if name != "commutator_K")
    meta = {"space": cfg.space, "lambda": lam, "k": k, "tolerance": ALGEBRA_TOL, "passed": ok}
    return _emit(cfg, ["identity", "value"], rows, meta), EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "spectrum": cmd_spectrum,
    "eigvec": cmd_eigvec,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "localize": cmd_localize,
    "madore-compare": cmd_madore_compare,
    "algebra-check": cmd_algebra_check,
}


# ---------------------------------------------------------------- parsing


def _lambda_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A:B, got {text!r}") from None
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fuzzy-spectra", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, spaces=("circle", "sphere", "madore"), space_required=True, lam="single"):
        if spaces:
            p.add_argument("--space", choices=spaces, required=space_required)
        if lam == "single":
            p.add_argument("--lambda", dest="lam", type=int, required=True)
        else:
            g = p.add_mutually_exclusive_group()
            g.add_argument("--lambda", dest="lam", type=int)
            g.add_argument("--lambda-range", type=_lambda_range)
            if lam == "max":
                g.add_argument("--lambda-max", type=int)
        kg = p.add_mutually_exclusive_group()
        kg.add_argument("--k", type=float, help="explicit stiffness (must be >= Λ²(Λ+1)²)")
        kg.add_argument("--k-rule", choices=["default", "floor", "theorem1c", "theorem1c_proof", "lambda6"])
        p.add_argument("--m", type=int)
        p.add_argument("--tol", type=float, default=DEFAULT_TOL)
        p.add_argument("--format", dest="fmt", choices=["csv", "json"], default="csv")
        p.add_argument("--output", "-o")

    common(sub.add_parser("spectrum", help="eigenvalues of a coordinate operator"))
    p = sub.add_parser("eigvec", help="one eigenvector by inverse iteration")
    common(p)
    p.add_argument("--h", type=int, default=1, help="1-based index in descending order")
    p = sub.add_parser("verify", help="run theorem checks")
    common(p, space_required=False, lam="max")
    tg = p.add_mutually_exclusive_group(required=True)
    tg.add_argument("--theorem", choices=sorted(CHECKS))
    tg.add_argument("--all", action="store_true")
    p = sub.add_parser("sweep", help="top-eigenvalue sweep over a cutoff range")
    common(p, spaces=("circle", "sphere"), lam="range")
    p = sub.add_parser("localize", help="dispersion of the most localized state")
    common(p, lam="range")
    common(sub.add_parser("madore-compare", help="fuzzy sphere vs Madore top state"), spaces=None)
    common(sub.add_parser("algebra-check", help="operator algebra residuals"), spaces=("circle", "sphere"))
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    lam_range = getattr(ns, "lambda_range", None)
    lam_max_opt = getattr(ns, "lambda_max", None)
    if lam_range is not None:
        lo, hi = lam_range
    elif ns.lam is not None:
        lo = hi = ns.lam
    elif lam_max_opt is not None:
        lo, hi = 1, lam_max_opt
    elif ns.command == "verify":
        lo, hi = 1, 200 if ns.all else 20
    else:
        raise UsageError("give --lambda or --lambda-range")
    if ns.command == "verify" and ns.all and (lam_range is not None or ns.lam is not None):
        raise UsageError("verify --all takes --lambda-max only")
    k_rule = ns.k_rule
    if ns.k is not None:
        k_rule = f"explicit({ns.k!r})"
    space = getattr(ns, "space", None)
    if ns.command == "madore-compare":
        space = "sphere"
    return RunConfig(
        command=ns.command,
        space=space,
        lam_min=lo,
        lam_max=hi,
        m=ns.m,
        k_rule=k_rule,
        tol=ns.tol,
        output=ns.output,
        fmt=ns.fmt,
        theorem="all" if getattr(ns, "all", False) else getattr(ns, "theorem", None),
        h=getattr(ns, "h", 1),
    )


def run(cfg: RunConfig) -> int:
    text, status = COMMANDS[cfg.command](cfg)
    write_output(text, cfg.output)
    return status


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        thread_cap()
        cfg = config_from_args(ns)
        return run(cfg)
    except (UsageError, ParameterError, IndexError, ValueError) as exc:
        print(f"fuzzy-spectra: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
