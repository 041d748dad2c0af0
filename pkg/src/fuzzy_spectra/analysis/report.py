"""Verification reports, stiffness rules and deterministic serialization."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

import numpy as np

from ..core import k_floor

THREADS_ENV = "FUZZY_SPECTRA_THREADS"


# ---------------------------------------------------------------- k rules


@dataclass(frozen=True)
class KRule:
    """Named stiffness rule ``Λ -> k``.

    Formula rules are clipped to the floor ``Λ²(Λ+1)²``; an explicit value
    is passed through unchanged so that an inadmissible ``k`` is rejected
    by the parameter check rather than silently replaced.
    """

    name: str
    fn: Callable[[int], float]
    clip: bool = True

    def __call__(self, lam: int) -> float:
        k = float(self.fn(lam))
        return max(k, k_floor(lam)) if self.clip else k


def _theorem1c(lam: int) -> float:
    return lam * (lam - 1) * (2 * lam + 3) ** 2 * (2 * lam + 4) ** 4 / (4 * math.pi**4)


def _theorem1c_proof(lam: int) -> float:
    return lam * (lam - 1) * (2 * lam + 2) ** 2 * (2 * lam + 3) ** 2 * (2 * lam + 2) ** 4 / (4 * math.pi**4)


K_RULES: dict[str, KRule] = {
    "default": KRule("default", k_floor),
    "floor": KRule("floor", k_floor),
    "theorem1c": KRule("theorem1c", _theorem1c),
    "theorem1c_proof": KRule("theorem1c_proof", _theorem1c_proof),
    "lambda6": KRule("lambda6", lambda lam: float(lam) ** 6),
}


def explicit_rule(value: float) -> KRule:
    """Constant ``k``, not clipped."""
    value = float(value)
    if not math.isfinite(value) or value <= 0:
        raise ValueError(f"explicit k must be a positive finite number, got {value}")
    return KRule(f"explicit({format_float(value)})", lambda lam: value, clip=False)


def get_k_rule(rule: str | KRule | float | None) -> KRule:
    if rule is None:
        return K_RULES["default"]
    if isinstance(rule, KRule):
        return rule
    if isinstance(rule, (int, float)):
        return explicit_rule(rule)
    m = re.fullmatch(r"explicit\((.+)\)", rule)
    if m:
        return explicit_rule(float(m.group(1)))
    try:
        return K_RULES[rule]
    except KeyError:
        raise ValueError(f"unknown k rule {rule!r}; choose from {sorted(K_RULES)} or explicit(v)") from None


# ---------------------------------------------------------------- parallelism


def thread_cap() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw == "":
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def ordered_map(fn: Callable, items: Iterable) -> list:
    """``[fn(x) for x in items]``, spread over at most ``thread_cap()`` threads.

    The numba kernels release the GIL, so threads do overlap; results keep
    input order regardless of completion order.
    """
    items = list(items)
    workers = min(thread_cap(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------- formatting


def format_float(x: float) -> str:
    """17 significant digits, so that every value round-trips exactly."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0:
        return "0"  # folds -0.0 as well
    return format(x, ".17g")


def _plain(value: Any) -> Any:
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(v) for v in value]
    return value


_FLOAT_TAG = "\u0000F"
_JSON_LITERAL = {"nan": "NaN", "inf": "Infinity", "-inf": "-Infinity"}


def to_json_text(obj: Any) -> str:
    """JSON with every float written at 17 significant digits."""

    def tag(v):
        if isinstance(v, dict):
            return {k: tag(x) for k, x in v.items()}
        if isinstance(v, list):
            return [tag(x) for x in v]
        if isinstance(v, float):
            return _FLOAT_TAG + format_float(v)
        return v

    text = json.dumps(tag(_plain(obj)), indent=2, ensure_ascii=False)

    def untag(m):
        s = m.group(1)
        return _JSON_LITERAL.get(s, s)

    return re.sub(r'"\\u0000F([^"]*)"', untag, text) + "\n"


def _cell(v: Any) -> str:
    v = _plain(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format_float(v)
    if v is None:
        return ""
    return str(v)


def to_csv_text(columns: list[str], rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in columns])
    return buf.getvalue()


# ---------------------------------------------------------------- report


@dataclass
class VerificationReport:
    """Outcome of one theorem check over a range of cutoffs.

    ``rows`` hold the per-Λ measurements, ``items`` the named pass/fail
    verdicts, ``tolerances`` every threshold used to reach them, and
    ``notes`` anything else worth keeping (empirical constants, say).
    """

    theorem: str
    lam_range: tuple[int, int]
    k_rule: str
    rows: list[dict] = field(default_factory=list)
    items: dict[str, bool] = field(default_factory=dict)
    tolerances: dict[str, float] = field(default_factory=dict)
    notes: dict[str, Any] = field(default_factory=dict)
    columns: list[str] | None = None

    @property
    def passed(self) -> bool:
        return all(self.items.values())

    def failed_items(self) -> list[str]:
        return [k for k, v in self.items.items() if not v]

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "lambda_range": list(self.lam_range),
            "k_rule": self.k_rule,
            "passed": self.passed,
            "items": dict(self.items),
            "tolerances": dict(self.tolerances),
            "notes": dict(self.notes),
            "rows": list(self.rows),
        }

    def to_json(self) -> str:
        return to_json_text(self.to_dict())

    def to_csv(self) -> str:
        cols = self.columns
        if cols is None:
            cols = []
            for r in self.rows:
                cols.extend(c for c in r if c not in cols)
        return to_csv_text(cols, self.rows)
