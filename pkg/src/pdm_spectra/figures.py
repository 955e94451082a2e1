"""Bundled figure datasets and their expected-trend verdicts.

Twelve standard datasets for this model: energy versus a / lambda / B / Phi
for both mass laws (1-6) and internal energy / specific heat / entropy versus
temperature or mass parameter for the inverse-square case (7-12).  Each
definition carries the qualitative trends the curves are expected to show;
``evaluate_figure`` computes the data, classifies the observed behavior, and
emits an agree/disagree verdict per claim.  Disagreements are collected into
the discrepancy report -- the verdicts document the model, they do not
correct it.

Default parameter values follow the stated reference sets where given
(exponential case: B = 1, Phi = 1, V1 = V2 = V3 = 0.5, lambda = 0.1, a = 0.5,
n = 1, m = 0; inverse-square case: B = Phi = 2, V1 = V2 = 0.01, lambda = 1,
a = 1; thermodynamics: B = Phi = 1, a = 1, T = 2).  Axis ranges are
documented choices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import thermo
from .model import (
    ExponentialMass,
    FieldConfig,
    InverseSquareMass,
    PotentialParams,
    QuantumNumbers,
    SystemParams,
)
from .spectra import SweepResult, SweepSpec, sweep, sweep_to_csv

EXP_DEFAULTS = SystemParams(
    mass=ExponentialMass(0.5),
    potential=PotentialParams(V1=0.5, V2=0.5, V3=0.5, lam=0.1),
    fields=FieldConfig(B=1.0, Phi_AB=1.0),
    quantum=QuantumNumbers(n=1, m=0),
)

INVSQ_DEFAULTS = SystemParams(
    mass=InverseSquareMass(1.0),
    potential=PotentialParams(V1=0.01, V2=0.01, V3=0.0, lam=1.0),
    fields=FieldConfig(B=2.0, Phi_AB=2.0),
    quantum=QuantumNumbers(n=1, m=0),
)

THERMO_DEFAULTS = SystemParams(
    mass=InverseSquareMass(1.0),
    potential=PotentialParams(V1=0.01, V2=0.01, V3=0.0, lam=1.0),
    fields=FieldConfig(B=1.0, Phi_AB=1.0),
    quantum=QuantumNumbers(n=1, m=0),
)
THERMO_DEFAULT_T = 2.0

INCREASING = "increasing"
DECREASING = "decreasing"
LINEAR = "linear"
NON_MONOTONIC = "non-monotonic"
NON_LINEAR = "non-linear"


@dataclass(frozen=True)
class Curve:
    label: str
    overrides: Dict[str, float]  # parameter-name -> value, applied to the base system


@dataclass(frozen=True)
class TrendClaim:
    """One expected qualitative behavior.

    kind="along-x": every curve should be monotone `expected` in the swept x.
    kind="across":  at fixed x the quantity should move `expected` as the
                    parameter `param` grows (compares curve pairs).
    kind="linear":  every curve should be linear in x.
    """

    claim_id: str
    kind: str
    expected: str
    param: Optional[str] = None


@dataclass(frozen=True)
class FigureDef:
    fig_id: int
    quantity: str  # "E" | "U" | "Cv" | "S"
    x_name: str    # "a" | "lambda" | "B" | "Phi_AB" | "T"
    x_lo: float
    x_hi: float
    steps: int
    base: SystemParams
    curves: Tuple[Curve, ...]
    claims: Tuple[TrendClaim, ...]
    T: float = THERMO_DEFAULT_T
    description: str = ""
    e_lo: float = -50.0
    e_hi: float = 50.0
    branch: str = "lowest"  # which root seeds the plotted branch


@dataclass(frozen=True)
class CurveData:
    label: str
    xs: Tuple[float, ...]
    ys: Tuple[float, ...]
    csv: str
    overrides: Dict[str, float]


@dataclass(frozen=True)
class Verdict:
    claim_id: str
    expected: str
    observed: str
    verdict: str  # "agree" | "disagree" | "not-evaluable"


@dataclass(frozen=True)
class FigureResult:
    fig_id: int
    quantity: str
    x_name: str
    curves: Tuple[CurveData, ...]
    verdicts: Tuple[Verdict, ...]

    def verdict_json(self) -> str:
        doc = {
            "figure": self.fig_id,
            "quantity": self.quantity,
            "x": self.x_name,
            "claims": [
                {"id": v.claim_id, "expected": v.expected,
                 "observed": v.observed, "verdict": v.verdict}
                for v in self.verdicts
            ],
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _apply_overrides(base: SystemParams, overrides: Dict[str, float]) -> SystemParams:
    sys = base
    for name, value in overrides.items():
        if name == "a":
            mass = (ExponentialMass(value) if isinstance(sys.mass, ExponentialMass)
                    else InverseSquareMass(value))
            sys = sys.with_(mass=mass)
        elif name == "B":
            sys = sys.with_(fields=replace(sys.fields, B=value))
        elif name == "Phi_AB":
            sys = sys.with_(fields=replace(sys.fields, Phi_AB=value))
        elif name == "lambda":
            sys = sys.with_(potential=replace(sys.potential, lam=value))
        elif name in ("V1", "V2", "V3"):
            sys = sys.with_(potential=replace(sys.potential, **{name: value}))
        elif name == "T":
            pass  # handled by the thermo evaluator
        else:
            raise ValueError(f"unknown override {name!r}")
    return sys


def _energy_curve(fig: FigureDef, curve: Curve) -> CurveData:
    sys = _apply_overrides(fig.base, curve.overrides)
    spec = SweepSpec(vary=fig.x_name, lo=fig.x_lo, hi=fig.x_hi, steps=fig.steps, system=sys,
                     e_lo=fig.e_lo, e_hi=fig.e_hi, branch=fig.branch)
    result = sweep(spec)
    xs = tuple(r.x for r in result.rows)
    ys = tuple(r.E if r.E is not None else float("nan") for r in result.rows)
    return CurveData(curve.label, xs, ys, sweep_to_csv(result), dict(curve.overrides))


def _thermo_curve(fig: FigureDef, curve: Curve) -> CurveData:
    sys = _apply_overrides(fig.base, curve.overrides)
    t_fixed = curve.overrides.get("T", fig.T)
    xs = tuple(float(x) for x in np.linspace(fig.x_lo, fig.x_hi, fig.steps))
    records: List[thermo.ThermoRecord] = []
    ys: List[float] = []
    for x in xs:
        if fig.x_name == "T":
            rec = thermo.evaluate(sys, x)
        else:
            rec = thermo.evaluate(_apply_overrides(sys, {fig.x_name: x}), t_fixed)
        records.append(rec)
        ys.append(getattr(rec.state, fig.quantity))
    csv = thermo.records_to_csv(records)
    if fig.x_name != "T":
        # prepend the swept variable so the dataset is self-describing
        lines = csv.split("\n")
        lines[0] = "x," + lines[0]
        for i, x in enumerate(xs):
            lines[1 + i] = f"{x:.17g}," + lines[1 + i]
        csv = "\n".join(lines)
    return CurveData(curve.label, xs, tuple(ys), csv, dict(curve.overrides))


def _classify_monotone(ys: Sequence[float]) -> str:
    arr = np.asarray(ys, dtype=float)
    if not np.all(np.isfinite(arr)):
        return "not-evaluable"
    d = np.diff(arr)
    span = float(np.max(arr) - np.min(arr))
    tol = 1e-9 * max(span, 1e-12)
    if np.all(d >= -tol) and arr[-1] > arr[0]:
        return INCREASING
    if np.all(d <= tol) and arr[-1] < arr[0]:
        return DECREASING
    return NON_MONOTONIC


def _classify_linear(xs: Sequence[float], ys: Sequence[float]) -> str:
    """Linear when no point deviates from the endpoint chord by > 1% of the range."""
    arr = np.asarray(ys, dtype=float)
    x = np.asarray(xs, dtype=float)
    if not np.all(np.isfinite(arr)):
        return "not-evaluable"
    chord = arr[0] + (arr[-1] - arr[0]) * (x - x[0]) / (x[-1] - x[0])
    span = max(float(np.max(arr) - np.min(arr)), 1e-12)
    return LINEAR if float(np.max(np.abs(arr - chord))) <= 0.01 * span else NON_LINEAR


def _evaluate_claim(fig: FigureDef, claim: TrendClaim, curves: Sequence[CurveData]) -> Verdict:
    if claim.kind == "along-x":
        obs = {_classify_monotone(c.ys) for c in curves}
        observed = obs.pop() if len(obs) == 1 else NON_MONOTONIC if "not-evaluable" not in obs else "not-evaluable"
    elif claim.kind == "linear":
        obs = {_classify_linear(c.xs, c.ys) for c in curves}
        observed = obs.pop() if len(obs) == 1 else NON_LINEAR if "not-evaluable" not in obs else "not-evaluable"
    elif claim.kind == "across":
        pairs = _param_pairs(curves, claim.param)
        if not pairs:
            return Verdict(claim.claim_id, claim.expected, "not-evaluable", "not-evaluable")
        directions = set()
        for lo_curve, hi_curve in pairs:
            a = np.asarray(lo_curve.ys)
            b = np.asarray(hi_curve.ys)
            if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
                directions.add("not-evaluable")
            elif np.all(b >= a) and np.any(b > a):
                directions.add(INCREASING)
            elif np.all(b <= a) and np.any(b < a):
                directions.add(DECREASING)
            else:
                directions.add(NON_MONOTONIC)
        observed = directions.pop() if len(directions) == 1 else NON_MONOTONIC if "not-evaluable" not in directions else "not-evaluable"
    else:
        raise ValueError(f"unknown claim kind {claim.kind!r}")
    if observed == "not-evaluable":
        return Verdict(claim.claim_id, claim.expected, observed, "not-evaluable")
    return Verdict(claim.claim_id, claim.expected, observed,
                   "agree" if observed == claim.expected else "disagree")


def _param_pairs(curves: Sequence[CurveData], param: Optional[str]) -> List[Tuple[CurveData, CurveData]]:
    """Curve pairs that differ only in `param`, ordered low -> high."""
    pairs = []
    for i, ci in enumerate(curves):
        for cj in curves[i + 1:]:
            ki = {k: v for k, v in ci.overrides.items() if k != param}
            kj = {k: v for k, v in cj.overrides.items() if k != param}
            if ki != kj:
                continue
            vi = ci.overrides.get(param)
            vj = cj.overrides.get(param)
            if vi is None or vj is None or vi == vj:
                continue
            pairs.append((ci, cj) if vi < vj else (cj, ci))
    return pairs


def evaluate_figure(fig_id: int, overrides: Optional[Dict[str, float]] = None) -> FigureResult:
    """Compute one bundled figure dataset and its trend verdicts."""
    if fig_id not in FIGURES:
        raise KeyError(f"unknown figure id {fig_id!r} (valid: 1..12)")
    fig = FIGURES[fig_id]
    if overrides:
        fig = replace(fig, base=_apply_overrides(fig.base, overrides))
    curve_fn = _energy_curve if fig.quantity == "E" else _thermo_curve
    curves = tuple(curve_fn(fig, c) for c in fig.curves)
    verdicts = tuple(_evaluate_claim(fig, cl, curves) for cl in fig.claims)
    return FigureResult(fig.fig_id, fig.quantity, fig.x_name, curves, verdicts)


def evaluate_all(overrides: Optional[Dict[str, float]] = None) -> List[FigureResult]:
    return [evaluate_figure(i, overrides) for i in sorted(FIGURES)]


def _fig(fig_id, quantity, x_name, x_lo, x_hi, steps, base, curves, claims, description,
         T=THERMO_DEFAULT_T, e_lo=-50.0, e_hi=50.0, branch="lowest"):
    return FigureDef(fig_id, quantity, x_name, x_lo, x_hi, steps, base,
                     tuple(curves), tuple(claims), T, description, e_lo, e_hi, branch)


FIGURES: Dict[int, FigureDef] = {
    1: _fig(1, "E", "a", 0.3, 2.0, 20, EXP_DEFAULTS,
            [Curve("B1_Phi1", {"B": 1.0, "Phi_AB": 1.0}),
             Curve("B2_Phi1", {"B": 2.0, "Phi_AB": 1.0}),
             Curve("B1_Phi2", {"B": 1.0, "Phi_AB": 2.0}),
             Curve("B1_Phi3", {"B": 1.0, "Phi_AB": 3.0})],
            [TrendClaim("E-increasing-in-a", "along-x", INCREASING),
             TrendClaim("E-decreasing-in-B", "across", DECREASING, "B"),
             TrendClaim("E-decreasing-in-Phi", "across", DECREASING, "Phi_AB")],
            "energy versus mass parameter a, exponential case (deep branch; "
            "the range starts where that branch is inside the scan window)",
            e_lo=-100.0),
    2: _fig(2, "E", "lambda", 0.05, 0.5, 16, EXP_DEFAULTS,
            [Curve("B1_Phi1", {"B": 1.0, "Phi_AB": 1.0}),
             Curve("B3_Phi1", {"B": 3.0, "Phi_AB": 1.0}),
             Curve("B5_Phi1", {"B": 5.0, "Phi_AB": 1.0}),
             Curve("B1_Phi12", {"B": 1.0, "Phi_AB": 12.0}),
             Curve("B1_Phi14", {"B": 1.0, "Phi_AB": 14.0})],
            [TrendClaim("E-linear-in-lambda", "linear", LINEAR),
             TrendClaim("E-decreasing-in-B", "across", DECREASING, "B"),
             TrendClaim("E-decreasing-in-Phi", "across", DECREASING, "Phi_AB")],
            "energy versus potential range lambda, exponential case (deep branch)",
            e_lo=-100.0),
    3: _fig(3, "E", "B", 0.5, 3.0, 16, EXP_DEFAULTS,
            [Curve("a0", {"a": 0.0}), Curve("a01", {"a": 0.1}), Curve("a02", {"a": 0.2})],
            [TrendClaim("E-increasing-in-B", "along-x", INCREASING),
             TrendClaim("E-decreasing-in-a", "across", DECREASING, "a")],
            "energy versus magnetic field B, exponential case (branch connected "
            "to the stationary-mass solution)",
            branch="highest"),
    4: _fig(4, "E", "Phi_AB", 0.5, 3.0, 16, EXP_DEFAULTS,
            [Curve("a0", {"a": 0.0}), Curve("a01", {"a": 0.1}), Curve("a02", {"a": 0.2})],
            [TrendClaim("E-increasing-in-Phi", "along-x", INCREASING),
             TrendClaim("E-decreasing-in-a", "across", DECREASING, "a")],
            "energy versus flux Phi, exponential case (branch connected to the "
            "stationary-mass solution)",
            branch="highest"),
    5: _fig(5, "E", "lambda", 0.1, 2.0, 20, INVSQ_DEFAULTS,
            [Curve("B2_Phi2", {"B": 2.0, "Phi_AB": 2.0}),
             Curve("B24_Phi2", {"B": 2.4, "Phi_AB": 2.0}),
             Curve("B2_Phi24", {"B": 2.0, "Phi_AB": 2.4})],
            [TrendClaim("E-increasing-in-lambda", "along-x", INCREASING),
             TrendClaim("E-decreasing-in-B", "across", DECREASING, "B"),
             TrendClaim("E-increasing-in-Phi", "across", INCREASING, "Phi_AB")],
            "energy versus lambda, inverse-square case"),
    6: _fig(6, "E", "a", 0.5, 2.5, 20, INVSQ_DEFAULTS,
            [Curve("B2_Phi2_V001", {"B": 2.0, "Phi_AB": 2.0, "V1": 0.01}),
             Curve("B24_Phi2_V001", {"B": 2.4, "Phi_AB": 2.0, "V1": 0.01}),
             Curve("B2_Phi24_V001", {"B": 2.0, "Phi_AB": 2.4, "V1": 0.01}),
             Curve("B2_Phi2_V005", {"B": 2.0, "Phi_AB": 2.0, "V1": 0.05})],
            [TrendClaim("E-decreasing-in-a", "along-x", DECREASING),
             TrendClaim("E-decreasing-in-B", "across", DECREASING, "B"),
             TrendClaim("E-increasing-in-Phi", "across", INCREASING, "Phi_AB"),
             TrendClaim("E-increasing-in-V1", "across", INCREASING, "V1")],
            "energy versus mass parameter a, inverse-square case"),
    7: _fig(7, "U", "T", 0.5, 5.0, 19, THERMO_DEFAULTS,
            [Curve("a1", {"a": 1.0, "B": 1.0}), Curve("a12", {"a": 1.2, "B": 1.0})],
            [TrendClaim("U-increasing-in-T", "along-x", INCREASING),
             TrendClaim("U-increasing-in-a", "across", INCREASING, "a")],
            "internal energy versus temperature for two mass parameters"),
    8: _fig(8, "U", "T", 0.5, 5.0, 19, THERMO_DEFAULTS,
            [Curve("B1", {"B": 1.0, "a": 1.0}), Curve("B10", {"B": 10.0, "a": 1.0})],
            [TrendClaim("U-increasing-in-T", "along-x", INCREASING),
             TrendClaim("U-decreasing-in-B", "across", DECREASING, "B")],
            "internal energy versus temperature for two field strengths"),
    9: _fig(9, "U", "a", 0.5, 2.0, 16, THERMO_DEFAULTS,
            [Curve("B1", {"B": 1.0}), Curve("B10", {"B": 10.0})],
            [TrendClaim("U-increasing-in-a", "along-x", INCREASING),
             TrendClaim("U-decreasing-in-B", "across", DECREASING, "B")],
            "internal energy versus mass parameter"),
    10: _fig(10, "Cv", "a", 0.5, 2.0, 16, THERMO_DEFAULTS,
             [Curve("B1", {"B": 1.0}), Curve("B5", {"B": 5.0})],
             [TrendClaim("Cv-decreasing-in-a", "along-x", DECREASING),
              TrendClaim("Cv-increasing-in-B", "across", INCREASING, "B")],
             "specific heat versus mass parameter"),
    11: _fig(11, "Cv", "T", 0.5, 5.0, 19, THERMO_DEFAULTS,
             [Curve("a1_B1", {"a": 1.0, "B": 1.0}),
              Curve("a1_B5", {"a": 1.0, "B": 5.0}),
              Curve("a12_B1", {"a": 1.2, "B": 1.0})],
             [TrendClaim("Cv-increasing-in-T", "along-x", INCREASING),
              TrendClaim("Cv-increasing-in-B", "across", INCREASING, "B"),
              TrendClaim("Cv-decreasing-in-a", "across", DECREASING, "a")],
             "specific heat versus temperature"),
    12: _fig(12, "S", "a", 2.0, 4.0, 16, THERMO_DEFAULTS,
             [Curve("B1_T1", {"B": 1.0, "T": 1.0}),
              Curve("B5_T1", {"B": 5.0, "T": 1.0}),
              Curve("B1_T2", {"B": 1.0, "T": 2.0})],
             [TrendClaim("S-decreasing-in-a", "along-x", DECREASING),
              TrendClaim("S-increasing-in-B", "across", INCREASING, "B"),
              TrendClaim("S-decreasing-in-T", "across", DECREASING, "T")],
             "entropy versus mass parameter (range past the entropy maximum of "
             "every curve, where the decay regime holds)"),
}
