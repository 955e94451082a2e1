"""Bound-state energies for both mass laws.

Exponential mass: the polynomial-truncation index condition turns into a
transcendental equation in E,

    4*xi(E) + sqrt(eps(E)) * [ b1(E)^2 - 4 - 8*(delta + 1/2 - n) ] = 0,

transcribed literally ("literal" mode) and solved by bracketing + bisection.
A "derived" mode instead root-finds Delta3(E) - 2n = 0 through the
coefficient chain re-derived in ``heun``; the two disagree (the literal form
carries a sqrt(eps)*b1^2 term where the chain gives b1^2/eps) and both are
compared against the shooting oracle in the discrepancy report.

Inverse-square mass: the spectrum is closed-form (``inverse_square_level``),
again transcribed literally, with the derived-condition counterpart
``inverse_square_level_derived`` for comparison.

The stationary limit a = 0 of the literal exponential condition is also
provided directly (``stationary_condition_residual``); it is linear in E.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, List, Optional, Tuple

import numpy as np

from .model import (
    ComplexIndexError,
    ExponentialMass,
    InverseSquareMass,
    ParameterError,
    ScalingError,
    SystemParams,
    effective_delta,
    eta_exponential,
    eta_inverse_square,
    scaled_chain,
)

MODE_LITERAL = "literal"
MODE_DERIVED = "derived"

#: EnergyLevel.method tags
METHOD_EXP_ROOT = "exp-root"
METHOD_STATIONARY = "stationary-check"
METHOD_INVSQ_CLOSED = "invsq-closed"
METHOD_DERIVED = "derived-condition"
METHOD_ORACLE = "oracle"

DEFAULT_E_LO = -50.0
DEFAULT_E_HI = 50.0
DEFAULT_N_GRID = 400
RESIDUAL_TOL = 1e-10


class BranchError(ValueError):
    """The square root in the literal energy condition is not real at this E."""


class ScanError(ValueError):
    """Non-finite residual inside the scan window."""


class DegenerateParameterError(ValueError):
    """Zero square-root denominator in the inverse-square closed form."""


@dataclass(frozen=True)
class EnergyLevel:
    E: float
    n: int
    m: int
    residual: float
    method: str
    bracket: Optional[Tuple[float, float]] = None
    iterations: int = 0


@dataclass(frozen=True)
class ScanNote:
    kind: str  # "no-root" | "skipped-not-real" | "empty-window"
    detail: str


@dataclass(frozen=True)
class ExponentialScan:
    levels: Tuple[EnergyLevel, ...]
    notes: Tuple[ScanNote, ...]


def _delta(sys: SystemParams) -> float:
    return effective_delta(sys.quantum, sys.fields, sys.constants)


def _exp_condition_terms(E, sys: SystemParams):
    """xi, eps, b1 of the literal exponential condition; E scalar or array."""
    a = sys.mass.a
    etas = eta_exponential(E, sys.potential, a, sys.fields, sys.quantum, sys.constants)
    xi = etas.eta1 - a * a / 4.0
    eps = -etas.eta5
    b1 = -etas.eta4
    return xi, eps, b1


def exp_realness_bound(sys: SystemParams) -> Optional[float]:
    """Largest E keeping sqrt(eps(E)) real for the exponential case; None if unbounded."""
    if not isinstance(sys.mass, ExponentialMass):
        raise ParameterError("exponential-case operation")
    a = sys.mass.a
    if a == 0.0:
        return None  # eps is E-independent and >= 0
    k = sys.constants
    p = sys.potential
    cyc = k.e_charge * sys.fields.B / (k.hbar * k.c_light)
    two_m = 2.0 * k.m0 / k.hbar**2
    # eps(E) = (cyc/2)^2 - two_m*(a^2 E/2 - a lam V1 - 2 a lam V2) >= 0
    return ((cyc / 2.0) ** 2 / two_m + a * p.lam * p.V1 + 2.0 * a * p.lam * p.V2) * 2.0 / (a * a)


def exp_condition_residual(E: float, sys: SystemParams) -> float:
    """Left-hand side of the literal exponential-mass energy condition at E."""
    if not isinstance(sys.mass, ExponentialMass):
        raise ParameterError("exponential-case operation")
    xi, eps, b1 = _exp_condition_terms(float(E), sys)
    if eps < 0.0:
        bound = exp_realness_bound(sys)
        raise BranchError(
            f"square-root argument eps = {eps:g} < 0 at E = {E:g}; "
            f"the condition is real only for E <= {bound:.12g}"
        )
    d = _delta(sys)
    n = sys.quantum.n
    return 4.0 * xi + math.sqrt(eps) * (b1 * b1 - 4.0 - 8.0 * (d + 0.5 - n))


def _exp_condition_residual_grid(E: np.ndarray, sys: SystemParams) -> np.ndarray:
    """Vectorized literal residual; NaN where the square root is not real."""
    xi, eps, b1 = _exp_condition_terms(E, sys)
    d = _delta(sys)
    n = sys.quantum.n
    with np.errstate(invalid="ignore"):
        root = np.sqrt(np.where(eps >= 0.0, eps, np.nan))
    return 4.0 * xi + root * (b1 * b1 - 4.0 - 8.0 * (d + 0.5 - n))


def stationary_condition_residual(E: float, sys: SystemParams) -> float:
    """Stationary-mass (a = 0) energy condition, linear in E."""
    k = sys.constants
    p = sys.potential
    d = _delta(sys)
    n = sys.quantum.n
    cyc = k.e_charge * sys.fields.B / (k.hbar * k.c_light)
    two_m = 2.0 * k.m0 / k.hbar**2
    lam_term = 2.0 * k.m0 * p.lam / k.hbar**2 * (p.V1 + 2.0 * p.V2)
    return (4.0 * (-cyc * d + two_m * (E - p.V1 - p.V2))
            + (cyc / 2.0) * (lam_term**2 - 4.0 - 8.0 * (d + 0.5 - n)))


def truncation_gap(E: float, sys: SystemParams) -> float:
    """Derived-condition residual Delta3(E) - 2n through the coefficient chain.

    Raises ScalingError / ComplexIndexError where the chain is undefined.
    """
    return scaled_chain(sys, float(E)).delta3 - 2.0 * sys.quantum.n


def _bisect(fn: Callable[[float], float], lo: float, hi: float,
            flo: float, fhi: float) -> Tuple[float, float, int]:
    it = 0
    best_x, best_f = (lo, flo) if abs(flo) < abs(fhi) else (hi, fhi)
    while hi - lo > 1e-12 * max(1.0, abs(lo), abs(hi)) and it < 200:
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        it += 1
        if abs(fm) < abs(best_f):
            best_x, best_f = mid, fm
        if fm == 0.0:
            return mid, 0.0, it
        if (flo < 0.0) != (fm < 0.0):
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    return best_x, best_f, it


def solve_exponential_levels(sys: SystemParams,
                             e_lo: float = DEFAULT_E_LO,
                             e_hi: float = DEFAULT_E_HI,
                             n_grid: int = DEFAULT_N_GRID,
                             mode: str = MODE_LITERAL) -> ExponentialScan:
    """Bracket and bisect all roots of the chosen energy condition in [e_lo, e_hi].

    Sub-intervals where the condition is not real-valued are skipped and
    reported in the notes; finding no sign change yields an empty level list
    plus a "no-root" note (not an exception).
    """
    if not isinstance(sys.mass, ExponentialMass):
        raise ParameterError("exponential-case operation")
    if not e_lo < e_hi:
        raise ParameterError(f"need e_lo < e_hi, got [{e_lo}, {e_hi}]")
    if mode not in (MODE_LITERAL, MODE_DERIVED):
        raise ParameterError(f"unknown mode {mode!r}")
    notes: List[ScanNote] = []

    bound = exp_realness_bound(sys)
    hi = e_hi
    if bound is not None and bound < e_hi:
        # derived mode needs eps > 0 strictly; stay a hair inside either way
        hi = bound - 1e-9 * max(1.0, abs(bound))
        notes.append(ScanNote("skipped-not-real",
                              f"condition not real for E > {bound:.12g}; window clipped"))
    if bound is not None and hi <= e_lo:
        notes.append(ScanNote("empty-window", "no real-valued sub-window inside the scan range"))
        return ExponentialScan((), tuple(notes))

    grid = np.linspace(e_lo, hi, n_grid)
    if mode == MODE_LITERAL:
        vals = _exp_condition_residual_grid(grid, sys)
        scalar = lambda E: exp_condition_residual(E, sys)
    else:
        def scalar(E: float) -> float:
            return truncation_gap(E, sys)
        out = np.empty_like(grid)
        for i, e in enumerate(grid):
            try:
                out[i] = scalar(float(e))
            except (ScalingError, ComplexIndexError):
                out[i] = np.nan
        vals = out

    finite = np.isfinite(vals)
    if mode == MODE_LITERAL and not np.all(finite):
        # the clipping keeps eps >= 0, so any remaining non-finite value is a
        # genuine overflow of the condition itself
        raise ScanError(f"non-finite residual at E = {float(grid[~finite][0]):g}")

    levels: List[EnergyLevel] = []
    fn = scalar
    for i in range(len(grid) - 1):
        f0, f1 = vals[i], vals[i + 1]
        if not (np.isfinite(f0) and np.isfinite(f1)):
            continue
        if f0 == 0.0:
            levels.append(EnergyLevel(float(grid[i]), sys.quantum.n, sys.quantum.m, 0.0,
                                      _mode_method(mode), (float(grid[i]), float(grid[i])), 0))
            continue
        if (f0 < 0.0) != (f1 < 0.0):
            x, fx, it = _bisect(fn, float(grid[i]), float(grid[i + 1]), float(f0), float(f1))
            levels.append(EnergyLevel(x, sys.quantum.n, sys.quantum.m, fx,
                                      _mode_method(mode), (float(grid[i]), float(grid[i + 1])), it))
    levels.sort(key=lambda lv: lv.E)
    if not levels:
        notes.append(ScanNote("no-root", f"no sign change of the {mode} condition in "
                                         f"[{e_lo:g}, {hi:g}] on a {n_grid}-point grid"))
    return ExponentialScan(tuple(levels), tuple(notes))


def _mode_method(mode: str) -> str:
    return METHOD_EXP_ROOT if mode == MODE_LITERAL else METHOD_DERIVED


def inverse_square_level(sys: SystemParams) -> EnergyLevel:
    """Closed-form inverse-square-mass energy, transcribed literally."""
    if not isinstance(sys.mass, InverseSquareMass):
        raise ParameterError("inverse-square-case operation")
    a = sys.mass.a
    k = sys.constants
    p = sys.potential
    d = _delta(sys)
    n = sys.quantum.n
    h2 = k.hbar**2
    cyc = k.e_charge * sys.fields.B / (k.hbar * k.c_light)
    sq = (cyc / 2.0) ** 2 + a * p.lam**4 / (12.0 * h2) * (p.V1 + 16.0 * p.V2)
    if sq <= 0.0:
        raise DegenerateParameterError(
            f"square-root argument {sq:g} <= 0 (B = {sys.fields.B:g}, V1 = {p.V1:g}, "
            f"V2 = {p.V2:g}): the closed form degenerates")
    frac = (-cyc * d + p.lam**2 * a / h2 * (p.V1 + 4.0 * p.V2)) / (2.0 * math.sqrt(sq))
    brace = frac + (a * p.lam**3 / (3.0 * h2) * (p.V1 + 8.0 * p.V2)) ** 2 / 8.0 - 1.0 + n
    E = (-h2 / (2.0 * a) * brace * brace + h2 * d * d / (2.0 * a)
         + 3.0 * h2 / (8.0 * a) - 2.0 * (p.V1 + p.V2))
    return EnergyLevel(E, n, sys.quantum.m, 0.0, METHOD_INVSQ_CLOSED)


def inverse_square_level_derived(sys: SystemParams) -> Optional[EnergyLevel]:
    """Derived-condition counterpart of the closed form; None when no regular level exists.

    Delta3 = 2n with the chain's alpha(E) gives alpha_n = xi/(2 sqrt(eps))
    + b_tilde^2/8 - 1 - n, which must be >= 0 for a regular solution.
    """
    if not isinstance(sys.mass, InverseSquareMass):
        raise ParameterError("inverse-square-case operation")
    a = sys.mass.a
    k = sys.constants
    p = sys.potential
    n = sys.quantum.n
    h2 = k.hbar**2
    etas = eta_inverse_square(0.0, p, a, sys.fields, sys.quantum, k)
    eps = -etas.eta5
    if eps <= 0.0:
        return None
    b_tilde = -etas.eta4 / eps**0.75
    alpha_n = etas.eta1 / (2.0 * math.sqrt(eps)) + b_tilde**2 / 8.0 - 1.0 - n
    if alpha_n < 0.0:
        return None
    d = _delta(sys)
    # alpha^2 = 3/4 + delta^2 - (2a/h2)(E + 2V1 + 2V2) inverted for E
    E = h2 / (2.0 * a) * (0.75 + d * d - alpha_n**2) - 2.0 * (p.V1 + p.V2)
    return EnergyLevel(E, n, sys.quantum.m, 0.0, METHOD_DERIVED)


# --------------------------------------------------------------------------
# parameter sweeps
# --------------------------------------------------------------------------

SWEEP_VARY = ("a", "lambda", "B", "Phi_AB", "T")


@dataclass(frozen=True)
class SweepSpec:
    vary: str
    lo: float
    hi: float
    steps: int
    system: SystemParams
    e_lo: float = DEFAULT_E_LO
    e_hi: float = DEFAULT_E_HI
    n_grid: int = DEFAULT_N_GRID
    mode: str = MODE_LITERAL
    branch: str = "lowest"  # root seeding the branch at the first grid point

    def __post_init__(self):
        if self.vary not in SWEEP_VARY:
            raise ParameterError(f"vary must be one of {SWEEP_VARY}, got {self.vary!r}")
        if not self.lo < self.hi:
            raise ParameterError(f"need lo < hi, got [{self.lo}, {self.hi}]")
        if self.steps < 2:
            raise ParameterError(f"steps must be >= 2, got {self.steps}")
        if self.branch not in ("lowest", "highest"):
            raise ParameterError(f"branch must be 'lowest' or 'highest', got {self.branch!r}")


@dataclass(frozen=True)
class SweepRow:
    x: float
    E: Optional[float]
    status: str  # "ok" | "no-root" | "not-real" | "invalid"
    level: Optional[EnergyLevel] = None


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    rows: Tuple[SweepRow, ...]


def apply_vary(sys: SystemParams, name: str, x: float) -> SystemParams:
    """New SystemParams with one swept quantity replaced."""
    if name == "a":
        mass = ExponentialMass(x) if isinstance(sys.mass, ExponentialMass) else InverseSquareMass(x)
        return sys.with_(mass=mass)
    if name == "lambda":
        return sys.with_(potential=replace(sys.potential, lam=x))
    if name == "B":
        return sys.with_(fields=replace(sys.fields, B=x))
    if name == "Phi_AB":
        return sys.with_(fields=replace(sys.fields, Phi_AB=x))
    if name == "T":
        return sys  # energy levels are temperature-independent
    raise ParameterError(f"unknown sweep variable {name!r}")


def _level_at(sys: SystemParams, spec: SweepSpec, prev_E: Optional[float]) -> SweepRow:
    x = math.nan  # caller overwrites
    if isinstance(sys.mass, InverseSquareMass):
        try:
            lv = inverse_square_level(sys)
        except (DegenerateParameterError, ParameterError):
            return SweepRow(x, None, "invalid")
        return SweepRow(x, lv.E, "ok", lv)
    scan = solve_exponential_levels(sys, spec.e_lo, spec.e_hi, spec.n_grid, spec.mode)
    if not scan.levels:
        status = "not-real" if any(n.kind == "empty-window" for n in scan.notes) else "no-root"
        return SweepRow(x, None, status)
    if prev_E is None:
        lv = scan.levels[0] if spec.branch == "lowest" else scan.levels[-1]
    else:
        lv = min(scan.levels, key=lambda l: abs(l.E - prev_E))
    return SweepRow(x, lv.E, "ok", lv)


def sweep(spec: SweepSpec) -> SweepResult:
    """Deterministic table of the selected energy branch along the swept variable.

    Branch policy: spec.branch selects the lowest or highest root in the
    window at the first grid point; each later grid point takes the root
    nearest the previous one.  Failed points carry a structured status
    instead of a value.
    """
    xs = np.linspace(spec.lo, spec.hi, spec.steps)
    rows: List[SweepRow] = []
    prev: Optional[float] = None
    for x in xs:
        try:
            varied = apply_vary(spec.system, spec.vary, float(x))
        except ParameterError:
            rows.append(SweepRow(float(x), None, "invalid"))
            continue
        row = _level_at(varied, spec, prev)
        row = replace(row, x=float(x))
        rows.append(row)
        if row.E is not None:
            prev = row.E
    return SweepResult(spec, tuple(rows))


def _fmt(v: float) -> str:
    return f"{v:.17g}"


SWEEP_CSV_HEADER = "x,E,n,m,B,Phi,a,lambda,V1,V2,V3,status"


def sweep_to_csv(result: SweepResult) -> str:
    """Spec'd sweep schema; floats at 17 significant digits, LF endings."""
    lines = [SWEEP_CSV_HEADER]
    for row in result.rows:
        sys = apply_vary(result.spec.system, result.spec.vary, row.x)
        p = sys.potential
        lines.append(",".join([
            _fmt(row.x),
            _fmt(row.E) if row.E is not None else "",
            str(sys.quantum.n),
            str(sys.quantum.m),
            _fmt(sys.fields.B),
            _fmt(sys.fields.Phi_AB),
            _fmt(sys.mass.a),
            _fmt(p.lam),
            _fmt(p.V1),
            _fmt(p.V2),
            _fmt(p.V3),
            row.status,
        ]))
    return "\n".join(lines) + "\n"


def levels_to_csv(levels: List[EnergyLevel], sys: SystemParams) -> str:
    """Single-solve export schema."""
    lines = ["E,n,m,B,Phi,a,lambda,V1,V2,V3,method,residual,status"]
    p = sys.potential
    for lv in levels:
        lines.append(",".join([
            _fmt(lv.E), str(lv.n), str(lv.m),
            _fmt(sys.fields.B), _fmt(sys.fields.Phi_AB), _fmt(sys.mass.a),
            _fmt(p.lam), _fmt(p.V1), _fmt(p.V2), _fmt(p.V3),
            lv.method, _fmt(lv.residual), "ok",
        ]))
    return "\n".join(lines) + "\n"
