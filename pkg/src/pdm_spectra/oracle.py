"""Independent shooting-method eigensolver for the radial equations.

Integrates the radial ODE

    R'' + (p_pole/rho + p_const) R' + Q(E, rho) R = 0

outward from rho_min (Frobenius start R ~ rho^s (1 + c1 rho)) and inward from
the far boundary (locally decaying WKB start), and root-finds the energy
where the log-derivatives match.  This is the arbiter for the closed-form
spectra: ``compare_with_closed_form`` never asserts agreement, it reports
gaps.

Shooting rather than matrix diagonalization because E enters the Laurent
coefficients nonlinearly in both mass cases.  By default the *expanded*
coefficients are integrated (the same Laurent sets the closed forms are built
from) so that disagreements isolate the algebra, not the small-rho expansion;
``expanded=False`` integrates the raw equation instead and thereby quantifies
the expansion error itself.

Numerics: the near-origin leg is integrated in log coordinates (the 1/rho^2
singularity becomes a constant coefficient there); all legs are chunked with
renormalization because bound-state tails span far more orders of magnitude
than doubles hold, while log-derivatives and node counts are invariant under
positive rescaling.  The inward start is capped where the WKB decay budget
already suppresses the growing branch below double precision, so enlarging
rho_max beyond that point cannot move eigenvalues.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from .model import (
    ExponentialMass,
    InverseSquareMass,
    SystemParams,
    effective_delta,
    eta_for,
)
from .spectra import (
    METHOD_ORACLE,
    EnergyLevel,
    inverse_square_level,
    inverse_square_level_derived,
    solve_exponential_levels,
)

DEFAULT_RHO_MIN = 1e-6
DEFAULT_RHO_MAX = 40.0
DEFAULT_RTOL = 1e-10
_GROWTH_PER_CHUNK = 110.0  # e-foldings per renormalized chunk
_DECAY_BUDGET = 18.0       # 2*18 WKB e-foldings suppress the growing branch below eps
_MISMATCH_ACCEPT = 0.1     # log-derivative poles bisect to |mismatch| ~ 1


class IntegrationError(RuntimeError):
    """The adaptive integrator failed; the message carries the location."""


class EvanescentOriginError(ValueError):
    """Non-real indicial exponent at the origin for this energy."""


@dataclass(frozen=True)
class RadialProblem:
    """Radial ODE with coefficients as functions of (E, rho).

    drift = drift_pole/rho + drift_const multiplies R'; q_factory(E) returns a
    fast scalar Q(rho); indicial(E) is the regular-branch origin exponent
    (raising EvanescentOriginError when not real) and frobenius_c1(E) the next
    Frobenius coefficient in R ~ rho^s (1 + c1 rho).
    """

    label: str
    drift_pole: float
    drift_const: float
    q_factory: Callable[[float], Callable[[float], float]]
    indicial: Callable[[float], float]
    frobenius_c1: Callable[[float], float]
    rho_min: float = DEFAULT_RHO_MIN
    rho_max: float = DEFAULT_RHO_MAX
    match_point: Optional[float] = None

    def __post_init__(self):
        if not 0.0 < self.rho_min < self.rho_max:
            raise ValueError(f"need 0 < rho_min < rho_max, got [{self.rho_min}, {self.rho_max}]")
        if self.match_point is not None and not self.rho_min < self.match_point < self.rho_max:
            raise ValueError(f"match_point {self.match_point} outside ({self.rho_min}, {self.rho_max})")


@dataclass(frozen=True)
class ShootResult:
    E: float
    mismatch: float
    node_count: int


def build_problem(sys: SystemParams, expanded: bool = True,
                  rho_min: float = DEFAULT_RHO_MIN, rho_max: float = DEFAULT_RHO_MAX,
                  match_point: Optional[float] = None) -> RadialProblem:
    """Radial problem for the system's mass case.

    expanded=True integrates the Laurent-coefficient form (the closed forms'
    own starting point); expanded=False integrates the raw radial equation
    with the full exponentials.
    """
    k = sys.constants
    p = sys.potential
    d = effective_delta(sys.quantum, sys.fields, k)
    cyc = k.e_charge * sys.fields.B / (k.hbar * k.c_light)
    h2 = k.hbar**2
    exp_case = isinstance(sys.mass, ExponentialMass)
    a = sys.mass.a

    if expanded:
        def q_factory(E: float) -> Callable[[float], float]:
            e = eta_for(sys, E)
            e1, e2, e3, e4, e5 = e.eta1, e.eta2, e.eta3, e.eta4, e.eta5

            def q(rho: float) -> float:
                return e1 + e2 / (rho * rho) + e3 / rho + (e4 + e5 * rho) * rho

            return q
    elif exp_case:
        two_m = 2.0 * k.m0 / h2
        V1, V2, V3, lam = p.V1, p.V2, p.V3, p.lam

        def q_factory(E: float) -> Callable[[float], float]:
            def q(rho: float) -> float:
                v = V1 * math.exp(-lam * rho) + V2 * math.exp(-2.0 * lam * rho) + V3 / rho
                return (-cyc * d - d * d / (rho * rho) - (cyc / 2.0) ** 2 * rho * rho
                        + two_m * math.exp(-a * rho) * (E - v))

            return q
    else:
        two_a = 2.0 * a / h2
        V1, V2, lam = p.V1, p.V2, p.lam

        def q_factory(E: float) -> Callable[[float], float]:
            def q(rho: float) -> float:
                v = V1 * math.exp(-lam * rho) + V2 * math.exp(-2.0 * lam * rho)
                return (-cyc * d - d * d / (rho * rho) - (cyc / 2.0) ** 2 * rho * rho
                        + two_a / (rho * rho) * (E - v))

            return q

    if exp_case:
        s0 = abs(d)
        q_m1 = -2.0 * k.m0 * p.V3 / h2  # 1/rho coefficient near the origin, both forms
        indicial = lambda E: s0
        frob = lambda E: -(a * s0 + q_m1) / (2.0 * s0 + 1.0)
        return RadialProblem("exponential" + ("" if expanded else "-raw"),
                             1.0, a, q_factory, indicial, frob, rho_min, rho_max, match_point)

    if expanded:
        def q2_of(E: float) -> float:
            return eta_for(sys, E).eta2

        def q1_of(E: float) -> float:
            return eta_for(sys, E).eta3
    else:
        def q2_of(E: float) -> float:
            return -d * d + 2.0 * a / h2 * (E - p.V1 - p.V2)

        def q1_of(E: float) -> float:
            return 2.0 * a / h2 * p.lam * (p.V1 + 2.0 * p.V2)

    def indicial(E: float) -> float:
        disc = 1.0 - q2_of(E)
        if disc < 0.0:
            raise EvanescentOriginError(
                f"1 - eta2 = {disc:g} < 0 at E = {E:g}: origin exponent is not real")
        return -1.0 + math.sqrt(disc)

    def frob(E: float) -> float:
        return -q1_of(E) / (2.0 * indicial(E) + 3.0)

    return RadialProblem("inverse-square" + ("" if expanded else "-raw"),
                         3.0, 0.0, q_factory, indicial, frob, rho_min, rho_max, match_point)


def calibration_problem(delta: float, omega: float,
                        rho_min: float = DEFAULT_RHO_MIN, rho_max: float = 12.0) -> RadialProblem:
    """Two-dimensional oscillator limit used to validate the solver.

    Laurent form with drift 1/rho, the 1/rho^2 coefficient -delta^2 and the
    rho^2 coefficient -omega^2 set by hand (constant term playing the role of
    2E in natural units); exact spectrum E_k = (2k + |delta| + 1) omega.
    """
    s0 = abs(delta)
    d2 = delta * delta
    w2 = omega * omega

    def q_factory(E: float) -> Callable[[float], float]:
        def q(rho: float) -> float:
            return 2.0 * E - d2 / (rho * rho) - w2 * rho * rho

        return q

    return RadialProblem("oscillator-calibration", 1.0, 0.0, q_factory,
                         lambda E: s0, lambda E: 0.0, rho_min, rho_max)


# --------------------------------------------------------------------------
# integration machinery
# --------------------------------------------------------------------------


def _default_match(q: Callable[[float], float], lo: float, hi: float) -> float:
    """Midpoint of the classically allowed region (fallback: argmax of Q, clamped)."""
    grid = np.geomspace(lo, hi, 96)
    vals = np.asarray([q(float(r)) for r in grid])
    allowed = np.flatnonzero(vals > 0.0)
    if allowed.size:
        return float(0.5 * (grid[allowed[0]] + grid[allowed[-1]]))
    pos = float(grid[int(np.argmax(vals))])
    return min(max(pos, 0.05 * hi), hi)


def _kappa_integral(q: Callable[[float], float], lo: float, hi: float, n: int = 65):
    xs = np.linspace(lo, hi, n)
    ks = np.asarray([math.sqrt(max(-q(float(r)), 0.0)) for r in xs])
    return xs, ks


# Dormand-Prince 5(4) tableau
_DP_C = (0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0)
_DP_A = (
    (0.2,),
    (3.0 / 40.0, 9.0 / 40.0),
    (44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0),
    (19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0),
    (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0),
    (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0),
)
_DP_E = (71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0,
         -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)
_MAX_STEPS = 200_000


def _dp45(f, t0: float, t1: float, y0: float, y1: float, rtol: float,
          count_nodes: bool) -> Tuple[float, float, int]:
    """Adaptive Dormand-Prince 5(4) for a 2-state system, scalar arithmetic.

    Node counting by endpoint sign changes of y0 is exact here: accepted steps
    resolve the local oscillation scale, so zeros are at least a step apart.
    """
    atol = 1e-14
    span = t1 - t0
    direction = 1.0 if span > 0 else -1.0
    h = direction * min(abs(span) / 50.0, 0.1)
    t, u, v = t0, y0, y1
    k1 = f(t, u, v)
    nodes = 0
    prev_sign = 1.0 if u > 0 else (-1.0 if u < 0 else 0.0)
    steps = 0
    while (t1 - t) * direction > 0.0:
        if steps > _MAX_STEPS:
            raise IntegrationError(f"step limit exceeded near coordinate {t:g}")
        if (t + h - t1) * direction > 0.0:
            h = t1 - t
        ks = [k1]
        for row, c in zip(_DP_A, _DP_C):
            du = 0.0
            dv = 0.0
            for a_ij, k in zip(row, ks):
                du += a_ij * k[0]
                dv += a_ij * k[1]
            ks.append(f(t + c * h, u + h * du, v + h * dv))
        b = _DP_A[5]
        un = u + h * (b[0] * ks[0][0] + b[2] * ks[2][0] + b[3] * ks[3][0]
                      + b[4] * ks[4][0] + b[5] * ks[5][0])
        vn = v + h * (b[0] * ks[0][1] + b[2] * ks[2][1] + b[3] * ks[3][1]
                      + b[4] * ks[4][1] + b[5] * ks[5][1])
        k7 = ks[6] if len(ks) > 6 else f(t + h, un, vn)
        err_u = h * (_DP_E[0] * ks[0][0] + _DP_E[2] * ks[2][0] + _DP_E[3] * ks[3][0]
                     + _DP_E[4] * ks[4][0] + _DP_E[5] * ks[5][0] + _DP_E[6] * k7[0])
        err_v = h * (_DP_E[0] * ks[0][1] + _DP_E[2] * ks[2][1] + _DP_E[3] * ks[3][1]
                     + _DP_E[4] * ks[4][1] + _DP_E[5] * ks[5][1] + _DP_E[6] * k7[1])
        su = atol + rtol * max(abs(u), abs(un))
        sv = atol + rtol * max(abs(v), abs(vn))
        err = math.sqrt(0.5 * ((err_u / su) ** 2 + (err_v / sv) ** 2))
        steps += 1
        if err <= 1.0 or abs(h) < 1e-14 * max(1.0, abs(t)):
            t += h
            u, v = un, vn
            k1 = k7  # FSAL
            if not (math.isfinite(u) and math.isfinite(v)):
                raise IntegrationError(f"non-finite state near coordinate {t:g}")
            if count_nodes:
                s = 1.0 if u > 0 else (-1.0 if u < 0 else 0.0)
                if s != 0.0 and prev_sign != 0.0 and s != prev_sign:
                    nodes += 1
                if s != 0.0:
                    prev_sign = s
        factor = 0.9 * err ** -0.2 if err > 0.0 else 10.0
        h *= min(10.0, max(0.2, factor))
    return u, v, nodes


def _integrate_leg(rhs, t0: float, t1: float, y, rtol: float,
                   n_chunks: int, count_nodes: bool) -> Tuple[np.ndarray, int]:
    bounds = np.linspace(t0, t1, n_chunks + 1)
    nodes = 0
    u, v = float(y[0]), float(y[1])
    for i in range(n_chunks):
        scale = max(abs(u), abs(v))
        if scale == 0.0 or not math.isfinite(scale):
            raise IntegrationError(f"solution degenerated near coordinate {bounds[i]:g}")
        u, v = u / scale, v / scale
        u, v, nd = _dp45(rhs, float(bounds[i]), float(bounds[i + 1]), u, v, rtol, count_nodes)
        nodes += nd
    return np.asarray([u, v]), nodes


def _outward(problem: RadialProblem, q: Callable[[float], float], s: float, c1: float,
             match: float, rtol: float) -> Tuple[np.ndarray, int]:
    """rho_min -> match; log coordinates over the singular near-origin stretch."""
    pole, const = problem.drift_pole, problem.drift_const
    r0 = problem.rho_min
    nodes = 0
    rho_c = max(r0, min(0.5, 0.5 * match))
    y = np.asarray([r0**s * (1.0 + c1 * r0), r0 ** (s - 1.0) * (s + (s + 1.0) * c1 * r0)])

    if rho_c / r0 > math.e:
        # u(t) = R(e^t), v = du/dt = rho R';  v' = (1 - pole - const*rho) v - rho^2 Q u
        def rhs_log(t, uu, vv):
            rho = math.exp(t)
            return (vv, (1.0 - pole - const * rho) * vv - rho * rho * q(rho) * uu)

        t0, t1 = math.log(r0), math.log(rho_c)
        # growth rate in t is at most ~ max(s, sqrt(max(-rho^2 Q))) per unit t
        ts = np.linspace(t0, t1, 33)
        rate = max(abs(s), 1.0)
        for t in ts:
            rho = math.exp(float(t))
            rate = max(rate, math.sqrt(max(-rho * rho * q(rho), 0.0)))
        n_chunks = max(1, int(math.ceil(rate * (t1 - t0) / _GROWTH_PER_CHUNK)))
        u = np.asarray([y[0], r0 * y[1]])
        u, nd = _integrate_leg(rhs_log, t0, t1, u, rtol, n_chunks, count_nodes=True)
        nodes += nd
        y = np.asarray([u[0], u[1] / rho_c])
        start = rho_c
    else:
        start = r0

    if match > start:
        def rhs_lin(rho, uu, vv):
            return (vv, -((pole / rho + const) * vv + q(rho) * uu))

        xs, ks = _kappa_integral(q, start, match)
        growth = float(np.trapezoid(ks, xs))
        n_chunks = max(1, int(math.ceil(growth / _GROWTH_PER_CHUNK)))
        y, nd = _integrate_leg(rhs_lin, start, match, y, rtol, n_chunks, count_nodes=True)
        nodes += nd
    return y, nodes


def _inward_start(problem: RadialProblem, q: Callable[[float], float], E: float,
                  match: float) -> float:
    """Budget-capped start: far enough that the growing branch is suppressed below eps."""
    r_end = problem.rho_max
    limit = 10.0 * problem.rho_max
    while q(r_end) > -1.0 and r_end < limit:
        r_end *= 1.5
    if q(r_end) >= 0.0:
        raise IntegrationError(
            f"no classically forbidden region up to rho = {r_end:g} at E = {E:g}; "
            "not a bound-state window")
    xs, ks = _kappa_integral(q, match, r_end, n=129)
    acc = np.concatenate([[0.0], np.cumsum((ks[1:] + ks[:-1]) * 0.5 * np.diff(xs))])
    idx = int(np.searchsorted(acc, _DECAY_BUDGET))
    if idx >= len(xs):
        return float(r_end)
    return float(xs[idx])


def _inward(problem: RadialProblem, q: Callable[[float], float], E: float,
            match: float, rtol: float) -> Tuple[np.ndarray, int]:
    pole, const = problem.drift_pole, problem.drift_const
    r_start = _inward_start(problem, q, E, match)

    def rhs_lin(rho, uu, vv):
        return (vv, -((pole / rho + const) * vv + q(rho) * uu))

    pm = pole / r_start + const
    qm = q(r_start)
    mu = 0.5 * (-pm - math.sqrt(max(pm * pm - 4.0 * qm, 0.0)))  # decaying branch
    xs, ks = _kappa_integral(q, match, r_start)
    growth = float(np.trapezoid(ks, xs))
    n_chunks = max(1, int(math.ceil(growth / _GROWTH_PER_CHUNK)))
    return _integrate_leg(rhs_lin, r_start, match, np.asarray([1.0, mu]), rtol,
                          n_chunks, count_nodes=True)


def shoot(problem: RadialProblem, E: float, rtol: float = DEFAULT_RTOL) -> ShootResult:
    """Normalized log-derivative discontinuity at the match point, plus node count.

    The mismatch is the sine of the angle between the outward and inward
    (R, R') phase vectors: zero exactly when the log-derivatives agree,
    bounded and pole-free, so it is continuous in E and changes sign across
    each eigenvalue.  The node count spans the whole domain (outward and
    inward legs), so at an eigenvalue it equals the state index.
    """
    s = problem.indicial(E)
    c1 = problem.frobenius_c1(E)
    q = problem.q_factory(E)
    if problem.match_point is not None:
        match = problem.match_point
    else:
        match = _default_match(q, max(10.0 * problem.rho_min, 1e-4), 0.5 * problem.rho_max)
    out, nodes_out = _outward(problem, q, s, c1, match, rtol)
    inn, nodes_in = _inward(problem, q, E, match, rtol)

    def unit(state: np.ndarray) -> Tuple[float, float]:
        norm = math.hypot(state[0], state[1])
        if norm == 0.0:
            raise IntegrationError(f"vanishing state at the match point, E = {E:g}")
        return state[0] / norm, state[1] / norm

    (r_o, dr_o), (r_i, dr_i) = unit(out), unit(inn)
    mismatch = dr_o * r_i - r_o * dr_i
    return ShootResult(E, mismatch, nodes_out + nodes_in)


def find_bound_states(problem: RadialProblem, e_window: Tuple[float, float],
                      max_states: int = 8, n_scan: int = 60,
                      rtol: float = DEFAULT_RTOL, m: int = 0) -> List[EnergyLevel]:
    """Scan the window for mismatch sign changes and bisect each to |dE| <= 1e-9.

    Returned levels are ascending; the EnergyLevel.n field carries the node
    count (the oracle's own enumeration).  Empty result is allowed.
    """
    lo, hi = e_window
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ValueError(f"need a finite window with lo < hi, got {e_window!r}")
    grid = np.linspace(lo, hi, n_scan)
    vals: List[float] = []
    for e in grid:
        try:
            vals.append(shoot(problem, float(e), rtol).mismatch)
        except (EvanescentOriginError, IntegrationError):
            vals.append(math.nan)
    levels: List[EnergyLevel] = []
    for i in range(len(grid) - 1):
        if len(levels) >= max_states:
            break
        f0, f1 = vals[i], vals[i + 1]
        if not (math.isfinite(f0) and math.isfinite(f1)):
            continue
        if (f0 < 0.0) == (f1 < 0.0):
            continue
        a, b = float(grid[i]), float(grid[i + 1])
        fa = f0
        it = 0
        while b - a > 1e-9 and it < 80:
            mid = 0.5 * (a + b)
            fm = shoot(problem, mid, rtol).mismatch
            if (fa < 0.0) != (fm < 0.0):
                b = mid
            else:
                a, fa = mid, fm
            it += 1
        e_root = 0.5 * (a + b)
        res = shoot(problem, e_root, rtol)
        if abs(res.mismatch) > _MISMATCH_ACCEPT:
            continue  # log-derivative pole, not an eigenvalue
        levels.append(EnergyLevel(e_root, res.node_count, m, res.mismatch,
                                  METHOD_ORACLE, (a, b), it))
    levels.sort(key=lambda lv: lv.E)
    return levels


# --------------------------------------------------------------------------
# comparison against the closed forms
# --------------------------------------------------------------------------

WHICH_CHOICES = ("exp-root", "invsq-closed", "derived-condition")


@dataclass(frozen=True)
class ComparisonRow:
    index: int
    e_oracle: float
    e_formula: float
    abs_gap: float
    rel_gap: float
    node_count: int


@dataclass(frozen=True)
class ComparisonReport:
    which: str
    window: Tuple[float, float]
    rows: Tuple[ComparisonRow, ...]
    oracle_count: int
    formula_count: int


def _formula_levels(sys: SystemParams, which: str, window: Tuple[float, float],
                    max_states: int) -> List[float]:
    lo, hi = window
    out: List[float] = []
    if which == "exp-root":
        scan = solve_exponential_levels(sys, lo, hi, mode="literal")
        out = [lv.E for lv in scan.levels]
    elif which == "derived-condition":
        if isinstance(sys.mass, ExponentialMass):
            scan = solve_exponential_levels(sys, lo, hi, mode="derived")
            out = [lv.E for lv in scan.levels]
        else:
            for n in range(0, 3 * max_states + 5):
                lv = inverse_square_level_derived(
                    sys.with_(quantum=sys.quantum.__class__(n, sys.quantum.m)))
                if lv is not None and lo <= lv.E <= hi:
                    out.append(lv.E)
    elif which == "invsq-closed":
        for n in range(0, 3 * max_states + 5):
            lv = inverse_square_level(sys.with_(quantum=sys.quantum.__class__(n, sys.quantum.m)))
            if lo <= lv.E <= hi:
                out.append(lv.E)
    else:
        raise ValueError(f"which must be one of {WHICH_CHOICES}, got {which!r}")
    return sorted(out)


def compare_with_closed_form(sys: SystemParams, which: str,
                             e_window: Tuple[float, float],
                             max_states: int = 6, n_scan: int = 48,
                             rtol: float = 1e-8) -> ComparisonReport:
    """Per-level oracle-vs-formula gap table; never asserts agreement."""
    problem = build_problem(sys, expanded=True)
    oracle_levels = find_bound_states(problem, e_window, max_states=max_states,
                                      n_scan=n_scan, rtol=rtol, m=sys.quantum.m)
    formula = _formula_levels(sys, which, e_window, max_states)
    rows = []
    for i, (lo_lv, fe) in enumerate(zip(oracle_levels, formula)):
        gap = fe - lo_lv.E
        rows.append(ComparisonRow(i, lo_lv.E, fe, abs(gap),
                                  abs(gap) / max(1.0, abs(lo_lv.E)), lo_lv.n))
    return ComparisonReport(which, e_window, tuple(rows), len(oracle_levels), len(formula))


def _fmt(v: float) -> str:
    return f"{v:.17g}"


COMPARISON_CSV_HEADER = "index,E_oracle,E_formula,abs_gap,rel_gap,node_count,which"


def comparison_to_csv(report: ComparisonReport) -> str:
    lines = [COMPARISON_CSV_HEADER]
    for r in report.rows:
        lines.append(",".join([
            str(r.index), _fmt(r.e_oracle), _fmt(r.e_formula),
            _fmt(r.abs_gap), _fmt(r.rel_gap), str(r.node_count), report.which,
        ]))
    return "\n".join(lines) + "\n"
