"""Canonical-ensemble thermodynamics of the inverse-square-mass spectrum.

The high-temperature reduction of the partition function is the finite sum

    Z_sum = sum_{n=0}^{floor(zeta)} exp(((n - zeta)/gamma)^2),

approximated for large zeta by the integral

    Z = gamma * (sqrt(pi)/2) * erfi(theta),      theta = zeta*sqrt(beta)/tau,

with tau = 2a/hbar^2 and gamma = tau/sqrt(beta).  The gamma prefactor is
retained (the commonly quoted form drops it, shifting F and S by a
beta-independent ln(tau) while leaving U and C_v untouched; the discrepancy
report shows both).  The summand grows away from n = zeta, so this is not a
conventional Boltzmann sum; it is implemented as defined and every derived
quantity is validated against finite differences of ln Z.

Closed forms used here (D = Dawson function):

    U   = 1/(2 beta) - theta/(2 beta D(theta))          [= -d ln Z/d beta]
    C_v = (k_B/2) [1 - theta/(2D) - theta^2/(2D^2) + theta^3/D]
    F   = -ln Z / beta
    S   = k_B ln Z + k_B beta U                          [= (U - F)/T]

Small-theta branches avoid the cancellation in U and C_v:

    U   -> -(theta^2/beta) (1/3 + 4 theta^2/45 + 8 theta^4/945 + ...)
    C_v -> k_B (4 theta^4/45 + 16 theta^6/945 + ...)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .model import InverseSquareMass, ParameterError, SystemParams, effective_delta
from .specfun import ERFI_ARG_MAX, dawson, erfi

#: the high-temperature validity monitor flags states where the dropped
#: Boltzmann factor deviates from 1 by more than this
HIGH_T_FACTOR_TOL = 0.10

_THETA_SERIES_CUT = 0.02


class ApproximationDomainError(ValueError):
    """zeta <= 0: the high-temperature reduction needs a positive level range."""


class ThetaRangeError(ValueError):
    """theta beyond the erfi overflow guard."""


@dataclass(frozen=True)
class ThermoParams:
    """beta, tau = 2a/hbar^2, zeta (level-count scale), gamma = tau/sqrt(beta), theta = zeta*sqrt(beta)/tau."""

    beta: float
    tau: float
    zeta: float
    gamma: float
    theta: float
    k_B: float = 1.0


@dataclass(frozen=True)
class ThermoState:
    T: float
    Z: float
    U: float
    F: float
    S: float
    Cv: float


@dataclass(frozen=True)
class ThermoRecord:
    """One CSV row: the state plus approximation diagnostics."""

    state: ThermoState
    beta: float
    theta: float
    Z_sum: float
    gap: float
    validity: str  # "ok" | "outside-high-T-validity"


def thermo_params(sys: SystemParams, T: float) -> ThermoParams:
    """Reduction parameters at temperature T for the inverse-square case (a > 0)."""
    if not isinstance(sys.mass, InverseSquareMass):
        raise ParameterError("thermodynamics is defined for the inverse-square mass case only")
    a = sys.mass.a
    if a <= 0.0:
        raise ParameterError(f"thermodynamics requires a > 0, got a = {a!r}")
    if not T > 0.0:
        raise ParameterError(f"temperature must be positive, got {T!r}")
    k = sys.constants
    p = sys.potential
    d = effective_delta(sys.quantum, sys.fields, k)
    h2 = k.hbar**2
    cyc = k.e_charge * sys.fields.B / (k.hbar * k.c_light)
    sq = (cyc / 2.0) ** 2 + a * p.lam**4 / (12.0 * h2) * (p.V1 + 16.0 * p.V2)
    if sq <= 0.0:
        raise ApproximationDomainError(f"square-root argument {sq:g} <= 0 in the level-range scale")
    zeta = ((cyc * d - p.lam**2 * a / h2 * (p.V1 + 4.0 * p.V2)) / (2.0 * math.sqrt(sq))
            - (a * p.lam**3 / (3.0 * h2) * (p.V1 + 8.0 * p.V2)) ** 2 / 8.0 + 1.0)
    if zeta <= 0.0:
        raise ApproximationDomainError(
            f"zeta = {zeta:g} <= 0: the high-temperature reduction requires a positive level range")
    beta = 1.0 / (k.k_B * T)
    tau = 2.0 * a / h2
    gamma = tau / math.sqrt(beta)
    theta = zeta * math.sqrt(beta) / tau
    return ThermoParams(beta, tau, zeta, gamma, theta, k.k_B)


def partition_integral(p: ThermoParams) -> float:
    """Z = gamma * (sqrt(pi)/2) * erfi(theta); strictly positive."""
    if p.theta > ERFI_ARG_MAX:
        raise ThetaRangeError(
            f"theta = {p.theta:g} exceeds the erfi overflow guard {ERFI_ARG_MAX:g}; "
            "raise the temperature or reduce the level-range scale zeta")
    if p.theta == 0.0:
        return p.zeta  # gamma * theta limit
    return p.gamma * math.sqrt(math.pi) / 2.0 * erfi(p.theta).value


def partition_direct_sum(sys: SystemParams, T: float) -> float:
    """Exact finite sum over n = 0..floor(zeta); the oracle for the integral form."""
    p = thermo_params(sys, T)
    top = int(math.floor(p.zeta))
    terms = [math.exp(((n - p.zeta) / p.gamma) ** 2) for n in range(0, top + 1)]
    return math.fsum(terms)


def internal_energy(p: ThermoParams) -> float:
    """U = -d ln Z/d beta = 1/(2 beta) - theta/(2 beta * Dawson(theta))."""
    th = p.theta
    if th < 0.0:
        raise ParameterError(f"theta must be >= 0, got {th!r}")
    if th <= _THETA_SERIES_CUT:
        t2 = th * th
        return -(t2 / p.beta) * (1.0 / 3.0 + 4.0 / 45.0 * t2 + 8.0 / 945.0 * t2 * t2)
    daw = dawson(th).value
    return 1.0 / (2.0 * p.beta) - th / (2.0 * p.beta * daw)


def specific_heat(p: ThermoParams) -> float:
    """C_v = k_B beta^2 d^2 ln Z/d beta^2, via the analytic derivative of U."""
    th = p.theta
    if th < 0.0:
        raise ParameterError(f"theta must be >= 0, got {th!r}")
    if th <= _THETA_SERIES_CUT:
        t2 = th * th
        return p.k_B * (4.0 / 45.0 * t2 * t2 + 16.0 / 945.0 * t2 * t2 * t2)
    daw = dawson(th).value
    return p.k_B / 2.0 * (1.0 - th / (2.0 * daw) - th * th / (2.0 * daw * daw) + th**3 / daw)


def entropy_and_free_energy(p: ThermoParams) -> Tuple[float, float]:
    """(F, S) with F = -ln Z/beta and S = k_B ln Z + k_B beta U; S = (U - F)/T holds exactly."""
    z = partition_integral(p)
    lnz = math.log(z)
    u = internal_energy(p)
    f = -lnz / p.beta
    s = p.k_B * lnz + p.k_B * p.beta * u
    return f, s


def high_t_factor(sys: SystemParams, T: float) -> float:
    """The Boltzmann factor dropped by the high-temperature reduction."""
    k = sys.constants
    p = sys.potential
    a = sys.mass.a
    d = effective_delta(sys.quantum, sys.fields, k)
    h2 = k.hbar**2
    beta = 1.0 / (k.k_B * T)
    shift = h2 * d * d / (2.0 * a) + 3.0 * h2 / (8.0 * a) - 2.0 * (p.V1 + p.V2)
    return math.exp(-beta * shift)


def evaluate(sys: SystemParams, T: float) -> ThermoRecord:
    """Full thermodynamic state plus approximation diagnostics at one temperature."""
    p = thermo_params(sys, T)
    z = partition_integral(p)
    u = internal_energy(p)
    f, s = entropy_and_free_energy(p)
    cv = specific_heat(p)
    z_sum = partition_direct_sum(sys, T)
    gap = abs(z_sum - z) / z_sum
    factor = high_t_factor(sys, T)
    validity = "ok" if abs(factor - 1.0) <= HIGH_T_FACTOR_TOL else "outside-high-T-validity"
    return ThermoRecord(ThermoState(T, z, u, f, s, cv), p.beta, p.theta, z_sum, gap, validity)


def _fmt(v: float) -> str:
    return f"{v:.17g}"


THERMO_CSV_HEADER = "T,beta,theta,Z_integral,Z_sum,gap,U,F,S,Cv,validity_flag"


def records_to_csv(records: Sequence[ThermoRecord]) -> str:
    lines = [THERMO_CSV_HEADER]
    for r in records:
        st = r.state
        lines.append(",".join([
            _fmt(st.T), _fmt(r.beta), _fmt(r.theta), _fmt(st.Z), _fmt(r.Z_sum),
            _fmt(r.gap), _fmt(st.U), _fmt(st.F), _fmt(st.S), _fmt(st.Cv), r.validity,
        ]))
    return "\n".join(lines) + "\n"


def temperature_table(sys: SystemParams, temperatures: Sequence[float]) -> List[ThermoRecord]:
    """Deterministic grid evaluation, ordered as given."""
    return [evaluate(sys, float(T)) for T in temperatures]
