"""System parameters and the layered coefficient reductions.

The radial problem for a charged particle with position-dependent mass in the
potential V(rho) = V1 exp(-lam rho) + V2 exp(-2 lam rho) + V3/rho, under a
uniform magnetic field B and an Aharonov-Bohm flux Phi_AB, reduces (after the
small-rho expansion of the exponentials) to

    R'' + drift(rho) R' + [eta1 + eta2/rho^2 + eta3/rho + eta4 rho + eta5 rho^2] R = 0

with drift = 1/rho + a for the exponential mass law M = m0 exp(-a rho) and
drift = 3/rho for the inverse-square law M = a/rho^2.  The eta coefficients
are transcribed literally from the published closed forms of this model; the
independent shooting solver (``oracle``) integrates the same coefficients, so
any algebraic defect in them is isolated by comparison, not hidden.

Reduction layers:

    EtaSet      -> ReducedSet (xi, alpha^2, c1, b1, eps)
    ReducedSet  -> ScaledSet  (alpha, eta_s, b_tilde, Delta1..Delta3)

after which chi = eps^(1/4) rho brings the equation to the biconfluent-Heun
normal form handled by ``heun``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Union


class ParameterError(ValueError):
    """Invalid physical parameter combination."""


class ComplexIndexError(ValueError):
    """alpha^2 < 0: the centrifugal index would be imaginary."""


class ScalingError(ValueError):
    """eps <= 0: the chi = eps^(1/4) rho scaling is undefined."""


@dataclass(frozen=True)
class PhysicalConstants:
    """hbar, e, c, m0 (rest-mass scale), k_B; natural units by default."""

    hbar: float = 1.0
    e_charge: float = 1.0
    c_light: float = 1.0
    m0: float = 1.0
    k_B: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "e_charge", "c_light", "m0", "k_B"):
            v = getattr(self, name)
            if not (v > 0.0 and math.isfinite(v)):
                raise ParameterError(f"constant {name} must be strictly positive, got {v!r}")


@dataclass(frozen=True)
class PotentialParams:
    """Morse-plus-Coulomb strengths V1, V2 (energy), V3 (energy*length), range lam > 0."""

    V1: float
    V2: float
    V3: float
    lam: float

    def __post_init__(self):
        if not (self.lam > 0.0 and math.isfinite(self.lam)):
            raise ParameterError(f"lambda must be strictly positive, got {self.lam!r}")


@dataclass(frozen=True)
class FieldConfig:
    """Magnetic field magnitude B >= 0 and Aharonov-Bohm flux Phi_AB >= 0."""

    B: float = 0.0
    Phi_AB: float = 0.0

    def __post_init__(self):
        if self.B < 0.0 or self.Phi_AB < 0.0:
            raise ParameterError(f"fields must be non-negative, got B={self.B!r}, Phi_AB={self.Phi_AB!r}")


@dataclass(frozen=True)
class QuantumNumbers:
    """Series index n >= 0 and magnetic quantum number m."""

    n: int = 1
    m: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ParameterError(f"n must be >= 0, got {self.n!r}")


@dataclass(frozen=True)
class ExponentialMass:
    """M(rho) = m0 exp(-a rho); a = 0 is the stationary-mass limit."""

    a: float

    def __post_init__(self):
        if not (self.a >= 0.0 and math.isfinite(self.a)):
            raise ParameterError(f"exponential mass constant a must be >= 0, got {self.a!r}")


@dataclass(frozen=True)
class InverseSquareMass:
    """M(rho) = a/rho^2 with a an arbitrary non-zero real constant."""

    a: float

    def __post_init__(self):
        if self.a == 0.0 or not math.isfinite(self.a):
            raise ParameterError(f"inverse-square mass constant a must be non-zero, got {self.a!r}")


MassCase = Union[ExponentialMass, InverseSquareMass]


@dataclass(frozen=True)
class SystemParams:
    """Full parameter snapshot: mass law, potential, fields, quantum numbers, constants."""

    mass: MassCase
    potential: PotentialParams
    fields: FieldConfig = FieldConfig()
    quantum: QuantumNumbers = QuantumNumbers()
    constants: PhysicalConstants = PhysicalConstants()

    def __post_init__(self):
        if isinstance(self.mass, InverseSquareMass) and self.potential.V3 != 0.0:
            raise ParameterError("the inverse-square mass case assumes V3 = 0")

    def with_(self, **kwargs) -> "SystemParams":
        """Shallow replace of top-level fields."""
        return replace(self, **kwargs)


@dataclass(frozen=True)
class EtaSet:
    eta1: float
    eta2: float
    eta3: float
    eta4: float
    eta5: float


@dataclass(frozen=True)
class ReducedSet:
    xi: float
    alpha_sq: float
    c1: float
    b1: float
    eps: float


@dataclass(frozen=True)
class ScaledSet:
    """Coefficients of the chi-scaled normal form.

    delta2 is stored for diagnostics only (undefined when eta_s == 0, kept as
    None); the series recurrence uses the constant term eta_s - b_tilde*delta1
    directly.
    """

    alpha: float
    eta_s: float
    b_tilde: float
    delta1: float
    delta2: Optional[float]
    delta3: float

    @property
    def constant_term(self) -> float:
        """eta_s - b_tilde * delta1, the chi^0 coefficient of the normal form."""
        return self.eta_s - self.b_tilde * self.delta1


def effective_delta(q: QuantumNumbers, f: FieldConfig, k: PhysicalConstants) -> float:
    """Flux-shifted magnetic quantum number delta = m + e*Phi_AB/(c*hbar)."""
    return q.m + k.e_charge * f.Phi_AB / (k.c_light * k.hbar)


def eta_exponential(E, p: PotentialParams, a: float, f: FieldConfig,
                    q: QuantumNumbers, k: PhysicalConstants) -> EtaSet:
    """Laurent coefficients for the exponential mass law at energy E.

    a = 0 is allowed (stationary limit).  E may be a numpy array; the returned
    fields then broadcast elementwise.
    """
    d = effective_delta(q, f, k)
    two_m = 2.0 * k.m0 / k.hbar**2
    cyc = k.e_charge * f.B / (k.hbar * k.c_light)
    eta1 = -cyc * d + two_m * (E - p.V1 - p.V2 - a * p.V3)
    eta2 = -d * d
    eta3 = -two_m * p.V3
    eta4 = two_m * (-a * E + (p.lam + a) * p.V1 + (2.0 * p.lam + a) * p.V2 + a * a / 2.0 * p.V3)
    eta5 = -((cyc / 2.0) ** 2) + two_m * (a * a / 2.0 * E - a * p.lam * p.V1 - 2.0 * a * p.lam * p.V2)
    return EtaSet(eta1, eta2, eta3, eta4, eta5)


def eta_inverse_square(E, p: PotentialParams, a: float, f: FieldConfig,
                       q: QuantumNumbers, k: PhysicalConstants) -> EtaSet:
    """Laurent coefficients for the inverse-square mass law at energy E.

    Unlike the exponential case, E enters through eta2 (the 1/rho^2 term).
    """
    if p.V3 != 0.0:
        raise ParameterError("the inverse-square case assumes V3 = 0")
    if a == 0.0:
        raise ParameterError("inverse-square mass constant a must be non-zero")
    d = effective_delta(q, f, k)
    h2 = k.hbar**2
    cyc = k.e_charge * f.B / (k.hbar * k.c_light)
    eta1 = -cyc * d + p.lam**2 * a / h2 * (p.V1 + 4.0 * p.V2)
    eta2 = -d * d + 2.0 * a / h2 * (E + 2.0 * p.V1 + 2.0 * p.V2)
    eta3 = -2.0 * p.lam * a / h2 * (p.V1 + 2.0 * p.V2)
    eta4 = -a * p.lam**3 / (3.0 * h2) * (p.V1 + 8.0 * p.V2)
    eta5 = -((cyc / 2.0) ** 2) - a * p.lam**4 / (12.0 * h2) * (p.V1 + 16.0 * p.V2)
    return EtaSet(eta1, eta2, eta3, eta4, eta5)


def eta_for(sys: SystemParams, E) -> EtaSet:
    """Dispatch on the mass case."""
    if isinstance(sys.mass, ExponentialMass):
        return eta_exponential(E, sys.potential, sys.mass.a, sys.fields, sys.quantum, sys.constants)
    return eta_inverse_square(E, sys.potential, sys.mass.a, sys.fields, sys.quantum, sys.constants)


def reduce_etas(etas: EtaSet, case: MassCase) -> ReducedSet:
    """Collapse the EtaSet into (xi, alpha^2, c1, b1, eps) for the given mass case.

    Exponential case: xi = eta1 - a^2/4, alpha^2 = -eta2, c1 = eta3 - a/4.
    Inverse-square:   xi = eta1,         alpha^2 = 3/4 - eta2, c1 = eta3.
    Both: b1 = -eta4, eps = -eta5.
    """
    if isinstance(case, ExponentialMass):
        a = case.a
        xi = etas.eta1 - a * a / 4.0
        alpha_sq = -etas.eta2
        c1 = etas.eta3 - a / 4.0
    else:
        xi = etas.eta1
        alpha_sq = 0.75 - etas.eta2
        c1 = etas.eta3
    b1 = -etas.eta4
    eps = -etas.eta5
    if alpha_sq < 0.0:
        raise ComplexIndexError(f"alpha^2 = {alpha_sq!r} < 0: centrifugal index would be imaginary")
    if eps <= 0.0:
        raise ScalingError(f"eps = {eps!r} <= 0: the chi = eps^(1/4) rho scaling requires eps > 0")
    return ReducedSet(xi, alpha_sq, c1, b1, eps)


def scale_reduced(r: ReducedSet) -> ScaledSet:
    """Scale to chi coordinates: alpha, eta_s = c1/eps^(1/4), b_tilde = b1/eps^(3/4), Delta1..3."""
    if r.eps <= 0.0:
        raise ScalingError(f"eps = {r.eps!r} <= 0: the chi = eps^(1/4) rho scaling requires eps > 0")
    if r.alpha_sq < 0.0:
        raise ComplexIndexError(f"alpha^2 = {r.alpha_sq!r} < 0")
    alpha = math.sqrt(r.alpha_sq)
    q = r.eps**0.25
    eta_s = r.c1 / q
    b_tilde = r.b1 / q**3
    delta1 = alpha + 0.5
    delta3 = r.xi / math.sqrt(r.eps) + b_tilde**2 / 4.0 - 2.0 * delta1 - 1.0
    delta2 = None if eta_s == 0.0 else 1.0 - delta1 * b_tilde / eta_s
    return ScaledSet(alpha, eta_s, b_tilde, delta1, delta2, delta3)


def scaled_chain(sys: SystemParams, E: float) -> ScaledSet:
    """eta -> reduced -> scaled for the system at energy E."""
    return scale_reduced(reduce_etas(eta_for(sys, E), sys.mass))
