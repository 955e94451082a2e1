"""Shared test fixtures and independent oracle helpers.

The oracles here (adaptive quadrature, finite differences, direct summation)
never call the code paths they check.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

import pdm_spectra as P
from pdm_spectra.model import ReducedSet


# ---------------------------------------------------------------------------
# quadrature oracles for the special functions
# ---------------------------------------------------------------------------

_SQRT_PI = math.sqrt(math.pi)


def erf_quad(x: float) -> float:
    val, _ = quad(lambda t: math.exp(-t * t), 0.0, x, epsabs=1e-14, epsrel=1e-13, limit=200)
    return 2.0 / _SQRT_PI * val


def erfi_quad(x: float) -> float:
    val, _ = quad(lambda t: math.exp(t * t), 0.0, x, epsabs=1e-14, epsrel=1e-13, limit=200)
    return 2.0 / _SQRT_PI * val


def dawson_quad(x: float) -> float:
    val, _ = quad(lambda t: math.exp(t * t), 0.0, x, epsabs=1e-14, epsrel=1e-13, limit=200)
    return math.exp(-x * x) * val


# ---------------------------------------------------------------------------
# reference parameter sets
# ---------------------------------------------------------------------------


def exp_reference() -> P.SystemParams:
    """B = 1, Phi = 1, V1 = V2 = V3 = 0.5, lambda = 0.1, a = 0.5, n = 1, m = 0."""
    return P.SystemParams(
        mass=P.ExponentialMass(0.5),
        potential=P.PotentialParams(V1=0.5, V2=0.5, V3=0.5, lam=0.1),
        fields=P.FieldConfig(B=1.0, Phi_AB=1.0),
        quantum=P.QuantumNumbers(n=1, m=0),
    )


def invsq_reference() -> P.SystemParams:
    """B = Phi = 2, V1 = V2 = 0.01, lambda = 1, a = 1, n = 1, m = 0."""
    return P.SystemParams(
        mass=P.InverseSquareMass(1.0),
        potential=P.PotentialParams(V1=0.01, V2=0.01, V3=0.0, lam=1.0),
        fields=P.FieldConfig(B=2.0, Phi_AB=2.0),
        quantum=P.QuantumNumbers(n=1, m=0),
    )


def thermo_reference() -> P.SystemParams:
    """B = Phi = 1, V1 = V2 = 0.01, lambda = 1, a = 1, m = 0 (T = 2 by convention)."""
    return P.SystemParams(
        mass=P.InverseSquareMass(1.0),
        potential=P.PotentialParams(V1=0.01, V2=0.01, V3=0.0, lam=1.0),
        fields=P.FieldConfig(B=1.0, Phi_AB=1.0),
        quantum=P.QuantumNumbers(n=1, m=0),
    )


def zeta_theta_system(zeta: float, theta: float):
    """Physical system + temperature realizing exact (zeta, theta).

    With V1 = V2 = 0 and B > 0 the level-range scale reduces to delta + 1, so
    Phi_AB = zeta - 1 pins zeta; the temperature then pins theta.
    """
    sys = P.SystemParams(
        mass=P.InverseSquareMass(1.0),
        potential=P.PotentialParams(V1=0.0, V2=0.0, V3=0.0, lam=1.0),
        fields=P.FieldConfig(B=1.0, Phi_AB=zeta - 1.0),
        quantum=P.QuantumNumbers(n=1, m=0),
    )
    tau = 2.0  # 2a/hbar^2
    beta = (theta * tau / zeta) ** 2
    return sys, 1.0 / beta


def scaled_set(alpha: float, eta_s: float, b_tilde: float, delta3: float) -> P.ScaledSet:
    d1 = alpha + 0.5
    d2 = None if eta_s == 0.0 else 1.0 - d1 * b_tilde / eta_s
    return P.ScaledSet(alpha=alpha, eta_s=eta_s, b_tilde=b_tilde,
                       delta1=d1, delta2=d2, delta3=delta3)


def reduced_for(sc: P.ScaledSet) -> ReducedSet:
    """Unit-eps embedding consistent with the ScaledSet (chi == rho)."""
    xi = sc.delta3 - sc.b_tilde**2 / 4.0 + 2.0 * sc.delta1 + 1.0
    return ReducedSet(xi=xi, alpha_sq=sc.alpha**2, c1=sc.eta_s, b1=sc.b_tilde, eps=1.0)


def random_scaled_sets(count: int = 100, seed: int = 20260810):
    """The seeded randomized family used by the series arbiter."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        out.append(scaled_set(
            alpha=float(rng.uniform(0.0, 3.0)),
            eta_s=float(rng.uniform(-2.0, 2.0)),
            b_tilde=float(rng.uniform(-2.0, 2.0)),
            delta3=float(rng.uniform(-4.0, 8.0)),
        ))
    return out


@pytest.fixture
def exp_sys():
    return exp_reference()


@pytest.fixture
def invsq_sys():
    return invsq_reference()


@pytest.fixture
def thermo_sys():
    return thermo_reference()
