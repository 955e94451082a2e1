"""Frobenius-series solution of the biconfluent-Heun normal form.

After the chi = eps^(1/4) rho scaling the radial function f satisfies

    f'' + (xi/sqrt(eps) - (alpha^2 - 1/4)/chi^2 + eta_s/chi
           - b_tilde*chi - chi^2) f = 0,

and the ansatz f = chi^Delta1 * exp(-(chi^2 + b_tilde*chi)/2) * F(chi) with
Delta1 = alpha + 1/2 transforms it (re-derived symbolically; see the test
suite) into

    chi F'' + (2 Delta1 - b_tilde chi - 2 chi^2) F'
            + [(eta_s - b_tilde Delta1) + Delta3 chi] F = 0,

whose power-series coefficients obey the three-term recurrence

    A_{n+2} = { [b_tilde (n+1) - K] A_{n+1} + (2n - Delta3) A_n }
              / [(n+2)(n+1+2 Delta1)],         K = eta_s - b_tilde Delta1,

with A_0 = 1 (normalization) and A_1 = -K/(2 Delta1).

The closed forms this model is commonly quoted with carry a different sign
convention ("literal" variant: A_1 = +K/(2 Delta1) and the A_{n+1} coupling
negated).  That variant does NOT satisfy the radial equation -- the
ode_residual check is the arbiter -- and is kept only to feed the discrepancy
report.

Truncation to a polynomial (which quantizes the energy) requires both
Delta3 = 2n and A_{n+1} = 0; ``truncation_check`` reports each condition
separately because the quoted spectra enforce only the first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .model import (
    ExponentialMass,
    FieldConfig,
    MassCase,
    ParameterError,
    PhysicalConstants,
    PotentialParams,
    QuantumNumbers,
    ReducedSet,
    ScaledSet,
    ScalingError,
    SystemParams,
    effective_delta,
    eta_exponential,
)

DEFAULT_TERMS = 80
MAX_TERMS = 400
TAIL_RTOL = 1e-12

VARIANT_DERIVED = "derived"
VARIANT_LITERAL = "literal"


class SeriesDivergenceError(ValueError):
    """Coefficient overflow while building the series."""


class SeriesTailError(ValueError):
    """The series tail is not below TAIL_RTOL of the partial sum."""


@dataclass(frozen=True)
class HeunSeries:
    """Immutable power-series coefficients A_0..A_N plus their ScaledSet."""

    coeffs: tuple
    scaled: ScaledSet
    variant: str = VARIANT_DERIVED

    @property
    def n_terms(self) -> int:
        return len(self.coeffs)


@dataclass(frozen=True)
class TruncationDiagnostics:
    """Both polynomial-truncation conditions at order n, reported separately."""

    n: int
    delta3_residual: float
    a_next: float
    is_polynomial: bool


@dataclass(frozen=True)
class BchCanonicalParams:
    """The four canonical biconfluent-Heun arguments, transcribed for export only."""

    bch_alpha: float
    bch_beta: float
    bch_gamma: float
    bch_delta: float


def build_series(scaled: ScaledSet, n_terms: int = DEFAULT_TERMS,
                 variant: str = VARIANT_DERIVED) -> HeunSeries:
    """Build A_0..A_{n_terms-1} from the three-term recurrence.

    variant="literal" reproduces the commonly quoted sign convention instead
    of the re-derived one; it fails the ODE-residual arbiter and exists for
    diagnostics only.
    """
    if n_terms < 2:
        raise ValueError(f"n_terms must be >= 2, got {n_terms}")
    if variant not in (VARIANT_DERIVED, VARIANT_LITERAL):
        raise ValueError(f"unknown variant {variant!r}")
    d1 = scaled.delta1
    d3 = scaled.delta3
    bt = scaled.b_tilde
    K = scaled.constant_term
    a = [0.0] * n_terms
    a[0] = 1.0
    sign = -1.0 if variant == VARIANT_DERIVED else 1.0
    a[1] = sign * K / (2.0 * d1)
    for n in range(0, n_terms - 2):
        # denominator never vanishes: Delta1 >= 1/2 so n+1+2*Delta1 >= 2
        den = (n + 2.0) * (n + 1.0 + 2.0 * d1)
        if variant == VARIANT_DERIVED:
            num = (bt * (n + 1.0) - K) * a[n + 1] + (2.0 * n - d3) * a[n]
        else:
            num = (K - bt * (n + 1.0)) * a[n + 1] - (d3 - 2.0 * n) * a[n]
        nxt = num / den
        if not math.isfinite(nxt) or abs(nxt) > 1e250:
            raise SeriesDivergenceError(f"series coefficient overflow at index {n + 2}")
        a[n + 2] = nxt
    return HeunSeries(tuple(a), scaled, variant)


def leading_coefficients(scaled: ScaledSet) -> tuple:
    """Closed forms of A_1, A_2, A_3 (derived convention), for cross-checks."""
    d1, d3, bt = scaled.delta1, scaled.delta3, scaled.b_tilde
    K = scaled.constant_term
    a1 = -K / (2.0 * d1)
    a2 = ((bt - K) * a1 - d3) / (2.0 * (1.0 + 2.0 * d1))
    a3 = ((2.0 * bt - K) * a2 + (2.0 - d3) * a1) / (3.0 * (2.0 + 2.0 * d1))
    return a1, a2, a3


def _series_sums(series: HeunSeries, chi: np.ndarray) -> tuple:
    """S, S', S'' of the power series on the grid, plus a tail check at max(chi)."""
    c = np.asarray(series.coeffs)
    k = np.arange(len(c))
    s0 = np.polynomial.polynomial.polyval(chi, c)
    s1 = np.polynomial.polynomial.polyval(chi, c[1:] * k[1:])
    s2 = np.polynomial.polynomial.polyval(chi, c[2:] * (k[2:] * (k[2:] - 1.0)))
    xm = float(np.max(np.abs(chi))) if np.size(chi) else 0.0
    terms = np.abs(c) * xm ** k
    scale = max(float(np.max(terms)), float(np.max(np.abs(s0))), 1e-300)
    n = len(c) - 1
    # tail bound: term ratio |A_{k+2} chi^2 / A_k| ~ 2 chi^2 / k for large k
    ratio = 2.0 * xm * xm / max(n, 1)
    converged = ratio < 0.7 and float(np.max(terms[-4:])) < 0.1 * TAIL_RTOL * scale
    return s0, s1, s2, converged


def assemble_f(chi, series: HeunSeries, auto_extend: bool = True) -> float:
    """f(chi) = chi^Delta1 * exp(-(chi^2 + b_tilde chi)/2) * sum A_k chi^k.

    Extends the series (a fresh object; HeunSeries is immutable) up to
    MAX_TERMS when the tail criterion fails at this chi.
    """
    chi = float(chi)
    if chi < 0.0:
        raise ValueError(f"chi must be >= 0, got {chi!r}")
    if chi == 0.0:
        return 0.0
    grid = np.asarray([chi])
    s0, _, _, ok = _series_sums(series, grid)
    if not ok:
        if auto_extend and series.n_terms < MAX_TERMS:
            longer = build_series(series.scaled, min(MAX_TERMS, 2 * series.n_terms), series.variant)
            return assemble_f(chi, longer, auto_extend=True)
        raise SeriesTailError(
            f"series tail above {TAIL_RTOL:g} of the partial sum at chi={chi:g} "
            f"with {series.n_terms} terms"
        )
    sc = series.scaled
    pre = chi**sc.delta1 * math.exp(-(chi * chi + sc.b_tilde * chi) / 2.0)
    return pre * float(s0[0])


def assemble_radial(rho: float, series: HeunSeries, case: MassCase, reduced: ReducedSet) -> float:
    """Radial wave function R(rho) for the given mass case.

    Exponential:    R = rho^(-1/2) exp(-a rho/2) f(eps^(1/4) rho)
    Inverse-square: R = rho^(-3/2) f(eps^(1/4) rho)

    Overall normalization is not fixed (A_0 = 1 convention).
    """
    rho = float(rho)
    if rho <= 0.0:
        raise ValueError(f"rho must be > 0, got {rho!r}")
    chi = reduced.eps**0.25 * rho
    f = assemble_f(chi, series)
    if isinstance(case, ExponentialMass):
        return rho**-0.5 * math.exp(-case.a * rho / 2.0) * f
    return rho**-1.5 * f


def ode_residual(series: HeunSeries, reduced: ReducedSet, chi_grid: Sequence[float]) -> float:
    """Max normalized residual of the chi-form radial equation over the grid.

    Evaluates |f'' + Q f| / (1 + |f| + |f''|) with f'' computed analytically
    from the series (no finite differences).  This is the arbiter for the
    recurrence sign conventions.
    """
    chi = np.asarray(list(chi_grid), dtype=float)
    if chi.size == 0:
        raise ValueError("chi_grid must not be empty")
    if np.any(chi <= 0.0):
        raise ValueError("chi_grid points must be > 0")
    sc = series.scaled
    s0, s1, s2, ok = _series_sums(series, chi)
    if not ok:
        if series.n_terms < MAX_TERMS:
            longer = build_series(sc, min(MAX_TERMS, 2 * series.n_terms), series.variant)
            return ode_residual(longer, reduced, chi_grid)
        raise SeriesTailError(f"series tail not converged on the grid with {series.n_terms} terms")
    d1, bt = sc.delta1, sc.b_tilde
    pre = chi**d1 * np.exp(-(chi * chi + bt * chi) / 2.0)
    g = d1 / chi - chi - bt / 2.0
    f = pre * s0
    fpp = pre * ((g * g - d1 / chi**2 - 1.0) * s0 + 2.0 * g * s1 + s2)
    root_eps = math.sqrt(reduced.eps)
    q4 = reduced.eps**0.25
    Q = (reduced.xi / root_eps - (reduced.alpha_sq - 0.25) / chi**2
         + (reduced.c1 / q4) / chi - (reduced.b1 / q4**3) * chi - chi * chi)
    resid = np.abs(fpp + Q * f) / (1.0 + np.abs(f) + np.abs(fpp))
    return float(np.max(resid))


def truncation_check(series: HeunSeries, n: int, tol_delta: float = 1e-9,
                     tol_a: float = 1e-9) -> TruncationDiagnostics:
    """Report Delta3 - 2n and A_{n+1}; polynomial truncation needs both ~ 0."""
    if not 0 <= n < series.n_terms - 1:
        raise ValueError(f"n must satisfy 0 <= n < {series.n_terms - 1}, got {n}")
    d3_res = series.scaled.delta3 - 2.0 * n
    a_next = series.coeffs[n + 1]
    return TruncationDiagnostics(
        n=n,
        delta3_residual=d3_res,
        a_next=a_next,
        is_polynomial=bool(abs(d3_res) <= tol_delta and abs(a_next) <= tol_a),
    )


def bch_canonical_params(E: float, p: PotentialParams, a: float, f: FieldConfig,
                         q: QuantumNumbers, k: PhysicalConstants) -> BchCanonicalParams:
    """Canonical biconfluent-Heun argument list for the exponential-mass solution.

    Verbatim transcription of the closed-form argument list; used only for
    reporting/export, never evaluated as a special function (the series built
    here IS the solution).
    """
    etas = eta_exponential(E, p, a, f, q, k)
    eps = -etas.eta5
    if eps <= 0.0:
        raise ScalingError(f"eps = {eps!r} <= 0 at E = {E!r}")
    d = effective_delta(q, f, k)
    h2 = k.hbar**2
    two_m_lam = 2.0 * k.m0 * p.lam / h2
    inner = two_m_lam * (-E + 2.0 * p.V1 + 3.0 * p.V2 + p.lam * p.V3 / 2.0)
    cyc = k.e_charge * f.B / (k.hbar * k.c_light)
    arg1 = d
    arg2 = inner / eps**0.75
    arg3 = (-cyc * d + 2.0 * k.m0 / h2 * (E - p.V1 - p.V2 + p.lam * p.V3)
            - p.lam**2 / 4.0 + inner**2 / (4.0 * eps**1.5))
    arg4 = (-4.0 * k.m0 * p.V3 / h2 - p.lam) / eps**0.25
    return BchCanonicalParams(arg1, arg2, arg3, arg4)


def bch_params_for(sys: SystemParams, E: float) -> BchCanonicalParams:
    if not isinstance(sys.mass, ExponentialMass):
        raise ParameterError("canonical biconfluent-Heun arguments exist only for the exponential mass case")
    return bch_canonical_params(E, sys.potential, sys.mass.a, sys.fields, sys.quantum, sys.constants)
