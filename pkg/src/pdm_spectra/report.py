"""Builds DISCREPANCIES.md: every place the literal closed forms of this model
disagree with re-derivation, with numbers.

The library deliberately implements two channels: the closed forms as
commonly quoted ("literal") and independently re-derived counterparts, with a
shooting-method oracle arbitrating both.  This module aggregates the findings
into one deterministic human-readable document:

  * the series-recurrence sign convention (literal fails the ODE residual),
  * the eigenvalue condition versus the derived truncation condition versus
    the oracle, for both mass cases,
  * the partition-function prefactor and the internal-energy factor-of-two,
  * the sum-versus-integral approximation quality,
  * every figure-trend claim whose computed verdict is "disagree".
"""

from __future__ import annotations

import math
from typing import List, Optional

import numpy as np

from . import figures, heun, oracle, spectra, thermo
from .model import ScaledSet, reduce_etas, eta_for, scaled_chain
from .specfun import dawson, erf, erfi

_REFERENCE_SCALED = ScaledSet(alpha=1.3, eta_s=0.7 + 0.9 * 1.8, b_tilde=0.9,
                              delta1=1.8, delta2=None, delta3=3.1)
# constant term K = eta_s - b_tilde*delta1 = 0.7 for the set above


def _fmt(v: float, digits: int = 12) -> str:
    return f"{v:.{digits}g}"


def _series_section() -> List[str]:
    lines = ["## Series recurrence sign convention", ""]
    sc = _REFERENCE_SCALED
    grid = np.linspace(0.15, 2.0, 23)
    reduced = _reduced_from_scaled(sc)
    res_derived = heun.ode_residual(heun.build_series(sc, 80, heun.VARIANT_DERIVED), reduced, grid)
    res_literal = heun.ode_residual(heun.build_series(sc, 80, heun.VARIANT_LITERAL), reduced, grid)
    lines += [
        "The three-term recurrence used here is re-derived by substituting the",
        "series ansatz into the transformed radial equation; the commonly quoted",
        "recurrence flips the sign of the constant term and of the A_{n+1}",
        "coupling.  Normalized ODE residuals on a reference coefficient set",
        f"(alpha = {sc.alpha:g}, b_tilde = {sc.b_tilde:g}, eta_s = {sc.eta_s:g}, "
        f"Delta3 = {sc.delta3:g}):",
        "",
        f"* derived convention: max residual = {_fmt(res_derived, 3)}",
        f"* literal convention: max residual = {_fmt(res_literal, 3)}",
        "",
        "The derived convention solves the equation to solver precision; the",
        "literal one does not solve it at all.  The literal variant is retained",
        "behind a flag purely for this comparison.",
        "",
        "The leading coefficient illustrates the flip: the quoted closed form",
        "A_1 = +K/(2 Delta1) (K the constant term) versus the derived",
        "A_1 = -K/(2 Delta1).",
        "",
    ]
    return lines


def _reduced_from_scaled(sc: ScaledSet):
    # embed with eps = 1 so chi == rho: xi = Delta3 - b_tilde^2/4 + 2 Delta1 + 1
    from .model import ReducedSet
    xi = sc.delta3 - sc.b_tilde**2 / 4.0 + 2.0 * sc.delta1 + 1.0
    return ReducedSet(xi=xi, alpha_sq=sc.alpha**2, c1=sc.eta_s, b1=sc.b_tilde, eps=1.0)


def _exp_spectra_section() -> List[str]:
    sys = figures.EXP_DEFAULTS
    lines = ["## Exponential-mass spectrum: literal condition vs derived condition vs oracle", ""]
    lit = spectra.solve_exponential_levels(sys, -30.0, 10.0, mode=spectra.MODE_LITERAL)
    der = spectra.solve_exponential_levels(sys, -30.0, 10.0, mode=spectra.MODE_DERIVED)
    lines.append(f"Reference parameters: B = {sys.fields.B}, Phi = {sys.fields.Phi_AB}, "
                 f"V1 = V2 = V3 = {sys.potential.V1}, lambda = {sys.potential.lam}, "
                 f"a = {sys.mass.a}, n = {sys.quantum.n}, m = {sys.quantum.m}.")
    lines.append("")
    lines.append(f"* literal-condition roots: {[_fmt(l.E) for l in lit.levels]}")
    lines.append(f"* derived-condition roots: {[_fmt(l.E) for l in der.levels]}")
    prob = oracle.build_problem(sys)
    bound = spectra.exp_realness_bound(sys)
    window = (-30.0, bound - 0.1)
    levels = oracle.find_bound_states(prob, window, max_states=4, n_scan=40, rtol=1e-8)
    if levels:
        lines.append(f"* shooting-oracle eigenvalues in [{window[0]:g}, {window[1]:.4g}] "
                     f"(enumerated by node count): {[_fmt(l.E) for l in levels]}")
    else:
        lines.append(f"* shooting oracle: no bound state in [{window[0]:g}, {window[1]:.4g}] "
                     "(the integrated equation has no classically allowed region there, "
                     "so neither condition's roots are eigenvalues of it)")
    lines.append("")
    if lit.levels:
        e0 = lit.levels[0].E
        sc = scaled_chain(sys, e0)
        series = heun.build_series(sc, 80)
        diag = heun.truncation_check(series, sys.quantum.n)
        lines += [
            "At the first literal root the polynomial-truncation conditions read:",
            "",
            f"* Delta3 - 2n = {_fmt(diag.delta3_residual, 6)} "
            "(the literal condition does NOT enforce the derived index condition),",
            f"* A_(n+1) = {_fmt(diag.a_next, 6)} "
            "(the coefficient-vanishing condition is not enforced by either closed form).",
            "",
            "The quoted spectra therefore satisfy neither truncation requirement of",
            "the series solution; they are necessary-style conditions only.  The",
            "derived-condition roots satisfy Delta3 = 2n by construction but still",
            "leave A_(n+1) free.",
            "",
        ]
    return lines


def _invsq_spectra_section() -> List[str]:
    sys = figures.INVSQ_DEFAULTS
    lines = ["## Inverse-square-mass spectrum: closed form vs oracle", ""]
    lv = spectra.inverse_square_level(sys)
    lines.append(f"Reference parameters: B = {sys.fields.B}, Phi = {sys.fields.Phi_AB}, "
                 f"V1 = V2 = {sys.potential.V1}, lambda = {sys.potential.lam}, "
                 f"a = {sys.mass.a}, n = {sys.quantum.n}.")
    lines.append("")
    lines.append(f"* closed-form level (n = {sys.quantum.n}): E = {_fmt(lv.E)}")
    der = spectra.inverse_square_level_derived(sys)
    if der is None:
        lines.append("* derived truncation condition: no level with a regular origin "
                     "exponent exists at these parameters (alpha_n < 0 for every n >= 0)")
    else:
        lines.append(f"* derived-condition level: E = {_fmt(der.E)}")
    rep = oracle.compare_with_closed_form(sys, "invsq-closed", (-10.0, 2.44),
                                          max_states=3, n_scan=36, rtol=1e-8)
    lines.append(f"* shooting oracle: {rep.oracle_count} bound level(s) in "
                 f"[{rep.window[0]:g}, {rep.window[1]:g}]; the closed form supplies "
                 f"{rep.formula_count} value(s) there")
    lines.append("")
    if rep.rows:
        lines.append("| # | E_oracle | E_formula | abs gap |")
        lines.append("|---|----------|-----------|---------|")
        for r in rep.rows:
            lines.append(f"| {r.index} | {_fmt(r.e_oracle, 10)} | {_fmt(r.e_formula, 10)} | "
                         f"{_fmt(r.abs_gap, 4)} |")
        lines.append("")
    lines += [
        "Gaps (including the extreme case of closed-form values with no bound",
        "state at all) are expected: the closed form enforces only the index",
        "condition, uses alpha^2 = 3/4 - eta2 where matching the normal form",
        "requires alpha^2 = 1 - eta2, and carries a b1^2 term whose scaling",
        "disagrees with the derived truncation condition (b1^2 vs b1^2/eps).",
        "At these reference parameters the integrated radial equation has no",
        "classically allowed region at the closed-form energies, so they do",
        "not correspond to eigenvalues of the equation they were derived from.",
        "",
    ]
    return lines


def _thermo_section() -> List[str]:
    sys = figures.THERMO_DEFAULTS
    T = figures.THERMO_DEFAULT_T
    p = thermo.thermo_params(sys, T)
    z = thermo.partition_integral(p)
    z_dropped = math.sqrt(math.pi) / (2.0 * math.sqrt(p.beta)) * erfi(p.theta).value
    u = thermo.internal_energy(p)
    f, s = thermo.entropy_and_free_energy(p)
    f_dropped = -math.log(z_dropped) / p.beta
    s_dropped = p.k_B * math.log(z_dropped) + p.k_B * p.beta * u
    # centered finite difference of ln Z in beta as the defining identity
    h = 1e-6 * p.beta
    def lnz_at(beta: float) -> float:
        th = p.zeta * math.sqrt(beta) / p.tau
        return math.log(p.tau / math.sqrt(beta) * math.sqrt(math.pi) / 2.0 * erfi(th).value)
    u_fd = -(lnz_at(p.beta + h) - lnz_at(p.beta - h)) / (2.0 * h)
    cv = thermo.specific_heat(p)
    cv_naive = p.k_B * p.beta * u  # differentiating only the explicit 1/beta factors
    lines = [
        "## Thermodynamics: prefactor, factor of two, and approximation quality", "",
        f"Reference state: a = {sys.mass.a}, B = {sys.fields.B}, Phi = {sys.fields.Phi_AB}, "
        f"lambda = {sys.potential.lam}, V1 = V2 = {sys.potential.V1}, m = {sys.quantum.m}, "
        f"T = {T} (zeta = {_fmt(p.zeta, 10)}, theta = {_fmt(p.theta, 10)}).",
        "",
        "### Partition-function prefactor",
        "",
        "The integral reduction gives Z = gamma*(sqrt(pi)/2)*erfi(theta) with",
        "gamma = tau/sqrt(beta); the commonly quoted form drops the factor tau.",
        "U and C_v are unaffected (the dropped factor is beta-independent), but",
        "F and S shift:",
        "",
        f"* retained: Z = {_fmt(z)}, F = {_fmt(f)}, S = {_fmt(s)}",
        f"* dropped:  Z = {_fmt(z_dropped)}, F = {_fmt(f_dropped)}, S = {_fmt(s_dropped)}",
        f"* shift: Delta F = {_fmt(f - f_dropped, 6)} = ln(tau)/beta with tau = {p.tau}",
        "",
        "### Internal energy factor of two",
        "",
        "Two closed forms are commonly printed for U; they differ by an overall",
        "factor 2.  Against the defining identity U = -d ln Z/d beta:",
        "",
        f"* finite-difference oracle: U = {_fmt(u_fd, 10)}",
        f"* implemented form 1/(2 beta) - theta/(2 beta Dawson(theta)): U = {_fmt(u, 10)}",
        f"* doubled variant (1/beta)(1 - theta/Dawson(theta)): U = {_fmt(2 * u, 10)}",
        "",
        "The implemented form matches the identity; the doubled variant is the",
        "misprint.",
        "",
        "### Specific heat",
        "",
        "Differentiating U while ignoring the temperature dependence of the",
        "integration limit theta(beta) gives k_B*beta*U instead of the chain-rule",
        "result:",
        "",
        f"* chain-rule closed form (matches k_B beta^2 d2 lnZ/dbeta2): C_v = {_fmt(cv, 10)}",
        f"* theta-frozen variant k_B*beta*U: {_fmt(cv_naive, 10)}",
        "",
        "### Sum-versus-integral approximation",
        "",
    ]
    gaps = []
    for zeta_i, theta_i in ((20.0, 0.05), (20.0, 0.5), (20.0, 1.0), (25.0, 1.0), (100.0, 1.0)):
        gaps.append((zeta_i, theta_i, _partition_gap(zeta_i, theta_i)))
    lines.append("| zeta | theta | relative gap |")
    lines.append("|------|-------|--------------|")
    for zz, tt, gg in gaps:
        lines.append(f"| {zz:g} | {tt:g} | {gg * 100:.2f}% |")
    lines += [
        "",
        "The documented 5% bound for zeta >= 20 holds at small theta but is",
        "exceeded near theta = 1 for zeta below about 25 (6.0% at zeta = 20,",
        "theta = 1); the boundary effect of the finite sum decays like 1/zeta.",
        "",
    ]
    return lines


def _partition_gap(zeta: float, theta: float) -> float:
    gamma = zeta / theta
    top = int(math.floor(zeta))
    z_sum = math.fsum(math.exp(((n - zeta) / gamma) ** 2) for n in range(0, top + 1))
    z_int = gamma * math.sqrt(math.pi) / 2.0 * erfi(theta).value
    return abs(z_sum - z_int) / z_sum


def _specfun_section() -> List[str]:
    x = 2.0
    daw = dawson(x).value
    ident = daw - math.sqrt(math.pi) / 2.0 * math.exp(-x * x) * erfi(x).value
    lines = [
        "## Special functions", "",
        "No discrepancies: erf, erfi and the Dawson integral satisfy their",
        "defining identities to machine precision (cross-validated against an",
        "adaptive-quadrature oracle in the test suite).  For example at x = 2:",
        "",
        f"* dawson(x) - (sqrt(pi)/2) e^(-x^2) erfi(x) = {_fmt(ident, 3)}",
        f"* erf(2) = {_fmt(erf(2.0).value)}",
        "",
        "Note the convention: all functions are real-valued; the imaginary-unit",
        "manipulation sometimes used to relate erf and erfi is replaced by the",
        "real integral definition of erfi.",
        "",
    ]
    return lines


def _figure_section(results: Optional[List[figures.FigureResult]] = None) -> List[str]:
    if results is None:
        results = figures.evaluate_all()
    lines = ["## Figure-trend verdicts", "",
             "Expected qualitative trends versus computed behavior.  Disagreements",
             "are model findings, not corrected.", "",
             "| figure | claim | expected | observed | verdict |",
             "|--------|-------|----------|----------|---------|"]
    disagreements = 0
    for res in results:
        for v in res.verdicts:
            lines.append(f"| {res.fig_id} | {v.claim_id} | {v.expected} | {v.observed} | {v.verdict} |")
            if v.verdict == "disagree":
                disagreements += 1
    lines += ["", f"Total disagreeing claims: {disagreements}.", ""]
    return lines


def _oracle_section() -> List[str]:
    lines = [
        "## Shooting oracle", "",
        "The oracle integrates the same Laurent coefficients the closed forms",
        "are built from, so the gaps above isolate the algebra of the closed",
        "forms.  Calibration: on the two-dimensional oscillator limit the",
        "solver reproduces (2k + |delta| + 1)*omega; see the acceptance suite",
        "for the tolerances (1e-6 relative).",
        "",
    ]
    return lines


def build_report(figure_results: Optional[List[figures.FigureResult]] = None) -> str:
    """The full DISCREPANCIES.md document (deterministic for fixed inputs)."""
    parts: List[str] = [
        "# Discrepancy report", "",
        "Quantified differences between the literal closed forms of this model",
        "and their independent re-derivations / numerical oracles.  Generated by",
        "`pdm-spectra report`; all numbers are reproducible.", "",
    ]
    parts += _specfun_section()
    parts += _series_section()
    parts += _exp_spectra_section()
    parts += _invsq_spectra_section()
    parts += _thermo_section()
    parts += _figure_section(figure_results)
    parts += _oracle_section()
    return "\n".join(parts) + "\n"
