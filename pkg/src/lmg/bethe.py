"""Pair-energy (pairon) equations of the LMG model and their numerical solution.

Each eigenstate of an (M, nu_a, nu_b) sector is labeled by M real spectral
parameters E_1..E_M solving the coupled rational equations

    0 = 1 - eta [ g N (nu_a - nu_b)(1 + s E_l^2) + 2 V E_l (1 + nu_a + nu_b) ]
            / ( N (E_l^2 - eta^2) )
          + 2 g  sum_{n != l} (1 + s E_l E_n) / (E_l - E_n)

with simple poles at E = +/-eta and at coinciding parameters.  The sector
carries exactly M+1 distinct real solution sets in the trigonometric regime
(V^2 > W^2); each set yields one eigenvalue through a closed formula.

The solver runs damped Newton iterations from a deterministic multi-start
family, then completes any missing solution sets by inverting the pair
structure of the corresponding exact eigenvectors (the ladder amplitudes are
fixed multiples of the elementary symmetric polynomials in the Moebius
variables x_l = (E_l + eta)/(E_l - eta), so roots of one polynomial recover
the E_l).  Every returned list is validated against exact diagonalization.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    ComplexPaironsError,
    IncompleteSolveError,
    InvalidArgumentError,
    SingularityError,
    UnsupportedRegimeError,
)
from .model import ModelParams, SectorConfig, sector_spectrum

__all__ = [
    "SolverOptions",
    "SpectralSolution",
    "residual",
    "eigenvalue",
    "solve_m1",
    "solve_m2_simplified",
    "solve_bethe",
]


@dataclass(frozen=True)
class SolverOptions:
    """Tunables for :func:`solve_bethe`.

    ``tol`` bounds the accepted residual norm, ``match_tol`` the agreement
    with the diagonalization oracle, ``dedup_tol`` the relative tolerance for
    identifying two solution sets.  ``start_budget_factor`` caps the total
    Newton attempts at factor*(M+1); ``multistart_attempts`` limits the
    initial multi-start phase before eigenvector inversion completes the set
    (defaults to 8*(M+1)).
    """

    tol: float = 1e-10
    match_tol: float = 1e-8
    guard: float = 1e-8
    dedup_tol: float = 1e-6
    start_budget_factor: int = 50
    multistart_attempts: int | None = None
    max_iterations: int = 60
    seed: int = 0
    allow_hyperbolic: bool = False


@dataclass(frozen=True)
class SpectralSolution:
    """One converged solution set and the eigenvalue it generates.

    ``energies`` is sorted ascending (solution sets are unordered);
    ``index`` labels the solution 1..M+1 by increasing eigenvalue.
    """

    config: SectorConfig
    params: ModelParams
    energies: tuple[float, ...]
    omega: float
    residual_norm: float
    index: int = 0


def _pole_violation(energies: np.ndarray, eta: float, guard: float) -> str | None:
    """Describe the first parameter sitting on a pole E = +/-eta, if any."""
    for l, e in enumerate(energies):
        for sign, name in ((1.0, "+eta"), (-1.0, "-eta")):
            if abs(e - sign * eta) < guard:
                return f"E[{l}]={e:.6g} within {guard:g} of {name}"
    return None


def _collision_violation(energies: np.ndarray, guard: float) -> str | None:
    """Describe the first pair of coinciding parameters, if any."""
    for l, n_ in itertools.combinations(range(energies.size), 2):
        if abs(energies[l] - energies[n_]) < guard:
            return f"E[{l}] and E[{n_}] closer than {guard:g}"
    return None


def _check_regular(energies: np.ndarray, eta: float, guard: float) -> str | None:
    return _pole_violation(energies, eta, guard) or _collision_violation(energies, guard)


def _is_regular(energies: np.ndarray, eta: float, guard: float) -> bool:
    """Fast pole/collision guard used inside the Newton loop."""
    if np.min(np.abs(energies - eta)) < guard or np.min(np.abs(energies + eta)) < guard:
        return False
    if energies.size > 1:
        gaps = np.diff(np.sort(energies))
        if gaps[np.argmin(gaps)] < guard:
            return False
    return True


def _residual_raw(energies, config, params):
    e = np.asarray(energies, dtype=float)
    nu_a, nu_b, n = config.nu_a, config.nu_b, params.n
    g, eta, s, v = params.g, params.eta, params.s, params.v
    single = g * n * (nu_a - nu_b) * (1.0 + s * e * e) + 2.0 * v * e * (1 + nu_a + nu_b)
    out = 1.0 - eta * single / (n * (e * e - eta * eta))
    if e.size > 1:
        diff = e[:, None] - e[None, :]
        np.fill_diagonal(diff, np.inf)
        out = out + 2.0 * g * ((1.0 + s * e[:, None] * e[None, :]) / diff).sum(axis=1)
    return out


def _jacobian(energies, config, params):
    e = np.asarray(energies, dtype=float)
    m = e.size
    nu_a, nu_b, n = config.nu_a, config.nu_b, params.n
    g, eta, s, v = params.g, params.eta, params.s, params.v
    single = g * n * (nu_a - nu_b) * (1.0 + s * e * e) + 2.0 * v * e * (1 + nu_a + nu_b)
    dsingle = 2.0 * g * n * s * (nu_a - nu_b) * e + 2.0 * v * (1 + nu_a + nu_b)
    pole = e * e - eta * eta
    jac = np.zeros((m, m))
    np.fill_diagonal(jac, -eta * (dsingle * pole - 2.0 * e * single) / (n * pole * pole))
    if m > 1:
        diff = e[:, None] - e[None, :]
        np.fill_diagonal(diff, 1.0)
        pair = 1.0 + s * e[:, None] * e[None, :]
        own = (s * e[None, :] * diff - pair) / (diff * diff)
        other = (s * e[:, None] * diff + pair) / (diff * diff)
        np.fill_diagonal(own, 0.0)
        np.fill_diagonal(other, 0.0)
        jac[np.arange(m), np.arange(m)] += 2.0 * g * own.sum(axis=1)
        jac += 2.0 * g * other
    return jac


def residual(energies, config: SectorConfig, params: ModelParams) -> np.ndarray:
    """Residual of the pair-energy equations, one component per parameter."""
    e = np.asarray(energies, dtype=float)
    if e.ndim != 1 or e.size != config.m:
        raise InvalidArgumentError(f"expected {config.m} spectral parameters, got {e.shape}")
    if params.rational:
        raise UnsupportedRegimeError("pair-energy equations are undefined at V^2 = W^2")
    problem = _check_regular(e, params.eta, 1e-8)
    if problem is not None:
        raise SingularityError(problem)
    return _residual_raw(e, config, params)


def eigenvalue(energies, config: SectorConfig, params: ModelParams) -> float:
    """Eigenvalue omega generated by a solution set (in units of the gap)."""
    if params.rational:
        raise UnsupportedRegimeError("eigenvalue formula is undefined at V^2 = W^2")
    e = np.asarray(energies, dtype=float)
    nu_a, nu_b, n = config.nu_a, config.nu_b, params.n
    g, eta, s, v, w = params.g, params.eta, params.s, params.v, params.w
    base = (w * (nu_a + nu_b + 2 * nu_a * nu_b) + n * (nu_b - nu_a)) / (2 * n)
    if e.size == 0:
        return base
    problem = _pole_violation(e, eta, 1e-12)
    if problem is not None:
        raise SingularityError(problem)
    terms = (g * n * (1 + nu_a + nu_b) * (1.0 + s * e * e) - 2.0 * v * (nu_b - nu_a) * e) / (
        e * e - eta * eta
    )
    return float(base - (eta / n) * terms.sum())


def _require_solvable(config: SectorConfig, params: ModelParams, opts: SolverOptions):
    if config.n != params.n:
        raise InvalidArgumentError(
            f"sector describes {config.n} particles, params describe {params.n}"
        )
    if params.rational:
        raise UnsupportedRegimeError(
            "rational instance (V^2 = W^2): eta is undefined, use exact_spectrum"
        )
    if params.s < 0 and not opts.allow_hyperbolic:
        raise UnsupportedRegimeError(
            "hyperbolic instance (V^2 < W^2): pass allow_hyperbolic=True to attempt "
            "a real-parameter solve"
        )
    if config.m > 0 and params.v == 0.0:
        raise UnsupportedRegimeError(
            "V = 0 leaves the Fock basis diagonal; pair energies degenerate onto the poles"
        )


def _finalize(sets, config, params, opts) -> list[SpectralSolution]:
    sols = []
    for energies in sets:
        e = np.asarray(energies)
        rn = float(np.max(np.abs(_residual_raw(e, config, params)))) if e.size else 0.0
        sols.append(
            SpectralSolution(
                config=config,
                params=params,
                energies=tuple(float(x) for x in e),
                omega=eigenvalue(e, config, params),
                residual_norm=rn,
                index=0,
            )
        )
    sols.sort(key=lambda s: s.omega)
    return [replace(s, index=j + 1) for j, s in enumerate(sols)]


def _same_set(a, b, rel):
    return all(
        math.isclose(x, y, rel_tol=rel, abs_tol=rel * 1e-3) for x, y in zip(a, b)
    )


def _newton(start, config, params, opts) -> np.ndarray | None:
    e = np.array(start, dtype=float)
    guard = opts.guard
    with np.errstate(all="ignore"):
        if not np.all(np.isfinite(e)) or not _is_regular(e, params.eta, guard):
            return None
        res = _residual_raw(e, config, params)
        if not np.all(np.isfinite(res)):
            return None
        for _ in range(opts.max_iterations):
            rmax = np.max(np.abs(res))
            if rmax <= opts.tol:
                return np.sort(e)
            if rmax > 1e8:
                return None
            try:
                step = np.linalg.solve(_jacobian(e, config, params), res)
            except np.linalg.LinAlgError:
                return None
            if not np.all(np.isfinite(step)):
                return None
            best = res @ res
            lam = 1.0
            for _ in range(12):
                trial = e - lam * step
                if _is_regular(trial, params.eta, guard):
                    trial_res = _residual_raw(trial, config, params)
                    if np.all(np.isfinite(trial_res)) and trial_res @ trial_res < best:
                        e, res = trial, trial_res
                        break
                lam *= 0.5
            else:
                return None
        if np.max(np.abs(res)) <= opts.tol:
            return np.sort(e)
    return None


def _ladder_weights(config: SectorConfig) -> np.ndarray:
    """sqrt of the bosonic ladder factors multiplying each symmetric polynomial."""
    m, nu_a, nu_b = config.m, config.nu_a, config.nu_b
    return np.array(
        [
            math.sqrt(
                math.factorial(nu_a + 2 * (m - k))
                / math.factorial(nu_a)
                * math.factorial(nu_b + 2 * k)
                / math.factorial(nu_b)
            )
            for k in range(m + 1)
        ]
    )


def _invert_pairons(vec: np.ndarray, config: SectorConfig, params: ModelParams):
    """Candidate pair energies from one exact eigenvector's ladder amplitudes.

    Returns (real_energies, None) or (None, complex_roots) when the recovered
    Moebius roots leave the real axis.
    """
    m = config.m
    weights = _ladder_weights(config)
    scaled = vec / weights
    # Anchor the ratio ladder at the larger end: end components of a Jacobi
    # eigenvector never vanish exactly, but one end can underflow for extreme
    # spectra.  Anchoring at the top recovers the reciprocal Moebius roots.
    if abs(scaled[0]) >= abs(scaled[-1]):
        elem = scaled / scaled[0]
        sign = 1.0
    else:
        elem = scaled[::-1] / scaled[-1]
        sign = -1.0
    coeffs = [(-1) ** k * elem[k] for k in range(m + 1)]
    roots = np.roots(coeffs)
    if np.any(np.abs(roots - 1.0) < 1e-12):
        return None, None
    energies = sign * params.eta * (roots + 1.0) / (roots - 1.0)
    if np.max(np.abs(energies.imag)) > 1e-6 * (1.0 + np.max(np.abs(energies.real))):
        return None, energies
    return np.sort(energies.real), None


def _start_points(config: SectorConfig, params: ModelParams, opts: SolverOptions):
    """Deterministic seed generator: analytic roots, pole-interval grid, jitter."""
    m = config.m
    abs_eta = abs(params.eta)
    if m == 1:
        try:
            for sol in solve_m1(config, params):
                yield np.array(sol.energies)
        except (UnsupportedRegimeError, IncompleteSolveError):
            pass
    if m == 2 and params.w == 0.0 and config.nu_a == config.nu_b:
        sol = solve_m2_simplified(config, params)
        yield np.array(sol.energies)
    inner = np.linspace(-0.9 * abs_eta, 0.9 * abs_eta, 5)
    outer = np.array([-2.5, -1.4, -1.1, 1.1, 1.4, 2.5]) * abs_eta
    pool = np.concatenate([inner, outer, np.array([0.5, -0.5]) * (1.0 + abs(params.v))])
    if m == 1:
        for p in pool:
            yield np.array([p])
        return
    rng = np.random.default_rng(opts.seed)
    with_replacement = m > pool.size  # jitter separates any repeats
    while True:
        pick = rng.choice(pool, size=m, replace=with_replacement)
        yield np.sort(pick * (1.0 + 0.05 * rng.standard_normal(m)))


def solve_m1(config: SectorConfig, params: ModelParams) -> list[SpectralSolution]:
    """Both analytic roots of the single-pair (M = 1) quadratic.

    Clearing denominators of the M = 1 residual gives
    A E^2 + B E + C = 0 with A = 1 - eta g s (nu_a - nu_b),
    B = -2 eta V (1 + nu_a + nu_b)/N, C = -eta^2 - eta g (nu_a - nu_b).
    """
    if config.m != 1:
        raise InvalidArgumentError(f"solve_m1 requires M = 1, got M = {config.m}")
    if params.rational:
        raise UnsupportedRegimeError("analytic roots are undefined at V^2 = W^2")
    if config.n != params.n:
        raise InvalidArgumentError("sector/params particle mismatch")
    nu_a, nu_b = config.nu_a, config.nu_b
    g, eta, s, v, n = params.g, params.eta, params.s, params.v, params.n
    a = 1.0 - eta * g * s * (nu_a - nu_b)
    b = -2.0 * eta * v * (1 + nu_a + nu_b) / n
    c = -eta * eta - eta * g * (nu_a - nu_b)
    if abs(a) < 1e-12 * max(1.0, abs(b), abs(c)):
        raise IncompleteSolveError(
            "leading coefficient vanished: one pair energy diverges (V + W near N)",
            found=1,
            needed=2,
        )
    disc = b * b - 4.0 * a * c
    if disc < 0:
        raise ComplexPaironsError(f"M=1 quadratic has complex roots (discriminant {disc:g})")
    sq = math.sqrt(disc)
    roots = sorted([(-b - sq) / (2 * a), (-b + sq) / (2 * a)])
    return _finalize([np.array([r]) for r in roots], config, params, SolverOptions())


def solve_m2_simplified(config: SectorConfig, params: ModelParams) -> SpectralSolution:
    """The decoupled analytic solution set for M = 2, W = 0, nu_a = nu_b.

    The two pair energies are the roots of E^2 + 2V(1+2nu) E / N - 1 = 0,
    whose product is -1; the cross term of the coupled equations then cancels
    and each equation reduces to that same quadratic.  This is one of the
    three solution sets of the sector (the remaining two stay coupled).
    """
    if config.m != 2:
        raise InvalidArgumentError(f"simplified M = 2 form requires M = 2, got {config.m}")
    if params.w != 0.0 or config.nu_a != config.nu_b:
        raise UnsupportedRegimeError(
            "simplified M = 2 form requires W = 0 and nu_a = nu_b; use solve_bethe"
        )
    if config.n != params.n:
        raise InvalidArgumentError("sector/params particle mismatch")
    nu, v, n = config.nu_a, params.v, params.n
    sq = math.sqrt(v * v * (1 + 2 * nu) ** 2 + n * n)
    pair = np.array([(-v * (1 + 2 * nu) - sq) / n, (-v * (1 + 2 * nu) + sq) / n])
    sol = _finalize([pair], config, params, SolverOptions())[0]
    vals, _ = sector_spectrum(config, params)
    rank = int(np.argmin(np.abs(vals - sol.omega))) + 1
    return replace(sol, index=rank)


def solve_bethe(
    config: SectorConfig, params: ModelParams, options: SolverOptions | None = None
) -> list[SpectralSolution]:
    """All M+1 solution sets of a sector, validated against diagonalization.

    Multi-start damped Newton supplies the bulk of the sets; any eigenvalue
    still missing is targeted directly by inverting its exact eigenvector
    into seed pair energies.  Raises IncompleteSolveError when the validated
    list cannot be completed and ComplexPaironsError when the missing sets
    are complex (hyperbolic regime).
    """
    opts = options or SolverOptions()
    _require_solvable(config, params, opts)
    m = config.m
    exact_vals, exact_vecs = sector_spectrum(config, params)

    if m == 0:
        sols = _finalize([np.empty(0)], config, params, opts)
        if abs(sols[0].omega - exact_vals[0]) > opts.match_tol:
            raise IncompleteSolveError(
                f"empty-sector eigenvalue {sols[0].omega:.12g} does not match "
                f"diagonalization {exact_vals[0]:.12g}",
                found=0,
                needed=1,
            )
        return sols

    found: list[np.ndarray] = []

    def add(candidate: np.ndarray) -> None:
        for known in found:
            if _same_set(candidate, known, opts.dedup_tol):
                return
        found.append(candidate)

    budget = opts.start_budget_factor * (m + 1)
    primary = opts.multistart_attempts
    if primary is None:
        primary = 8 * (m + 1)
    primary = min(primary, budget)

    attempts = 0
    stall = 0
    stall_limit = 3 * (m + 1)
    for start in _start_points(config, params, opts):
        if attempts >= primary or stall >= stall_limit or len(found) == m + 1:
            break
        attempts += 1
        before = len(found)
        solved = _newton(start, config, params, opts)
        if solved is not None:
            add(solved)
        stall = 0 if len(found) > before else stall + 1

    complex_roots = None
    if len(found) < m + 1:
        matched = np.zeros(exact_vals.size, dtype=bool)
        for e in found:
            j = int(np.argmin(np.abs(exact_vals - eigenvalue(e, config, params))))
            matched[j] = True
        for j in np.flatnonzero(~matched):
            if attempts >= budget:
                break
            attempts += 1
            seed, croots = _invert_pairons(exact_vecs[:, j], config, params)
            if seed is None:
                if croots is not None:
                    complex_roots = croots
                continue
            solved = _newton(seed, config, params, opts)
            if solved is not None:
                add(solved)

    if len(found) < m + 1:
        if complex_roots is not None:
            raise ComplexPaironsError(
                f"non-real pair energies detected (e.g. {complex_roots[0]:.6g}); "
                f"only {len(found)} of {m + 1} real solution sets exist"
            )
        raise IncompleteSolveError(
            f"found {len(found)} of {m + 1} solution sets within budget",
            found=len(found),
            needed=m + 1,
        )

    sols = _finalize(found, config, params, opts)
    got = np.array([s.omega for s in sols])
    if np.max(np.abs(got - exact_vals)) > opts.match_tol:
        raise IncompleteSolveError(
            "solution eigenvalues do not reproduce the diagonalization oracle "
            f"(max deviation {np.max(np.abs(got - exact_vals)):.3g})",
            found=len(found),
            needed=m + 1,
        )
    return sols
