"""Zero-root Bethe equations: seeds, solver, classification, energies.

The 2N+1 sign-pair representatives z_l satisfy, at each inhomogeneity node
x_j = θ_j + a,

    4 ∏_l (x_j - z_l ± 1/2)(x_j + z_l ± 1/2) = a(x_j) d(x_j - 1),

closed by the value constraint Λ(0) = 2 p q ∏_j (1-θ_j-a)(1+θ_j+a).

Solver internals
----------------
Unknowns are reduced real coordinates per root category: string centers c_m
with imaginary offsets d_m (pairs c_m ± i d_m in the rotated z̄ plane),
boundary-pair heights, the real pair α and the imaginary pair β.  This
enforces sign and conjugation symmetry exactly and makes the system square.

At coalescing inhomogeneity values the pointwise equations degenerate, so
Newton works on confluent residuals: with L(u) the log of the fused-identity
ratio Λ(u)Λ(u-1)/(a(u)d(u-1)), each distinct θ value of multiplicity μ
contributes exp(L(x)) - 1 and the scaled derivatives L^(r)(x) s^r / r!,
r = 1..μ-1.  For distinct θ this reduces to the ordinary equations; at the
homogeneous point it is their exact confluent limit.  The raw ratio
residual is still what gets certified at the end.

Energies come from E = π(1+4ā²) Σ_l [a_1(z̄_l-ā) + a_1(z̄_l+ā)] - c0 and are
defined at the homogeneous point only.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (ConsistencyError, DegeneracyError, DomainError,
                     ParameterError, SolverError)
from .params import ModelParams, c0_constant
from .spectrum import ZeroRootSet, canonical_root, _sorted_roots

REGIMES = ("I", "II", "III", "IV", "V", "VI")

SEED_Z_MAX = 2.0
SEED_ALPHA = 3.0
SEED_BETA_OFFSET = 0.2
JET_SCALE = 0.5


def regime_of(p: float, q_bar: float) -> str:
    """Ground-state regime tag from the half-open boxes in the (p, q̄) plane."""
    if p < 0.0:
        raise DomainError("regime boxes are defined for p >= 0; mirror negative p first")
    if p < 0.5:
        if 0.0 <= q_bar < 0.5:
            return "I"
        if -0.5 <= q_bar < 0.0:
            return "II"
        return "III" if q_bar >= 0.5 else "IV"
    if 0.0 <= q_bar < 0.5:
        return "III"
    if -0.5 <= q_bar < 0.0:
        return "IV"
    return "V" if q_bar >= 0.5 else "VI"


@dataclass(frozen=True)
class PatternSpec:
    """Ground-state root inventory of one regime."""

    n_centers: int              # number of 2-string centers (both signs counted)
    boundary: tuple             # subset of ("p", "q") carrying a boundary pair
    has_alpha: bool
    has_beta: bool


def _min_boundary_tag(params: ModelParams) -> str:
    return "p" if abs(params.p) <= abs(params.q_bar) else "q"


def pattern_spec(regime: str, params: ModelParams) -> PatternSpec:
    two_n = params.two_n
    if regime == "I":
        return PatternSpec(two_n - 2, ("p", "q"), True, False)
    if regime == "II":
        return PatternSpec(two_n - 2, ("p", "q"), False, True)
    if regime == "III":
        return PatternSpec(two_n - 2, (_min_boundary_tag(params),), True, True)
    if regime == "IV":
        return PatternSpec(two_n, (_min_boundary_tag(params),), False, False)
    if regime == "V":
        return PatternSpec(two_n, (), True, False)
    if regime == "VI":
        return PatternSpec(two_n, (), False, True)
    raise ParameterError(f"unknown regime {regime!r}")


def boundary_height(tag: str, params: ModelParams) -> float:
    return (abs(params.p) if tag == "p" else abs(params.q_bar)) + 0.5


@dataclass
class RootPattern:
    """Structural classification of one root set (rotated z̄ plane)."""

    pairs_n2: list = field(default_factory=list)          # string centers (both signs)
    boundary_pairs: list = field(default_factory=list)     # (tag, height)
    real_pair: float | None = None                         # α of the ± real pair
    imaginary_pair: float | None = None                    # β of the ± i β pair
    extra_strings: list = field(default_factory=list)      # (n, center), n > 2
    boundary_strings: list = field(default_factory=list)   # heights 1/2 - |p|, 1/2 - |q̄|
    extra_real: list = field(default_factory=list)         # additional real pairs
    unmatched: list = field(default_factory=list)
    regime: str = "unclassified"


@dataclass
class _Pattern:
    """Reduced solver coordinates: everything is a positive real."""

    centers: np.ndarray          # M independent string centers (> 0)
    heights: np.ndarray          # M string imaginary offsets (≈ 1)
    boundary_tags: tuple         # which boundary pairs are present
    boundary: np.ndarray         # their heights (≈ |p|+1/2, |q̄|+1/2)
    alpha: float | None
    beta: float | None

    def encode(self) -> np.ndarray:
        parts = [self.centers, self.heights, self.boundary]
        if self.alpha is not None:
            parts.append([self.alpha])
        if self.beta is not None:
            parts.append([self.beta])
        return np.concatenate([np.asarray(p, dtype=float) for p in parts])

    def decode(self, x: np.ndarray) -> "_Pattern":
        x = np.abs(np.asarray(x, dtype=float))
        m = len(self.centers)
        nb = len(self.boundary)
        centers = x[:m]
        heights = x[m:2 * m]
        boundary = x[2 * m:2 * m + nb]
        k = 2 * m + nb
        alpha = x[k] if self.alpha is not None else None
        if self.alpha is not None:
            k += 1
        beta = x[k] if self.beta is not None else None
        return _Pattern(centers, heights, self.boundary_tags, boundary, alpha, beta)

    def z_reps(self) -> np.ndarray:
        """Sign-pair representatives in the z variable (z = i z̄)."""
        reps = []
        for c, d in zip(self.centers, self.heights):
            reps.append(1j * c - d)   # z̄ = c + i d
            reps.append(1j * c + d)   # z̄ = c - i d
        for b in self.boundary:
            reps.append(complex(b))   # z̄ = i b
        if self.alpha is not None:
            reps.append(1j * self.alpha)  # z̄ = α
        if self.beta is not None:
            reps.append(complex(self.beta))  # z̄ = i β
        return np.asarray(reps, dtype=complex)

    def root_set(self, two_n: int, residual: float = 0.0) -> ZeroRootSet:
        reps = [canonical_root(z) for z in self.z_reps()]
        return ZeroRootSet(two_n=two_n, z=_sorted_roots(reps), residual=residual)


def seed_roots(regime: str, params: ModelParams, z_max: float = SEED_Z_MAX,
               alpha0: float = SEED_ALPHA, beta_offset: float = SEED_BETA_OFFSET) -> ZeroRootSet:
    """Root-set seed carrying the regime's ground-state inventory."""
    pat = _seed_pattern(regime, params, z_max, alpha0, beta_offset)
    count = len(pat.z_reps())
    if count != params.two_n + 1:
        raise ConsistencyError(
            f"seed inventory for regime {regime} has {count} representatives, "
            f"expected {params.two_n + 1}")
    return pat.root_set(params.two_n)


def _seed_pattern(regime, params, z_max=SEED_Z_MAX, alpha0=SEED_ALPHA,
                  beta_offset=SEED_BETA_OFFSET) -> _Pattern:
    spec = pattern_spec(regime, params)
    m = spec.n_centers // 2
    centers = np.array([z_max * (2 * k - 1) / (2 * m) for k in range(1, m + 1)])
    heights = np.ones(m)
    boundary = np.array([_avoid_half(boundary_height(tag, params))
                         for tag in spec.boundary])
    alpha = alpha0 if spec.has_alpha else None
    beta = None
    if spec.has_beta:
        beta = _avoid_half(min(abs(params.p), abs(params.q_bar)) + beta_offset)
    return _Pattern(centers, heights, spec.boundary, boundary, alpha, beta)


def _avoid_half(value: float, margin: float = 0.02) -> float:
    """Nudge a pure-imaginary seed off z̄ = i/2, a zero of the Λ(0) factors."""
    if abs(value - 0.5) < margin:
        return 0.5 + margin if value >= 0.5 else 0.5 - margin
    return value


# ---------------------------------------------------------------------------
# residuals
# ---------------------------------------------------------------------------

def _log_a(w: complex, params: ModelParams) -> complex:
    s = math.sqrt(1.0 + params.xi ** 2)
    a = params.a
    with np.errstate(divide="ignore", invalid="ignore"):
        val = (np.log(2.0 * w + 2.0) - np.log(2.0 * w + 1.0)
               + np.log(w + params.p) + np.log(s * w + params.q))
        th = params.thetas
        val = val + np.sum(np.log(w + th + a + 1.0) + np.log(w - th - a + 1.0))
    return complex(val)


def _log_ratio(x: complex, z: np.ndarray, params: ModelParams) -> complex:
    """L(x) = log[ Λ(x)Λ(x-1) / (a(x) d(x-1)) ] up to multiples of 2πi."""
    with np.errstate(divide="ignore", invalid="ignore"):
        total = np.log(4.0 + 0.0j) + np.sum(
            np.log(x - z + 0.5) + np.log(x + z + 0.5)
            + np.log(x - z - 0.5) + np.log(x + z - 0.5))
    return complex(total) - _log_a(x, params) - _log_a(-x, params)


def _a_inverse_powers(w: complex, r: int, params: ModelParams) -> complex:
    """A_r(w): the order-r inverse-power sum of log a's singularities."""
    s = math.sqrt(1.0 + params.xi ** 2)
    a = params.a
    th = params.thetas
    with np.errstate(divide="ignore", invalid="ignore"):
        val = (w + 1.0) ** -r - 2.0 ** r * (2.0 * w + 1.0) ** -r
        val += (w + params.p) ** -r + (w + params.q / s) ** -r
        val += np.sum((w + th + a + 1.0) ** -r + (w - th - a + 1.0) ** -r)
    return complex(val)


def _log_ratio_derivative(x: complex, z: np.ndarray, r: int, params: ModelParams) -> complex:
    """L^(r)(x) for r >= 1 (branch-free: a sum of inverse powers)."""
    with np.errstate(divide="ignore", invalid="ignore"):
        s_r = np.sum((x - z + 0.5) ** -r + (x + z + 0.5) ** -r
                     + (x - z - 0.5) ** -r + (x + z - 0.5) ** -r)
    sign = 1.0 if r % 2 == 1 else -1.0  # (-1)^{r-1}
    val = sign * (complex(s_r) - _a_inverse_powers(x, r, params))
    val += _a_inverse_powers(-x, r, params)
    return math.factorial(r - 1) * val


def _lambda_zero_log_defect(z: np.ndarray, params: ModelParams) -> complex:
    """log Λ(0) - log of its required value (zero mod 2πi on shell)."""
    a = params.a
    th = params.thetas
    with np.errstate(divide="ignore", invalid="ignore"):
        log_lhs = np.log(2.0 + 0.0j) + np.sum(np.log(0.5 - z) + np.log(0.5 + z))
        log_rhs = np.log(complex(2.0 * params.p * params.q)) + np.sum(
            np.log(1.0 - th - a) + np.log(1.0 + th + a))
    return complex(log_lhs - log_rhs)


def _lambda_zero_residual(z: np.ndarray, params: ModelParams) -> complex:
    return cmath.exp(_lambda_zero_log_defect(z, params)) - 1.0


def bae_residual(roots: ZeroRootSet, params: ModelParams) -> np.ndarray:
    """Raw certification residual: 2N ratio defects plus the Λ(0) defect.

    Component j is (LHS-RHS)/RHS of the node-j equation; if the RHS
    vanishes the component falls back to the unnormalized difference and a
    warning is emitted.
    """
    z = np.asarray(roots.z, dtype=complex)
    out = np.empty(params.two_n + 1, dtype=complex)
    a = params.a
    for j in range(params.two_n):
        x = params.thetas[j] + a
        log_rhs = _log_a(x, params) + _log_a(-x, params)
        if not (math.isfinite(log_rhs.real) and math.isfinite(log_rhs.imag)):
            warnings.warn("vanishing equation RHS; using unnormalized residual")
            lhs = 4.0 * np.prod([(x - zl + 0.5) * (x + zl + 0.5)
                                 * (x - zl - 0.5) * (x + zl - 0.5) for zl in z])
            out[j] = lhs - cmath.exp(log_rhs)
        else:
            out[j] = cmath.exp(_log_ratio(x, z, params)) - 1.0
    out[params.two_n] = _lambda_zero_residual(z, params)
    return out


def _theta_groups(theta_bar, tol: float = 1e-12):
    """Distinct inhomogeneity values with multiplicities, in sorted order."""
    vals = sorted(theta_bar)
    groups = []
    for v in vals:
        if groups and abs(v - groups[-1][0]) <= tol:
            groups[-1][1] += 1
        else:
            groups.append([v, 1])
    return [(v, m) for v, m in groups]


def _principal_log(value: complex) -> complex:
    """Reduce a log-ratio to the branch nearest zero (solutions sit at 2πik)."""
    k = round(value.imag / (2.0 * math.pi))
    return value - 2.0j * math.pi * k


def _confluent_residual(z: np.ndarray, params: ModelParams, jet_scale: float = JET_SCALE) -> np.ndarray:
    """Solver residual in logarithmic form for dynamic-range control.

    One principal-branch log ratio plus μ-1 scaled jets per distinct θ
    value, then the log-form Λ(0) defect.  The raw ratio form is used only
    for the final certification.
    """
    comps = []
    a = params.a
    for value, mult in _theta_groups(params.theta_bar):
        x = 1j * value + a
        comps.append(_principal_log(_log_ratio(x, z, params)))
        for r in range(1, mult):
            comps.append(_log_ratio_derivative(x, z, r, params)
                         * jet_scale ** r / math.factorial(r))
    comps.append(_principal_log(_lambda_zero_log_defect(z, params)))
    return np.asarray(comps, dtype=complex)


# ---------------------------------------------------------------------------
# damped Gauss-Newton with line search
# ---------------------------------------------------------------------------

def _stack_real(c: np.ndarray) -> np.ndarray:
    return np.concatenate([c.real, c.imag])


def _gauss_newton(pattern: _Pattern, params: ModelParams, tol: float,
                  max_iter: int, history: list, stall_accept: float = 1e-9):
    x = pattern.encode()

    def residual(vec):
        z = pattern.decode(vec).z_reps()
        try:
            r = _confluent_residual(z, params)
        except (ValueError, OverflowError, ZeroDivisionError):
            return None  # root hit a logarithmic singularity; reject the step
        if not np.all(np.isfinite(r.view(float))):
            return None
        return r

    f = residual(x)
    if f is None:
        raise SolverError("seed evaluates to a non-finite residual", history=history)
    fnorm = np.max(np.abs(f))
    best_x, best_norm = x.copy(), fnorm
    for _ in range(max_iter):
        history.append(fnorm)
        if fnorm <= tol:
            break
        jac = _fd_jacobian(residual, x, f)
        step, *_ = np.linalg.lstsq(jac, -_stack_real(f), rcond=None)
        t = 1.0
        accepted = False
        base = np.linalg.norm(_stack_real(f))
        while t >= 2.0 ** -40:
            x_new = x + t * step
            f_new = residual(x_new)
            if f_new is not None and np.linalg.norm(_stack_real(f_new)) <= (1.0 - 1e-4 * t) * base:
                x, f = x_new, f_new
                fnorm = np.max(np.abs(f))
                accepted = True
                break
            t *= 0.5
        if fnorm < best_norm:
            best_x, best_norm = x.copy(), fnorm
        if not accepted:
            if best_norm <= stall_accept:
                x = best_x  # finite-difference noise floor; certification decides
                break
            raise SolverError(
                f"line search stalled at residual {fnorm:.3e}",
                best_roots=pattern.decode(best_x).root_set(params.two_n, best_norm),
                history=history)
    else:
        if best_norm > stall_accept:
            raise SolverError(
                f"no convergence in {max_iter} iterations (residual {fnorm:.3e})",
                best_roots=pattern.decode(best_x).root_set(params.two_n, best_norm),
                history=history)
        x = best_x
    return pattern.decode(x)


def _fd_jacobian(residual, x, f0, rel_step: float = 1e-7):
    m = len(x)
    f0r = _stack_real(f0)
    jac = np.empty((len(f0r), m))
    for i in range(m):
        h = rel_step * (1.0 + abs(x[i]))
        xp = x.copy()
        xp[i] += h
        fp = residual(xp)
        if fp is None:
            xp[i] -= 2.0 * h
            fp = residual(xp)
            if fp is None:
                raise SolverError("non-finite residual while building the Jacobian")
            jac[:, i] = (f0r - _stack_real(fp)) / h
        else:
            jac[:, i] = (_stack_real(fp) - f0r) / h
    return jac


def default_spread_profile(two_n: int, scale: float = 0.1) -> tuple:
    """Spread inhomogeneity profile θ̄_j = scale (j - N - 1/2)."""
    n = two_n // 2
    return tuple(scale * (j - n - 0.5) for j in range(1, two_n + 1))


def _matched_spread_scale(pattern: _Pattern, floor: float = 0.1) -> float:
    """Homotopy start scale matched to the seed's center ladder.

    Strong inhomogeneity pins each string center to its θ̄ node, so starting
    the ramp where the node ladder coincides with the seed centers puts the
    seed inside the ground-state basin; a uniform ladder c_m = z(2m-1)/(2M)
    corresponds to scale z/M.
    """
    m = len(pattern.centers)
    if m == 0:
        return floor
    return max(floor, float(np.max(pattern.centers)) / (m - 0.5))


RETRY_SPREAD_SCALES = (0.4, 0.25, 0.55, 0.15, 0.8, 0.1)
RETRY_BETA_SEEDS = (1.12, 1.35)


def _energy_surrogate(roots: ZeroRootSet, params: ModelParams) -> float:
    """Ground-state selection key: the root-energy functional, any θ̄."""
    ab = params.a_bar
    total = 0.0 + 0.0j
    for z in roots.z:
        w = -1j * z
        total += _a1(w - ab) + _a1(w + ab)
    return float((math.pi * (1.0 + 4.0 * ab ** 2) * total).real)


def solve_bae(seed: ZeroRootSet, params: ModelParams, homotopy: object = 10,
              tol: float = 1e-10, max_iter: int = 200,
              collision_tol: float = 1e-8) -> ZeroRootSet:
    """Damped Gauss-Newton solve from a structured seed.

    An integer homotopy k (default 10) first converges at a spread
    inhomogeneity profile and ramps to the target θ̄ in k steps,
    re-converging at every step.  The equations are satisfied by every
    transfer eigenstate, so a single converged solve may land on an excited
    state: the solver walks a deterministic ladder of spread scales (and,
    for β-carrying patterns, seed-β variants, since β sits just above the
    2-string line), keeps every certified solution matching the seed's
    inventory, and returns the lowest-energy one.  homotopy=None attempts a
    single direct solve at params.theta_bar; an explicit sequence of θ̄
    profiles is used verbatim.  Returned roots carry a certified raw
    residual <= tol.
    """
    if len(seed.z) != params.two_n + 1:
        raise ParameterError(f"seed carries {len(seed.z)} representatives, "
                             f"expected {params.two_n + 1}")
    pattern = _pattern_from_roots(seed, params)
    seed_tag = classify_pattern(seed, params).regime
    history: list = []

    attempts = []  # (starting pattern, θ̄ stages)
    if homotopy is None:
        attempts.append((pattern, [params.theta_bar]))
    elif isinstance(homotopy, int):
        target = np.asarray(params.theta_bar, dtype=float)
        scales = [_matched_spread_scale(pattern)]
        scales += [s for s in RETRY_SPREAD_SCALES if s not in scales]
        betas = [None]
        if pattern.beta is not None and seed_tag in REGIMES:
            betas += list(RETRY_BETA_SEEDS)
        # root tracking needs finer ramps on longer chains: a second pass
        # with ~3 steps per site rescues schedules that jump branches
        step_counts = [homotopy]
        fine = max(3 * params.two_n, 3 * homotopy)
        if fine > homotopy:
            step_counts.append(fine)
        for steps in step_counts:
            for s0 in scales:
                start = np.asarray(default_spread_profile(params.two_n, scale=s0))
                stages = [tuple(start + (target - start) * k / steps)
                          for k in range(steps + 1)]
                for b0 in betas:
                    p0 = pattern if b0 is None else _Pattern(
                        pattern.centers.copy(), pattern.heights.copy(),
                        pattern.boundary_tags, pattern.boundary.copy(),
                        pattern.alpha, b0)
                    attempts.append((p0, stages))
    else:
        attempts.append((pattern, [tuple(p) for p in homotopy]))

    found: list = []  # (surrogate energy, roots)
    last_error: Exception | None = None
    for start_pattern, stages in attempts:
        trial = start_pattern
        try:
            for theta in stages:
                stage_params = params.with_theta_bar(theta)
                trial = _gauss_newton(trial, stage_params, tol=tol / 10.0,
                                      max_iter=max_iter, history=history)
            roots = trial.root_set(params.two_n)
            raw = np.max(np.abs(bae_residual(roots, params)))
            if raw > tol:
                raise SolverError(
                    f"certification failed: raw residual {raw:.3e} > {tol:.1e}",
                    best_roots=roots, history=history)
            _check_collisions(roots, collision_tol)
            result = ZeroRootSet(two_n=roots.two_n, z=roots.z, residual=float(raw))
            if seed_tag in REGIMES and classify_pattern(result, params).regime != seed_tag:
                raise SolverError(
                    f"converged off-pattern (expected inventory {seed_tag})",
                    best_roots=result, history=history)
            found.append((_energy_surrogate(result, params), result))
        except (SolverError, DegeneracyError) as exc:
            last_error = exc
            continue
        if _ladder_settled(found):
            break
    if not found:
        raise SolverError(f"all homotopy schedules failed: {last_error}",
                          best_roots=getattr(last_error, "best_roots", None),
                          history=history)
    found.sort(key=lambda item: item[0])
    return found[0][1]


def _ladder_settled(found, agree_tol: float = 1e-8) -> bool:
    """Stop retrying once the current minimum was reached at least twice."""
    if len(found) < 2:
        return False
    emin, rmin = min(found, key=lambda item: item[0])
    hits = 0
    for _, roots in found:
        dz = np.max(np.abs(np.asarray(roots.z) - np.asarray(rmin.z)))
        if dz < agree_tol:
            hits += 1
    return hits >= 2


def _check_collisions(roots: ZeroRootSet, collision_tol: float) -> None:
    full = roots.full_multiset()
    diffs = np.abs(full[:, None] - full[None, :])
    np.fill_diagonal(diffs, np.inf)
    if np.min(diffs) < collision_tol:
        raise DegeneracyError(f"root collision: minimum separation {np.min(diffs):.3e}")


def _pattern_from_roots(roots: ZeroRootSet, params: ModelParams) -> _Pattern:
    """Rebuild reduced coordinates from a structured root set."""
    cls = classify_pattern(roots, params)
    if cls.extra_strings or cls.boundary_strings or cls.extra_real or cls.unmatched:
        raise ParameterError("seed root set is not a ground-state inventory")
    centers = []
    heights = []
    seen = set()
    zb = np.asarray(roots.z_bar, dtype=complex)
    for w in zb:
        c, d = abs(w.real), abs(w.imag)
        if c > 1e-9 and d > 1e-9:
            key = (round(c, 9), round(d, 9))
            if key not in seen:
                seen.add(key)
                centers.append(c)
                heights.append(d)
    tags = tuple(tag for tag, _ in cls.boundary_pairs)
    boundary = np.asarray([b for _, b in cls.boundary_pairs])
    return _Pattern(np.asarray(centers), np.asarray(heights), tags, boundary,
                    cls.real_pair, cls.imaginary_pair)


def _extend_pattern(pattern: _Pattern, new_m: int) -> _Pattern:
    """Grow a solved pattern to a larger chain by quantile resampling.

    The solved centers sit near the quantiles (m-1/2)/M of the limiting
    center density, so the seed for M' > M strings resamples the empirical
    quantile curve at (k-1/2)/M' (linear extrapolation past the outermost
    point).  The resulting seeds land inside the direct Newton basin of the
    larger chain's ground state.
    """
    order = np.argsort(pattern.centers)
    c = pattern.centers[order]
    h = pattern.heights[order]
    m = len(c)
    q_old = (np.arange(1, m + 1) - 0.5) / m
    q_new = (np.arange(1, new_m + 1) - 0.5) / new_m
    cn = np.interp(q_new, q_old, c)
    mask = q_new > q_old[-1]
    if np.any(mask):
        slope = (c[-1] - c[-2]) / (q_old[-1] - q_old[-2]) if m > 1 else c[-1] / q_old[-1]
        cn[mask] = c[-1] + slope * (q_new[mask] - q_old[-1])
    hn = np.interp(q_new, q_old, h)
    return _Pattern(cn, hn, pattern.boundary_tags, pattern.boundary.copy(),
                    pattern.alpha, pattern.beta)


def ground_state_scan(base_params: ModelParams, sizes, homotopy: int = 10,
                      tol: float = 1e-10):
    """Ground-state roots across chain sizes by size continuation.

    The smallest size is solved from the regime seed (full retry ladder);
    each larger size is seeded from the previous solution with new outer
    string centers appended, tried as a direct homogeneous solve first.
    Returns a list of (two_n, energy, roots) at θ̄ = 0.
    """
    sizes = sorted(set(int(s) for s in sizes))
    if any(s % 2 or s < 4 for s in sizes):
        raise ParameterError("sizes must be even and >= 4")
    requested = set(sizes)
    # walk every even size up to the largest: continuation is reliable in
    # steps of one added string pair
    walk = list(range(sizes[0], sizes[-1] + 1, 2))
    regime = regime_of(abs(base_params.p), base_params.q_bar)
    results = []
    prev = None
    for two_n in walk:
        pr = ModelParams(two_n=two_n, a_bar=base_params.a_bar, p=base_params.p,
                         q=base_params.q, xi=base_params.xi)
        if prev is None:
            sol = solve_bae(seed_roots(regime, pr), pr, homotopy=homotopy, tol=tol)
            energy = energy_from_roots(sol, pr)
        else:
            prev_pattern, prev_two_n, prev_energy = prev
            extra = (two_n - prev_two_n) // 2
            seed_pattern = _extend_pattern(prev_pattern,
                                           len(prev_pattern.centers) + extra)
            seed = seed_pattern.root_set(two_n)
            # the bulk gain per added site is about E_prev / 2N_prev < 0; a
            # candidate gaining much less has jumped to an excited branch
            min_gain = 0.25 * (two_n - prev_two_n) * (prev_energy / prev_two_n)
            sol = energy = None
            for mode in (None, homotopy):
                try:
                    cand = solve_bae(seed, pr, homotopy=mode, tol=tol)
                except (SolverError, DegeneracyError):
                    continue
                cand_energy = energy_from_roots(cand, pr)
                if cand_energy <= prev_energy + min_gain:
                    sol, energy = cand, cand_energy
                    break
            if sol is None:
                raise SolverError(
                    f"size continuation lost the ground state at 2N={two_n}")
        prev = (_pattern_from_roots(sol, pr), two_n, energy)
        if two_n in requested:
            results.append((two_n, energy, sol))
    return results


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def classify_pattern(roots: ZeroRootSet, params: ModelParams,
                     tol_scale: float = 1e-4, string_tol: float = 0.35,
                     boundary_tol: float = 0.1) -> RootPattern:
    """Assign the rotated roots to the structural categories of the model.

    Category tolerance per root is ε = tol_scale (1+|root|) for the
    real/imaginary-axis tests; strings match Im ≈ n/2 within string_tol.
    Boundary pairs sit at i(|p|+1/2), i(|q̄|+1/2) only asymptotically — at
    2N = 8 the measured offsets reach a few 1e-2 — so matching against the
    asymptotic heights uses the looser boundary_tol, resolved per candidate
    regime with the (p, q̄) box of the parameters tried first.

    Returns regime I..VI when the inventory matches a ground-state pattern,
    "excited" for known excitation signatures (n > 2 strings, extra real
    pairs, boundary strings at i(1/2-|p|) or i(1/2-|q̄|)) and "unclassified"
    otherwise.
    """
    zb = np.asarray(roots.z_bar, dtype=complex)
    full = np.concatenate([zb, -zb])
    pat = RootPattern()

    imag_pos: list = []
    real_pos: list = []
    for w in full:
        eps = tol_scale * (1.0 + abs(w))
        if abs(w.imag) <= eps and abs(w.real) > 10.0 * eps:
            if w.real > 0:
                real_pos.append(w.real)
        elif abs(w.real) <= eps and w.imag > 10.0 * eps:
            imag_pos.append(w.imag)
        elif w.imag > eps and abs(w.real) > eps:
            n_est = int(round(2.0 * w.imag))
            if n_est >= 2 and abs(2.0 * w.imag - n_est) <= string_tol:
                if n_est == 2:
                    pat.pairs_n2.append(w.real)
                else:
                    pat.extra_strings.append((n_est, w.real))
            else:
                pat.unmatched.append(complex(w))
        elif w.imag < -eps:
            continue  # conjugate partners are counted on the upper half plane
        else:
            pat.unmatched.append(complex(w))

    real_pos = sorted(set(round(v, 12) for v in real_pos))
    imag_pos.sort()

    # ground-state inventories take precedence over excitation signatures:
    # a free β may coincide with the boundary-string height 1/2-|b|
    assigned = _match_ground_inventory(pat, imag_pos, real_pos, params, boundary_tol)
    if assigned is not None and not pat.extra_strings:
        pat.regime = assigned
        pat.pairs_n2.sort()
        return pat

    # excitation signatures: boundary strings at i(1/2-|p|), i(1/2-|q̄|)
    for target in (0.5 - abs(params.p), 0.5 - abs(params.q_bar)):
        if target <= 0:
            continue
        for b in list(imag_pos):
            if abs(b - target) <= min(boundary_tol, 0.5 * target):
                pat.boundary_strings.append(b)
                imag_pos.remove(b)
                break
    pat.boundary_pairs = []
    for tag in ("p", "q"):
        target = boundary_height(tag, params)
        for b in list(imag_pos):
            if abs(b - target) <= boundary_tol:
                pat.boundary_pairs.append((tag, b))
                imag_pos.remove(b)
                break
    if real_pos:
        pat.real_pair = real_pos[-1]
        pat.extra_real = real_pos[:-1]
    if imag_pos:
        pat.imaginary_pair = imag_pos[-1]
        for b in imag_pos[:-1]:
            pat.unmatched.append(complex(0.0, b))
    if pat.extra_strings or pat.boundary_strings or pat.extra_real:
        pat.regime = "excited"
    else:
        pat.regime = "unclassified"
    pat.pairs_n2.sort()
    pat.extra_strings.sort()
    return pat


def _match_ground_inventory(pat: RootPattern, imag_pos, real_pos, params,
                            boundary_tol):
    """Try each regime's inventory against the categorized roots.

    The regime of the parameter box is tried first: a lone imaginary pair
    close to min(|p|,|q̄|)+1/2 is a boundary pair in regime IV but a free β
    in regime VI, and only the box disambiguates the two.
    """
    if pat.unmatched:
        return None
    order = [regime_of(abs(params.p), params.q_bar)]
    order += [r for r in REGIMES if r not in order]
    for regime in order:
        spec = pattern_spec(regime, params)
        if len(pat.pairs_n2) != spec.n_centers:
            continue
        if len(real_pos) != (1 if spec.has_alpha else 0):
            continue
        expected_imag = len(spec.boundary) + (1 if spec.has_beta else 0)
        if len(imag_pos) != expected_imag:
            continue
        remaining = list(imag_pos)
        boundary_pairs = []
        ok = True
        for tag in spec.boundary:
            target = boundary_height(tag, params)
            dists = [abs(b - target) for b in remaining]
            if not dists or min(dists) > boundary_tol:
                ok = False
                break
            k = int(np.argmin(dists))
            boundary_pairs.append((tag, remaining.pop(k)))
        if not ok:
            continue
        if spec.has_beta:
            beta = remaining.pop()
            if beta <= min(abs(params.p), abs(params.q_bar)):
                continue
            pat.imaginary_pair = beta
        pat.boundary_pairs = sorted(boundary_pairs)
        if spec.has_alpha:
            pat.real_pair = real_pos[0]
        return regime
    return None


# ---------------------------------------------------------------------------
# energy
# ---------------------------------------------------------------------------

def _a1(w) -> complex:
    return (1.0 / (2.0 * math.pi)) / (w * w + 0.25)


def energy_from_roots(roots: ZeroRootSet, params: ModelParams,
                      imag_tol: float = 1e-8) -> float:
    """Energy of the homogeneous chain from the zero-root representatives."""
    if not params.homogeneous():
        raise ParameterError(
            "the root-energy formula is defined for the homogeneous chain; "
            "supply theta_bar = 0")
    ab = params.a_bar
    total = 0.0 + 0.0j
    for z in roots.z:
        w = -1j * z  # rotated root z̄
        total += _a1(w - ab) + _a1(w + ab)
    energy = math.pi * (1.0 + 4.0 * ab ** 2) * total - c0_constant(params)
    if abs(energy.imag) > imag_tol:
        raise ConsistencyError(
            f"energy has imaginary part {energy.imag:.3e}; root set is inconsistent")
    return float(energy.real)
