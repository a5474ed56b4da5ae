"""Phase-resolution estimators built on the product signal.

Two resolution criteria are implemented.  The standard one divides the
signal noise at the working point by the slope there,

    delta_phi = sigma(phi) / |dP/dphi|,

and the modified one asks for the phase step at which the signal moves by
the *average* of the noise at the two comparison points,

    2 |dP/dphi| delta_phi = sigma(phi) + sigma(phi + delta_phi),

which penalises the rapid noise growth away from the dark fringe and is the
honest figure when sigma varies strongly over one resolution step.  The
modified equation is solved by damped fixed-point iteration with a
bisection fallback; both solvers report diagnostics instead of raising on
non-convergence.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .interferometer import FD_STEP, InterferometerConfig, evaluate, signal_slope

__all__ = [
    "ResolutionResult",
    "SweepRow",
    "SweepTable",
    "OptimizeResult",
    "standard_resolution",
    "modified_resolution",
    "sweep",
    "SWEEP_PARAMETERS",
    "detect_saturation",
    "optimize_delta2",
    "refine_working_point",
    "small_angle_root",
]

SWEEP_PARAMETERS = (
    "G", "alpha1", "beta1", "alpha2", "beta2", "delta1", "delta2",
    "symmetric_alpha1", "symmetric_alpha2",
)

# Relative step/residual targets of the fixed-point solver.
_STEP_TOL = 1e-14
_RESIDUAL_TOL = 1e-12


def _slope_floor(second_moment: float) -> float:
    """Smallest slope distinguishable from finite-difference roundoff.

    The differenced means carry absolute errors of order eps times the
    signal's magnitude scale (bounded by the second moment), amplified by
    1/FD_STEP; a tenfold margin on top separates real slopes from noise.
    """
    return 10.0 * np.finfo(float).eps / FD_STEP * max(1.0, second_moment)


@dataclass(frozen=True)
class ResolutionResult:
    """Outcome of one resolution computation.

    kappa is the photon-normalised resolution delta_phi * mean_N, the
    figure of merit that settles to a constant in the high-gain limit.
    mean_N is the mean photon number of the state reaching the detectors
    (phase independent, so quoted once per configuration).
    """

    delta_phi: float
    criterion: str
    working_point: float
    kappa: float
    iterations: int
    converged: bool
    mean_N: float
    message: str = ""


@dataclass(frozen=True)
class SweepRow:
    param: float
    G: float
    mean_N: float
    delta_phi: float
    kappa: float
    converged: bool


@dataclass(frozen=True)
class SweepTable:
    parameter: str
    criterion: str
    rows: tuple


@dataclass(frozen=True)
class OptimizeResult:
    """Best recombiner imbalance found for one gain setting."""

    delta2: float
    kappa: float
    delta_phi: float
    mean_N: float
    converged: bool
    unimodal: bool
    profile: tuple  # (delta2, kappa) samples from the coarse scan
    message: str = ""


def _result(criterion, phi, d, n, iters, converged, message=""):
    return ResolutionResult(
        delta_phi=d, criterion=criterion, working_point=phi,
        kappa=d * n, iterations=iters, converged=converged,
        mean_N=n, message=message)


def standard_resolution(config: InterferometerConfig,
                        phi: float = np.pi / 2) -> ResolutionResult:
    """Noise-over-slope resolution at the given working point.

    A vanishing slope (e.g. G = 0, or a working point on a fringe extremum)
    makes the resolution unbounded; that case is reported as a
    non-converged result with delta_phi = inf rather than an exception.
    """
    stats = evaluate(config, phi)
    slope = signal_slope(config, phi)
    if not abs(slope) > _slope_floor(stats.second_moment):
        return _result("standard", phi, math.inf, stats.mean_photons, 0, False,
                       "signal slope vanishes at the working point")
    d = stats.sigma / abs(slope)
    return _result("standard", phi, d, stats.mean_photons, 1, True)


def _modified_bisection(rhs, slope, sigma0, lo=0.0, hi=np.pi / 2):
    """Root of 2|slope| d - sigma0 - sigma(phi+d) on (lo, hi], or None."""
    def g(x):
        return 2.0 * abs(slope) * x - 2.0 * abs(slope) * rhs(x)

    if g(hi) <= 0.0:
        return None, 0
    for it in range(1, 201):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-15 * max(1.0, hi):
            break
    return 0.5 * (lo + hi), it


def modified_resolution(config: InterferometerConfig, phi: float = np.pi / 2,
                        max_iter: int = 400,
                        method: str = "auto") -> ResolutionResult:
    """Solve 2 |slope| d = sigma(phi) + sigma(phi + d) for d.

    The fixed-point map d -> (sigma(phi) + sigma(phi+d)) / (2 |slope|) is
    iterated from the standard-criterion seed; whenever the update reverses
    direction the step is halved (midpoint damping), which tames the
    oscillatory regime at high gain.  If the iteration stalls, or on
    `method="bisection"`, the equation is bracketed on (0, pi/2] and
    bisected.  Every accepted root is re-checked against the residual
    |d - rhs(d)| <= 1e-12 max(1, d).
    """
    if method not in ("auto", "fixed-point", "bisection"):
        raise ValueError(f"unknown method {method!r}")
    stats0 = evaluate(config, phi)
    slope = signal_slope(config, phi)
    n = stats0.mean_photons
    if not abs(slope) > _slope_floor(stats0.second_moment):
        return _result("modified", phi, math.inf, n, 0, False,
                       "signal slope vanishes at the working point")
    sigma0 = stats0.sigma
    denom = 2.0 * abs(slope)

    def rhs(d):
        return (sigma0 + evaluate(config, phi + d).sigma) / denom

    d = sigma0 / abs(slope)  # standard criterion as the seed
    iters = 0
    settled = False
    if method != "bisection":
        prev_step = 0.0
        for iters in range(1, max_iter + 1):
            step = rhs(d) - d
            if step * prev_step < 0.0:
                step *= 0.5
            prev_step = step
            d += step
            if abs(step) <= _STEP_TOL * max(1.0, abs(d)):
                settled = True
                break
        if settled and abs(d - rhs(d)) <= _RESIDUAL_TOL * max(1.0, d):
            return _result("modified", phi, d, n, iters, True)

    root, bisect_iters = _modified_bisection(rhs, slope, sigma0)
    iters += bisect_iters
    if root is None:
        return _result("modified", phi, math.inf, n, iters, False,
                       "no root of the modified criterion in (0, pi/2]")
    if abs(root - rhs(root)) > _RESIDUAL_TOL * max(1.0, root):
        return _result("modified", phi, root, n, iters, False,
                       "bisection result fails the residual check")
    return _result("modified", phi, root, n, iters, True)


_CRITERIA = {"standard": standard_resolution, "modified": modified_resolution}


def _apply_parameter(config: InterferometerConfig, parameter: str,
                     value: float) -> InterferometerConfig:
    if parameter == "symmetric_alpha1":
        return dataclasses.replace(config, alpha1=value, beta1=value)
    if parameter == "symmetric_alpha2":
        return dataclasses.replace(config, alpha2=value, beta2=value)
    return dataclasses.replace(config, **{parameter: value})


def sweep(config: InterferometerConfig, parameter: str, grid,
          criterion: str = "modified", phi: float = np.pi / 2) -> SweepTable:
    """Resolution along a one-parameter family of configurations.

    `parameter` names a config field, or one of the symmetric shorthands
    symmetric_alpha1 / symmetric_alpha2 that set both modes' loss at a
    station together.  Non-convergence on a row is recorded in that row and
    the sweep keeps going.
    """
    if parameter not in SWEEP_PARAMETERS:
        raise ValueError(
            f"unknown sweep parameter {parameter!r}; choose from {SWEEP_PARAMETERS}")
    if criterion not in _CRITERIA:
        raise ValueError(f"unknown criterion {criterion!r}")
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1:
        raise ValueError("grid must be a one-dimensional sequence of values")
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise ValueError("grid values must be strictly increasing")
    solver = _CRITERIA[criterion]
    rows = []
    for value in grid:
        cfg = _apply_parameter(config, parameter, float(value))
        res = solver(cfg, phi=phi)
        rows.append(SweepRow(
            param=float(value), G=cfg.G, mean_N=res.mean_N,
            delta_phi=res.delta_phi, kappa=res.kappa, converged=res.converged))
    return SweepTable(parameter=parameter, criterion=criterion, rows=tuple(rows))


def detect_saturation(values, rel_tol: float = 0.01, window: int = 3):
    """Whether the tail of a sweep has flattened out.

    Returns (saturated, tail_value): saturated is True when the last
    `window` values agree pairwise to within rel_tol of the final value,
    and tail_value is that final value.
    """
    vals = [float(v) for v in values]
    if len(vals) < window:
        return False, vals[-1] if vals else math.nan
    tail = vals[-window:]
    ref = abs(tail[-1])
    if not math.isfinite(ref) or ref == 0.0:
        return False, tail[-1]
    spread = max(tail) - min(tail)
    return bool(spread <= rel_tol * ref), tail[-1]


def _golden_min(f, lo: float, hi: float, tol: float):
    """Golden-section minimum of a unimodal f on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (c, fc) if fc < fd else (d, fd)


def optimize_delta2(G: float, criterion: str = "modified",
                    phi: float = np.pi / 2, scan_points: int = 33,
                    tol: float = 1e-6) -> OptimizeResult:
    """Recombiner imbalance minimising kappa for an otherwise ideal device.

    A coarse scan over delta2 in [-0.78, 0.78] locates the basin (and checks
    that the sampled profile has a single interior minimum); golden-section
    search then refines delta2 to `tol`.  A multi-basin profile is reported
    with unimodal=False and the scan samples attached, refining the deepest
    basin found.
    """
    if criterion not in _CRITERIA:
        raise ValueError(f"unknown criterion {criterion!r}")
    solver = _CRITERIA[criterion]
    cache = {}

    def kappa_at(d2):
        if d2 not in cache:
            cache[d2] = solver(InterferometerConfig(G=G, delta2=d2), phi=phi)
        return cache[d2]

    xs = np.linspace(-0.78, 0.78, scan_points)
    raw = [kappa_at(float(x)) for x in xs]
    profile = tuple((float(x), r.kappa) for x, r in zip(xs, raw))
    # Non-converged scan points (the splitter degenerates toward |delta2| =
    # pi/4) rank as infinitely bad but do not abort the scan.
    ks = [r.kappa if r.converged and math.isfinite(r.kappa) else math.inf
          for r in raw]
    if not any(map(math.isfinite, ks)):
        return OptimizeResult(
            delta2=math.nan, kappa=math.nan, delta_phi=math.nan,
            mean_N=math.nan, converged=False, unimodal=False, profile=profile,
            message="resolution solver failed at every scan point")

    minima = [i for i in range(1, scan_points - 1)
              if ks[i] < ks[i - 1] and ks[i] < ks[i + 1]]
    unimodal = len(minima) == 1 and ks[0] > ks[minima[0]] and ks[-1] > ks[minima[0]]
    i = int(np.argmin(ks))
    lo = float(xs[max(i - 1, 0)])
    hi = float(xs[min(i + 1, scan_points - 1)])
    best_d2, _ = _golden_min(lambda x: kappa_at(x).kappa, lo, hi, tol)
    res = kappa_at(best_d2)
    message = "" if unimodal else "scanned profile is not unimodal; refined the deepest basin"
    return OptimizeResult(
        delta2=best_d2, kappa=res.kappa, delta_phi=res.delta_phi,
        mean_N=res.mean_N, converged=res.converged, unimodal=unimodal,
        profile=profile, message=message)


def refine_working_point(config: InterferometerConfig, phi: float = np.pi / 2,
                         window: float = 0.35, tol: float = 1e-9) -> float:
    """Locate the noise minimum of sigma(phi) near the nominal working point.

    The default working point pi/2 sits exactly on the dark-fringe noise
    minimum for the ideal device; imperfections shift the minimum slightly,
    and this golden-section refinement over [phi - window, phi + window]
    finds it.  Returns the refined phase.
    """
    best, _ = _golden_min(lambda p: evaluate(config, p).sigma,
                          phi - window, phi + window, tol)
    return best


def small_angle_root() -> float:
    """Scaled high-gain limit of the modified resolution for the ideal device.

    At the dark fringe the noise is sigma(pi/2) = 1 and grows as
    sigma(pi/2 + delta)^2 = 1 + 3 delta^2 (N^2 + 2N) to leading order, while
    the slope magnitude is sqrt(N^2 + 2N).  Writing the modified criterion
    in the scaled variable d = delta_phi * sqrt(N^2 + 2N),

        2 d = 1 + sqrt(1 + 3 d^2)   =>   d^2 - 4 d = 0,

    whose nonzero root is exactly 4: the modified resolution costs a factor
    of four over 1/sqrt(N^2 + 2N), independent of gain.
    """
    return 4.0
