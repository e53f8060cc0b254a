"""Monte Carlo achievable ergodic rates, forward-ratio optimization, variance profiles.

Every comparison in this module reuses one PAPR population (common random
numbers), which turns scheme orderings into deterministic facts instead of
noisy estimates.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .dimming import DimmingSpec, Scheme, effective_brightness
from .led import variance_factor
from .ofdm import PaprPopulation

#: sentinel for "search for the best forward ratio in every cell"
AUTO = "auto"


@dataclass(frozen=True)
class RateEstimate:
    """Ergodic rate and average SNR of one (scheme, brightness, DNR) cell."""

    rate: float
    avg_snr_db: float
    n_samples: int
    scheme: Scheme
    brightness: float
    gamma: float | None
    dnr_db: float


@dataclass(frozen=True, eq=False)
class GammaSearchResult:
    """Best forward ratio for one (brightness, DNR) cell plus the full grid."""

    gamma_star: float
    rate_at_star: float
    grid: np.ndarray  # rows of (gamma, rate)


@dataclass(frozen=True, eq=False)
class VarianceProfile:
    """Mean normalized variance over a biasing-ratio grid and its peak location."""

    grid: np.ndarray  # rows of (zeta, mean sigma_y^2 / D^2)
    zeta_dagger: float


def _db(linear: float) -> float:
    with np.errstate(divide="ignore"):
        return float(10.0 * np.log10(linear))


def estimate_rate(spec: DimmingSpec, pop: PaprPopulation) -> RateEstimate:
    """Monte Carlo ergodic rate in bits per channel use.

    Biasing adjustment averages (1/2) log2(1 + SNR) at the brightness ratio.
    PWM evaluates the SNR at the forward ratio and pays the duty-cycle factor
    brightness/gamma for the silent intervals. The factor 1/2 accounts for
    the Hermitian-symmetry overhead of real-valued OFDM.
    """
    if len(pop) == 0:
        raise ValueError("population is empty")
    lam_eff, _ = effective_brightness(spec.brightness)
    if spec.scheme is Scheme.BIASING_ADJUSTMENT:
        ratio = lam_eff
        duty = 1.0
    else:
        ratio = spec.forward_ratio
        duty = lam_eff / spec.forward_ratio
    snr = spec.dnr * variance_factor(ratio, pop.upapr, pop.lpapr)
    rate = 0.5 * duty * float(np.mean(np.log2(1.0 + snr)))
    return RateEstimate(rate=rate,
                        avg_snr_db=_db(float(np.mean(snr))),
                        n_samples=len(pop),
                        scheme=spec.scheme,
                        brightness=spec.brightness,
                        gamma=spec.forward_ratio,
                        dnr_db=_db(spec.dnr))


def gamma_grid(lambda_effective: float, grid_step: float) -> np.ndarray:
    """Forward-ratio candidates {lam, lam + step, ...} capped at 0.5.

    The search stops at 0.5 because the SNR is symmetric about it while the
    duty-cycle factor only degrades beyond; the first grid point is exactly
    the effective brightness.
    """
    if not grid_step > 0.0:
        raise ValueError(f"grid_step must be positive, got {grid_step}")
    count = int(np.floor((0.5 - lambda_effective) / grid_step + 1e-9)) + 1
    grid = lambda_effective + grid_step * np.arange(count)
    return np.minimum(grid, 0.5)


def optimize_gamma(lambda_effective: float, dnr: float, pop: PaprPopulation,
                   grid_step: float = 0.005) -> GammaSearchResult:
    """Exhaustive forward-ratio search on a shared population.

    Ties resolve to the smallest gamma. Because the grid contains
    gamma = brightness, the winner never loses to biasing adjustment.
    """
    if not 0.0 < lambda_effective <= 0.5:
        raise ValueError(
            f"effective brightness must be in (0, 0.5]; mirror first (got {lambda_effective})")
    gammas = gamma_grid(lambda_effective, grid_step)
    rates = np.empty(len(gammas))
    for k, gamma in enumerate(gammas):
        spec = DimmingSpec(brightness=lambda_effective, scheme=Scheme.PWM,
                           dnr=dnr, forward_ratio=float(gamma))
        rates[k] = estimate_rate(spec, pop).rate
    best = int(np.argmax(rates))
    return GammaSearchResult(gamma_star=float(gammas[best]),
                             rate_at_star=float(rates[best]),
                             grid=np.column_stack([gammas, rates]))


def zeta_grid(grid_step: float) -> np.ndarray:
    """Biasing-ratio grid built as exact floating-point mirror pairs."""
    if not 0.0 < grid_step <= 0.5:
        raise ValueError(f"grid_step must be in (0, 0.5], got {grid_step}")
    half = int(np.floor(0.5 / grid_step + 1e-9))
    lower = grid_step * np.arange(1, half + 1)
    mirrored = (1.0 - lower)[::-1]
    if lower[-1] == mirrored[0]:
        return np.concatenate([lower, mirrored[1:]])
    return np.concatenate([lower, mirrored])


def variance_profile(pop: PaprPopulation, grid_step: float = 0.01) -> VarianceProfile:
    """Population mean of the normalized variance across biasing ratios.

    zeta_dagger is the peak location restricted to the lower half of the
    grid; the upper half is its exact mirror image.
    """
    if len(pop) == 0:
        raise ValueError("population is empty")
    zetas = zeta_grid(grid_step)
    means = np.array([float(np.mean(variance_factor(z, pop.upapr, pop.lpapr)))
                      for z in zetas])
    lower = zetas <= 0.5
    peak = int(np.argmax(means[lower]))
    return VarianceProfile(grid=np.column_stack([zetas, means]),
                           zeta_dagger=float(zetas[lower][peak]))


def sweep_rates(lambdas, dnrs_db, gammas, pop: PaprPopulation,
                gamma_step: float = 0.005) -> list[RateEstimate]:
    """Cross-product rate table: biasing adjustment plus PWM per cell.

    gammas is a sequence of forward ratios or AUTO, in which case each
    (brightness, DNR) cell gets its own optimized ratio. Row order follows
    the input order: brightness outermost, then DNR, then scheme columns.
    """
    if not len(lambdas) or not len(dnrs_db):
        raise ValueError("lambdas and dnrs_db must be non-empty")
    rows: list[RateEstimate] = []
    for lam in lambdas:
        lam_eff, _ = effective_brightness(lam)
        for dnr_db in dnrs_db:
            dnr = float(10.0 ** (dnr_db / 10.0))
            rows.append(estimate_rate(
                DimmingSpec(brightness=lam, scheme=Scheme.BIASING_ADJUSTMENT, dnr=dnr), pop))
            if isinstance(gammas, str):
                if gammas != AUTO:
                    raise ValueError(f"gammas must be a sequence of ratios or {AUTO!r}")
                search = optimize_gamma(lam_eff, dnr, pop, gamma_step)
                rows.append(estimate_rate(
                    DimmingSpec(brightness=lam, scheme=Scheme.PWM, dnr=dnr,
                                forward_ratio=search.gamma_star), pop))
            else:
                for gamma in gammas:
                    rows.append(estimate_rate(
                        DimmingSpec(brightness=lam, scheme=Scheme.PWM, dnr=dnr,
                                    forward_ratio=float(gamma)), pop))
    return rows


def write_rates_csv(path, estimates, seed: int):
    """Rate table rows: scheme,lambda,gamma,dnr_db,rate_bits,avg_snr_db,n_samples,seed."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["scheme", "lambda", "gamma", "dnr_db", "rate_bits",
                         "avg_snr_db", "n_samples", "seed"])
        for est in estimates:
            writer.writerow([est.scheme.value,
                             repr(float(est.brightness)),
                             "" if est.gamma is None else repr(float(est.gamma)),
                             repr(float(est.dnr_db)),
                             repr(float(est.rate)),
                             repr(float(est.avg_snr_db)),
                             est.n_samples,
                             seed])


def write_gamma_search_csv(path, cells):
    """Search grids as lambda,dnr_db,gamma,rate_bits,star rows.

    cells is a sequence of (brightness, dnr_db, GammaSearchResult); each
    cell's grid rows are followed by one starred row for the optimum.
    """
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["lambda", "dnr_db", "gamma", "rate_bits", "star"])
        for lam, dnr_db, result in cells:
            for gamma, rate in result.grid:
                writer.writerow([repr(float(lam)), repr(float(dnr_db)),
                                 repr(float(gamma)), repr(float(rate)), ""])
            writer.writerow([repr(float(lam)), repr(float(dnr_db)),
                             repr(float(result.gamma_star)),
                             repr(float(result.rate_at_star)), "*"])
