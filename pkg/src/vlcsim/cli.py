"""Command-line front end: seeded, manifest-reproducible experiment runs.

Every subcommand writes its CSV outputs plus a manifest that echoes the
effective configuration; re-running a subcommand from its manifest
reproduces the outputs byte for byte.

Exit codes: 0 success, 2 configuration error, 3 self-test failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .cache import (load_or_build, population_cache_path, resolve_cache_dir,
                    write_population_csv)
from .config import ExperimentConfig, load_config, parse_config
from .dimming import (DimmingSpec, Scheme, assemble_waveform, effective_brightness,
                      write_waveform_csv)
from .errors import ConfigError, VlcsimError
from .led import LedModel, compute_alpha, variance_closed_form, variance_factor
from .ofdm import (Constellation, generate_freq_symbol, papr_of,
                   sample_papr_population, symbol_rng, to_time_domain)
from .rates import (AUTO, optimize_gamma, sweep_rates, variance_profile,
                    write_gamma_search_csv, write_rates_csv)

_SUBCOMMANDS = ("papr-sample", "variance-sweep", "rate-sweep", "optimize-gamma",
                "waveform-demo", "selftest")


def _notice(message: str):
    print(f"[vlcsim] {message}", file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="config or manifest file")
    common.add_argument("--seed", type=int, metavar="U64")
    common.add_argument("--n", type=int, metavar="INT", dest="n_subcarriers",
                        help="number of subcarriers")
    common.add_argument("--n-list", metavar="LIST", dest="n_list",
                        help="comma-separated subcarrier counts (variance-sweep)")
    common.add_argument("--symbols", type=int, metavar="INT", dest="symbol_count")
    common.add_argument("--oversample", type=int, metavar="INT", dest="oversample_factor")
    common.add_argument("--constellation", metavar="NAME",
                        choices=[c.value for c in Constellation])
    common.add_argument("--lambda", metavar="LIST", dest="lambdas",
                        help="comma-separated brightness factors")
    common.add_argument("--gamma", metavar="LIST|auto", dest="gammas",
                        help="comma-separated PWM forward ratios, or 'auto'")
    common.add_argument("--dnr-db", metavar="START:STOP:STEP", dest="dnr_db")
    common.add_argument("--out", metavar="DIR", dest="output_dir")
    common.add_argument("--quick", action="store_true",
                        help="cap the population at 1000 symbols")
    common.add_argument("--workers", type=int, default=1, metavar="INT",
                        help="worker threads for population sampling")

    parser = argparse.ArgumentParser(
        prog="vlcsim",
        description="Brightness-controlled DCO-OFDM link simulator for "
                    "dynamic-range-limited LEDs")
    parser.add_argument("--version", action="version", version=f"vlcsim {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    helps = {
        "papr-sample": "build (and cache) a PAPR population, export it as CSV",
        "variance-sweep": "mean scaled-signal variance vs. biasing ratio",
        "rate-sweep": "ergodic rates over brightness x DNR cells",
        "optimize-gamma": "search the best PWM forward ratio per cell",
        "waveform-demo": "assemble example drive waveforms for both schemes",
        "selftest": "run the built-in invariant checks",
    }
    for name in _SUBCOMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def _effective_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig()
    if args.config:
        cfg = load_config(args.config, cfg)
    lines = []
    if args.seed is not None:
        lines.append(f"seed = {args.seed}")
    if args.n_subcarriers is not None:
        lines.append(f"n_subcarriers = {args.n_subcarriers}")
    if args.n_list is not None:
        lines.append(f"n_list = {args.n_list}")
    if args.symbol_count is not None:
        lines.append(f"symbol_count = {args.symbol_count}")
    if args.oversample_factor is not None:
        lines.append(f"oversample_factor = {args.oversample_factor}")
    if args.constellation is not None:
        lines.append(f"constellation = {args.constellation}")
    if args.lambdas is not None:
        lines.append(f"lambdas = {args.lambdas}")
    if args.gammas is not None:
        lines.append(f"gammas = {args.gammas}")
    if args.output_dir is not None:
        lines.append(f"output_dir = {args.output_dir}")
    if args.dnr_db is not None:
        parts = args.dnr_db.split(":")
        if len(parts) != 3:
            raise ConfigError("dnr-db", f"expected START:STOP:STEP, got {args.dnr_db!r}")
        lines.append(f"dnr_db_start = {parts[0]}")
        lines.append(f"dnr_db_stop = {parts[1]}")
        lines.append(f"dnr_db_step = {parts[2]}")
    if lines:
        cfg = parse_config("\n".join(lines), cfg)
    if args.quick and cfg.symbol_count > 1000:
        cfg = replace(cfg, symbol_count=1000)
    return cfg.validate()


def _write_manifest(cfg: ExperimentConfig, subcommand: str) -> Path:
    path = Path(cfg.output_dir) / f"{subcommand}.manifest.txt"
    header = (f"# vlcsim {__version__} run manifest\n"
              f"# subcommand: {subcommand}\n"
              f"# rerun with: vlcsim {subcommand} --config {path.name}\n")
    path.write_text(header + cfg.to_text())
    return path


def _population(cfg: ExperimentConfig, n_subcarriers: int, workers: int):
    cache_dir = resolve_cache_dir(cfg.output_dir)
    path = population_cache_path(cache_dir, n_subcarriers, cfg.constellation,
                                 cfg.symbol_count, cfg.seed, cfg.oversample_factor)
    pop, cached = load_or_build(cache_dir, n_subcarriers, cfg.constellation,
                                cfg.symbol_count, cfg.seed, cfg.oversample_factor,
                                workers=workers)
    if cached:
        _notice(f"using cached population {path}")
    else:
        _notice(f"cache miss, built population of {cfg.symbol_count} symbols "
                f"(n={n_subcarriers}) at {path}")
    return pop


def _cmd_papr_sample(cfg: ExperimentConfig, workers: int) -> int:
    out = Path(cfg.output_dir)
    pop = _population(cfg, cfg.n_subcarriers, workers)
    csv_path = out / "papr_population.csv"
    write_population_csv(csv_path, pop)
    _notice(f"wrote {csv_path}")
    return 0


def _cmd_variance_sweep(cfg: ExperimentConfig, workers: int) -> int:
    out = Path(cfg.output_dir)
    profile_path = out / "variance_profile.csv"
    peaks_path = out / "variance_peaks.csv"
    profile_rows = []
    peak_rows = []
    for n in cfg.subcarrier_counts():
        pop = _population(cfg, n, workers)
        profile = variance_profile(pop, cfg.zeta_step)
        for zeta, mean in profile.grid:
            profile_rows.append((n, float(zeta), float(mean)))
        peak = float(profile.grid[profile.grid[:, 0] == profile.zeta_dagger][0, 1])
        peak_rows.append((n, profile.zeta_dagger, peak))
    with open(profile_path, "w", newline="") as fh:
        fh.write("n_subcarriers,zeta,mean_sigma_y2\n")
        for n, zeta, mean in profile_rows:
            fh.write(f"{n},{zeta!r},{mean!r}\n")
    with open(peaks_path, "w", newline="") as fh:
        fh.write("n_subcarriers,zeta_dagger,peak_mean_sigma_y2\n")
        for n, zeta, peak in peak_rows:
            fh.write(f"{n},{zeta!r},{peak!r}\n")
    _notice(f"wrote {profile_path} and {peaks_path}")
    return 0


def _cmd_rate_sweep(cfg: ExperimentConfig, workers: int) -> int:
    out = Path(cfg.output_dir)
    pop = _population(cfg, cfg.n_subcarriers, workers)
    rows = sweep_rates(cfg.lambdas, cfg.dnr_db_grid(), cfg.gammas, pop, cfg.gamma_step)
    csv_path = out / "rates.csv"
    write_rates_csv(csv_path, rows, cfg.seed)
    _notice(f"wrote {csv_path} ({len(rows)} rows)")
    return 0


def _cmd_optimize_gamma(cfg: ExperimentConfig, workers: int) -> int:
    out = Path(cfg.output_dir)
    pop = _population(cfg, cfg.n_subcarriers, workers)
    cells = []
    for lam in cfg.lambdas:
        lam_eff, _ = effective_brightness(lam)
        for dnr_db in cfg.dnr_db_grid():
            dnr = float(10.0 ** (dnr_db / 10.0))
            cells.append((lam, float(dnr_db),
                          optimize_gamma(lam_eff, dnr, pop, cfg.gamma_step)))
    csv_path = out / "gamma_search.csv"
    write_gamma_search_csv(csv_path, cells)
    _notice(f"wrote {csv_path} ({len(cells)} cells)")
    return 0


def _cmd_waveform_demo(cfg: ExperimentConfig, workers: int) -> int:
    del workers  # assembly is sequential; order defines the waveform
    if isinstance(cfg.gammas, str):
        raise ConfigError("gammas", "waveform-demo needs an explicit forward ratio, not 'auto'")
    lam = cfg.lambdas[0]
    gamma = cfg.gammas[0]
    led = cfg.led()
    symbols = [to_time_domain(generate_freq_symbol(cfg.n_subcarriers, cfg.constellation,
                                                   symbol_rng(cfg.seed, i)),
                              cfg.oversample_factor)
               for i in range(cfg.symbol_count)]
    out = Path(cfg.output_dir)
    dnr = 1.0  # waveforms are noise-free; any valid budget works
    biasing = assemble_waveform(
        symbols, DimmingSpec(brightness=lam, scheme=Scheme.BIASING_ADJUSTMENT, dnr=dnr), led)
    pwm = assemble_waveform(
        symbols, DimmingSpec(brightness=lam, scheme=Scheme.PWM, dnr=dnr, forward_ratio=gamma),
        led)
    biasing_path = out / "waveform_biasing.csv"
    pwm_path = out / "waveform_pwm.csv"
    write_waveform_csv(biasing_path, biasing, led)
    write_waveform_csv(pwm_path, pwm, led)
    _notice(f"wrote {biasing_path} and {pwm_path}")
    return 0


def _cmd_selftest(cfg: ExperimentConfig, workers: int) -> int:
    led = LedModel()
    checks: list[tuple[str, bool]] = []

    pop_a = sample_papr_population(cfg.n_subcarriers, cfg.constellation, 200, cfg.seed,
                                   cfg.oversample_factor)
    pop_b = sample_papr_population(cfg.n_subcarriers, cfg.constellation, 200, cfg.seed,
                                   cfg.oversample_factor, workers=max(workers, 3))
    checks.append(("population determinism across worker counts",
                   np.array_equal(pop_a.upapr, pop_b.upapr)
                   and np.array_equal(pop_a.lpapr, pop_b.lpapr)))

    symbols = [to_time_domain(generate_freq_symbol(cfg.n_subcarriers, cfg.constellation,
                                                   symbol_rng(cfg.seed, i)),
                              cfg.oversample_factor)
               for i in range(200)]
    worst = 0.0
    feasible = True
    maximal = True
    for sym in symbols:
        papr = papr_of(sym)
        hi = float(np.max(sym.samples))
        lo = float(np.min(sym.samples))
        for zeta in np.arange(0.05, 0.951, 0.05):
            bias = led.i_low + zeta * led.dynamic_range
            decision = compute_alpha(hi, lo, bias, led, sym.sigma_x2)
            closed = variance_closed_form(zeta, papr, led)
            worst = max(worst, abs(closed - decision.sigma_y2) / decision.sigma_y2)
            y = decision.alpha * sym.samples + bias
            slack = 1e-9 * led.dynamic_range
            feasible &= bool(np.all(y >= led.i_low - slack) and np.all(y <= led.i_high + slack))
            y_over = decision.alpha * (1 + 1e-6) * sym.samples + bias
            maximal &= bool(np.any(y_over < led.i_low - slack) or np.any(y_over > led.i_high + slack))
    checks.append(("closed-form variance matches maximal scaling (rel err < 1e-12)",
                   worst < 1e-12))
    checks.append(("scaled waveforms stay inside the dynamic range", feasible))
    checks.append(("scaling is maximal (1e-6 headroom violates the range)", maximal))

    rng = np.random.default_rng(cfg.seed)
    zetas = rng.uniform(0.01, 0.99, size=200)
    sym_ok = True
    for zeta in zetas:
        f = variance_factor(zeta, pop_a.upapr, pop_a.lpapr)
        sym_ok &= bool(np.array_equal(f, variance_factor(1.0 - zeta, pop_a.upapr, pop_a.lpapr)))
        sym_ok &= bool(np.array_equal(f, variance_factor(zeta, pop_a.lpapr, pop_a.upapr)))
    checks.append(("variance factor exactly symmetric (mirror and swap)", sym_ok))

    spec_b = DimmingSpec(brightness=0.25, scheme=Scheme.BIASING_ADJUSTMENT, dnr=1.0)
    spec_p = DimmingSpec(brightness=0.25, scheme=Scheme.PWM, dnr=1.0, forward_ratio=0.25)
    checks.append(("PWM at gamma = brightness degenerates to biasing adjustment",
                   np.array_equal(assemble_waveform(symbols[:5], spec_b, led),
                                  assemble_waveform(symbols[:5], spec_p, led))))

    failed = False
    for name, ok in checks:
        print(f"[selftest] {'ok  ' if ok else 'FAIL'} {name}")
        failed |= not ok
    return 3 if failed else 0


_HANDLERS = {
    "papr-sample": _cmd_papr_sample,
    "variance-sweep": _cmd_variance_sweep,
    "rate-sweep": _cmd_rate_sweep,
    "optimize-gamma": _cmd_optimize_gamma,
    "waveform-demo": _cmd_waveform_demo,
    "selftest": _cmd_selftest,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _effective_config(args)
        Path(cfg.output_dir).mkdir(parents=True, exist_ok=True)
        if args.subcommand != "selftest":
            _write_manifest(cfg, args.subcommand)
        return _HANDLERS[args.subcommand](cfg, max(args.workers, 1))
    except ConfigError as exc:
        print(f"vlcsim: config error: {exc}", file=sys.stderr)
        return 2
    except VlcsimError as exc:
        print(f"vlcsim: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
