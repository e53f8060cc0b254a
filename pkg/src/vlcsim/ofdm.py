"""DCO-OFDM symbol synthesis and peak-to-average power statistics.

Symbols are built in the frequency domain with null DC/Nyquist bins and
Hermitian symmetry, transformed to a real oversampled time-domain signal,
and reduced to per-symbol (UPAPR, LPAPR) pairs. Population sampling is
seeded per symbol index so results never depend on scheduling.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateSymbolError, HermitianSymmetryError

# max tolerated |imag| after the inverse transform, relative to the signal RMS
_IMAG_RESIDUAL_TOL = 1e-9

_QPSK_POINTS = np.array([1 + 1j, -1 + 1j, 1 - 1j, -1 - 1j]) / np.sqrt(2.0)

# 16-QAM, levels {-3,-1,1,3} on each rail, unit average power
_QAM16_LEVELS = np.array([-3.0, -1.0, 1.0, 3.0])
_QAM16_POINTS = (_QAM16_LEVELS[None, :] + 1j * _QAM16_LEVELS[:, None]).ravel() / np.sqrt(10.0)


class Constellation(str, Enum):
    """Unit-average-power constellations for the data-carrying bins."""

    QPSK = "qpsk"
    QAM16 = "qam16"
    COMPLEX_GAUSSIAN = "complex_gaussian"


@dataclass(frozen=True, eq=False)
class FreqSymbol:
    """One frequency-domain OFDM symbol (bins X_0 .. X_{N-1})."""

    n_subcarriers: int
    bins: np.ndarray

    def __post_init__(self):
        if self.n_subcarriers % 2 != 0 or self.n_subcarriers < 4:
            raise ValueError(f"n_subcarriers must be even and >= 4, got {self.n_subcarriers}")
        bins = np.asarray(self.bins, dtype=np.complex128)
        if bins.shape != (self.n_subcarriers,):
            raise ValueError(f"expected {self.n_subcarriers} bins, got shape {bins.shape}")
        object.__setattr__(self, "bins", bins)
        self.validate()

    def validate(self):
        """Check null DC/Nyquist bins and Hermitian symmetry (exact)."""
        n = self.n_subcarriers
        if self.bins[0] != 0 or self.bins[n // 2] != 0:
            raise HermitianSymmetryError("DC and Nyquist bins must be zero")
        upper = self.bins[n // 2 + 1:]
        mirror = np.conj(self.bins[1:n // 2][::-1])
        if not np.array_equal(upper, mirror):
            raise HermitianSymmetryError("bins are not Hermitian symmetric")


@dataclass(frozen=True, eq=False)
class TimeSymbol:
    """Real time-domain samples of one OFDM symbol plus its sample variance."""

    samples: np.ndarray
    oversample_factor: int
    sigma_x2: float

    @property
    def is_degenerate(self) -> bool:
        return self.sigma_x2 == 0.0


@dataclass(frozen=True)
class PaprSample:
    """Per-symbol upper/lower peak-to-average power ratio pair."""

    upapr: float
    lpapr: float

    def __post_init__(self):
        if not (self.upapr >= 0.0 and self.lpapr >= 0.0):
            raise ValueError("UPAPR and LPAPR must be non-negative")


@dataclass(frozen=True, eq=False)
class PaprPopulation:
    """Seeded Monte Carlo collection of (UPAPR, LPAPR) pairs."""

    upapr: np.ndarray
    lpapr: np.ndarray
    n_subcarriers: int
    constellation: Constellation
    seed: int
    oversample_factor: int

    def __len__(self) -> int:
        return len(self.upapr)

    def __getitem__(self, index: int) -> PaprSample:
        return PaprSample(float(self.upapr[index]), float(self.lpapr[index]))

    def __iter__(self):
        for u, l in zip(self.upapr, self.lpapr):
            yield PaprSample(float(u), float(l))

    @property
    def count(self) -> int:
        return len(self.upapr)


def symbol_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for the symbol at `index`; depends only on (seed, index)."""
    return np.random.default_rng([seed, index])


def _draw_constellation(constellation: Constellation, size: int, rng: np.random.Generator) -> np.ndarray:
    if constellation is Constellation.QPSK:
        return _QPSK_POINTS[rng.integers(0, 4, size=size)]
    if constellation is Constellation.QAM16:
        return _QAM16_POINTS[rng.integers(0, 16, size=size)]
    if constellation is Constellation.COMPLEX_GAUSSIAN:
        re = rng.standard_normal(size)
        im = rng.standard_normal(size)
        return (re + 1j * im) / np.sqrt(2.0)
    raise ValueError(f"unknown constellation: {constellation!r}")


def generate_freq_symbol(n_subcarriers: int, constellation: Constellation,
                         rng: np.random.Generator) -> FreqSymbol:
    """Draw a Hermitian-symmetric frequency-domain symbol.

    Bins 1..N/2-1 are i.i.d. unit-average-power constellation points; the
    upper half is their conjugate mirror; DC and Nyquist bins stay zero.
    """
    if n_subcarriers % 2 != 0 or n_subcarriers < 4:
        raise ValueError(f"n_subcarriers must be even and >= 4, got {n_subcarriers}")
    half = n_subcarriers // 2
    data = _draw_constellation(constellation, half - 1, rng)
    bins = np.zeros(n_subcarriers, dtype=np.complex128)
    bins[1:half] = data
    bins[half + 1:] = np.conj(data[::-1])
    return FreqSymbol(n_subcarriers=n_subcarriers, bins=bins)


def to_time_domain(sym: FreqSymbol, oversample_factor: int = 4) -> TimeSymbol:
    """Synthesize the real time-domain signal on an oversampled grid.

    Evaluates x(t) = (1/sqrt(N)) sum_k X_k exp(j 2 pi k t / T) at the N*F
    points t = n T / (N F), implemented as a zero-padded inverse DFT scaled
    so the samples agree with direct evaluation of the sum.
    """
    if oversample_factor < 1:
        raise ValueError(f"oversample_factor must be >= 1, got {oversample_factor}")
    sym.validate()
    n = sym.n_subcarriers
    half = n // 2
    m = n * oversample_factor
    padded = np.zeros(m, dtype=np.complex128)
    padded[:half] = sym.bins[:half]
    padded[m - half + 1:] = sym.bins[half + 1:]
    x = np.fft.ifft(padded) * (m / np.sqrt(n))
    rms = float(np.sqrt(np.mean(x.real ** 2)))
    max_imag = float(np.max(np.abs(x.imag)))
    if max_imag > rms * _IMAG_RESIDUAL_TOL:
        raise HermitianSymmetryError(
            f"imaginary residual {max_imag:.3e} exceeds {_IMAG_RESIDUAL_TOL:.0e} x RMS")
    samples = np.ascontiguousarray(x.real)
    return TimeSymbol(samples=samples,
                      oversample_factor=oversample_factor,
                      sigma_x2=float(np.mean(samples ** 2)))


def papr_of(sym: TimeSymbol) -> PaprSample:
    """UPAPR = max(x)^2 / var, LPAPR = min(x)^2 / var for one symbol."""
    if sym.is_degenerate:
        raise DegenerateSymbolError("all-zero symbol has no PAPR")
    hi = float(np.max(sym.samples))
    lo = float(np.min(sym.samples))
    return PaprSample(upapr=hi * hi / sym.sigma_x2, lpapr=lo * lo / sym.sigma_x2)


def _papr_at_index(n_subcarriers: int, constellation: Constellation, seed: int,
                   oversample_factor: int, index: int) -> PaprSample:
    sym = generate_freq_symbol(n_subcarriers, constellation, symbol_rng(seed, index))
    return papr_of(to_time_domain(sym, oversample_factor))


def sample_papr_population(n_subcarriers: int, constellation: Constellation, count: int,
                           seed: int, oversample_factor: int = 4,
                           workers: int = 1) -> PaprPopulation:
    """Monte Carlo (UPAPR, LPAPR) population, bit-reproducible from the seed.

    The pair at index i depends only on (seed, i), so any worker count
    produces the same population.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    upapr = np.empty(count)
    lpapr = np.empty(count)

    def fill(start: int, stop: int):
        for i in range(start, stop):
            s = _papr_at_index(n_subcarriers, constellation, seed, oversample_factor, i)
            upapr[i] = s.upapr
            lpapr[i] = s.lpapr

    if workers <= 1:
        fill(0, count)
    else:
        bounds = np.linspace(0, count, workers + 1).astype(int)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(fill, bounds[k], bounds[k + 1]) for k in range(workers)]
            for fut in futures:
                fut.result()

    return PaprPopulation(upapr=upapr, lpapr=lpapr, n_subcarriers=n_subcarriers,
                          constellation=constellation, seed=seed,
                          oversample_factor=oversample_factor)
