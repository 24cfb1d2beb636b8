"""Dyadic band analysis on the discrete torus.

A radial C-infinity bump supported exactly on the annulus 1/2 <= |xi| <= 2
defines the analysis profile; the synthesis profile is the self-normalized
quotient, which turns the telescoping partition of unity over dyadic dilates
into an algebraic identity.  Band convolutions are exact Fourier multipliers.

Coefficients are samples of band convolutions on the dyadic lattice 2^-k m.
At level k the band spectrum lives in [2^(k-1), 2^(k+1)] (angular units)
while lattice sampling aliases by multiples of 2 pi 2^k, so the copies stay
clear of the synthesis support and the composition synthesize(analyze(f))
reproduces every admissible band-limited input to rounding error.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .grid import GridFunction, GridSpec, VectorSequence


class LevelError(ValueError):
    """Raised when a level window is not resolvable on the grid."""


# ---------------------------------------------------------------------------
# Spectral transforms on the (possibly offset) sample lattice
# ---------------------------------------------------------------------------


def _axis_phase(spec: GridSpec) -> np.ndarray:
    """Per-axis phase relating numpy's DFT to the continuum transform
    h * sum_i u_i exp(-i xi x_i) with x_i = -R + (i + gamma) h."""
    j = np.fft.fftfreq(spec.N, 1.0 / spec.N)  # signed integer frequencies
    gamma = 0.5 if spec.offset else 0.0
    return np.exp(1j * np.pi * j) * np.exp(-2j * np.pi * j * gamma / spec.N)


def _apply_axis(vec: np.ndarray, arr: np.ndarray, axis: int) -> np.ndarray:
    shape = [1] * arr.ndim
    shape[axis] = -1
    return arr * vec.reshape(shape)


def spectrum(f: GridFunction) -> np.ndarray:
    """Continuum Fourier coefficients F(xi_j) on the FFT-ordered grid."""
    F = np.fft.fftn(np.asarray(f.values, dtype=complex))
    ph = _axis_phase(f.spec)
    for ax in range(f.spec.n):
        F = _apply_axis(ph, F, ax)
    return f.spec.cell_measure * F


def from_spectrum(spec: GridSpec, F: np.ndarray, real: bool = True) -> GridFunction:
    ph = _axis_phase(spec)
    G = np.asarray(F, dtype=complex)
    for ax in range(spec.n):
        G = _apply_axis(np.conj(ph), G, ax)
    u = np.fft.ifftn(G) / spec.cell_measure
    if real:
        u = u.real
    return GridFunction(spec, u)


def apply_multiplier(f: GridFunction, mult: np.ndarray) -> GridFunction:
    """Samples of m(D) f; sample-position phases cancel for multipliers."""
    out = np.fft.ifftn(mult * np.fft.fftn(f.values))
    if np.isrealobj(f.values) and np.isrealobj(mult):
        out = out.real
    return GridFunction(f.spec, out)


def lattice_values(f: GridFunction, mult: np.ndarray | None = None) -> np.ndarray:
    """Values of (m(D) f) at the plain lattice y_i = -R + i h.

    On an offset grid this is a half-cell translation, exact for band-limited
    data; on a plain grid it is the samples themselves.
    """
    F = np.fft.fftn(np.asarray(f.values, dtype=complex))
    if mult is not None:
        F = F * mult
    if f.spec.offset:
        j = np.fft.fftfreq(f.spec.N, 1.0 / f.spec.N)
        shift = np.exp(-1j * np.pi * j / f.spec.N)  # exp(-i xi h/2)
        for ax in range(f.spec.n):
            F = _apply_axis(shift, F, ax)
    out = np.fft.ifftn(F)
    if np.isrealobj(f.values):
        out = out.real
    return out


# ---------------------------------------------------------------------------
# The band pair
# ---------------------------------------------------------------------------


def _transition(t: np.ndarray) -> np.ndarray:
    """C-infinity step: 0 for t <= 0, 1 for t >= 1."""
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        a = np.where(t > 0, np.exp(-1.0 / np.maximum(t, 1e-300)), 0.0)
        b = np.where(1 - t > 0, np.exp(-1.0 / np.maximum(1 - t, 1e-300)), 0.0)
    return a / (a + b)


def bump_profile(rho: np.ndarray) -> np.ndarray:
    """Radial bump: 0 outside [1/2, 2], 1 on [3/5, 5/3], smooth in between."""
    rho = np.asarray(rho, dtype=float)
    rise = _transition((rho - 0.5) / (0.6 - 0.5))
    fall = _transition((2.0 - rho) / (2.0 - 5.0 / 3.0))
    return rise * fall


def _partition_denominator(rho: np.ndarray) -> np.ndarray:
    """sum_j bump(rho / 2^j)^2; at most three dyadic dilates contribute."""
    rho = np.asarray(rho, dtype=float)
    out = np.zeros_like(rho)
    pos = rho > 0
    j0 = np.floor(np.log2(rho[pos]))
    acc = np.zeros(j0.shape)
    for d in (-1.0, 0.0, 1.0):
        acc += bump_profile(rho[pos] / 2.0 ** (j0 + d)) ** 2
    out[pos] = acc
    return out


def synthesis_profile(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=float)
    num = bump_profile(rho)
    den = _partition_denominator(rho)
    out = np.zeros_like(num)
    nz = num > 0
    out[nz] = num[nz] / den[nz]
    return out


@dataclass(frozen=True)
class LPPair:
    """Frequency profiles of the analysis/synthesis pair over a level window."""

    gspec: GridSpec
    k_min: int
    k_max: int
    phi_mult: dict = field(repr=False)
    psi_mult: dict = field(repr=False)
    first_active: int
    plateau_min_phi: float
    plateau_min_psi: float

    def levels(self) -> range:
        return range(self.k_min, self.k_max + 1)

    def annulus(self) -> tuple[float, float]:
        """Frequency range where the truncated partition of unity equals 1."""
        return 2.0 ** (self.k_min + 1), 2.0 ** (self.k_max - 1)

    def Fphi(self, rho):
        return bump_profile(rho)

    def Fpsi(self, rho):
        return synthesis_profile(rho)

    def lattice_stride(self, k: int) -> int:
        s = 2.0 ** (-k) / self.gspec.h
        if s < 1 or s != int(s):
            raise LevelError(f"level {k} coefficient lattice is finer than the grid")
        return int(s)

    def positions(self, k: int) -> np.ndarray:
        """Coefficient indices m per axis: 2^-k m in [-R, R)."""
        C = self.gspec.R * 2.0**k
        lo, hi = math.ceil(-C), math.ceil(C)
        if hi <= lo:
            raise LevelError(f"level {k} has no coefficient positions in the domain")
        return np.arange(lo, hi)


def make_lp_pair(spec: GridSpec, k_min: int, k_max: int) -> LPPair:
    """Build the band pair for levels k_min..k_max on the given grid.

    Levels must keep the coefficient lattice on the grid (2^-k >= h) and the
    band support below the spectral cutoff.  Bands whose annulus falls below
    the lowest torus frequency are retained as exact zeros; the first level
    with nonzero grid content is published as `first_active`.
    """
    if k_min > k_max:
        raise LevelError("empty level window")
    h = spec.h
    k_cap_lattice = int(math.floor(math.log2(1.0 / h) + 1e-9))
    k_cap_spectral = int(math.floor(math.log2(spec.nyquist) - 1 + 1e-9))
    k_cap = min(k_cap_lattice, k_cap_spectral)
    k_floor = -int(math.floor(math.log2(2.0 * spec.R) + 1e-9))
    if k_max > k_cap or k_min < k_floor:
        raise LevelError(
            f"level window [{k_min}, {k_max}] not resolvable at N={spec.N}, R={spec.R}; "
            f"admissible window is [{k_floor}, {k_cap}]"
        )
    rho = spec.freq_radius()
    phi_mult, psi_mult = {}, {}
    first_active = None
    for k in range(k_min, k_max + 1):
        m = bump_profile(rho / 2.0**k)
        phi_mult[k] = m
        psi_mult[k] = synthesis_profile(rho / 2.0**k)
        if first_active is None and np.any(m > 0):
            first_active = k
    if first_active is None:
        raise LevelError(f"no level in [{k_min}, {k_max}] meets a nonzero grid frequency")
    probe = np.linspace(0.6, 5.0 / 3.0, 2049)
    return LPPair(
        gspec=spec,
        k_min=k_min,
        k_max=k_max,
        phi_mult=phi_mult,
        psi_mult=psi_mult,
        first_active=first_active,
        plateau_min_phi=float(bump_profile(probe).min()),
        plateau_min_psi=float(synthesis_profile(probe).min()),
    )


def band(f: GridFunction, pair: LPPair, k: int) -> GridFunction:
    """The level-k band: inverse transform of Fphi(2^-k xi) * Ff."""
    if not (pair.k_min <= k <= pair.k_max):
        raise LevelError(f"level {k} outside pair window [{pair.k_min}, {pair.k_max}]")
    return apply_multiplier(f, pair.phi_mult[k])


@dataclass(frozen=True)
class BandDecomposition:
    pair: LPPair
    bands: VectorSequence

    def export(self, directory: str | Path) -> None:
        from .grid import save_grid_function

        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        for k in self.bands.levels():
            save_grid_function(self.bands[k], directory / f"band_{k:+03d}")


def band_decompose(f: GridFunction, pair: LPPair) -> BandDecomposition:
    bands = VectorSequence(pair.k_min, tuple(band(f, pair, k) for k in pair.levels()))
    return BandDecomposition(pair, bands)


# ---------------------------------------------------------------------------
# Coefficient transform
# ---------------------------------------------------------------------------


@dataclass
class CoefficientSet:
    """Sparse level/position coefficients lambda_{k,m}."""

    n: int
    data: dict

    def __post_init__(self):
        self.data = {
            (int(k), tuple(int(x) for x in np.atleast_1d(m))): complex(v)
            for (k, m), v in self.data.items()
        }

    def levels(self) -> list[int]:
        return sorted({k for k, _ in self.data})

    def items(self):
        return self.data.items()

    def __len__(self):
        return len(self.data)

    def scaled(self, c) -> "CoefficientSet":
        return CoefficientSet(self.n, {km: c * v for km, v in self.data.items()})

    def to_jsonl(self, path: str | Path) -> None:
        with open(path, "w") as fh:
            for (k, m), v in sorted(self.data.items()):
                fh.write(json.dumps({"k": k, "m": list(m), "re": v.real, "im": v.imag}) + "\n")

    @classmethod
    def from_jsonl(cls, path: str | Path, n: int) -> "CoefficientSet":
        data = {}
        with open(path) as fh:
            for line in fh:
                rec = json.loads(line)
                data[(rec["k"], tuple(rec["m"]))] = rec["re"] + 1j * rec["im"]
        return cls(n, data)


def _lattice_index(pair: LPPair, k: int, m: tuple[int, ...]) -> tuple[int, ...]:
    s = pair.lattice_stride(k)
    N = pair.gspec.N
    return tuple((s * mi + N // 2) % N for mi in m)


def analyze(f: GridFunction, pair: LPPair, levels: range | None = None) -> CoefficientSet:
    """Coefficients lambda_{k,m} = 2^(-k n / 2) (f * phi~_k)(2^-k m).

    The band convolution is evaluated on the plain lattice by exact spectral
    translation and subsampled at the level's stride.
    """
    spec = f.spec
    if levels is None:
        levels = pair.levels()
    data = {}
    for k in levels:
        if not (pair.k_min <= k <= pair.k_max):
            raise LevelError(f"analysis level {k} outside pair window")
        s = pair.lattice_stride(k)
        vals = lattice_values(f, pair.phi_mult[k])
        ms = pair.positions(k)
        scale = 2.0 ** (-k * spec.n / 2.0)
        if spec.n == 1:
            idx = (s * ms + spec.N // 2) % spec.N
            for m, i in zip(ms, idx):
                data[(k, (int(m),))] = scale * complex(vals[i])
        else:
            idx = (s * ms + spec.N // 2) % spec.N
            sub = vals[np.ix_(idx, idx)]
            for a, m1 in enumerate(ms):
                for b, m2 in enumerate(ms):
                    data[(k, (int(m1), int(m2)))] = scale * complex(sub[a, b])
    return CoefficientSet(spec.n, data)


def synthesize(coeffs: CoefficientSet, pair: LPPair) -> GridFunction:
    """sum_{k,m} lambda_{k,m} psi_{k,m} via one comb convolution per level."""
    spec = pair.gspec
    j = np.fft.fftfreq(spec.N, 1.0 / spec.N)
    comb_phase = np.exp(1j * np.pi * j)  # lattice origin at -R
    total = np.zeros(spec.shape, dtype=complex)
    by_level: dict[int, list] = {}
    for (k, m), v in coeffs.items():
        by_level.setdefault(k, []).append((m, v))
    for k, entries in sorted(by_level.items()):
        if not (pair.k_min <= k <= pair.k_max):
            raise LevelError(f"synthesis level {k} outside pair window")
        comb = np.zeros(spec.shape, dtype=complex)
        for m, v in entries:
            comb[_lattice_index(pair, k, m)] += v
        F = np.fft.fftn(comb)
        for ax in range(spec.n):
            F = _apply_axis(comb_phase, F, ax)
        scale = 2.0 ** (-k * spec.n / 2.0)
        total += scale * from_spectrum(spec, F * pair.psi_mult[k], real=False).values
    vals = total.real if _all_real(coeffs) else total
    return GridFunction(spec, vals)


def _all_real(coeffs: CoefficientSet) -> bool:
    return all(abs(v.imag) < 1e-300 for _, v in coeffs.items())


# ---------------------------------------------------------------------------
# Admissibility and the reproduction residual
# ---------------------------------------------------------------------------


def admissibility_violations(f: GridFunction, pair: LPPair, rtol: float = 1e-9):
    """Frequencies carrying energy outside the resolved annulus (plus DC)."""
    F = spectrum(f)
    rho = f.spec.freq_radius()
    lo, hi = pair.annulus()
    scale = np.abs(F).max()
    if scale == 0:
        return []
    bad = (np.abs(F) > rtol * scale) & ((rho < lo - 1e-12) | (rho > hi + 1e-12))
    return sorted(set(np.round(rho[bad], 6).tolist()))


def project_admissible(f: GridFunction, pair: LPPair) -> GridFunction:
    """Restrict the spectrum to the resolved annulus and remove the mean."""
    F = spectrum(f)
    rho = f.spec.freq_radius()
    lo, hi = pair.annulus()
    F = np.where((rho >= lo) & (rho <= hi), F, 0.0)
    return from_spectrum(f.spec, F, real=np.isrealobj(f.values))


def calderon_residual(f: GridFunction, pair: LPPair, levels: range | None = None) -> float:
    """Relative L2 error of synthesize(analyze(f)) against f.

    Requires f mean-zero and band-limited to the resolved annulus, where the
    truncated partition of unity is exactly 1.
    """
    bad = admissibility_violations(f, pair)
    if bad:
        lo, hi = pair.annulus()
        raise LevelError(
            f"input spectrum leaves the resolved annulus [{lo:g}, {hi:g}] "
            f"at |xi| in {bad[:8]}"
        )
    norm = math.sqrt(float(np.sum(np.abs(f.values) ** 2)) * f.spec.cell_measure)
    if norm == 0:
        return 0.0
    rec = synthesize(analyze(f, pair, levels), pair)
    diff = rec.values - f.values
    err = math.sqrt(float(np.sum(np.abs(diff) ** 2)) * f.spec.cell_measure)
    return err / norm


def partition_sum(pair: LPPair) -> np.ndarray:
    """sum_k conj(Fphi(2^-k xi)) Fpsi(2^-k xi) over the window, per grid frequency."""
    total = np.zeros(pair.gspec.shape)
    for k in pair.levels():
        total = total + pair.phi_mult[k] * pair.psi_mult[k]
    return total
