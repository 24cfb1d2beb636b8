"""Empirical verification: reproducible corpora, norm-equivalence reports,
and the coincidence conditions for weighted space identity.

Equivalence between two norms is measured by the spread max(B/A) / min(B/A)
over a corpus, which is scale free: the pass ceiling bounds the product of
the two comparison constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import GridFunction, GridSpec, lp_norm
from .lpaley import LPPair, from_spectrum
from .weights import (
    FamilyNodes,
    WeightSpec,
    ap_constant,
    sigma1,
)
from .spaces import cube_lp
from .grid import DyadicCube, level_index_range


# ---------------------------------------------------------------------------
# Corpus
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CorpusMember:
    name: str
    kind: str
    f: GridFunction


def _annulus_indices(spec: GridSpec, pair: LPPair) -> tuple[int, int]:
    """Positive frequency index range inside the resolved annulus (1D)."""
    lo, hi = pair.annulus()
    fund = spec.fundamental
    j_lo = max(1, math.ceil(lo / fund - 1e-9))
    j_hi = min(spec.N // 2 - 1, math.floor(hi / fund + 1e-9))
    if j_hi < j_lo:
        raise ValueError("resolved annulus holds no grid frequencies")
    return j_lo, j_hi


def _resolution_free_bounds(R: float, pair: LPPair) -> tuple[int, int]:
    """The same index range but independent of N, so corpora built at N and
    2N sample the same trigonometric polynomial."""
    lo, hi = pair.annulus()
    fund = np.pi / R
    return max(1, math.ceil(lo / fund - 1e-9)), math.floor(hi / fund + 1e-9)


def _member_from_coeffs(spec: GridSpec, coeffs: dict[int, complex], name: str, kind: str) -> CorpusMember:
    F = np.zeros(spec.N, dtype=complex)
    for j, c in coeffs.items():
        F[j % spec.N] += c
        F[(-j) % spec.N] += np.conj(c)
    f = from_spectrum(spec, F, real=True)
    scale = lp_norm(f, 2.0)
    if scale == 0:
        raise ValueError("degenerate corpus member")
    return CorpusMember(name, kind, GridFunction(spec, f.values / scale))


def _member_from_coeffs_2d(spec: GridSpec, coeffs: dict, name: str, kind: str) -> CorpusMember:
    F = np.zeros(spec.shape, dtype=complex)
    for (j1, j2), c in coeffs.items():
        F[j1 % spec.N, j2 % spec.N] += c
        F[(-j1) % spec.N, (-j2) % spec.N] += np.conj(c)
    f = from_spectrum(spec, F, real=True)
    scale = lp_norm(f, 2.0)
    return CorpusMember(name, kind, GridFunction(spec, f.values / scale))


def make_corpus(
    spec: GridSpec,
    pair: LPPair,
    size: int = 32,
    seed: int = 20260808,
    spike_scales: int = 4,
) -> list[CorpusMember]:
    """Admissible band-limited test functions: random multi-band draws,
    single-band draws, translated near-spikes over shrinking sub-bands, and
    modulated Gaussian envelopes.  Coefficients are drawn on the frequency
    lattice determined by R alone, so the same seeds reproduce the same
    functions at any N that resolves them."""
    rng = np.random.default_rng(seed)
    j_lo_free, j_hi_free = _resolution_free_bounds(spec.R, pair)
    j_lo, j_hi = _annulus_indices(spec, pair)
    j_lo, j_hi = max(j_lo, j_lo_free), min(j_hi, j_hi_free)
    members: list[CorpusMember] = []
    kinds = ["multiband", "single", "spike", "gauss"]
    if spec.n == 2:
        return _make_corpus_2d(spec, pair, size, rng)
    i = 0
    while len(members) < size:
        kind = kinds[i % len(kinds)]
        idx = len(members)
        if kind == "multiband":
            count = int(rng.integers(8, 25))
            js = rng.integers(j_lo, j_hi + 1, size=count)
            coeffs = {}
            for j in js:
                coeffs[int(j)] = coeffs.get(int(j), 0) + complex(rng.normal(), rng.normal())
            members.append(_member_from_coeffs(spec, coeffs, f"multiband{idx:02d}", kind))
        elif kind == "single":
            k0 = int(rng.integers(pair.first_active + 1, pair.k_max - 1))
            lo = max(j_lo, math.ceil(2.0**k0 / spec.fundamental))
            hi = min(j_hi, math.floor(2.0 ** (k0 + 1) / spec.fundamental))
            if hi < lo:
                lo, hi = j_lo, min(j_hi, j_lo + 4)
            js = rng.integers(lo, hi + 1, size=6)
            coeffs = {int(j): complex(rng.normal(), rng.normal()) for j in js}
            members.append(_member_from_coeffs(spec, coeffs, f"single{idx:02d}", kind))
        elif kind == "spike":
            step = (i // len(kinds)) % spike_scales
            hi = j_hi
            lo = max(j_lo, hi // 2**step if step else j_lo)
            x0 = float(rng.uniform(-spec.R, spec.R))
            js = np.arange(lo, hi + 1)
            env = np.sin(np.pi * (js - lo + 0.5) / (hi - lo + 1)) ** 2
            coeffs = {
                int(j): complex(e * np.exp(-1j * (np.pi * j / spec.R) * x0))
                for j, e in zip(js, env)
            }
            members.append(_member_from_coeffs(spec, coeffs, f"spike{idx:02d}", kind))
        else:
            mid = math.sqrt(j_lo * j_hi)
            center = float(rng.uniform(mid / 2, mid * 2))
            widthj = max(2.0, center / 4)
            x0 = float(rng.uniform(-spec.R, spec.R))
            js = np.arange(j_lo, j_hi + 1)
            env = np.exp(-0.5 * ((js - center) / widthj) ** 2)
            coeffs = {
                int(j): complex(e * np.exp(-1j * (np.pi * j / spec.R) * x0))
                for j, e in zip(js, env)
                if e > 1e-12
            }
            members.append(_member_from_coeffs(spec, coeffs, f"gauss{idx:02d}", kind))
        i += 1
    return members


def _make_corpus_2d(spec: GridSpec, pair: LPPair, size: int, rng) -> list[CorpusMember]:
    lo, hi = pair.annulus()
    fund = spec.fundamental
    j_mid = max(1, round(math.sqrt(lo * hi) / fund))
    members = []
    for idx in range(size):
        count = int(rng.integers(6, 16))
        coeffs = {}
        tries = 0
        while len(coeffs) < count and tries < 200:
            j1 = int(rng.integers(-spec.N // 2 + 1, spec.N // 2))
            j2 = int(rng.integers(-spec.N // 2 + 1, spec.N // 2))
            rad = fund * math.hypot(j1, j2)
            tries += 1
            if lo <= rad <= hi:
                coeffs[(j1, j2)] = complex(rng.normal(), rng.normal())
        if not coeffs:
            coeffs[(j_mid, 0)] = 1.0 + 0.0j
        members.append(_member_from_coeffs_2d(spec, coeffs, f"rand2d{idx:02d}", "multiband"))
    return members


def spike_family(spec: GridSpec, pair: LPPair, steps: int = 4) -> list[CorpusMember]:
    """Band-limited bumps at the origin over sub-bands widening dyadically
    with the step index, so the spatial concentration doubles at each step."""
    j_lo, j_hi = _annulus_indices(spec, pair)
    out = []
    for step in range(steps):
        hi = j_hi
        lo = max(j_lo, hi >> (step + 1))
        js = np.arange(lo, hi + 1)
        env = np.sin(np.pi * (js - lo + 0.5) / (hi - lo + 1)) ** 2
        coeffs = {int(j): complex(e) for j, e in zip(js, env)}
        out.append(_member_from_coeffs(spec, coeffs, f"origin_spike{step}", "spike"))
    return out


# ---------------------------------------------------------------------------
# Equivalence reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EquivalenceReport:
    norm_a: str
    norm_b: str
    ratios: tuple[float, ...]
    members: tuple[str, ...]
    excluded: tuple[str, ...]
    min_ratio: float
    max_ratio: float
    witness_min: str
    witness_max: str
    ceiling: float

    @property
    def spread(self) -> float:
        return self.max_ratio / self.min_ratio

    @property
    def passed(self) -> bool:
        return self.spread <= self.ceiling

    def to_json(self):
        return {
            "norm_a": self.norm_a,
            "norm_b": self.norm_b,
            "ratios": list(self.ratios),
            "members": list(self.members),
            "excluded": list(self.excluded),
            "min_ratio": self.min_ratio,
            "max_ratio": self.max_ratio,
            "witness_min": self.witness_min,
            "witness_max": self.witness_max,
            "spread": self.spread,
            "ceiling": self.ceiling,
            "pass": self.passed,
        }


def equivalence_report(
    norm_a,
    norm_b,
    corpus: list[CorpusMember],
    ceiling: float = 50.0,
    name_a: str = "A",
    name_b: str = "B",
) -> EquivalenceReport:
    """Per-member ratios B/A with extremes and witnesses; members on which
    either norm vanishes are excluded and reported."""
    ratios, names, excluded = [], [], []
    for mem in corpus:
        va, vb = norm_a(mem.f), norm_b(mem.f)
        if va == 0 or vb == 0:
            excluded.append(mem.name)
            continue
        ratios.append(vb / va)
        names.append(mem.name)
    if not ratios:
        raise ValueError("all corpus members excluded: both norms vanish")
    arr = np.array(ratios)
    imin, imax = int(arr.argmin()), int(arr.argmax())
    return EquivalenceReport(
        norm_a=name_a,
        norm_b=name_b,
        ratios=tuple(ratios),
        members=tuple(names),
        excluded=tuple(excluded),
        min_ratio=float(arr[imin]),
        max_ratio=float(arr[imax]),
        witness_min=names[imin],
        witness_max=names[imax],
        ceiling=ceiling,
    )


# ---------------------------------------------------------------------------
# Coincidence conditions
# ---------------------------------------------------------------------------


class CoincidenceRefusal(ValueError):
    """The Muckenhoupt hypothesis failed; diagnostics are attached."""

    def __init__(self, message, result):
        super().__init__(message)
        self.result = result


@dataclass(frozen=True)
class CoincidenceResult:
    passed: bool
    refused: bool
    hypothesis: dict
    extremes: dict
    spread: float
    ceiling: float

    def to_json(self):
        return {
            "pass": self.passed,
            "refused": self.refused,
            "hypothesis": self.hypothesis,
            "extremes": self.extremes,
            "spread": self.spread,
            "ceiling": self.ceiling,
        }


def coincidence_check(
    t1: WeightSpec,
    t2: WeightSpec,
    p: float,
    theta: float,
    nodes: FamilyNodes,
    ceiling: float = 50.0,
    ap_ceiling: float = 1000.0,
    strict: bool = True,
) -> CoincidenceResult:
    """Two-sided comparability of cube means: M_{Q,s1}(t_i^-1) and
    M_{Q,p}(t_i) must agree across the family for the weighted spaces to
    coincide.  Requires both t_i^p inside the Muckenhoupt class at p/theta;
    violation refuses (strict) or flags the result, with the ratio families
    still reported as diagnostics.
    """
    s1 = sigma1(p, theta)
    hyp = {
        "ap_t1": ap_constant(t1.power(p), p / theta, nodes),
        "ap_t2": ap_constant(t2.power(p), p / theta, nodes),
        "ap_ceiling": ap_ceiling,
    }
    refused = hyp["ap_t1"] > ap_ceiling or hyp["ap_t2"] > ap_ceiling
    rho_p = nodes.means(t1, p) / nodes.means(t2, p)
    rho_s = nodes.means(t1.inv(), s1) / nodes.means(t2.inv(), s1)
    extremes = {
        "mean_p": (float(rho_p.min()), float(rho_p.max())),
        "mean_sigma1": (float(rho_s.min()), float(rho_s.max())),
    }
    all_vals = np.concatenate([rho_p, rho_s])
    spread = float(all_vals.max() / all_vals.min())
    spread_p = rho_p.max() / rho_p.min()
    spread_s = rho_s.max() / rho_s.min()
    passed = (not refused) and spread_p <= ceiling and spread_s <= ceiling
    result = CoincidenceResult(bool(passed), bool(refused), hyp, extremes, spread, ceiling)
    if refused and strict:
        raise CoincidenceRefusal(
            f"Muckenhoupt hypothesis fails at p/theta={p/theta:g}: "
            f"constants {hyp['ap_t1']:.3g}, {hyp['ap_t2']:.3g} exceed {ap_ceiling:g}",
            result,
        )
    return result


def holder_floor_check(
    t: WeightSpec, p: float, theta: float, nodes: FamilyNodes, k: int = 0
) -> float:
    """min over cubes of M_{Q,p}(t) M_{Q,s1}(t^-1); at least 1 up to rounding
    since both means share one quadrature measure."""
    s1 = sigma1(p, theta)
    prods = nodes.means(t, p, k) * nodes.means(t.inv(), s1, k)
    return float(prods.min())


def delta_coefficient_check(
    t1: WeightSpec,
    t2: WeightSpec,
    p: float,
    q: float,
    spec: GridSpec,
    levels: range,
    ceiling: float = 50.0,
    positions_per_level: int = 3,
) -> tuple[bool, dict]:
    """Sequence-norm ratios of single-coefficient inputs under the two
    weights.  For a lone coefficient every sequence norm reduces to the cube
    norm of the weight, so uniform boundedness restates the coincidence
    condition at sequence level."""
    ratios = {}
    for k in levels:
        lo, hi = level_index_range(spec, k)
        count = hi - lo
        rel = [0.5, 0.66, 0.95][:positions_per_level]
        for r in rel:
            m = lo + int(r * (count - 1))
            Q = DyadicCube(k, (m,) * spec.n)
            n1 = cube_lp(GridFunction(spec, t1.on_grid(spec, k).values), Q, p)
            n2 = cube_lp(GridFunction(spec, t2.on_grid(spec, k).values), Q, p)
            ratios[(k, m)] = n1 / n2
    vals = np.array(list(ratios.values()))
    spread = float(vals.max() / vals.min())
    return spread <= ceiling, {
        "spread": spread,
        "min": float(vals.min()),
        "max": float(vals.max()),
        "ceiling": ceiling,
    }


# ---------------------------------------------------------------------------
# Independent classical-path norms (dyadic weights 2^(s k))
# ---------------------------------------------------------------------------


def classical_besov_norm(
    f: GridFunction, pair: LPPair, s: float, p: float, q: float
) -> float:
    """( sum_k 2^(s k q) || phi_k * f |L_p||^q )^(1/q), written directly
    against the multiplier transform so it shares no code with the weighted
    path beyond the FFT."""
    vals = []
    F = np.fft.fftn(f.values)
    cell = f.spec.cell_measure
    for k in pair.levels():
        bk = np.fft.ifftn(pair.phi_mult[k] * F)
        if np.isrealobj(f.values):
            bk = bk.real
        a = np.abs(bk)
        if np.isinf(p):
            term = a.max()
        else:
            term = (cell * (a**p).sum()) ** (1.0 / p)
        vals.append(2.0 ** (s * k) * term)
    arr = np.array(vals)
    if np.isinf(q):
        return float(arr.max())
    return float((arr**q).sum() ** (1.0 / q))


def classical_tl_norm(f: GridFunction, pair: LPPair, s: float, p: float, q: float) -> float:
    """|| ( sum_k 2^(s k q) |phi_k * f|^q )^(1/q) | L_p ||, direct path."""
    F = np.fft.fftn(f.values)
    cell = f.spec.cell_measure
    agg = None
    for k in pair.levels():
        bk = np.fft.ifftn(pair.phi_mult[k] * F)
        if np.isrealobj(f.values):
            bk = bk.real
        a = 2.0 ** (s * k) * np.abs(bk)
        if np.isinf(q):
            agg = a if agg is None else np.maximum(agg, a)
        else:
            agg = a**q if agg is None else agg + a**q
    if not np.isinf(q):
        agg = agg ** (1.0 / q)
    if np.isinf(p):
        return float(agg.max())
    return float((cell * (agg**p).sum()) ** (1.0 / p))
