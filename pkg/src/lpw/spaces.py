"""Weighted Besov / Triebel-Lizorkin quasi-norms, their sequence-space
counterparts, BMO, and a grand-maximal Hardy-type norm.

Function-side norms act on band decompositions t_k (phi_k * f); sequence-side
norms act on sparse coefficient sets, in both the direct form (weight
evaluated pointwise) and the starred form (weight aggregated into cube
L_p norms t_{k,m}).  Level sums are truncated to the stored window, which is
exact on the band-limited corpus this package works with.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import (
    CubeFamily,
    DyadicCube,
    GridError,
    GridFunction,
    GridSpec,
    VectorSequence,
    cube_cells,
    cube_samples,
    lp_lq_norm,
    lp_norm,
    weighted_lp_norm,
)
from .lpaley import CoefficientSet, LPPair, apply_multiplier, band
from .weights import WeightSequence


@dataclass(frozen=True)
class NormRequest:
    """Parameters shared by the norm operations.

    space is one of B, F, F_inf, b, f, f_inf, Lp, Hardy, BMO; q may be inf
    where the definitions allow it (not in F_inf / f_inf).
    """

    space: str
    p: float
    q: float
    weights: WeightSequence
    pair: LPPair
    family: CubeFamily | None = None

    def __post_init__(self):
        if self.p <= 0 or self.q <= 0:
            raise ValueError(f"exponents must be positive, got p={self.p}, q={self.q}")
        if self.space in ("F", "f") and np.isinf(self.p):
            raise ValueError(f"space {self.space} needs p < inf")
        if self.space in ("F_inf", "f_inf") and np.isinf(self.q):
            raise ValueError(f"space {self.space} needs q < inf")
        ws = self.weights
        if ws.k_min < self.pair.k_min or ws.k_max > self.pair.k_max:
            raise ValueError(
                f"weight levels [{ws.k_min}, {ws.k_max}] leave the pair window "
                f"[{self.pair.k_min}, {self.pair.k_max}]"
            )

    def levels(self) -> range:
        return self.weights.levels()


def weighted_bands(f: GridFunction, req: NormRequest) -> VectorSequence:
    """{ t_k * |phi_k * f| } over the request's level window."""
    out = []
    for k in req.levels():
        t = req.weights.on_grid(f.spec, k)
        b = band(f, req.pair, k)
        out.append(GridFunction(f.spec, t.values * np.abs(b.values)))
    return VectorSequence(req.weights.k_min, tuple(out))


def besov_norm(f: GridFunction, req: NormRequest) -> float:
    """( sum_k ||t_k (phi_k * f)|L_p||^q )^(1/q), sup over k when q = inf."""
    terms = np.array([lp_norm(g, req.p) for g in weighted_bands(f, req).entries])
    if np.isinf(req.q):
        return float(terms.max())
    return float((terms**req.q).sum() ** (1.0 / req.q))


def tl_norm(f: GridFunction, req: NormRequest) -> float:
    """|| ( sum_k t_k^q |phi_k * f|^q )^(1/q) | L_p ||."""
    if np.isinf(req.p):
        raise ValueError("p = inf is handled by tl_infty_norm")
    return lp_lq_norm(weighted_bands(f, req), req.p, req.q)


# ---------------------------------------------------------------------------
# Carleson-type cube scans
# ---------------------------------------------------------------------------


def _scan_levels(spec: GridSpec, family: CubeFamily) -> range:
    v_lo = max(family.v_min, -int(math.floor(math.log2(2.0 * spec.R) + 1e-9)))
    v_hi = min(family.v_max, int(math.floor(math.log2(1.0 / spec.h) + 1e-9)))
    if v_lo > v_hi:
        raise GridError("cube family has no grid-resolvable levels")
    return range(v_lo, v_hi + 1)


def _cube_means_all(arr: np.ndarray, spec: GridSpec, v: int, translated: bool) -> np.ndarray:
    """Means of arr over every level-v cube (tiling), optionally half-shifted."""
    S = int(round(2.0 ** (-v) / spec.h))
    a = arr
    if translated:
        for ax in range(spec.n):
            a = np.roll(a, -(S // 2), axis=ax)
    if spec.n == 1:
        return a.reshape(spec.N // S, S).mean(axis=1)
    M = spec.N // S
    return a.reshape(M, S, M, S).mean(axis=(1, 3))


def carleson_sup(level_arrays: dict[int, np.ndarray], spec: GridSpec,
                 family: CubeFamily, q: float) -> float:
    """sup over cubes P of ( mean_P sum_{k >= level(P)} G_k )^(1/q).

    level_arrays maps k to the nonnegative integrand G_k; the level sum is
    truncated below at the stored k_min and the cube levels are clamped to
    the grid-resolvable window.
    """
    ks = sorted(level_arrays)
    suffix: dict[int, np.ndarray] = {}
    acc = np.zeros(spec.shape)
    for k in reversed(ks):
        acc = acc + level_arrays[k]
        suffix[k] = acc
    best = 0.0
    translate_flags = (False, True) if family.translates else (False,)
    for v in _scan_levels(spec, family):
        start = min((k for k in ks if k >= v), default=None)
        if start is None:
            continue
        arr = suffix[start]
        for tr in translate_flags:
            m = _cube_means_all(arr, spec, v, tr)
            best = max(best, float(m.max()))
    return best ** (1.0 / q)


def tl_infty_norm(f: GridFunction, req: NormRequest) -> float:
    """Carleson-type norm: sup over dyadic P of the cube-averaged tail
    ( (1/|P|) int_P sum_{k >= -log2 l(P)} t_k^q |phi_k * f|^q )^(1/q)."""
    if np.isinf(req.q):
        raise ValueError("F_inf norms need q < inf")
    family = req.family if req.family is not None else CubeFamily(req.pair.k_min, req.pair.k_max)
    arrays = {}
    for k in req.levels():
        t = req.weights.on_grid(f.spec, k)
        b = band(f, req.pair, k)
        arrays[k] = (t.values * np.abs(b.values)) ** req.q
    return carleson_sup(arrays, f.spec, family, req.q)


# ---------------------------------------------------------------------------
# Sequence-space norms
# ---------------------------------------------------------------------------


def _paint(spec: GridSpec, level_entries, values) -> np.ndarray:
    """Write per-cube constants onto the grid: sum_m c_m chi_{k,m}."""
    out = np.zeros(spec.shape)
    for (k, m), c in zip(level_entries, values):
        cells = cube_cells(spec, DyadicCube(k, m))
        if spec.n == 1:
            (a, b), = cells
            out[a:b] += c
        else:
            (a, b), (c0, d0) = cells
            out[a:b, c0:d0] += c
    return out


def cube_lp(t: GridFunction, Q: DyadicCube, p: float) -> float:
    """Non-normalized cube norm ||t|L_p(Q)|| by the midpoint rule."""
    vals = np.abs(cube_samples(t, Q))
    if np.isinf(p):
        return float(vals.max())
    return float((t.spec.cell_measure * (vals**p).sum()) ** (1.0 / p))


def _by_level(coeffs: CoefficientSet) -> dict[int, list]:
    grouped: dict[int, list] = {}
    for (k, m), v in coeffs.items():
        grouped.setdefault(k, []).append(((k, m), abs(v)))
    return grouped


def seq_b_norm(coeffs: CoefficientSet, spec: GridSpec, req: NormRequest) -> tuple[float, float]:
    """Besov sequence norm, (direct, starred).

    direct:  ( sum_k 2^(k n q / 2) || sum_m t_k lambda chi |L_p||^q )^(1/q)
    starred: ( sum_k 2^(k n q / 2) ( sum_m |lambda|^p t_{k,m}^p )^(q/p) )^(1/q)
    """
    n, p, q = spec.n, req.p, req.q
    terms_plain, terms_star = [], []
    for k, entries in sorted(_by_level(coeffs).items()):
        t = req.weights.on_grid(spec, k)
        kms, mags = zip(*entries)
        chi = _paint(spec, kms, mags)
        plain = weighted_lp_norm(GridFunction(spec, chi), t, p)
        tkm = np.array([cube_lp(t, DyadicCube(k, m), p) for (_, m) in kms])
        if np.isinf(p):
            star = float((np.array(mags) * tkm).max())
        else:
            star = float((np.array(mags) ** p @ tkm**p) ** (1.0 / p))
        terms_plain.append(2.0 ** (k * n / 2.0) * plain)
        terms_star.append(2.0 ** (k * n / 2.0) * star)
    return _lq(terms_plain, q), _lq(terms_star, q)


def _lq(terms, q: float) -> float:
    arr = np.array(terms, dtype=float)
    if arr.size == 0:
        return 0.0
    if np.isinf(q):
        return float(arr.max())
    return float((arr**q).sum() ** (1.0 / q))


def seq_f_norm(coeffs: CoefficientSet, spec: GridSpec, req: NormRequest) -> tuple[float, float]:
    """Triebel-Lizorkin sequence norm, (direct, starred).

    direct uses the pointwise weight t_k on each cube; starred replaces it by
    the cube aggregate 2^(k n / p) t_{k,m} (so single-coefficient inputs agree
    exactly).
    """
    n, p, q = spec.n, req.p, req.q
    if np.isinf(p):
        raise ValueError("f-norms need p < inf")
    plain_acc = np.zeros(spec.shape)
    star_acc = np.zeros(spec.shape)
    qq = 1.0 if np.isinf(q) else q
    for k, entries in sorted(_by_level(coeffs).items()):
        t = req.weights.on_grid(spec, k)
        kms, mags = zip(*entries)
        mags = np.array(mags)
        tkm = np.array([cube_lp(t, DyadicCube(k, m), p) for (_, m) in kms])
        if np.isinf(q):
            lvl_plain = _paint(spec, kms, mags) * 2.0 ** (k * n / 2.0) * t.values
            lvl_star = _paint(spec, kms, mags * tkm * 2.0 ** (k * n * (0.5 + 1.0 / p)))
            plain_acc = np.maximum(plain_acc, lvl_plain)
            star_acc = np.maximum(star_acc, lvl_star)
        else:
            plain_acc += _paint(spec, kms, mags**q) * 2.0 ** (k * n * q / 2.0) * t.values**q
            star_acc += _paint(spec, kms, (mags * tkm) ** q * 2.0 ** (k * n * q * (0.5 + 1.0 / p)))
    plain = lp_norm(GridFunction(spec, plain_acc ** (1.0 / qq)), p)
    star = lp_norm(GridFunction(spec, star_acc ** (1.0 / qq)), p)
    return plain, star


def seq_f_infty_norm(coeffs: CoefficientSet, spec: GridSpec, req: NormRequest) -> tuple[float, float]:
    """Carleson-type sequence norm, (direct, starred)."""
    n, q = spec.n, req.q
    if np.isinf(q):
        raise ValueError("f_inf norms need q < inf")
    family = req.family if req.family is not None else CubeFamily(req.pair.k_min, req.pair.k_max)
    plain_arrays: dict[int, np.ndarray] = {}
    star_arrays: dict[int, np.ndarray] = {}
    for k, entries in sorted(_by_level(coeffs).items()):
        t = req.weights.on_grid(spec, k)
        kms, mags = zip(*entries)
        mags = np.array(mags)
        tkmq = np.array([cube_lp(t, DyadicCube(k, m), q) for (_, m) in kms])
        plain_arrays[k] = _paint(spec, kms, mags**q) * 2.0 ** (k * n * q / 2.0) * t.values**q
        star_arrays[k] = _paint(spec, kms, (mags * tkmq) ** q * 2.0 ** (k * n * q * (0.5 + 1.0 / q)))
    if not plain_arrays:
        return 0.0, 0.0
    plain = carleson_sup(plain_arrays, spec, family, q)
    star = carleson_sup(star_arrays, spec, family, q)
    return plain, star


# ---------------------------------------------------------------------------
# Grand-maximal Hardy-type norm
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GrandProfile:
    """A Gaussian-derivative test profile, rescaled so its Schwartz seminorm
    sup_{|beta|<=N} sup_x |d^beta g(x)| (1+|x|)^N is at most 1."""

    width: float
    order: int
    scale: float

    def multiplier(self, spec: GridSpec, k: int) -> np.ndarray:
        xi = spec.freq_axis()
        if spec.n == 1:
            z = 2.0 ** (-k) * xi
            rho2 = z**2
        else:
            Z1, Z2 = np.meshgrid(2.0 ** (-k) * xi, 2.0 ** (-k) * xi, indexing="ij")
            z = Z1
            rho2 = Z1**2 + Z2**2
        return self.scale * (1j * z) ** self.order * np.exp(-0.5 * self.width**2 * rho2)


@dataclass(frozen=True)
class TestFunctionDictionary:
    profiles: tuple[GrandProfile, ...]
    N_order: int
    seminorms: tuple[float, ...]


def _seminorm(spec: GridSpec, width: float, order: int, N: int) -> float:
    """Numerical Schwartz seminorm p_N of the order-d Gaussian derivative."""
    xi = spec.freq_axis()
    if spec.n == 1:
        base = (1j * xi) ** order * np.exp(-0.5 * width**2 * xi**2)
        betas = [(b,) for b in range(N + 1)]
        xim = (xi,)
    else:
        X1, X2 = np.meshgrid(xi, xi, indexing="ij")
        base = (1j * X1) ** order * np.exp(-0.5 * width**2 * (X1**2 + X2**2))
        betas = [(b1, b2) for b1 in range(N + 1) for b2 in range(N + 1) if b1 + b2 <= N]
        xim = (X1, X2)
    from .lpaley import from_spectrum

    poly = (1.0 + spec.radius()) ** N
    best = 0.0
    for beta in betas:
        mult = base.copy()
        for ax, b in enumerate(beta):
            mult = mult * (1j * xim[ax]) ** b
        g = from_spectrum(spec, mult, real=False).values
        best = max(best, float((np.abs(g) * poly).max()))
    return best


def build_dictionary(
    spec: GridSpec, N: int | None = None, widths=(0.5, 1.0), max_order: int | None = None
) -> TestFunctionDictionary:
    """Gaussian-derivative bumps of two widths and orders 0..N, normalized."""
    if N is None:
        N = spec.n + 2
    if max_order is None:
        max_order = N
    profiles, norms = [], []
    for w in widths:
        for d in range(max_order + 1):
            pn = _seminorm(spec, w, d, N)
            profiles.append(GrandProfile(w, d, 1.0 / pn))
            norms.append(pn)
    return TestFunctionDictionary(tuple(profiles), N, tuple(norms))


def hardy_grand_norm(
    f: GridFunction,
    ts: WeightSequence,
    p: float,
    dictionary: TestFunctionDictionary,
) -> float:
    """|| sup over levels and dictionary members of t_k |psi_k * f| | L_p ||.

    A lower bound for the grand-maximal norm that can only grow as the
    dictionary is enlarged.
    """
    best = np.zeros(f.spec.shape)
    for k in ts.levels():
        t = ts.on_grid(f.spec, k).values
        for prof in dictionary.profiles:
            conv = apply_multiplier(f, prof.multiplier(f.spec, k))
            np.maximum(best, t * np.abs(conv.values), out=best)
    return lp_norm(GridFunction(f.spec, best), p)


def bmo_norm(f: GridFunction, family: CubeFamily | None = None) -> float:
    """sup over cubes of the mean absolute deviation from the cube mean."""
    spec = f.spec
    if family is None:
        v_hi = int(math.floor(math.log2(1.0 / spec.h) + 1e-9))
        v_lo = -int(math.floor(math.log2(2.0 * spec.R) + 1e-9))
        family = CubeFamily(v_lo, v_hi)
    best = 0.0
    translate_flags = (False, True) if family.translates else (False,)
    for v in _scan_levels(spec, family):
        S = int(round(2.0 ** (-v) / spec.h))
        for tr in translate_flags:
            a = f.values
            if tr:
                for ax in range(spec.n):
                    a = np.roll(a, -(S // 2), axis=ax)
            if spec.n == 1:
                blocks = a.reshape(spec.N // S, S)
                means = blocks.mean(axis=1, keepdims=True)
                dev = np.abs(blocks - means).mean(axis=1)
            else:
                M = spec.N // S
                blocks = a.reshape(M, S, M, S)
                means = blocks.mean(axis=(1, 3), keepdims=True)
                dev = np.abs(blocks - means).mean(axis=(1, 3))
            best = max(best, float(dev.max()))
    return best
