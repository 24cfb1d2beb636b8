"""Closed-form weights, Muckenhoupt constants, and the two-sided growth class.

Weights are expression trees over radial primitives

    pow:a       |x|^a
    const:c     c > 0
    dyadic:s    2^(k s)          (level dependent)
    shiftpow:a,c  (c + |x|)^a
    prod:[...]  product composition

evaluated at arbitrary points and levels.  Cube means M_{Q,r}(w) are computed
by midpoint quadrature on a per-cube mesh that is graded dyadically toward
the origin (the only singular point the grammar can produce), down to a core
scale tied to the finest level of the cube family.  Integrable singularities
then converge as the family deepens, while non-integrable ones blow up at
the core rate, which is exactly the divergence the Muckenhoupt criteria are
probed for.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import CubeFamily, GridFunction, GridSpec


class WeightError(ValueError):
    """Raised for ill-formed weights or inadmissible weight sequences."""


# ---------------------------------------------------------------------------
# Expression grammar
# ---------------------------------------------------------------------------


class WeightSpec:
    """Base class: a strictly positive radial weight w(x, k)."""

    separable: bool = True  # w(x,k) = 2^(k s) * g(|x|)

    def eval(self, r: np.ndarray, k: int = 0) -> np.ndarray:
        s, g = self.split()
        return 2.0 ** (k * s) * g(r)

    def split(self):
        """Return (s, g) with w(x,k) = 2^(k s) g(|x|); None if not separable."""
        raise NotImplementedError

    def key(self) -> str:
        raise NotImplementedError

    def inv(self) -> "WeightSpec":
        return PowOf(self, -1.0)

    def power(self, e: float) -> "WeightSpec":
        return PowOf(self, e)

    def frozen(self, j: int) -> "WeightSpec":
        return Frozen(self, j)

    def __mul__(self, other: "WeightSpec") -> "WeightSpec":
        return Prod((self, other))

    def __repr__(self):
        return self.key()

    def on_grid(self, spec: GridSpec, k: int = 0) -> GridFunction:
        with np.errstate(divide="ignore"):
            vals = self.eval(spec.radius(), k)
        if np.any(~np.isfinite(vals)) or np.any(vals <= 0):
            raise WeightError(
                f"weight {self.key()} is not positive finite on the grid "
                "(an offset grid avoids samples at the origin)"
            )
        return GridFunction(spec, vals)


@dataclass(frozen=True)
class Const(WeightSpec):
    c: float

    def __post_init__(self):
        if self.c <= 0:
            raise WeightError(f"const weight must be positive, got {self.c}")

    def split(self):
        return 0.0, lambda r: np.full_like(np.asarray(r, dtype=float), self.c)

    def key(self):
        return f"const:{self.c:g}"


@dataclass(frozen=True)
class Pow(WeightSpec):
    a: float

    def split(self):
        return 0.0, lambda r: np.asarray(r, dtype=float) ** self.a

    def key(self):
        return f"pow:{self.a:g}"


@dataclass(frozen=True)
class Dyadic(WeightSpec):
    s: float

    def split(self):
        return self.s, lambda r: np.ones_like(np.asarray(r, dtype=float))

    def key(self):
        return f"dyadic:{self.s:g}"


@dataclass(frozen=True)
class ShiftPow(WeightSpec):
    a: float
    c: float

    def __post_init__(self):
        if self.c <= 0:
            raise WeightError(f"shiftpow offset must be positive, got {self.c}")

    def split(self):
        return 0.0, lambda r: (self.c + np.asarray(r, dtype=float)) ** self.a

    def key(self):
        return f"shiftpow:{self.a:g},{self.c:g}"


@dataclass(frozen=True)
class Prod(WeightSpec):
    factors: tuple[WeightSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise WeightError("empty product weight")

    @property
    def separable(self):
        return all(f.separable for f in self.factors)

    def split(self):
        if not self.separable:
            return None
        parts = [f.split() for f in self.factors]
        s = sum(p[0] for p in parts)

        def g(r, _parts=parts):
            out = np.ones_like(np.asarray(r, dtype=float))
            for _, gi in _parts:
                out = out * gi(r)
            return out

        return s, g

    def eval(self, r, k=0):
        out = np.ones_like(np.asarray(r, dtype=float))
        for f in self.factors:
            out = out * f.eval(r, k)
        return out

    def key(self):
        return "prod:[" + ",".join(f.key() for f in self.factors) + "]"


@dataclass(frozen=True)
class PowOf(WeightSpec):
    base: WeightSpec
    e: float

    @property
    def separable(self):
        return self.base.separable

    def split(self):
        sp = self.base.split()
        if sp is None:
            return None
        s, g = sp
        return s * self.e, lambda r: g(r) ** self.e

    def eval(self, r, k=0):
        return self.base.eval(r, k) ** self.e

    def key(self):
        return f"powof:({self.base.key()})^{self.e:g}"


@dataclass(frozen=True)
class Frozen(WeightSpec):
    """The level-independent weight t_j obtained by fixing the level index."""

    base: WeightSpec
    j: int

    @property
    def separable(self):
        return self.base.separable

    def split(self):
        sp = self.base.split()
        if sp is None:
            return None
        s, g = sp
        scale = 2.0 ** (self.j * s)
        return 0.0, lambda r: scale * g(r)

    def eval(self, r, k=0):
        return self.base.eval(r, self.j)

    def key(self):
        return f"frozen:({self.base.key()})@{self.j}"


@dataclass(frozen=True)
class AltPow(WeightSpec):
    """|x|^(a * (-1)^k): a level-alternating exponent, outside the config grammar.

    Useful as a counterexample generator; it is deliberately not expressible
    in the serialized grammar.
    """

    a: float
    separable = False

    def split(self):
        return None

    def eval(self, r, k=0):
        sign = -1.0 if k % 2 else 1.0
        return np.asarray(r, dtype=float) ** (self.a * sign)

    def key(self):
        return f"altpow:{self.a:g}"


@dataclass(frozen=True)
class AltConst(WeightSpec):
    """c^((-1)^k): bounded level modulation, outside the config grammar."""

    c: float
    separable = False

    def __post_init__(self):
        if self.c <= 0:
            raise WeightError("altconst base must be positive")

    def split(self):
        return None

    def eval(self, r, k=0):
        val = self.c ** (-1.0 if k % 2 else 1.0)
        return np.full_like(np.asarray(r, dtype=float), val)

    def key(self):
        return f"altconst:{self.c:g}"


def _split_top_level(body: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    # commas also separate multi-argument primitives (shiftpow:a,c); a piece
    # without a ':' continues the previous element's argument list
    merged: list[str] = []
    for part in parts:
        if ":" not in part and merged:
            merged[-1] += "," + part
        else:
            merged.append(part)
    return merged


def parse_weight(text: str) -> WeightSpec:
    """Parse the config grammar: pow:a, const:c, dyadic:s, shiftpow:a,c, prod:[...]."""
    text = text.strip()
    if ":" not in text:
        raise WeightError(f"cannot parse weight {text!r}")
    head, body = text.split(":", 1)
    head = head.strip().lower()
    try:
        if head == "pow":
            return Pow(float(body))
        if head == "const":
            return Const(float(body))
        if head == "dyadic":
            return Dyadic(float(body))
        if head == "shiftpow":
            a, c = (float(x) for x in body.split(","))
            return ShiftPow(a, c)
        if head == "prod":
            body = body.strip()
            if not (body.startswith("[") and body.endswith("]")):
                raise WeightError(f"prod body must be bracketed: {text!r}")
            return Prod(tuple(parse_weight(p) for p in _split_top_level(body[1:-1])))
    except WeightError:
        raise
    except Exception as exc:
        raise WeightError(f"cannot parse weight {text!r}: {exc}") from None
    raise WeightError(f"unknown weight primitive {head!r} in {text!r}")


@dataclass(frozen=True)
class WeightSequence:
    """A level-indexed weight family {t_k}, k_min <= k <= k_max, with its
    integrability exponent p."""

    spec: WeightSpec
    k_min: int
    k_max: int
    p: float

    def __post_init__(self):
        if self.k_min > self.k_max:
            raise WeightError("empty level range in weight sequence")
        if self.p <= 0:
            raise WeightError(f"admissibility exponent p must be positive, got {self.p}")
        object.__setattr__(self, "_grid_cache", {})

    def levels(self) -> range:
        return range(self.k_min, self.k_max + 1)

    def frozen(self, j: int) -> "WeightSequence":
        return WeightSequence(self.spec.frozen(j), self.k_min, self.k_max, self.p)

    def on_grid(self, gspec: GridSpec, k: int) -> GridFunction:
        key = (gspec, k)
        cache = self._grid_cache
        if key not in cache:
            cache[key] = self.spec.on_grid(gspec, k)
        return cache[key]


# ---------------------------------------------------------------------------
# Graded midpoint quadrature over cube families
# ---------------------------------------------------------------------------


def _graded_segments(length: float, core: float) -> list[tuple[float, float]]:
    """Dyadic segments of [0, length) growing away from 0, core first."""
    if length <= 2 * core:
        return [(0.0, length)]
    segs = [(0.0, core)]
    lo = core
    while lo < length:
        hi = min(2 * lo, length)
        segs.append((lo, hi))
        lo = hi
    return segs


def _axis_nodes(lo: float, hi: float, core: float, seg_nodes: int, flat_nodes: int):
    """Midpoint nodes and weights for [lo, hi), graded toward 0 when touched.

    Weights sum to the interval length.  Intervals away from the origin get a
    single uniform panel; dyadic geometry guarantees their distance from 0 is
    at least their length, so the integrands stay smooth there.
    """
    if lo < 0 < hi:
        n1, w1 = _axis_nodes(lo, 0.0, core, seg_nodes, flat_nodes)
        n2, w2 = _axis_nodes(0.0, hi, core, seg_nodes, flat_nodes)
        return np.concatenate([n1, n2]), np.concatenate([w1, w2])
    if hi <= 0:
        n, w = _axis_nodes(-hi, -lo, core, seg_nodes, flat_nodes)
        return -n, w
    # now 0 <= lo < hi
    if lo > 0:
        step = (hi - lo) / flat_nodes
        nodes = lo + (np.arange(flat_nodes) + 0.5) * step
        return nodes, np.full(flat_nodes, step)
    nodes, wts = [], []
    for a, b in _graded_segments(hi, core):
        step = (b - a) / seg_nodes
        nodes.append(a + (np.arange(seg_nodes) + 0.5) * step)
        wts.append(np.full(seg_nodes, step))
    return np.concatenate(nodes), np.concatenate(wts)


def _wrap(x: np.ndarray, R: float) -> np.ndarray:
    return (x + R) % (2.0 * R) - R


class _Batch:
    """One group of same-shaped cubes: radius (B, K), normalized weights (K,)."""

    __slots__ = ("meta", "radius", "wts")

    def __init__(self, meta, radius, wts):
        self.meta = meta
        self.radius = radius
        self.wts = wts


class FamilyNodes:
    """Quadrature geometry for a dyadic cube family over [-R, R)^n.

    Built once per family and reused across weights and exponents; cube means
    of separable weights are cached per (weight, exponent).
    """

    def __init__(
        self,
        R: float,
        n: int,
        family: CubeFamily,
        core_scale: float | None = None,
        seg_nodes: int = 8,
        flat_nodes: int = 16,
        core_refine: int = 10,
    ):
        if n not in (1, 2):
            raise WeightError("cube quadrature supports n in {1, 2}")
        self.R = float(R)
        self.n = n
        self.family = family
        self.core = core_scale if core_scale is not None else 2.0 ** (-family.v_max)
        # grade a few octaves below the family scale so nearly-critical
        # singularities converge fast, while true divergences still track
        # the family depth
        self.core_eff = self.core * 2.0 ** (-core_refine)
        self.seg_nodes = seg_nodes
        self.flat_nodes = flat_nodes
        self.batches: list[_Batch] = []
        self._mean_cache: dict = {}
        self._min_cache: dict = {}
        shifts = (0.0, 0.5) if family.translates else (0.0,)
        for v in family.levels():
            for shift in shifts:
                self._build_level(v, shift)
        self.n_cubes = sum(b.radius.shape[0] for b in self.batches)

    # -- geometry ----------------------------------------------------------

    def _intervals(self, v: int, shift: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Positions and per-cube axis intervals: clip to the domain first,
        then translate, so translated probes may cross the seam at +-R."""
        side = 2.0 ** (-v)
        ms = self.family.positions(self.R, v)
        lo = np.maximum(ms * side, -self.R) + shift * side
        hi = np.minimum((ms + 1) * side, self.R) + shift * side
        return ms, lo, hi

    def _build_level(self, v: int, shift: float) -> None:
        ms, lo, hi = self._intervals(v, shift)
        touches = (lo <= 0) & (hi >= 0)
        seam = hi > self.R
        if self.n == 1:
            special = touches | seam
            self._append_regular(v, shift, ms[~special][:, None], lo[~special][:, None],
                                 hi[~special][:, None])
            for m, a, b in zip(ms[special], lo[special], hi[special]):
                self._append_special(v, shift, (int(m),), ((a, b),))
        else:
            M1, M2 = np.meshgrid(ms, ms, indexing="ij")
            L1, L2 = np.meshgrid(lo, lo, indexing="ij")
            H1, H2 = np.meshgrid(hi, hi, indexing="ij")
            T1, T2 = np.meshgrid(touches, touches, indexing="ij")
            S1, S2 = np.meshgrid(seam, seam, indexing="ij")
            # the radius is singular only where both axes reach the origin
            special = (T1 & T2) | S1 | S2
            reg = ~special
            mm = np.stack([M1[reg], M2[reg]], axis=-1)
            los = np.stack([L1[reg], L2[reg]], axis=-1)
            his = np.stack([H1[reg], H2[reg]], axis=-1)
            self._append_regular(v, shift, mm, los, his)
            for m1, m2, a1, b1, a2, b2 in zip(
                M1[special], M2[special], L1[special], H1[special], L2[special], H2[special]
            ):
                self._append_special(v, shift, (int(m1), int(m2)), ((a1, b1), (a2, b2)))

    def _append_regular(self, v, shift, ms, lo, hi):
        if ms.shape[0] == 0:
            return
        K = self.flat_nodes
        offs = (np.arange(K) + 0.5) / K
        if self.n == 1:
            X = lo + (hi - lo) * offs[None, :]
            radius = np.abs(X)
            wts = np.full(K, 1.0 / K)
        else:
            X = lo[:, 0][:, None] + (hi[:, 0] - lo[:, 0])[:, None] * offs[None, :]
            Y = lo[:, 1][:, None] + (hi[:, 1] - lo[:, 1])[:, None] * offs[None, :]
            radius = np.hypot(X[:, :, None], Y[:, None, :]).reshape(ms.shape[0], K * K)
            wts = np.full(K * K, 1.0 / (K * K))
        meta = [(v, tuple(int(x) for x in np.atleast_1d(m)), shift > 0) for m in ms]
        self.batches.append(_Batch(meta, radius, wts))

    def _axis_pieces(self, a: float, b: float):
        """Node mesh for [a, b), wrapping across the seam at +R when needed."""
        pieces = [(a, min(b, self.R))] if b <= self.R else [(a, self.R), (-self.R, b - 2 * self.R)]
        nodes, wts = [], []
        for plo, phi in pieces:
            nn, ww = _axis_nodes(plo, phi, self.core_eff, self.seg_nodes, self.flat_nodes)
            nodes.append(nn)
            wts.append(ww)
        return np.concatenate(nodes), np.concatenate(wts) / (b - a)

    def _append_special(self, v, shift, m, intervals):
        axes = [self._axis_pieces(a, b) for a, b in intervals]
        if self.n == 1:
            radius = np.abs(axes[0][0])[None, :]
            wts = axes[0][1]
        else:
            (nx, wx), (ny, wy) = axes
            radius = np.hypot(nx[:, None], ny[None, :]).ravel()[None, :]
            wts = (wx[:, None] * wy[None, :]).ravel()
        self.batches.append(_Batch([(v, m, shift > 0)], radius, wts))

    def meta(self) -> list[tuple[int, tuple[int, ...], bool]]:
        out = []
        for b in self.batches:
            out.extend(b.meta)
        return out

    # -- cube statistics ----------------------------------------------------

    def means(self, w: WeightSpec, r: float, k: int = 0) -> np.ndarray:
        """M_{Q,r}(t_k) for every cube in family order; r = inf is the node max."""
        if r != np.inf and r <= 0:
            raise WeightError(f"mean exponent must be positive, got {r}")
        if w.separable:
            s, g = w.split()
            base = self._separable_means(w.key(), g, r)
            return (2.0 ** (k * s)) * base if s else base
        return self._direct_means(w, r, k)

    def _separable_means(self, wkey: str, g, r: float) -> np.ndarray:
        key = (wkey, r)
        cached = self._mean_cache.get(key)
        if cached is not None:
            return cached
        parts = []
        for b in self.batches:
            vals = g(b.radius)
            if np.isinf(r):
                parts.append(vals.max(axis=1))
            else:
                parts.append((vals**r @ b.wts) ** (1.0 / r))
        out = np.concatenate(parts)
        self._mean_cache[key] = out
        return out

    def _direct_means(self, w: WeightSpec, r: float, k: int) -> np.ndarray:
        key = (w.key(), r, k)
        cached = self._mean_cache.get(key)
        if cached is not None:
            return cached
        parts = []
        for b in self.batches:
            vals = w.eval(b.radius, k)
            if np.isinf(r):
                parts.append(vals.max(axis=1))
            else:
                parts.append((vals**r @ b.wts) ** (1.0 / r))
        out = np.concatenate(parts)
        self._mean_cache[key] = out
        return out

    def mins(self, w: WeightSpec, k: int = 0) -> np.ndarray:
        """Per-cube minimum of the weight over the quadrature nodes."""
        key = (w.key(), k if not w.separable else None)
        cached = self._min_cache.get(key)
        if cached is not None:
            if w.separable:
                s, _ = w.split()
                return (2.0 ** (k * s)) * cached
            return cached
        parts = []
        if w.separable:
            _, g = w.split()
            for b in self.batches:
                parts.append(g(b.radius).min(axis=1))
        else:
            for b in self.batches:
                parts.append(w.eval(b.radius, k).min(axis=1))
        out = np.concatenate(parts)
        self._min_cache[key] = out
        if w.separable:
            s, _ = w.split()
            return (2.0 ** (k * s)) * out
        return out


def domain_integral(w: WeightSpec, R: float, n: int, p: float, core: float, k: int = 0,
                    seg_nodes: int = 16, flat_nodes: int = 64) -> float:
    """Graded quadrature of integral over [-R,R)^n of w^p, core scale given."""
    nodes, wts = _axis_nodes(-R, R, core, seg_nodes, flat_nodes)
    if n == 1:
        return float(w.eval(np.abs(nodes), k) ** p @ wts)
    rad = np.hypot(nodes[:, None], nodes[None, :]).ravel()
    ww = (wts[:, None] * wts[None, :]).ravel()
    return float(w.eval(rad, k) ** p @ ww)


def check_admissible(ts: WeightSequence, R: float, n: int, tol: float = 0.02) -> None:
    """Verify local p-integrability of every t_k by a refinement probe.

    The whole-domain integral of t_k^p is recomputed with the quadrature core
    halved; a relative move above `tol` marks a divergent (non-integrable)
    singularity and raises WeightError.
    """
    levels = list(ts.levels()) if not ts.spec.separable else [ts.k_min]
    for k in levels:
        i1 = domain_integral(ts.spec, R, n, ts.p, core=2.0**-22, k=k)
        i2 = domain_integral(ts.spec, R, n, ts.p, core=2.0**-23, k=k)
        if not (np.isfinite(i1) and np.isfinite(i2)):
            raise WeightError(f"weight {ts.spec.key()} has a non-integrable p-power at level {k}")
        if i2 > i1 * (1.0 + tol):
            raise WeightError(
                f"weight {ts.spec.key()} fails the p-admissibility refinement probe at level {k}: "
                f"integral moved {i2 / i1 - 1.0:.3%} under core halving"
            )


# ---------------------------------------------------------------------------
# Muckenhoupt constants and the growth-class report
# ---------------------------------------------------------------------------


def conjugate(p: float) -> float:
    if p <= 1:
        raise WeightError(f"conjugate exponent needs p > 1, got {p}")
    return p / (p - 1.0) if np.isfinite(p) else 1.0


def sigma1(p: float, theta: float) -> float:
    """The pairing exponent theta * (p/theta)' used throughout."""
    if not 0 < theta < p:
        raise WeightError(f"need 0 < theta < p, got theta={theta}, p={p}")
    return theta * conjugate(p / theta)


def ap_constant(gamma: WeightSpec, p: float, nodes: FamilyNodes, k: int = 0) -> float:
    """Largest cube product M_Q(gamma) * M_{Q,p'/p}(gamma^-1) over the family.

    A lower estimate of the Muckenhoupt constant that grows as the family
    refines exactly when the weight falls outside the class.
    """
    if p <= 1:
        raise WeightError(f"ap_constant needs p > 1 (use a1_constant), got {p}")
    r = conjugate(p) / p
    prod = nodes.means(gamma, 1.0, k) * nodes.means(gamma.inv(), r, k)
    return float(prod.max())


def ap_witness(gamma: WeightSpec, p: float, nodes: FamilyNodes, k: int = 0):
    r = conjugate(p) / p
    prod = nodes.means(gamma, 1.0, k) * nodes.means(gamma.inv(), r, k)
    i = int(np.argmax(prod))
    return float(prod[i]), nodes.meta()[i]


def a1_constant(gamma: WeightSpec, nodes: FamilyNodes, k: int = 0) -> float:
    """Largest cube ratio M_Q(gamma) / min_Q(gamma) over the family."""
    ratio = nodes.means(gamma, 1.0, k) / nodes.mins(gamma, k)
    return float(ratio.max())


@dataclass(frozen=True)
class RHProbe:
    best_eps: float | None
    sup_ratio: float | None
    ratios: dict
    bound: float


def reverse_holder_probe(
    gamma: WeightSpec,
    p: float,
    nodes: FamilyNodes,
    eps_grid=(0.05, 0.1, 0.2, 0.4, 0.8, 1.6, 3.2, 6.4, 12.8),
    bound: float = 1.5,
    ap_ceiling: float = 1e6,
    k: int = 0,
) -> RHProbe:
    """Largest probed eps with sup_Q M_{Q,1+eps}(gamma)/M_Q(gamma) <= bound."""
    if ap_constant(gamma, max(p, 1.0 + 1e-9) if p <= 1 else p, nodes, k) > ap_ceiling:
        raise WeightError(
            f"weight {gamma.key()} exceeds the Muckenhoupt ceiling {ap_ceiling:g}; "
            "the self-improvement probe needs a class weight"
        )
    base = nodes.means(gamma, 1.0, k)
    ratios = {}
    best = None
    best_ratio = None
    for eps in sorted(eps_grid):
        sup = float((nodes.means(gamma, 1.0 + eps, k) / base).max())
        ratios[eps] = sup
        if sup <= bound:
            best, best_ratio = eps, sup
    return RHProbe(best, best_ratio, ratios, bound)


@dataclass(frozen=True)
class XClassReport:
    alpha: tuple[float, float]
    sigma: tuple[float, float]
    p: float
    C1: float
    C2: float
    witness1: tuple
    witness2: tuple

    def to_json(self):
        return {
            "alpha": list(self.alpha),
            "sigma": [s if np.isfinite(s) else "inf" for s in self.sigma],
            "p": self.p,
            "C1": self.C1,
            "C2": self.C2,
            "witness1": _witness_json(self.witness1),
            "witness2": _witness_json(self.witness2),
        }


def _witness_json(w):
    (k, j, (v, m, translated)) = w
    return {"k": k, "j": j, "cube": {"v": v, "m": list(m), "translated": translated}}


def _level_stats(ts: WeightSequence, nodes: FamilyNodes, sigma: tuple[float, float]):
    s1, s2 = sigma
    A = {k: nodes.means(ts.spec, ts.p, k) for k in ts.levels()}
    B = {j: nodes.means(ts.spec.inv(), s1, j) for j in ts.levels()}
    D = {j: nodes.means(ts.spec, s2, j) for j in ts.levels()}
    return A, B, D


def xclass_constants(
    ts: WeightSequence,
    alpha: tuple[float, float],
    sigma: tuple[float, float],
    nodes: FamilyNodes,
    skip_admissibility: bool = False,
) -> XClassReport:
    """Sharpest constants C1, C2 in the two cross-level growth bounds

        M_{Q,p}(t_k)   M_{Q,s1}(t_j^-1) <= C1 2^(a1 (k-j))   (k <= j)
        M_{Q,s2}(t_j) / M_{Q,p}(t_k)    <= C2 2^(a2 (j-k))   (k <= j)

    over the cube family and stored levels, with argmax witnesses.
    """
    a1, a2 = alpha
    s1, s2 = sigma
    if s1 <= 0 or s2 <= 0:
        raise WeightError("sigma exponents must be positive (inf allowed)")
    if not skip_admissibility:
        check_admissible(ts, nodes.R, nodes.n)
    A, B, D = _level_stats(ts, nodes, sigma)
    meta = nodes.meta()
    C1 = -np.inf
    C2 = -np.inf
    w1 = w2 = None
    for k in ts.levels():
        for j in range(k, ts.k_max + 1):
            prod1 = A[k] * B[j] * 2.0 ** (-a1 * (k - j))
            i1 = int(np.argmax(prod1))
            if prod1[i1] > C1:
                C1, w1 = float(prod1[i1]), (k, j, meta[i1])
            prod2 = (D[j] / A[k]) * 2.0 ** (-a2 * (j - k))
            i2 = int(np.argmax(prod2))
            if prod2[i2] > C2:
                C2, w2 = float(prod2[i2]), (k, j, meta[i2])
    return XClassReport((a1, a2), (s1, s2), ts.p, C1, C2, w1, w2)


@dataclass(frozen=True)
class XClassFit:
    alpha1: float
    alpha2: float
    C1: float
    C2: float
    grid_step: float


def xclass_fit(
    ts: WeightSequence,
    sigma: tuple[float, float],
    nodes: FamilyNodes,
    alpha_lo: float = -4.0,
    alpha_hi: float = 4.0,
    step: float = 0.05,
    plateau_tol: float = 0.02,
) -> XClassFit:
    """Fit growth exponents by grid search.

    C1 is nondecreasing in alpha1 and C2 nonincreasing in alpha2, so the
    minimum of each sits on a plateau; the fit reports the plateau edges
    (largest alpha1 and smallest alpha2 within plateau_tol of the minimum),
    which recover the exact dyadic rate for weights of the form 2^(k s) g.
    """
    A, B, D = _level_stats(ts, nodes, sigma)
    lags = range(0, ts.k_max - ts.k_min + 1)
    M1, M2 = {}, {}
    for d in lags:
        m1 = m2 = -np.inf
        for k in ts.levels():
            j = k + d
            if j > ts.k_max:
                continue
            m1 = max(m1, float((A[k] * B[j]).max()))
            m2 = max(m2, float((D[j] / A[k]).max()))
        M1[d], M2[d] = m1, m2
    count = int(round((alpha_hi - alpha_lo) / step)) + 1
    alphas = np.round(alpha_lo + step * np.arange(count), 12)
    C1 = np.array([max(M1[d] * 2.0 ** (a * d) for d in lags) for a in alphas])
    C2 = np.array([max(M2[d] * 2.0 ** (-a * d) for d in lags) for a in alphas])
    lo1 = C1.min()
    lo2 = C2.min()
    i1 = int(np.max(np.nonzero(C1 <= lo1 * (1 + plateau_tol))[0]))
    i2 = int(np.min(np.nonzero(C2 <= lo2 * (1 + plateau_tol))[0]))
    return XClassFit(float(alphas[i1]), float(alphas[i2]), float(C1[i1]), float(C2[i2]), step)


def same_constant_check(
    ts: WeightSequence,
    p: float,
    theta: float,
    nodes: FamilyNodes,
    ratio_tol: float = 1.01,
) -> tuple[bool, dict[int, float]]:
    """Whether the Muckenhoupt constants of t_k^p at exponent p/theta agree
    across levels (max/min <= ratio_tol)."""
    if p / theta <= 1:
        raise WeightError(f"need p/theta > 1, got p={p}, theta={theta}")
    consts = {k: ap_constant(ts.spec.power(p), p / theta, nodes, k) for k in ts.levels()}
    vals = list(consts.values())
    ok = max(vals) <= min(vals) * ratio_tol
    return ok, consts
