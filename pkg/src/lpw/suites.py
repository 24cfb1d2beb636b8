"""Named verification suites over a shared run context.

Each suite returns a JSON-able record {suite, pass, summary, records}.  All
randomness flows from the context seed, and every tolerance is pinned here,
so a configured run is reproducible byte for byte.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .grid import CubeFamily, GridFunction, GridSpec, lp_norm, weighted_lp_norm
from .lpaley import LPPair, band_decompose, calderon_residual, make_lp_pair, partition_sum, CoefficientSet
from .maximal import MaximalConfig, fefferman_stein_ratio, kernel_sum_ratio, maximal_fn, weighted_maximal_ratio, window_sum_table
from .spaces import NormRequest, besov_norm, bmo_norm, seq_b_norm, seq_f_infty_norm, seq_f_norm, tl_infty_norm, tl_norm
from .verify import (
    classical_besov_norm,
    spike_family,
    classical_tl_norm,
    coincidence_check,
    delta_coefficient_check,
    equivalence_report,
    holder_floor_check,
    make_corpus,
)
from .weights import Const, FamilyNodes, Pow, WeightSequence, ap_constant, parse_weight, sigma1, xclass_fit


DEFAULT_WEIGHT_MATRIX = {
    "w1": "const:1",
    "w2": "pow:0.3",
    "w3": "pow:-0.2",
    "w4": "shiftpow:0.4,1",
    "w5": "shiftpow:-0.3,2",
    "w6": "dyadic:0.5",
    "w7": "prod:[dyadic:1,pow:0.3]",
    "w8": "prod:[dyadic:-0.5,shiftpow:0.25,1]",
    "w9": "dyadic:2",
}

DEFAULT_CEILINGS = {
    "equivalence": 50.0,
    "coincidence": 50.0,
    "j_uniformity": 2.0,
    "ap_hypothesis": 1000.0,
    "coincidence_equivalence": 20.0,
    "seq_ratio": 20.0,
    "kernel_ratio": 100.0,
    "informational": 50.0,
}


@dataclass
class RunContext:
    """Built artifacts for one configured run; heavy pieces are cached."""

    spec: GridSpec
    k_min: int
    k_max: int
    family: CubeFamily
    corpus_size: int = 32
    seed: int = 20260808
    weight_matrix: dict = field(default_factory=lambda: dict(DEFAULT_WEIGHT_MATRIX))
    exponent_pairs: tuple = ((2.0, 1.2), (3.0, 1.5))
    ceilings: dict = field(default_factory=lambda: dict(DEFAULT_CEILINGS))
    threads: int = 1

    def __post_init__(self):
        self._cache: dict = {}

    # -- lazily built artifacts --------------------------------------------

    def pair(self, spec: GridSpec | None = None) -> LPPair:
        spec = spec or self.spec
        key = ("pair", spec)
        if key not in self._cache:
            k_cap = int(math.floor(math.log2(1.0 / spec.h) + 1e-9))
            self._cache[key] = make_lp_pair(spec, self.k_min, min(self.k_max, k_cap))
        return self._cache[key]

    def corpus(self, spec: GridSpec | None = None):
        spec = spec or self.spec
        key = ("corpus", spec)
        if key not in self._cache:
            self._cache[key] = make_corpus(spec, self.pair(spec), self.corpus_size, self.seed)
        return self._cache[key]

    def bands(self, spec: GridSpec | None = None):
        spec = spec or self.spec
        key = ("bands", spec)
        if key not in self._cache:
            self._cache[key] = {
                mem.name: band_decompose(mem.f, self.pair(spec)) for mem in self.corpus(spec)
            }
        return self._cache[key]

    def nodes(self, v_max: int | None = None) -> FamilyNodes:
        fam = self.family if v_max is None else CubeFamily(
            self.family.v_min, v_max, self.family.translates, self.family.max_per_level
        )
        key = ("nodes", fam)
        if key not in self._cache:
            self._cache[key] = FamilyNodes(self.spec.R, self.spec.n, fam)
        return self._cache[key]

    def doubled(self) -> "RunContext":
        if "doubled" not in self._cache:
            ctx = RunContext(
                spec=GridSpec(self.spec.n, self.spec.R, self.spec.N * 2, self.spec.offset),
                k_min=self.k_min,
                k_max=self.k_max,
                family=self.family,
                corpus_size=self.corpus_size,
                seed=self.seed,
                weight_matrix=self.weight_matrix,
                exponent_pairs=self.exponent_pairs,
                ceilings=self.ceilings,
                threads=self.threads,
            )
            self._cache["doubled"] = ctx
        return self._cache["doubled"]

    def map(self, fn, items):
        if self.threads > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                return list(pool.map(fn, items))
        return [fn(x) for x in items]

    def sequence(self, text_or_spec, p: float) -> WeightSequence:
        spec = parse_weight(text_or_spec) if isinstance(text_or_spec, str) else text_or_spec
        return WeightSequence(spec, self.k_min, self.k_max, p)


def _suite(name, passed, summary, records):
    return {"suite": name, "pass": bool(passed), "summary": summary, "records": records}


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------


def suite_selfequiv(ctx: RunContext) -> dict:
    """Sanity: a norm is equivalent to itself with all ratios exactly 1, and
    doubling a weight doubles every weighted norm."""
    corpus = ctx.corpus()
    norm = lambda f: lp_norm(f, 2.0)
    rep = equivalence_report(norm, norm, corpus, ceiling=1.0 + 1e-12)
    w = Pow(0.3).on_grid(ctx.spec)
    w2 = GridFunction(ctx.spec, 2.0 * w.values)
    rep2 = equivalence_report(
        lambda f: weighted_lp_norm(f, w, 2.0),
        lambda f: weighted_lp_norm(f, w2, 2.0),
        corpus,
        ceiling=1.0 + 1e-12,
        name_a="Lp(t)",
        name_b="Lp(2t)",
    )
    ok = rep.passed and rep2.passed and abs(rep2.min_ratio - 2.0) < 1e-12
    return _suite(
        "selfequiv",
        ok,
        {"identity_spread": rep.spread, "doubling_ratio": rep2.min_ratio},
        [rep.to_json(), rep2.to_json()],
    )


def suite_muckenhoupt(ctx: RunContext) -> dict:
    """Power-weight criterion at p = 2: estimates stay put (<5% per two extra
    levels) strictly inside the class and grow at least 10x over ten extra
    levels outside it."""
    p = 2.0
    base = ctx.nodes()
    plus2 = ctx.nodes(ctx.family.v_max + 2)
    plus10 = ctx.nodes(ctx.family.v_max + 10)
    records = []
    ok = True
    for a in (-0.5, 0.0, 0.5, 0.9):
        c0 = ap_constant(Pow(a), p, base)
        c2 = ap_constant(Pow(a), p, plus2)
        drift = abs(c2 / c0 - 1.0)
        good = drift < 0.05
        ok &= good
        records.append({"alpha": a, "kind": "stable", "base": c0, "plus2": c2, "drift": drift, "pass": good})
    for a in (1.5, 2.0):
        c0 = ap_constant(Pow(a), p, base)
        c10 = ap_constant(Pow(a), p, plus10)
        growth = c10 / c0
        good = growth >= 10.0
        ok &= good
        records.append({"alpha": a, "kind": "grow", "base": c0, "plus10": c10, "growth": growth, "pass": good})
    return _suite("muckenhoupt", ok, {"alphas": 6}, records)


def suite_hoelder(ctx: RunContext) -> dict:
    """Cube products M_{Q,p}(t) M_{Q,s1}(t^-1) never drop below 1."""
    nodes = ctx.nodes()
    records = []
    ok = True
    for name, text in sorted(ctx.weight_matrix.items()):
        w = parse_weight(text)
        for p, theta in ctx.exponent_pairs:
            floor = holder_floor_check(w, p, theta, nodes)
            good = floor >= 1.0 - 1e-12
            ok &= good
            records.append({"weight": name, "p": p, "theta": theta, "floor": floor, "pass": good})
    return _suite("hoelder", ok, {"weights": len(ctx.weight_matrix)}, records)


def suite_partition(ctx: RunContext) -> dict:
    """Exact annulus support, plateau lower bound, and the telescoping
    partition of unity at every resolved grid frequency."""
    pair = ctx.pair()
    spec = ctx.spec
    ps = partition_sum(pair)
    rho = spec.freq_radius()
    lo, hi = pair.annulus()
    mask = (rho >= lo) & (rho <= hi)
    dev = float(np.abs(ps[mask] - 1.0).max())
    support_ok = (
        float(pair.Fphi(np.array([0.499]))[0]) == 0.0
        and float(pair.Fphi(np.array([2.001]))[0]) == 0.0
    )
    ok = dev <= 1e-12 and support_ok and pair.plateau_min_psi > 0
    return _suite(
        "partition",
        ok,
        {
            "max_deviation": dev,
            "resolved_frequencies": int(mask.sum()),
            "plateau_min_phi": pair.plateau_min_phi,
            "plateau_min_psi": pair.plateau_min_psi,
            "support_exact": support_ok,
        },
        [],
    )


def suite_calderon(ctx: RunContext) -> dict:
    """Reproduction residual of the coefficient transform on the corpus."""
    pair = ctx.pair()
    residuals = ctx.map(lambda mem: calderon_residual(mem.f, pair), ctx.corpus())
    records = [
        {"member": mem.name, "residual": float(r)} for mem, r in zip(ctx.corpus(), residuals)
    ]
    worst = max(residuals)
    return _suite(
        "calderon",
        worst <= 1e-6,
        {"max_residual": float(worst), "members": len(records)},
        records,
    )


def suite_classical(ctx: RunContext) -> dict:
    """Dyadic weight sequences reproduce the fixed-smoothness norms to 1e-12."""
    pair = ctx.pair()
    corpus = ctx.corpus()
    records = []
    ok = True
    for s in (-1.0, 0.0, 0.5, 2.0):
        ws = WeightSequence(parse_weight(f"dyadic:{s}"), pair.k_min, pair.k_max, 2.0)
        for p, q in ((2.0, 2.0), (2.0, np.inf)):
            req = NormRequest("F" if np.isfinite(q) else "F", p, q, ws, pair)
            worst_b = worst_f = 0.0
            for mem in corpus:
                cb = classical_besov_norm(mem.f, pair, s, p, q)
                cf = classical_tl_norm(mem.f, pair, s, p, q)
                worst_b = max(worst_b, abs(besov_norm(mem.f, req) / cb - 1.0))
                worst_f = max(worst_f, abs(tl_norm(mem.f, req) / cf - 1.0))
            good = worst_b <= 1e-12 and worst_f <= 1e-12
            ok &= good
            records.append(
                {"s": s, "p": p, "q": "inf" if np.isinf(q) else q,
                 "besov_rel_err": worst_b, "tl_rel_err": worst_f, "pass": good}
            )
    return _suite("classical", ok, {"cases": len(records)}, records)


def _random_coefficient_sets(ctx: RunContext, count: int = 64):
    rng = np.random.default_rng(ctx.seed + 1)
    k_hi = ctx.pair().k_max  # grid-resolvable cap; shared by the doubled grid
    sets = []
    for _ in range(count):
        n_coef = int(rng.integers(8, 33))
        data = {}
        for _ in range(n_coef):
            k = int(rng.integers(ctx.k_min, k_hi + 1))
            C = math.ceil(ctx.spec.R * 2.0**k)
            m = int(rng.integers(-C, C))
            data[(k, (m,) * ctx.spec.n)] = complex(rng.normal(), rng.normal())
        sets.append(CoefficientSet(ctx.spec.n, data))
    return sets


def _seq_ratio_extreme(ctx: RunContext, spec: GridSpec, sets) -> float:
    # p = q makes the two forms coincide identically (disjoint cube sums), so
    # the two-sided comparison runs at p != q where cross-level mixing matters
    pair = ctx.pair(spec)
    worst = 1.0
    for name, text in sorted(ctx.weight_matrix.items()):
        for p, q in ((2.0, 1.0), (1.5, 3.0)):
            ws = WeightSequence(parse_weight(text), pair.k_min, pair.k_max, p)
            req = NormRequest("f", p, q, ws, pair)
            for coeffs in sets:
                plain, star = seq_f_norm(coeffs, spec, req)
                r = plain / star
                worst = max(worst, r, 1.0 / r)
    return worst


def suite_seqnorm(ctx: RunContext) -> dict:
    """Direct and cube-aggregated sequence norms: exact agreement on lone
    coefficients, bounded two-sided ratios on random sets, stable under grid
    doubling."""
    spec = ctx.spec
    pair = ctx.pair()
    ceiling = ctx.ceilings["seq_ratio"]
    ws = WeightSequence(Pow(0.3), pair.k_min, pair.k_max, 2.0)
    single_worst = 0.0
    for k, m in ((-2, 0), (0, 3), (3, -5), (6, 17)):
        coeffs = CoefficientSet(spec.n, {(k, (m,) * spec.n): 1.0 + 0.5j})
        for fn, kind in ((seq_b_norm, "b"), (seq_f_norm, "f"), (seq_f_infty_norm, "f_inf")):
            req = NormRequest(
                kind if kind != "f_inf" else "f_inf",
                2.0 if kind != "f_inf" else np.inf,
                2.0,
                ws,
                pair,
            )
            plain, star = fn(coeffs, spec, req)
            single_worst = max(single_worst, abs(plain / star - 1.0))
    sets = _random_coefficient_sets(ctx)
    c_base = _seq_ratio_extreme(ctx, spec, sets)
    ctx2 = ctx.doubled()
    c_dbl = _seq_ratio_extreme(ctx, ctx2.spec, sets)
    drift = c_dbl / c_base
    ok = single_worst <= 1e-12 and c_base <= ceiling and 0.5 < drift < 2.0
    return _suite(
        "seqnorm",
        ok,
        {
            "single_coeff_rel_err": single_worst,
            "ratio_extreme": c_base,
            "ratio_extreme_2N": c_dbl,
            "drift": drift,
            "ceiling": ceiling,
        },
        [],
    )


def _space_norm(tag: str, f, req: NormRequest, decomp=None) -> float:
    if tag == "B":
        return besov_norm(f, req)
    if tag == "F":
        return tl_norm(f, req)
    if tag == "F_inf":
        return tl_infty_norm(f, req)
    raise ValueError(tag)


def suite_newnorm(ctx: RunContext) -> dict:
    """Level-frozen weight comparison: the spread of norm({t_k}) against
    norm(t_j) stays under the equivalence ceiling, uniformly in j."""
    spec = ctx.spec
    pair = ctx.pair()
    corpus = ctx.corpus()
    fam = ctx.family.clamped(spec)
    ceiling = ctx.ceilings["equivalence"]
    uniformity = ctx.ceilings["j_uniformity"]
    cases = [
        ("F", 2.0, 2.0),
        ("B", 2.0, 2.0),
        ("F", 2.0, np.inf),
        ("B", 2.0, np.inf),
        ("F_inf", np.inf, 2.0),
    ]
    records = []
    ok = True
    for wtext in ("pow:0.3", "pow:-0.2"):
        wspec = parse_weight(wtext)
        ws = WeightSequence(wspec, pair.k_min, pair.k_max, 2.0)
        for tag, p, q in cases:
            space = tag if tag != "F_inf" else "F_inf"
            req_seq = NormRequest(space, p, q, ws, pair, family=fam)
            seq_vals = [_space_norm(tag, mem.f, req_seq) for mem in corpus]
            spreads = {}
            for j in range(-3, 4):
                req_j = NormRequest(space, p, q, ws.frozen(j), pair, family=fam)
                ratios = [
                    sv / _space_norm(tag, mem.f, req_j)
                    for sv, mem in zip(seq_vals, corpus)
                    if sv > 0
                ]
                spreads[j] = max(ratios) / min(ratios)
            worst = max(spreads.values())
            uni = max(spreads.values()) / min(spreads.values())
            good = worst <= ceiling and uni < uniformity
            ok &= good
            records.append(
                {
                    "weight": wtext,
                    "space": tag,
                    "p": p,
                    "q": "inf" if np.isinf(q) else q,
                    "spread_by_j": {str(j): s for j, s in sorted(spreads.items())},
                    "max_spread": worst,
                    "j_uniformity": uni,
                    "pass": good,
                }
            )
    return _suite("newnorm", ok, {"cases": len(records)}, records)


def suite_coincidence(ctx: RunContext) -> dict:
    """Positive fixtures (t, c t) must pass; the opposite-power fixture must
    fail in every guise: cube condition, lone-coefficient ratios, weighted
    Lebesgue comparison, and the full band-norm comparison."""
    spec = ctx.spec
    pair = ctx.pair()
    corpus = ctx.corpus()
    nodes = ctx.nodes()
    ceiling = ctx.ceilings["coincidence"]
    ap_ceiling = ctx.ceilings["ap_hypothesis"]
    records = []
    ok = True
    w = Pow(0.3)
    for c in (0.1, 1.0, 7.0):
        scaled = Const(c) * w if c != 1.0 else w
        res = coincidence_check(w, scaled, 2.0, 1.1, nodes, ceiling, ap_ceiling, strict=False)
        dok, dinfo = delta_coefficient_check(w, scaled, 2.0, 2.0, spec, range(pair.k_min, pair.k_max + 1), ceiling)
        good = res.passed and dok
        ok &= good
        records.append({"fixture": f"scale_{c:g}", "expected": "pass", "coincidence": res.to_json(),
                        "delta": dinfo, "delta_pass": dok, "pass": good})
    t1, t2 = Pow(0.3), Pow(-0.3)
    res = coincidence_check(t1, t2, 2.0, 1.5, nodes, ceiling, ap_ceiling, strict=False)
    dok, dinfo = delta_coefficient_check(t1, t2, 2.0, 2.0, spec, range(pair.k_min, pair.k_max + 1), ceiling)
    g1 = t1.on_grid(spec)
    g2 = t2.on_grid(spec)
    # origin-concentrated members are the discriminating witnesses for
    # weights that differ only in their origin behavior
    witnesses = corpus + spike_family(spec, pair, steps=4)
    # band-limited witnesses on this domain separate the opposite powers by
    # a factor ~40, so the norm-comparison reports get their own ceiling
    eq_ceiling = ctx.ceilings["coincidence_equivalence"]
    rep_lp = equivalence_report(
        lambda f: weighted_lp_norm(f, g1, 2.0),
        lambda f: weighted_lp_norm(f, g2, 2.0),
        witnesses, eq_ceiling, "Lp(t1)", "Lp(t2)",
    )
    ws1 = WeightSequence(t1, pair.k_min, pair.k_max, 2.0)
    ws2 = WeightSequence(t2, pair.k_min, pair.k_max, 2.0)
    rep_f = equivalence_report(
        lambda f: tl_norm(f, NormRequest("F", 2.0, 2.0, ws1, pair)),
        lambda f: tl_norm(f, NormRequest("F", 2.0, 2.0, ws2, pair)),
        witnesses, eq_ceiling, "F22(t1)", "F22(t2)",
    )
    negative_ok = (
        (not res.passed)
        and res.spread > 1e3
        and (not dok)
        and (not rep_lp.passed)
        and (not rep_f.passed)
    )
    ok &= negative_ok
    records.append(
        {
            "fixture": "opposite_powers",
            "expected": "fail",
            "coincidence": res.to_json(),
            "delta": dinfo,
            "delta_pass": dok,
            "lp_report": rep_lp.to_json(),
            "band_report": rep_f.to_json(),
            "pass": negative_ok,
        }
    )
    return _suite("coincidence", ok, {"fixtures": len(records)}, records)


def suite_maximal(ctx: RunContext) -> dict:
    """Vector maximal ratios bounded and resolution-stable; cross-level kernel
    sums bounded at the predicted rates; the doubling table matches direct
    window sums."""
    spec = ctx.spec
    pair = ctx.pair()
    cfg = MaximalConfig.full(spec)
    records = []
    ok = True

    def corpus_fs(c: RunContext):
        sp = c.spec
        mcfg = MaximalConfig.full(sp)
        return [
            (mem.name, fefferman_stein_ratio(c.bands(sp)[mem.name].bands, 2.0, 2.0, 1.0, mcfg))
            for mem in c.corpus()
        ]

    fs_rows = corpus_fs(ctx)
    fs_base = max(r for _, r in fs_rows)
    fs_dbl = max(r for _, r in corpus_fs(ctx.doubled()))
    fs_drift = abs(fs_dbl / fs_base - 1.0)
    good = fs_drift < 0.10
    ok &= good
    records.append({"check": "fefferman_stein", "p": 2.0, "q": 2.0, "sigma": 1.0,
                    "ratio": fs_base, "ratio_2N": fs_dbl, "drift": fs_drift, "pass": good,
                    "members": [{"corpus_id": n, "ratio": r} for n, r in fs_rows]})

    def corpus_weighted(c: RunContext):
        sp = c.spec
        mcfg = MaximalConfig.full(sp)
        ws = WeightSequence(Pow(0.3), c.pair(sp).k_min, c.pair(sp).k_max, 2.0)
        return [
            (mem.name, weighted_maximal_ratio(c.bands(sp)[mem.name].bands, ws, 2.0, mcfg, q=np.inf).ratio)
            for mem in c.corpus()
        ]

    wm_rows = corpus_weighted(ctx)
    wm_base = max(r for _, r in wm_rows)
    wm_dbl = max(r for _, r in corpus_weighted(ctx.doubled()))
    wm_drift = abs(wm_dbl / wm_base - 1.0)
    good = wm_drift < 0.10
    ok &= good
    records.append({"check": "weighted_maximal", "weight": "pow:0.3", "p": 2.0, "q": "inf",
                    "ratio": wm_base, "ratio_2N": wm_dbl, "drift": wm_drift, "pass": good,
                    "members": [{"corpus_id": n, "ratio": r} for n, r in wm_rows]})

    s = 1.0
    ws = WeightSequence(parse_weight(f"dyadic:{s}"), pair.k_min, pair.k_max, 2.0)
    kceil = ctx.ceilings["kernel_ratio"]
    for direction, K in (("below", s + 1.0), ("above", s - 1.0)):
        worst = 0.0
        for mem in ctx.corpus()[:8]:
            fs = ctx.bands()[mem.name].bands
            worst = max(worst, kernel_sum_ratio(fs, ws, K, 0, direction, 2.0, 2.0, cfg).ratio)
        good = worst < kceil
        ok &= good
        records.append({"check": f"kernel_sum_{direction}", "K": K, "ratio": worst,
                        "ceiling": kceil, "pass": good})

    rng = np.random.default_rng(ctx.seed + 2)
    vals = rng.normal(size=spec.N) if spec.n == 1 else rng.normal(size=spec.shape)
    sizes = cfg.sizes(spec)
    table = window_sum_table(np.abs(vals), sizes)
    ext = np.concatenate([np.abs(vals), np.abs(vals)]) if spec.n == 1 else None
    worst_err = 0.0
    for _ in range(1000):
        w = sizes[int(rng.integers(0, len(sizes)))]
        i = int(rng.integers(0, spec.N))
        if spec.n == 1:
            direct = ext[i : i + w].sum()
            worst_err = max(worst_err, abs(table[w][i] - direct) / max(direct, 1e-300))
    small = GridSpec(spec.n, spec.R, 128 if spec.n == 1 else 16, spec.offset)
    fsmall = GridFunction(small, rng.normal(size=small.shape))
    from .maximal import maximal_fn_bruteforce

    mcfg_small = MaximalConfig.full(small)
    diff = np.abs(
        maximal_fn(fsmall, mcfg_small).values - maximal_fn_bruteforce(fsmall, mcfg_small).values
    ).max()
    good = worst_err <= 1e-12 and diff <= 1e-12
    ok &= good
    records.append({"check": "fast_vs_bruteforce", "window_rel_err": worst_err,
                    "maximal_abs_err": float(diff), "pass": good})
    return _suite("maximal", ok, {"checks": len(records)}, records)


def suite_xclassfit(ctx: RunContext) -> dict:
    """Fitted growth exponents satisfy the order relation alpha2 >= alpha1
    (up to the fit grid step) on the admissible weight matrix."""
    nodes = ctx.nodes()
    records = []
    ok = True
    p, theta = 2.0, 1.2
    s1 = sigma1(p, theta)
    for name, text in sorted(ctx.weight_matrix.items()):
        ts = ctx.sequence(text, p)
        fit = xclass_fit(ts, (s1, p), nodes)
        good = fit.alpha2 >= fit.alpha1 - fit.grid_step - 1e-12
        ok &= good
        records.append({"weight": name, "alpha1": fit.alpha1, "alpha2": fit.alpha2,
                        "C1": fit.C1, "C2": fit.C2, "grid_step": fit.grid_step, "pass": good})
    return _suite("xclassfit", ok, {"weights": len(records)}, records)


def suite_bmo(ctx: RunContext) -> dict:
    """Oscillation norm against the Carleson band norm at unit weight: the
    two stay within a fixed factor on the corpus (reported, pass at the
    informational ceiling)."""
    spec = ctx.spec
    pair = ctx.pair()
    fam = ctx.family.clamped(spec)
    ws = WeightSequence(Const(1.0), pair.k_min, pair.k_max, 2.0)
    req = NormRequest("F_inf", np.inf, 2.0, ws, pair, family=fam)
    rep = equivalence_report(
        lambda f: bmo_norm(f, fam),
        lambda f: tl_infty_norm(f, req),
        ctx.corpus(),
        ceiling=ctx.ceilings["informational"],
        name_a="BMO",
        name_b="Finf2",
    )
    return _suite("bmo", rep.passed, {"spread": rep.spread, "min": rep.min_ratio, "max": rep.max_ratio}, [rep.to_json()])


ALL_SUITES = {
    "selfequiv": suite_selfequiv,
    "hoelder": suite_hoelder,
    "muckenhoupt": suite_muckenhoupt,
    "partition": suite_partition,
    "calderon": suite_calderon,
    "classical": suite_classical,
    "seqnorm": suite_seqnorm,
    "newnorm": suite_newnorm,
    "coincidence": suite_coincidence,
    "maximal": suite_maximal,
    "xclassfit": suite_xclassfit,
    "bmo": suite_bmo,
}

