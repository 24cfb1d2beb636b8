"""Acceptance gate: one test per criterion, at the stated scale and
tolerance, printing one PASS/FAIL line each.

The default desk scale is n=1, N=4096, R=8 with a 2D smoke at N=256^2.
Suites are shared through a session context so band decompositions and
quadrature geometry are built once.
"""

import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from lpw.grid import CubeFamily, GridSpec
from lpw.lpaley import calderon_residual, make_lp_pair, partition_sum
from lpw.suites import ALL_SUITES, RunContext
from lpw.verify import make_corpus

FIXTURE = Path(__file__).resolve().parent.parent / "fixtures" / "default.json"


@pytest.fixture(scope="module")
def ctx():
    return RunContext(
        spec=GridSpec(1, 8.0, 4096),
        k_min=-3,
        k_max=8,
        family=CubeFamily(-4, 9),
        corpus_size=32,
        seed=20260808,
    )


def report(n, name, ok, detail=""):
    print(f"{'PASS' if ok else 'FAIL'} criterion {n:>2} ({name}): {detail}")
    assert ok, f"criterion {n} ({name}) failed: {detail}"


class TestAcceptance:
    def test_criterion_01_muckenhoupt(self, ctx):
        t0 = time.time()
        res = ALL_SUITES["muckenhoupt"](ctx)
        elapsed = time.time() - t0
        stable = [r for r in res["records"] if r["kind"] == "stable"]
        grow = [r for r in res["records"] if r["kind"] == "grow"]
        ok = res["pass"] and elapsed < 10.0
        report(
            1,
            "muckenhoupt criterion",
            ok,
            f"max stable drift {max(r['drift'] for r in stable):.3%}, "
            f"min growth x{min(r['growth'] for r in grow):.0f}, {elapsed:.1f}s",
        )

    def test_criterion_02_hoelder_floor(self, ctx):
        res = ALL_SUITES["hoelder"](ctx)
        worst = min(r["floor"] for r in res["records"])
        report(2, "Hoelder floor", res["pass"], f"min floor {worst:.15f} over {len(res['records'])} cases")

    def test_criterion_03_partition(self, ctx):
        res = ALL_SUITES["partition"](ctx)
        s = res["summary"]
        report(
            3,
            "partition of unity",
            res["pass"],
            f"max deviation {s['max_deviation']:.2e} at {s['resolved_frequencies']} frequencies, "
            f"plateau min {s['plateau_min_psi']:.3f}, support exact: {s['support_exact']}",
        )

    def test_criterion_04_calderon(self, ctx):
        t0 = time.time()
        res = ALL_SUITES["calderon"](ctx)
        elapsed = time.time() - t0
        ok = res["pass"] and res["summary"]["members"] == 32 and elapsed - 0 < 30.0
        report(4, "reproduction identity", ok,
               f"max residual {res['summary']['max_residual']:.2e} on 32 members, {elapsed:.1f}s")

    def test_criterion_05_classical_reduction(self, ctx):
        res = ALL_SUITES["classical"](ctx)
        worst = max(max(r["besov_rel_err"], r["tl_rel_err"]) for r in res["records"])
        report(5, "classical reduction", res["pass"], f"max relative error {worst:.2e}")

    def test_criterion_06_sequence_norms(self, ctx):
        res = ALL_SUITES["seqnorm"](ctx)
        s = res["summary"]
        report(
            6,
            "sequence-norm equivalence",
            res["pass"],
            f"single-coefficient err {s['single_coeff_rel_err']:.2e}, "
            f"ratio extreme {s['ratio_extreme']:.2f} <= {s['ceiling']}, drift x{s['drift']:.3f}",
        )

    def test_criterion_07_frozen_level_equivalence(self, ctx):
        t0 = time.time()
        res = ALL_SUITES["newnorm"](ctx)
        elapsed = time.time() - t0
        worst_spread = max(r["max_spread"] for r in res["records"])
        worst_uni = max(r["j_uniformity"] for r in res["records"])
        ok = res["pass"] and elapsed < 180.0
        report(
            7,
            "frozen-level equivalence",
            ok,
            f"max spread {worst_spread:.2f}, j-uniformity {worst_uni:.3f} < 2, {elapsed:.1f}s",
        )

    def test_criterion_08_coincidence(self, ctx):
        res = ALL_SUITES["coincidence"](ctx)
        neg = next(r for r in res["records"] if r["fixture"] == "opposite_powers")
        pos_ok = all(r["pass"] for r in res["records"] if r["expected"] == "pass")
        ok = (
            res["pass"]
            and pos_ok
            and neg["coincidence"]["spread"] > 1e3
            and not neg["delta_pass"]
            and not neg["lp_report"]["pass"]
            and not neg["band_report"]["pass"]
        )
        report(
            8,
            "coincidence conditions",
            ok,
            f"positive fixtures pass, negative cube spread {neg['coincidence']['spread']:.2e} > 1e3, "
            f"delta/Lp/band reports all fail",
        )

    def test_criterion_09_maximal(self, ctx):
        res = ALL_SUITES["maximal"](ctx)
        by = {r["check"]: r for r in res["records"]}
        report(
            9,
            "maximal inequalities",
            res["pass"],
            f"FS drift {by['fefferman_stein']['drift']:.3%}, "
            f"weighted drift {by['weighted_maximal']['drift']:.3%}, "
            f"kernel ratios {by['kernel_sum_below']['ratio']:.2f}/{by['kernel_sum_above']['ratio']:.2f}, "
            f"fast=brute to {by['fast_vs_bruteforce']['window_rel_err']:.1e}",
        )

    def test_criterion_10_growth_exponent_order(self, ctx):
        res = ALL_SUITES["xclassfit"](ctx)
        gap = min(r["alpha2"] - r["alpha1"] for r in res["records"])
        report(10, "fitted exponent order", res["pass"],
               f"min(alpha2 - alpha1) = {gap:+.3f} >= -grid step over {len(res['records'])} weights")

    def test_criterion_11_end_to_end_determinism(self, tmp_path):
        t0 = time.time()
        outs = []
        for run in (1, 2):
            out = tmp_path / f"run{run}"
            proc = subprocess.run(
                [sys.executable, "-m", "lpw.cli", "verify", "all",
                 "--config", str(FIXTURE), "--out", str(out)],
                capture_output=True,
                text=True,
            )
            assert proc.returncode == 0, proc.stdout + proc.stderr
            outs.append(out)
        elapsed = time.time() - t0
        same_json = (outs[0] / "report.json").read_bytes() == (outs[1] / "report.json").read_bytes()
        same_csv = (outs[0] / "ratios.csv").read_bytes() == (outs[1] / "ratios.csv").read_bytes()
        ok = same_json and same_csv and elapsed < 300.0
        report(11, "end-to-end determinism", ok,
               f"exit 0 twice, byte-identical reports, {elapsed:.0f}s total < 300s")

    def test_supplementary_2d_smoke(self):
        spec = GridSpec(2, 2.0, 256)
        pair = make_lp_pair(spec, -1, 6)
        ps = partition_sum(pair)
        rho = spec.freq_radius()
        lo, hi = pair.annulus()
        mask = (rho >= lo) & (rho <= hi)
        dev = float(np.abs(ps[mask] - 1.0).max())
        corpus = make_corpus(spec, pair, size=4, seed=5)
        worst = max(calderon_residual(mem.f, pair) for mem in corpus)
        ok = dev <= 1e-12 and worst <= 1e-6
        print(f"{'PASS' if ok else 'FAIL'} supplementary (2D smoke at N=256^2): "
              f"partition dev {dev:.2e}, max residual {worst:.2e}")
        assert ok
