"""Acceptance suite: twelve criteria, each reported as one PASS/FAIL line.

Criteria 1 and 10 compare against printed values that are internally
inconsistent; they are kept at their stated targets and expected to fail
(see the decisions ledger for the analysis).
"""
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from peres.analysis import (
    base_rate,
    binary_entropy,
    chi_square_blocks,
    default_grid,
    e4_base_rate,
    empirical_output,
    fixed_point_residual,
    psi2_base_rate,
    rate_report,
    shannon_entropy,
    truncated_rate,
)
from peres.core import Distribution, as_symbols, entropy, to_text
from peres.extractors import builtin, builtin_names, rotation_orbits
from peres.schemes import example_tree
from peres.tree import interleave
from peres.verify import check_extracting, golden_tables, random_distributions

GRID = default_grid()


def by_ones(report, n=6):
    totals = {r.composition: r.digits for r in report.results}
    return tuple(totals[(n - k, k)] for k in range(n + 1))


def test_c01_von_neumann_class_totals(criterion):
    with criterion(1, "von Neumann class totals for n=6"):
        start = time.perf_counter()
        vn = builtin("peres2").with_plan((), "von-neumann")
        rep = check_extracting(vn, 6, lengths=[6])
        got = by_ones(rep)
        elapsed = time.perf_counter() - start
        assert elapsed < 1.0, f"took {elapsed:.2f}s"
        assert rep.ok
        assert got == (0, 6, 24, 28, 24, 6, 0), f"computed {got}"


def test_c02_peres_class_totals(criterion):
    with criterion(2, "Peres class totals for n=6 and extracting images"):
        rep = check_extracting(builtin("peres2"), 6, lengths=[6])
        assert rep.ok, rep.summary()
        assert by_ones(rep) == (0, 10, 34, 56, 34, 10, 0)


CAPS = [("peres2", 14), ("peres3bit", 12), ("peres4bit_e4", 12), ("dijkstra3", 12),
        ("dijkstra5", 15), ("dijkstra11_partial", 22), ("peres3face", 8),
        ("peres4face", 6), ("peres4face_alt", 6)]


def test_c03_exhaustive_extraction(criterion):
    with criterion(3, "exhaustive extraction checks at the stated caps"):
        start = time.perf_counter()
        for name, cap in CAPS:
            rep = check_extracting(builtin(name), cap)
            assert rep.ok, rep.summary()
        elapsed = time.perf_counter() - start
        assert elapsed < 300, f"took {elapsed:.0f}s"


def test_c04_golden_tables(criterion):
    with criterion(4, "printed component tables match cell for cell"):
        rep = golden_tables()
        assert rep.ok, rep.render()


def test_c05_leaf_entropy_identity(criterion):
    with criterion(5, "leaf entropy sum equals block entropy"):
        for name in builtin_names():
            t = builtin(name).tree
            for dist in random_distributions(t.alphabet_size, 100, seed=2024):
                assert min(dist) > 0
                block = t.block_distribution(dist)
                err = abs(t.leaf_entropy_sum(block) - entropy(block))
                assert err < 1e-9, (name, dist, err)


def test_c06_fixed_point(criterion):
    with criterion(6, "entropy is a fixed point of T"):
        h = binary_entropy
        for p in GRID:
            q = 1 - p
            s2 = p * p + q * q
            assert abs(h(p) - (p * q + h(s2) / 2 + s2 * h(p * p / s2) / 2)) < 1e-12
        for name in ["peres3face", "peres4face", "peres3bit", "peres4bit_e4",
                     "dijkstra3", "dijkstra5"]:
            s = builtin(name)
            if s.alphabet_size == 2:
                dists = GRID
            else:
                # the p-grid lifted to larger alphabets: random interior points
                dists = [Distribution.uniform(s.alphabet_size)] + \
                    random_distributions(s.alphabet_size, 98, seed=6)
            worst = max(fixed_point_residual(s, d) for d in dists)
            assert worst < 1e-12, (name, worst)
        gap = max(fixed_point_residual(builtin("dijkstra11_partial"), p) for p in GRID)
        assert gap > 1e-3, gap


def test_c07_rate_recursion(criterion):
    with criterion(7, "truncated rates: r0, r1, r2(1/3), monotone and bounded"):
        s = builtin("peres2")
        assert truncated_rate(s, 0.3, 0) == 0.0
        for p in GRID:
            assert abs(truncated_rate(s, p, 1) - p * (1 - p)) < 1e-15
        assert abs(truncated_rate(s, 1 / 3, 2) - float(Fraction(158, 405))) < 1e-12
        for p in (0.1, 0.3, 0.5):
            rep = rate_report(s, p, 10)
            assert rep.monotone and rep.bounded, rep.rates


def test_c08_base_rate_formulas(criterion):
    with criterion(8, "3-bit and E4 base rates; E4 factor minimum 1.625"):
        for p in GRID:
            q = 1 - p
            assert abs(base_rate(builtin("peres3bit"), p) - 2 * p * q / 3) < 1e-12
            assert abs(base_rate(builtin("peres4bit_e4"), p)
                       - p * q * (1 + p * p + q * q + p * q / 2)) < 1e-12
        factors = [base_rate(builtin("peres4bit_e4"), p) / (p * (1 - p)) for p in GRID]
        k = int(np.argmin(factors))
        assert GRID[k] == 0.5 and abs(factors[k] - 1.625) < 1e-9


def test_c09_psi2_versus_e4(criterion):
    with criterion(9, "two-level Peres base rate dominates E4"):
        for p in GRID:
            assert psi2_base_rate(p) >= e4_base_rate(p)
            assert psi2_base_rate(p) >= base_rate(builtin("peres4bit_e4"), p) - 1e-15


def test_c10_worked_structure_example(criterion):
    with criterion(10, "worked structure example: branch string, restrictions, rebuild"):
        t = example_tree()
        x = "207643590289787"
        assert to_text(t.apply_component(2, x)) == "01020000101"
        t0 = t.restrict(3, x)
        t1 = tuple(s for s in t.restrict(2, x) if s == 7)
        t2 = tuple(s for s in t.restrict(2, x) if s == 3)
        assert (to_text(t0), to_text(t1), to_text(t2)) == ("0490898", "777", "3")
        rebuilt = interleave(as_symbols("01020000101"), [t0, t1, t2])
        assert to_text(rebuilt) == "07439890787", f"rebuilt {to_text(rebuilt)}"


def test_c11_orbit_counts(criterion):
    with criterion(11, "rotation orbit counts for m = 3, 5, 7, 11"):
        counts = tuple(len(rotation_orbits(m)) for m in (3, 5, 7, 11))
        assert counts == (2, 6, 18, 186)
        assert all(c == (2 ** m - 2) // m for c, m in zip(counts, (3, 5, 7, 11)))


def test_c12_empirical(criterion):
    with criterion(12, "10^6 flips at p=0.3: rate bound and chi-square"):
        s = builtin("peres2")
        y = empirical_output(s, 0.3, 10 ** 6, seed=20240301)
        rate = len(y) / 10 ** 6
        assert rate <= shannon_entropy(0.3) + 0.01, rate
        res = chi_square_blocks(y, 2, 8)
        assert float(res.pvalue) > 1e-3, float(res.pvalue)
