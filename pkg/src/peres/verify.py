"""Brute-force verification harness.

A function is extracting iff its multiset image of every equiprobable class
is an extracting multiset, so every check here walks compositions and
enumerates one class at a time.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from .core import (
    CapExceeded,
    class_size,
    compositions,
    multiset_violation,
    to_text,
)
from .extractors import Scheme, builtin
from .tree import OUTPUT, BinarizationTree

MAX_STRINGS = 10 ** 7


@dataclass
class ClassResult:
    composition: tuple[int, ...]
    size: int
    digits: int                      # total output digits over the class
    violation: tuple | None = None   # (length, witness_a, witness_b)

    @property
    def ok(self):
        return self.violation is None

    def line(self, d=2):
        counts = ",".join(map(str, self.composition))
        if self.ok:
            return f"COMPOSITION {counts} OK size={self.size} digits={self.digits}"
        length, a, b = self.violation
        return (f"COMPOSITION {counts} FAIL length={length} "
                f"witnesses={to_text(a) or 'λ'},{to_text(b) or 'λ'}")


@dataclass
class Report:
    name: str
    results: list[ClassResult] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self):
        return all(r.ok for r in self.results)

    @property
    def first_violation(self):
        return next((r for r in self.results if not r.ok), None)

    def lines(self):
        return [r.line() for r in self.results]

    def summary(self):
        bad = self.first_violation
        head = f"{self.name}: {len(self.results)} classes, "
        if bad is None:
            return head + "all extracting"
        return head + "violation at " + bad.line()

    def render(self):
        return "\n".join([*self.notes, *self.lines(), self.summary()])


def class_members(counts):
    """Every string of the class, in no particular order (faster than lexicographic)."""
    n = sum(counts)
    if len(counts) == 2:
        zeros = [0] * n
        for ones in combinations(range(n), counts[1]):
            x = zeros[:]
            for i in ones:
                x[i] = 1
            yield tuple(x)
        return
    x = [0] * n

    def place(sym, free):
        if sym == len(counts) - 1:
            for i in free:
                x[i] = sym
            yield tuple(x)
            return
        for chosen in combinations(free, counts[sym]):
            for i in chosen:
                x[i] = sym
            rest = [i for i in free if i not in chosen]
            yield from place(sym + 1, rest)

    yield from place(0, list(range(n)))


def class_image(fn, counts) -> Counter:
    return Counter(fn(x) for x in class_members(counts))


def _check_size(alphabet, n):
    total = sum(alphabet ** k for k in range(n + 1))
    if total > MAX_STRINGS:
        raise CapExceeded(f"{total} strings exceeds the verification cap {MAX_STRINGS}")


def check_extracting(s: Scheme, max_symbols: int, lengths=None, depth=None) -> Report:
    """Exhaustive extracting-property check on every class of length <= ``max_symbols``.

    Trailing ``n mod b`` symbols never reach the extractor, so the image of a
    class of length ``n`` is assembled from images of the shorter classes of
    length ``n - n mod b``, weighted by how many tails realise each split.
    """
    m, b, d = s.alphabet_size, s.block_length, s.output_alphabet
    _check_size(m, max_symbols)
    lengths = range(max_symbols + 1) if lengths is None else lengths
    images: dict[tuple, Counter] = {}

    def image(counts):
        hit = images.get(counts)
        if hit is None:
            hit = images[counts] = class_image(lambda x: s.extract_tuple(x, depth), counts)
        return hit

    report = Report(s.name)
    for n in lengths:
        r = n % b
        for c in compositions(n, m):
            total = Counter()
            for tail in compositions(r, m):
                if any(t > k for t, k in zip(tail, c)):
                    continue
                head = tuple(k - t for k, t in zip(c, tail))
                weight = class_size(tail)
                for z, cnt in image(head).items():
                    total[z] += weight * cnt
            digits = sum(len(z) * cnt for z, cnt in total.items())
            report.results.append(
                ClassResult(c, class_size(c), digits, multiset_violation(total, d)))
    return report


def class_digit_totals(s: Scheme, n: int) -> dict[tuple, int]:
    """Output digits summed over each class of length ``n``."""
    return {r.composition: r.digits for r in check_extracting(s, n, lengths=[n]).results}


# -- output-node uniformity ---------------------------------------------------

def random_distributions(m, count, seed, floor=1e-3):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        w = rng.dirichlet(np.ones(m)) + floor
        out.append(tuple(w / w.sum()))
    return out


def check_uniform_outputs(tree: BinarizationTree, grid_size: int = 50, seed=0,
                          symbolic: bool = False, tol: float = 1e-9) -> bool:
    """Every Output node has a uniform branching distribution.

    Numerically on ``grid_size`` random positive source distributions, and
    with ``symbolic=True`` additionally by comparing, branch by branch, the
    multisets of leaf monomials (symbol counts of the block labels).
    """
    outputs = [v.index for v in tree.nodes if v.role == OUTPUT]
    for dist in random_distributions(tree.alphabet_size, grid_size, seed):
        block = tree.block_distribution(dist)
        for k in outputs:
            pi = tree.branching_distribution(k, block)
            if max(abs(p - 1.0 / len(pi)) for p in pi) > tol:
                return False
    if symbolic:
        return all(_monomials_match(tree, k) for k in outputs)
    return True


def _monomials_match(tree, k):
    m = tree.alphabet_size

    def mono(block):
        counts = [0] * m
        for ch in tree.block_label(block):
            counts[int(ch)] += 1
        return tuple(counts)

    branches = [sorted(mono(s) for s in lst) for lst in tree.nodes[k].leaves]
    return all(br == branches[0] for br in branches)


# -- structure bijection ------------------------------------------------------

@dataclass
class StructureReport:
    ok: bool
    strings: int
    classes: int
    failure: str | None = None


def check_structure(tree: BinarizationTree, n: int, symbols=None) -> StructureReport:
    """Round trip ``structure_inverse(structure_map(x)) == x`` for all strings up to
    length ``n`` and ``|class| == prod |Phi_k(class)|`` for every composition."""
    symbols = list(range(tree.num_blocks)) if symbols is None else list(symbols)
    _check_size(len(symbols), n)
    strings = classes = 0
    seen_classes = set()
    for length in range(n + 1):
        for x in product(symbols, repeat=length):
            strings += 1
            parts = tree.structure_map(x)
            if tree.structure_inverse(parts) != x:
                return StructureReport(False, strings, classes, f"round trip failed for {x}")
            counts = [0] * tree.num_blocks
            for sym in x:
                counts[sym] += 1
            counts = tuple(counts)
            if counts in seen_classes:
                continue
            seen_classes.add(counts)
            classes += 1
            # image compositions from the occurring symbols' root-to-leaf paths
            images = [[0] * v.degree for v in tree.nodes]
            for sym, c in enumerate(counts):
                if c:
                    for k, e in tree.paths[sym]:
                        images[k][e] += c
            prod_size = 1
            for img in images:
                prod_size *= class_size(img)
            if prod_size != class_size(counts):
                return StructureReport(False, strings, classes,
                                       f"size identity fails for composition {counts}")
    return StructureReport(True, strings, classes)


# -- printed tables -----------------------------------------------------------

# rows as printed; "-" is the empty output
GOLDEN = {
    "peres2": """
        x   Psi1 u v
        00  -    0 0
        01  0    1 -
        10  1    1 -
        11  -    0 1
    """,
    "peres3face": """
        x   Psi1 u v w
        00  -    0 0 -
        01  0    1 - 1
        02  0    1 - 2
        10  1    1 - 1
        11  -    0 1 -
        12  0    1 - 0
        20  1    1 - 2
        21  1    1 - 0
        22  -    0 2 -
    """,
    "peres4face": """
        x   Psi1 u v w1 w2
        00  -    0 0 -  -
        01  0    1 - 0  -
        02  0    1 - 1  -
        03  0    1 - 2  -
        10  1    1 - 0  -
        11  -    0 1 -  -
        12  0    1 - 3  -
        13  0    2 - -  0
        20  1    1 - 1  -
        21  1    1 - 3  -
        22  -    0 2 -  -
        23  0    2 - -  1
        30  1    1 - 2  -
        31  1    2 - -  0
        32  1    2 - -  1
        33  -    0 3 -  -
    """,
    "peres4face_alt": """
        x   Psi1 u v w1 w2
        00  -    0 0 -  -
        01  0    1 - 0  -
        02  0    1 - 1  -
        03  0    1 - 2  -
        10  1    1 - 0  -
        11  -    0 1 -  -
        12  0    1 - 3  -
        13  0    1 - -  0
        20  1    1 - 1  -
        21  1    1 - 3  -
        22  -    0 2 -  -
        23  0    1 - -  1
        30  1    1 - 2  -
        31  1    1 - -  0
        32  1    1 - -  1
        33  -    0 3 -  -
    """,
    "peres3bit": """
        x    u v v1 v2 Psi1 w
        000  0 0 0  -  -    -
        001  1 - -  -  0    0
        010  1 - -  -  1    0
        011  1 - -  -  0    1
        100  0 1 -  0  -    -
        101  1 - -  -  1    1
        110  0 1 -  1  -    -
        111  0 0 1  -  -    -
    """,
    "dijkstra3": """
        x    Psi1 u v w
        000  -    0 0 -
        001  0    1 - 0
        010  1    1 - 0
        011  0    1 - 1
        100  2    1 - 0
        101  2    1 - 1
        110  1    1 - 1
        111  -    0 1 -
    """,
}


def parse_golden(text):
    rows = [line.split() for line in text.strip().splitlines()]
    header, body = rows[0], rows[1:]
    return header[1:], {r[0]: dict(zip(header[1:], r[1:])) for r in body}


def scheme_columns(s: Scheme) -> tuple[list[str], dict[str, dict[str, str]]]:
    """Component tables of ``s`` in printed row format (block, Psi1, named columns)."""
    t = s.tree
    named = [(k, s.names[k]) for k in sorted(s.names) if t.role(k) != OUTPUT]
    columns = ["Psi1"] + [name for _, name in named]
    rows = {}
    for block in range(t.num_blocks):
        label = t.block_label(block)
        row = {"Psi1": to_text(s._base[block]) or "-"}
        for k, name in named:
            e = t.tables[k].entries[block]
            row[name] = "-" if e is None else str(e)
        rows[label] = row
    return columns, rows


@dataclass
class GoldenReport:
    mismatches: list[str] = field(default_factory=list)
    cells: int = 0

    @property
    def ok(self):
        return not self.mismatches

    def render(self):
        lines = list(self.mismatches)
        lines.append(f"golden tables: {self.cells} cells compared, {len(self.mismatches)} mismatches")
        return "\n".join(lines)


def golden_tables() -> GoldenReport:
    report = GoldenReport()
    for name, text in GOLDEN.items():
        columns, printed = parse_golden(text)
        _, ours = scheme_columns(builtin(name))
        if set(printed) != set(ours):
            report.mismatches.append(f"{name}: block sets differ")
            continue
        for block, row in printed.items():
            for col in columns:
                report.cells += 1
                got = ours[block].get(col)
                if got != row[col]:
                    report.mismatches.append(
                        f"{name}: {col}({block}) printed {row[col]} but tree gives {got}")
    return report
