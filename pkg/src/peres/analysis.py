"""Entropies, the rate operator T and exact / empirical output rates.

Rates are output digits (base ``D``) per input source symbol. For a scheme
with block length ``b``, base nodes ``O`` and recursed nodes ``u_1..u_l``::

    T(f)(d) = r_1(d) + sum_i P(u_i)/b * f(pi(u_i))

``r_1`` is the base-part rate, ``r_nu = T^nu(0)`` the rate of the depth-``nu``
truncated extractor, and the per-symbol entropy is a fixed point of ``T``
exactly when every non-output node is recursed.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import stats

from .core import CapExceeded, Distribution, class_probability, compositions, entropy, enumerate_class
from .extractors import Scheme
from .tree import OUTPUT

MAX_RATE_PATHS = 10 ** 8
MAX_EXACT_STRINGS = 10 ** 7
BATCH_ROWS = 1 << 16


def as_distribution(d, m: int | None = None) -> Distribution:
    if isinstance(d, Distribution):
        dist = d
    elif isinstance(d, (int, float)):
        dist = Distribution.bernoulli(float(d))
    else:
        dist = Distribution(tuple(d))
    if m is not None and len(dist) != m:
        raise ValueError(f"distribution has {len(dist)} symbols, expected {m}")
    return dist


def shannon_entropy(d, base: float = 2) -> float:
    if base < 2:
        raise ValueError("entropy base must be at least 2")
    return entropy(as_distribution(d), base)


def binary_entropy(p: float) -> float:
    return entropy((p, 1 - p), 2)


class _Operator:
    """Vectorized pieces of ``T`` for one scheme.

    Blocks sharing a composition have the same probability, so every per-block
    table is summed into per-composition columns (2048 blocks of ``dijkstra11``
    become 12 columns). ``block_probs`` then returns one probability per
    composition, not per block.
    """

    def __init__(self, s: Scheme):
        t = s.tree
        self.scheme = s
        self.m, self.b = t.alphabet_size, t.block_length
        labels = [t.block_label(k) for k in range(t.num_blocks)]
        comps = [tuple(lab.count(str(j)) for j in range(self.m)) for lab in labels]
        order = sorted(set(comps))
        col = {c: i for i, c in enumerate(order)}
        group = np.zeros((t.num_blocks, len(order)))
        group[np.arange(t.num_blocks), [col[c] for c in comps]] = 1.0
        self.counts = np.array(order, dtype=float)
        self.digits = group.T @ np.array([len(x) for x in s._base], dtype=float)
        self.branches = []
        for k in s.plan:
            mat = np.zeros((t.num_blocks, self.m))
            for i, lst in enumerate(t.nodes[k].leaves):
                mat[lst, i] = 1.0
            self.branches.append(group.T @ mat)

    def block_probs(self, dists):
        probs = np.ones((dists.shape[0], self.counts.shape[0]))
        for j in range(self.m):
            probs *= dists[:, j:j + 1] ** self.counts[:, j]
        return probs

    def base(self, blocks):
        return blocks @ self.digits / self.b

    def children(self, blocks):
        """For each recursed node: (coefficient P(u)/b, branching distribution padded to m)."""
        out = []
        for mat in self.branches:
            sums = blocks @ mat
            pv = sums.sum(axis=1)
            safe = np.where(pv > 0, pv, 1.0)
            out.append((pv / self.b, sums / safe[:, None]))
        return out


def _operator(s: Scheme) -> _Operator:
    op = getattr(s, "_operator", None)
    if op is None:
        op = s._operator = _Operator(s)
    return op


def base_rate(s: Scheme, d) -> float:
    """Expected base-part digits per source symbol."""
    d = as_distribution(d, s.alphabet_size)
    t = s.tree
    block = t.block_distribution(d)
    terms = [t.node_probability(k, block) * t.output_width(k) for k in s.output_nodes]
    return math.fsum(terms) / s.block_length


def truncated_rate(s: Scheme, d, depth: int) -> float:
    """Rate ``r_depth`` of the depth-truncated recursion, evaluated path by path."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    fan = len(s.plan)
    if depth > 1 and fan ** (depth - 1) > MAX_RATE_PATHS:
        raise CapExceeded(f"{fan}^{depth - 1} recursion paths exceeds {MAX_RATE_PATHS}")
    d = as_distribution(d, s.alphabet_size)
    op = _operator(s)
    return _accumulate(op, np.array([d.probs]), np.ones(1), depth)


def _accumulate(op, dists, weights, depth):
    if depth == 0 or len(weights) == 0:
        return 0.0
    blocks = op.block_probs(dists)
    total = math.fsum(weights * op.base(blocks))
    if depth == 1:
        return total
    kids = []
    for coef, pi in op.children(blocks):
        w = weights * coef
        keep = w > 0
        kids.append((pi[keep], w[keep]))
    rows = sum(len(w) for _, w in kids)
    if rows <= BATCH_ROWS:
        pis = np.concatenate([p for p, _ in kids])
        ws = np.concatenate([w for _, w in kids])
        return total + _accumulate(op, pis, ws, depth - 1)
    return total + math.fsum(_accumulate(op, p, w, depth - 1) for p, w in kids)


def entropy_bound(s: Scheme, d) -> float:
    """Source entropy per symbol in output digits (base ``D``)."""
    return shannon_entropy(as_distribution(d, s.alphabet_size), s.output_alphabet)


def apply_operator(s: Scheme, d, f) -> float:
    """``T(f)(d)`` for a callable ``f`` on distributions over the source alphabet."""
    d = as_distribution(d, s.alphabet_size)
    t = s.tree
    block = t.block_distribution(d)
    terms = [base_rate(s, d)]
    m = s.alphabet_size
    for k in s.plan:
        pv = t.node_probability(k, block)
        if pv <= 0:
            continue
        pi = list(t.branching_distribution(k, block)) + [0.0] * (m - t.degree(k))
        terms.append(pv / s.block_length * f(pi))
    return math.fsum(terms)


def fixed_point_residual(s: Scheme, d) -> float:
    """``|T(H)(d) - H(d)|`` with ``H`` the per-symbol entropy in base ``D``."""
    base = s.output_alphabet
    h = lambda pi: entropy(pi, base)
    d = as_distribution(d, s.alphabet_size)
    return abs(apply_operator(s, d, h) - h(d.probs))


@dataclass
class RateReport:
    scheme: str
    distribution: tuple[float, ...]
    rates: list[float]
    entropy_bound: float
    residual: float

    @property
    def monotone(self):
        return all(b >= a - 1e-12 for a, b in zip(self.rates, self.rates[1:]))

    @property
    def bounded(self):
        return all(r <= self.entropy_bound + 1e-9 for r in self.rates)


def rate_report(s: Scheme, d, depth: int) -> RateReport:
    d = as_distribution(d, s.alphabet_size)
    rates = [truncated_rate(s, d, nu) for nu in range(depth + 1)]
    positive = all(p > 0 for p in d.probs)
    residual = fixed_point_residual(s, d) if positive else float("nan")
    return RateReport(s.name, d.probs, rates, entropy_bound(s, d), residual)


def exact_rate(s: Scheme, d, n: int) -> float:
    """``E|Psi(x)| / n`` over length-``n`` inputs, one pass per equiprobable class."""
    m = s.alphabet_size
    if m ** n > MAX_EXACT_STRINGS:
        raise CapExceeded(f"{m}^{n} inputs exceeds {MAX_EXACT_STRINGS}")
    d = as_distribution(d, m)
    if n == 0:
        return 0.0
    terms = []
    for c in compositions(n, m):
        digits = sum(len(s.extract_tuple(x)) for x in enumerate_class(c))
        if digits:
            terms.append(class_probability(c, d) * digits)
    return math.fsum(terms) / n


def empirical_output(s: Scheme, d, samples: int, seed) -> np.ndarray:
    d = as_distribution(d, s.alphabet_size)
    rng = np.random.default_rng(seed)
    x = rng.choice(s.alphabet_size, size=samples, p=np.array(d.probs))
    return s.extract_array(x)


def empirical_rate(s: Scheme, d, samples: int, seed) -> float:
    if samples <= 0:
        return 0.0
    return len(empirical_output(s, d, samples, seed)) / samples


def chi_square_blocks(digits: Sequence[int], alphabet: int = 2, block: int = 8):
    """Chi-square test of uniformity over non-overlapping ``block``-digit words."""
    digits = np.asarray(digits, dtype=np.int64)
    nb = len(digits) // block
    if nb == 0:
        raise ValueError("not enough output for a single block")
    words = digits[:nb * block].reshape(nb, block) @ (alphabet ** np.arange(block - 1, -1, -1))
    observed = np.bincount(words, minlength=alphabet ** block)
    return stats.chisquare(observed)


# -- base-rate formulas for the 4-bit comparison ------------------------------

def e4_base_rate(p: float) -> float:
    """Rate of ``E4`` used blockwise: ``pq (1 + p^2 + q^2 + pq/2)``."""
    q = 1 - p
    return p * q * (1 + p * p + q * q + p * q / 2)


def psi2_base_rate(p: float) -> float:
    """Base part of Peres unrolled two levels: ``pq (1 + p^2 + q^2 + pq / (2 (p^2 + q^2)))``."""
    q = 1 - p
    return p * q * (1 + p * p + q * q + p * q / (2 * (p * p + q * q)))


def default_grid(step: float = 0.01) -> list[float]:
    count = round(1 / step)
    return [round(i * step, 10) for i in range(1, count)]


CSV_HEADER = ("p", "scheme", "metric", "depth", "value")


def compare_rows(schemes: Iterable[Scheme], grid: Iterable[float], depth: int | None = None):
    schemes = list(schemes)
    for p in grid:
        for s in schemes:
            if s.alphabet_size != 2:
                continue
            yield p, s.name, "base_rate", 1, base_rate(s, p)
            if depth is not None:
                yield p, s.name, "truncated_rate", depth, truncated_rate(s, p, depth)
        yield p, "psi2", "base_rate_formula", 2, psi2_base_rate(p)
        yield p, "e4", "base_rate_formula", 1, e4_base_rate(p)


def compare_csv(schemes: Iterable[Scheme], grid: Iterable[float], depth: int | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for p, name, metric, nu, value in compare_rows(schemes, grid, depth):
        w.writerow([repr(float(p)), name, metric, nu, repr(float(value))])
    return buf.getvalue()
