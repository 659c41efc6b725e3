"""Base extracting functions and the Peres-style recursion engine.

A :class:`Scheme` pairs a binarization tree over length-``b`` blocks with a
recursion plan. Extraction splits the input into blocks, emits the digits of
every Output node a block passes through (the base part ``Psi_1``), collects
one auxiliary stream per recursed node and feeds each stream back into the
same scheme::

    Psi(x) = Psi_1(x) * Psi(u_1(x)) * ... * Psi(u_l(x)),    Psi(empty) = empty
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import CapExceeded, SymbolString, as_symbols, class_rank, class_size, composition_of
from .tree import OUTPUT, RECURSE, BinarizationTree

# inputs at least this long go through the numpy path
VECTOR_MIN = 2048
# untruncated results for inputs up to this length are memoized per scheme
MEMO_MAX = 12
MAX_ELIAS = 24


class UnknownScheme(KeyError):
    pass


# -- base functions -----------------------------------------------------------

def von_neumann(x) -> tuple[int, ...]:
    """``01 -> 0``, ``10 -> 1``, ``00, 11 -> empty``, pairwise; an odd tail bit is dropped."""
    x = as_symbols(x, 2)
    return tuple(a for a, b in zip(x[0::2], x[1::2]) if a != b)


def elias(n: int, x) -> tuple[int, ...]:
    """Elias function ``E_n`` on one ``n``-bit block.

    Within the class of ``x`` (lexicographic order) the class size is written
    as ``2^a_1 + 2^a_2 + ...`` with ``a_1 > a_2 > ...``; the first ``2^a_1``
    members receive every ``a_1``-bit string in order, the next ``2^a_2``
    every ``a_2``-bit string, and so on.
    """
    if not 2 <= n <= MAX_ELIAS:
        raise ValueError(f"Elias block length must be in [2, {MAX_ELIAS}], got {n}")
    x = as_symbols(x, 2)
    if len(x) != n:
        raise ValueError(f"expected {n} bits, got {len(x)}")
    size = class_size(composition_of(x, 2))
    rank = class_rank(x, 2)
    for a in range(size.bit_length() - 1, -1, -1):
        if not size >> a & 1:
            continue
        if rank < 1 << a:
            return tuple(rank >> (a - 1 - i) & 1 for i in range(a))
        rank -= 1 << a
    raise AssertionError("rank outside class")


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    return all(m % d for d in range(2, math.isqrt(m) + 1))


def least_rotation(s) -> int:
    """Booth's algorithm: ``k`` such that ``s[k:] + s[:k]`` is lexicographically least."""
    s = list(s)
    n = len(s)
    if n == 0:
        return 0
    ss = s + s
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        c = ss[j]
        i = f[j - k - 1]
        while i != -1 and c != ss[k + i + 1]:
            if c < ss[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if c != ss[k + i + 1]:
            if c < ss[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k


def dijkstra_base(m: int, x) -> int | None:
    """Right cyclic shifts taking ``x`` to the least rotation; ``None`` for constant blocks."""
    if not is_prime(m):
        raise ValueError(f"block length {m} is not prime")
    x = as_symbols(x, 2)
    if len(x) != m:
        raise ValueError(f"expected {m} bits, got {len(x)}")
    if len(set(x)) == 1:
        return None
    return (m - least_rotation(x)) % m


def rotation_orbits(m: int) -> list[tuple[int, ...]]:
    """Least representatives of the rotation orbits of non-constant ``m``-bit strings."""
    reps = set()
    for i in range(1, 2 ** m - 1):
        x = tuple(i >> (m - 1 - j) & 1 for j in range(m))
        k = least_rotation(x)
        reps.add(x[k:] + x[:k])
    return sorted(reps)


# -- schemes ------------------------------------------------------------------

@dataclass(eq=False)
class Scheme:
    """A binarization tree plus the ordered list of nodes whose streams recurse.

    ``plan`` defaults to every Recurse node in pre-order. ``names`` maps
    pre-order node indices to column names (``u``, ``v``, ``w1``, ...).
    """

    name: str
    tree: BinarizationTree
    plan: tuple[int, ...] | None = None
    names: dict[int, str] = field(default_factory=dict)

    def __post_init__(self):
        t = self.tree
        if self.plan is None:
            self.plan = tuple(v.index for v in t.nodes if v.role == RECURSE)
        self.plan = tuple(self.plan)
        for k in self.plan:
            if t.role(k) != RECURSE:
                raise ValueError(f"node {k + 1} is not a Recurse node")
            if t.degree(k) > t.alphabet_size:
                raise ValueError(f"recursed node {k + 1} has degree {t.degree(k)} "
                                 f"> source alphabet {t.alphabet_size}")
        if t.block_length < 2:
            raise ValueError("scheme blocks must hold at least two source symbols")
        self._compile()
        self._memo = {}

    @property
    def alphabet_size(self) -> int:
        return self.tree.alphabet_size

    @property
    def block_length(self) -> int:
        return self.tree.block_length

    @property
    def output_alphabet(self) -> int:
        return self.tree.output_alphabet

    @property
    def output_nodes(self) -> tuple[int, ...]:
        return tuple(v.index for v in self.tree.nodes if v.role == OUTPUT)

    def node_name(self, k: int) -> str:
        return self.names.get(k, f"Phi{k + 1}")

    def with_plan(self, plan, name=None) -> "Scheme":
        return Scheme(name or self.name, self.tree, tuple(plan), dict(self.names))

    def _compile(self):
        t = self.tree
        d = t.output_alphabet
        slot = {k: j for j, k in enumerate(self.plan)}
        base, aux = [], []
        for s in range(t.num_blocks):
            digits, streams = [], []
            for k, e in t.paths[s]:
                if t.role(k) == OUTPUT:
                    w = t.output_width(k)
                    digits.extend(e // d ** (w - 1 - i) % d for i in range(w))
                elif k in slot:
                    streams.append((slot[k], e))
            base.append(tuple(digits))
            aux.append(tuple(streams))
        self._base = base
        self._aux = aux
        m, b = t.alphabet_size, t.block_length
        self._block_of = {}
        for s in range(t.num_blocks):
            self._block_of[tuple(s // m ** (b - 1 - i) % m for i in range(b))] = s
        # dense tables for the vectorized path
        width = max((len(x) for x in base), default=0)
        self._np_digits = np.zeros((t.num_blocks, max(width, 1)), dtype=np.int64)
        self._np_mask = np.zeros((t.num_blocks, max(width, 1)), dtype=bool)
        for s, x in enumerate(base):
            self._np_digits[s, :len(x)] = x
            self._np_mask[s, :len(x)] = True
        self._np_aux = np.full((len(self.plan), t.num_blocks), -1, dtype=np.int64)
        for s, streams in enumerate(aux):
            for j, e in streams:
                self._np_aux[j, s] = e
        self._powers = m ** np.arange(b - 1, -1, -1, dtype=np.int64)

    # one level of the recursion: base digits and auxiliary streams

    def split(self, x):
        """Return ``(base_digits, [stream_1, ..., stream_l])`` for one recursion level."""
        if isinstance(x, np.ndarray):
            return self._split_array(x)
        b = self.block_length
        block_of, base, aux = self._block_of, self._base, self._aux
        digits = []
        streams = [[] for _ in self.plan]
        for i in range(0, len(x) - b + 1, b):
            s = block_of[x[i:i + b]]
            digits += base[s]
            for j, e in aux[s]:
                streams[j].append(e)
        return digits, [tuple(st) for st in streams]

    def _split_array(self, x):
        b = self.block_length
        nb = len(x) // b
        blocks = x[:nb * b].reshape(nb, b) @ self._powers
        digits = self._np_digits[blocks][self._np_mask[blocks]]
        streams = []
        for row in self._np_aux:
            sel = row[blocks]
            streams.append(sel[sel >= 0])
        return digits, streams

    def _short(self, x):
        hit = self._memo.get(x)
        if hit is None:
            digits, streams = self.split(x)
            out = list(digits)
            for st in streams:
                if len(st) >= self.block_length:
                    out += self._short(st)
            hit = self._memo[x] = tuple(out)
        return hit

    def run(self, x, depth: int | None = None) -> list:
        """Depth-first extraction with an explicit stack; returns output chunks in order."""
        b = self.block_length
        chunks = []
        stack = [(x, depth)]
        while stack:
            y, d = stack.pop()
            if len(y) < b or d == 0:
                continue
            if d is None and not isinstance(y, np.ndarray) and len(y) <= MEMO_MAX:
                chunks.append(self._short(y))
                continue
            if isinstance(y, np.ndarray) and len(y) < VECTOR_MIN:
                y = tuple(y.tolist())
            elif not isinstance(y, np.ndarray) and len(y) >= VECTOR_MIN:
                y = np.asarray(y, dtype=np.int64)
            digits, streams = self.split(y)
            chunks.append(digits)
            nd = None if d is None else d - 1
            for st in reversed(streams):
                stack.append((st, nd))
        return chunks

    def extract_tuple(self, x: tuple, depth: int | None = None) -> tuple[int, ...]:
        out = []
        for c in self.run(x, depth):
            out += c.tolist() if isinstance(c, np.ndarray) else c
        return tuple(out)

    def extract_array(self, x, depth: int | None = None) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        if x.size and (x.min() < 0 or x.max() >= self.alphabet_size):
            raise ValueError(f"input symbols outside alphabet of size {self.alphabet_size}")
        chunks = [np.asarray(c, dtype=np.int64) for c in self.run(x, depth)]
        return np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)

    def __repr__(self):
        return f"Scheme({self.name!r}, m={self.alphabet_size}, b={self.block_length}, D={self.output_alphabet})"


def _check_input(s: Scheme, x) -> tuple[int, ...]:
    if isinstance(x, SymbolString) and x.alphabet_size > s.alphabet_size:
        if any(c >= s.alphabet_size for c in x.symbols):
            raise ValueError(f"input alphabet {x.alphabet_size} does not fit scheme alphabet {s.alphabet_size}")
    return as_symbols(x, s.alphabet_size)


def extract(s: Scheme, x) -> SymbolString:
    return SymbolString(s.output_alphabet, s.extract_tuple(_check_input(s, x)))


def extract_truncated(s: Scheme, x, depth: int) -> SymbolString:
    """Recursion cut off at ``depth`` levels; depth 0 is empty, depth 1 the base part alone."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    return SymbolString(s.output_alphabet, s.extract_tuple(_check_input(s, x), depth))


def peres(x) -> tuple[int, ...]:
    """Peres function written out literally; independent of :class:`Scheme`."""
    x = as_symbols(x, 2)
    if not x:
        return ()
    pairs = list(zip(x[0::2], x[1::2]))
    base = [a for a, b in pairs if a != b]
    u = [int(a != b) for a, b in pairs]
    v = [a for a, b in pairs if a == b]
    return tuple(base) + peres(u) + peres(v)


def double_unrolled_peres2(x) -> tuple[int, ...]:
    """Peres recursion unrolled two levels::

        Psi2(x) = Psi1(x) Psi1(u) Psi1(v) Psi2(uu) Psi2(vu) Psi2(uv) Psi2(vv)

    where ``vu`` means ``v(u(x))``. Same digits as the Peres function, with the
    two-level base part moved to the front.
    """
    x = as_symbols(x, 2)
    if len(x) < 2:
        return ()

    def split(y):
        pairs = list(zip(y[0::2], y[1::2]))
        return ([a for a, b in pairs if a != b],
                [int(a != b) for a, b in pairs],
                [a for a, b in pairs if a == b])

    base, u, v = split(x)
    bu, uu, vu = split(u)
    bv, uv, vv = split(v)
    out = tuple(base) + tuple(bu) + tuple(bv)
    for y in (uu, vu, uv, vv):
        out += double_unrolled_peres2(y)
    return out


def builtin(name: str) -> Scheme:
    from .schemes import BUILTIN

    try:
        factory = BUILTIN[name]
    except KeyError:
        raise UnknownScheme(f"unknown scheme {name!r}; choose from {', '.join(BUILTIN)}") from None
    return factory()


def builtin_names() -> list[str]:
    from .schemes import BUILTIN

    return list(BUILTIN)


def scheme_from_tree(tree: BinarizationTree, name: str = "custom") -> Scheme:
    return Scheme(name, tree)
