"""Alphabets, symbol strings, distributions and equiprobable-class combinatorics.

An equiprobable class is identified by its composition ``(n_0, ..., n_{m-1})``:
the set of all length-``n`` strings holding ``n_i`` copies of symbol ``i``.
Every member of a class has the same probability under any i.i.d. source,
so extraction can be verified one class at a time.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

# exact class sizes are cheap with Python ints, but keep callers honest
MAX_SIZE_LENGTH = 170
MAX_ENUM_LENGTH = 24

EMPTY = ()


class CapExceeded(ValueError):
    """A size or enumeration limit was exceeded."""


@dataclass(frozen=True)
class Distribution:
    probs: tuple[float, ...]

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        if len(probs) < 2:
            raise ValueError("a distribution needs at least two symbols")
        if any(p < 0 or p > 1 for p in probs):
            raise ValueError(f"probabilities must lie in [0, 1]: {probs}")
        if abs(math.fsum(probs) - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {math.fsum(probs)!r}, not 1")

    @classmethod
    def bernoulli(cls, p: float) -> "Distribution":
        """Coin with ``Pr(0) = p``."""
        return cls((p, 1.0 - p))

    @classmethod
    def uniform(cls, m: int) -> "Distribution":
        return cls((1.0 / m,) * m)

    @classmethod
    def normalized(cls, weights: Iterable[float]) -> "Distribution":
        weights = [float(w) for w in weights]
        total = math.fsum(weights)
        probs = [w / total for w in weights]
        # push the rounding residue into the largest entry
        k = max(range(len(probs)), key=probs.__getitem__)
        probs[k] = 1.0 - math.fsum(probs[:k] + probs[k + 1:])
        return cls(tuple(probs))

    def __len__(self):
        return len(self.probs)

    def __getitem__(self, i):
        return self.probs[i]

    def __iter__(self):
        return iter(self.probs)

    @property
    def size(self) -> int:
        return len(self.probs)


@dataclass(frozen=True)
class SymbolString:
    """A finite string over ``{0, ..., alphabet_size - 1}``."""

    alphabet_size: int
    symbols: tuple[int, ...] = ()

    def __post_init__(self):
        symbols = tuple(int(s) for s in self.symbols)
        object.__setattr__(self, "symbols", symbols)
        if self.alphabet_size < 2:
            raise ValueError("alphabet size must be at least 2")
        for s in symbols:
            if not 0 <= s < self.alphabet_size:
                raise ValueError(f"symbol {s} outside alphabet of size {self.alphabet_size}")

    @classmethod
    def parse(cls, text: str, alphabet_size: int) -> "SymbolString":
        """Read a digit string; whitespace is ignored."""
        return cls(alphabet_size, tuple(parse_digits(text)))

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __getitem__(self, i):
        return self.symbols[i]

    def __str__(self):
        return to_text(self.symbols)


def parse_digits(text: str) -> list[int]:
    out = []
    for ch in text:
        if ch.isspace():
            continue
        if not ch.isdigit():
            raise ValueError(f"not a digit: {ch!r}")
        out.append(int(ch))
    return out


def to_text(symbols: Iterable[int]) -> str:
    """Render a string over an alphabet of size <= 36 (digits, then letters)."""
    return "".join("0123456789abcdefghijklmnopqrstuvwxyz"[s] for s in symbols)


def as_symbols(x, alphabet_size: int | None = None) -> tuple[int, ...]:
    """Coerce a str, SymbolString or integer sequence to a tuple of symbols."""
    if isinstance(x, SymbolString):
        symbols = x.symbols
    elif isinstance(x, str):
        symbols = tuple(parse_digits(x))
    else:
        symbols = tuple(int(s) for s in x)
    if alphabet_size is not None:
        for s in symbols:
            if not 0 <= s < alphabet_size:
                raise ValueError(f"symbol {s} outside alphabet of size {alphabet_size}")
    return symbols


# -- compositions -------------------------------------------------------------

def composition_of(x, alphabet_size: int | None = None) -> tuple[int, ...]:
    if isinstance(x, SymbolString):
        alphabet_size = x.alphabet_size if alphabet_size is None else alphabet_size
    symbols = as_symbols(x, alphabet_size)
    if alphabet_size is None:
        alphabet_size = max(symbols, default=0) + 1
    counts = [0] * alphabet_size
    for s in symbols:
        counts[s] += 1
    return tuple(counts)


def class_size(counts: Sequence[int]) -> int:
    """Multinomial coefficient ``n! / (n_0! ... n_{m-1}!)``, exact."""
    if any(c < 0 for c in counts):
        raise ValueError(f"negative count in composition {tuple(counts)}")
    n = sum(counts)
    if n > MAX_SIZE_LENGTH:
        raise CapExceeded(f"class length {n} exceeds the size cap {MAX_SIZE_LENGTH}")
    size, rest = 1, n
    for c in counts:
        size *= math.comb(rest, c)
        rest -= c
    return size


def compositions(n: int, m: int) -> Iterator[tuple[int, ...]]:
    """All weak compositions of ``n`` into ``m`` parts, lexicographically descending in n_0."""
    if m == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in compositions(n - first, m - 1):
            yield (first,) + rest


def enumerate_class(counts: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Every string of the class exactly once, in lexicographic order."""
    n = sum(counts)
    if n > MAX_ENUM_LENGTH:
        raise CapExceeded(f"class length {n} exceeds the enumeration cap {MAX_ENUM_LENGTH}")
    x = [s for s, c in enumerate(counts) for _ in range(c)]
    while True:
        yield tuple(x)
        # next lexicographic permutation of a multiset
        i = n - 2
        while i >= 0 and x[i] >= x[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while x[j] <= x[i]:
            j -= 1
        x[i], x[j] = x[j], x[i]
        x[i + 1:] = reversed(x[i + 1:])


def class_rank(x: Sequence[int], alphabet_size: int) -> int:
    """Lexicographic rank of ``x`` inside its own class."""
    counts = list(composition_of(x, alphabet_size))
    size = class_size(counts)
    rank, n = 0, len(x)
    for s in x:
        # strings starting with a smaller symbol s' number size * n_s' / n
        for t in range(s):
            if counts[t]:
                rank += size * counts[t] // n
        size = size * counts[s] // n
        counts[s] -= 1
        n -= 1
    return rank


def class_unrank(rank: int, counts: Sequence[int]) -> tuple[int, ...]:
    counts = list(counts)
    size = class_size(counts)
    if not 0 <= rank < size:
        raise ValueError(f"rank {rank} outside class of size {size}")
    n = sum(counts)
    out = []
    while n:
        for s, c in enumerate(counts):
            if not c:
                continue
            block = size * c // n
            if rank < block:
                out.append(s)
                counts[s] -= 1
                size = block
                n -= 1
                break
            rank -= block
    return tuple(out)


def class_probability(counts: Sequence[int], dist: Distribution | Sequence[float]) -> float:
    probs = tuple(dist)
    if len(probs) != len(counts):
        raise ValueError(f"composition has {len(counts)} parts, distribution {len(probs)}")
    return math.prod(p ** c for p, c in zip(probs, counts))


# -- extracting multisets -----------------------------------------------------

def is_extracting_multiset(ms: Mapping, output_alphabet: int = 2) -> bool:
    return multiset_violation(ms, output_alphabet) is None


def multiset_violation(ms: Mapping, output_alphabet: int = 2):
    """Return ``None`` if extracting, else ``(length, witness_a, witness_b)``.

    Witnesses are two strings of that length with unequal multiplicity; a
    string missing from the multiset counts as multiplicity zero.
    """
    by_length: dict[int, dict[tuple, int]] = {}
    for key, count in ms.items():
        if count < 0:
            raise ValueError("negative multiplicity")
        if count == 0:
            continue
        key = as_symbols(key)
        by_length.setdefault(len(key), {})[key] = count
    for length in sorted(by_length):
        group = by_length[length]
        expected = output_alphabet ** length
        for key in group:
            if any(s >= output_alphabet for s in key):
                return length, key, key
        if len(group) < expected:
            present = next(iter(group))
            missing = next(_missing_string(group, length, output_alphabet))
            return length, present, missing
        values = set(group.values())
        if len(values) > 1:
            ordered = sorted(group, key=group.__getitem__)
            return length, ordered[0], ordered[-1]
    return None


def _missing_string(group, length, d):
    for i in range(d ** length):
        key = tuple((i // d ** (length - 1 - j)) % d for j in range(length))
        if key not in group:
            yield key


def multiset_image(fn, strings: Iterable) -> Counter:
    return Counter(tuple(fn(x)) for x in strings)


def entropy(probs: Iterable[float], base: float = 2) -> float:
    """Shannon entropy with ``0 log 0 = 0``."""
    return -math.fsum(p * math.log(p, base) for p in probs if p > 0)
