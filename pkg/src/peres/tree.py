"""Binarization trees and the component functions they induce.

A tree's leaves are the block symbols ``0 .. M-1``; each internal node ``v``
of degree ``k`` defines a component function sending a symbol to the index of
the child subtree containing it, or to nothing (``None``) when the symbol is
not below ``v``. Internal nodes are numbered in pre-order and that order is
the order of component functions and auxiliary streams everywhere.

Text format::

    node := "(L" SYMBOL ")" | "(" ROLE node node+ ")"      ROLE := "O" | "R"

``SYMBOL`` is the block string the leaf stands for; ``#`` starts a comment.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Sequence

from .core import as_symbols, entropy, to_text

OUTPUT = "O"
RECURSE = "R"
LEAF = "L"


class TreeError(ValueError):
    pass


class TreeSyntaxError(TreeError):
    def __init__(self, msg, line, col):
        super().__init__(f"{line}:{col}: {msg}")
        self.line = line
        self.col = col


class StructureError(ValueError):
    """Parts handed to ``structure_inverse`` have no common preimage."""


@dataclass(frozen=True)
class Node:
    role: str
    children: tuple["Node", ...] = ()
    label: str | None = None

    @property
    def is_leaf(self):
        return self.role == LEAF

    def leaves(self):
        if self.is_leaf:
            yield self.label
        else:
            for c in self.children:
                yield from c.leaves()


def leaf(label) -> Node:
    return Node(LEAF, (), str(label))


def out(*children) -> Node:
    return Node(OUTPUT, tuple(children))


def rec(*children) -> Node:
    return Node(RECURSE, tuple(children))


@dataclass(frozen=True)
class ComponentTable:
    """Symbol map of one internal node; ``None`` stands for the empty output."""

    entries: tuple[int | None, ...]
    degree: int

    def __call__(self, s):
        return self.entries[s]

    def apply(self, x) -> tuple[int, ...]:
        entries = self.entries
        return tuple(e for e in (entries[s] for s in as_symbols(x)) if e is not None)

    def image_composition(self, counts: Sequence[int]) -> tuple[int, ...]:
        if len(counts) != len(self.entries):
            raise ValueError(f"composition has {len(counts)} parts, table covers {len(self.entries)}")
        image = [0] * self.degree
        for s, c in enumerate(counts):
            e = self.entries[s]
            if e is not None:
                image[e] += c
        return tuple(image)


def _is_power(n, d):
    while n % d == 0 and n > 1:
        n //= d
    return n == 1


def _log_int(n, d):
    a = 0
    while n > 1:
        n //= d
        a += 1
    return a


@dataclass
class _Internal:
    index: int
    role: str
    degree: int
    # per child: ("leaf", block) or ("node", internal index)
    kids: list = field(default_factory=list)
    leaves: list = field(default_factory=list)  # block symbols per child subtree
    parent: int | None = None


class BinarizationTree:
    """Validated, immutable binarization tree over a block alphabet.

    ``alphabet_size`` is the source alphabet ``m`` that the leaf labels are
    written in and ``block_length`` the label length ``b``; the block alphabet
    has ``m ** b`` symbols, a leaf label read as a base-``m`` numeral.
    """

    def __init__(self, root: Node, alphabet_size: int | None = None,
                 output_alphabet: int | None = None):
        if root.is_leaf:
            raise TreeError("the root must be an internal node")
        self.root = root
        labels = list(root.leaves())
        lengths = {len(lab) for lab in labels}
        if len(lengths) != 1 or 0 in lengths:
            raise TreeError("all leaf labels must be non-empty and of one length")
        if len(set(labels)) != len(labels):
            dup = next(lab for lab in labels if labels.count(lab) > 1)
            raise TreeError(f"leaf label {dup!r} used more than once")
        b = lengths.pop()
        digits = [as_symbols(lab) for lab in labels]
        if alphabet_size is None:
            alphabet_size = round(len(labels) ** (1.0 / b))
            if alphabet_size ** b != len(labels):
                raise TreeError(f"{len(labels)} leaves is not a full block alphabet of length-{b} blocks")
        if alphabet_size < 2:
            raise TreeError("source alphabet must have at least two symbols")
        if any(s >= alphabet_size for d in digits for s in d):
            raise TreeError(f"leaf label uses a symbol outside alphabet of size {alphabet_size}")
        if len(labels) != alphabet_size ** b:
            raise TreeError(f"expected {alphabet_size ** b} leaves, found {len(labels)}")
        self.alphabet_size = alphabet_size
        self.block_length = b
        self.num_blocks = len(labels)

        self.nodes: list[_Internal] = []
        self._build(root, None)
        for v in self.nodes:
            if v.degree < 2:
                raise TreeError(f"internal node {v.index + 1} has degree {v.degree}; need at least 2")

        degrees = [v.degree for v in self.nodes if v.role == OUTPUT]
        if output_alphabet is None:
            output_alphabet = 2
            if degrees:
                output_alphabet = next(d for d in range(2, min(degrees) + 1)
                                       if all(_is_power(k, d) for k in degrees))
        for v in self.nodes:
            if v.role == OUTPUT and not _is_power(v.degree, output_alphabet):
                raise TreeError(f"output node {v.index + 1} has degree {v.degree}, "
                                f"not a power of {output_alphabet}")
        self.output_alphabet = output_alphabet

        self.tables = [self._table(v) for v in self.nodes]
        # root-to-leaf path of every block: [(node index, branch), ...]
        self.paths: list[list[tuple[int, int]]] = [[] for _ in range(self.num_blocks)]
        for v in self.nodes:
            for s, e in enumerate(self.tables[v.index].entries):
                if e is not None:
                    self.paths[s].append((v.index, e))

    def _build(self, node, parent):
        v = _Internal(len(self.nodes), node.role, len(node.children), parent=parent)
        if node.role not in (OUTPUT, RECURSE):
            raise TreeError(f"unknown node role {node.role!r}")
        self.nodes.append(v)
        for child in node.children:
            if child.is_leaf:
                block = self.block_index(child.label)
                v.kids.append(("leaf", block))
                v.leaves.append([block])
            else:
                k = self._build(child, v.index)
                v.kids.append(("node", k))
                v.leaves.append([s for lst in self.nodes[k].leaves for s in lst])
        return v.index

    def _table(self, v):
        entries = [None] * self.num_blocks
        for i, lst in enumerate(v.leaves):
            for s in lst:
                entries[s] = i
        return ComponentTable(tuple(entries), v.degree)

    # -- naming ---------------------------------------------------------------

    def block_index(self, label) -> int:
        value = 0
        for s in as_symbols(label):
            value = value * self.alphabet_size + s
        return value

    def block_label(self, block: int) -> str:
        digits = []
        for _ in range(self.block_length):
            block, r = divmod(block, self.alphabet_size)
            digits.append(r)
        return to_text(reversed(digits))

    def to_blocks(self, x) -> tuple[int, ...]:
        """Source string to block symbols; a partial trailing block is dropped."""
        x = as_symbols(x, self.alphabet_size)
        b = self.block_length
        return tuple(self.block_index(x[i:i + b]) for i in range(0, len(x) - b + 1, b))

    @property
    def size(self) -> int:
        """Number of internal nodes (component functions)."""
        return len(self.nodes)

    def role(self, k: int) -> str:
        return self.nodes[k].role

    def degree(self, k: int) -> int:
        return self.nodes[k].degree

    def output_width(self, k: int) -> int:
        """Digits emitted per symbol by output node ``k``."""
        return _log_int(self.nodes[k].degree, self.output_alphabet)

    def leaf_set(self, k: int) -> list[int]:
        return [s for lst in self.nodes[k].leaves for s in lst]

    def __eq__(self, other):
        return (isinstance(other, BinarizationTree) and self.root == other.root
                and self.alphabet_size == other.alphabet_size
                and self.output_alphabet == other.output_alphabet)

    def __hash__(self):
        return hash((self.root, self.alphabet_size, self.output_alphabet))

    def __repr__(self):
        return f"BinarizationTree({self.to_text()!r})"

    def to_text(self) -> str:
        return format_node(self.root)

    # -- component functions --------------------------------------------------

    def component_functions(self) -> list[ComponentTable]:
        return list(self.tables)

    def apply_component(self, k: int, x) -> tuple[int, ...]:
        return self.tables[k].apply(x)

    def image_composition(self, k: int, counts) -> tuple[int, ...]:
        return self.tables[k].image_composition(counts)

    def structure_map(self, x) -> tuple[tuple[int, ...], ...]:
        """``(Phi_1(x), ..., Phi_M(x))`` in pre-order."""
        parts = [[] for _ in self.nodes]
        paths = self.paths
        for s in as_symbols(x, self.num_blocks):
            for k, e in paths[s]:
                parts[k].append(e)
        return tuple(tuple(p) for p in parts)

    def restrict(self, k: int, x) -> tuple[int, ...]:
        """Subsequence of ``x`` made of the symbols below internal node ``k``."""
        below = set(self.leaf_set(k))
        return tuple(s for s in as_symbols(x) if s in below)

    def structure_inverse(self, parts: Sequence) -> tuple[int, ...]:
        if len(parts) != self.size:
            raise StructureError(f"expected {self.size} parts, got {len(parts)}")
        parts = [as_symbols(p) for p in parts]
        return self._rebuild(0, parts)

    def _rebuild(self, k, parts):
        v = self.nodes[k]
        branch = parts[k]
        subs = []
        for i, (kind, ref) in enumerate(v.kids):
            want = branch.count(i)
            if kind == "leaf":
                subs.append((ref,) * want)
            else:
                sub = self._rebuild(ref, parts)
                if len(sub) != want:
                    raise StructureError(
                        f"node {ref + 1} carries {len(sub)} symbols but node {k + 1} "
                        f"routes {want} to branch {i}")
                subs.append(sub)
        for e in branch:
            if not 0 <= e < v.degree:
                raise StructureError(f"branch {e} out of range at node {k + 1}")
        return interleave(branch, subs)

    # -- probabilities --------------------------------------------------------

    def block_distribution(self, dist) -> tuple[float, ...]:
        """Probability of each block under an i.i.d. source over the label alphabet."""
        probs = tuple(dist)
        if len(probs) != self.alphabet_size:
            raise ValueError(f"distribution has {len(probs)} symbols, tree expects {self.alphabet_size}")
        out = []
        for s in range(self.num_blocks):
            p = 1.0
            for d in as_symbols(self.block_label(s)):
                p *= probs[d]
            out.append(p)
        return tuple(out)

    def node_probability(self, k: int, block_probs) -> float:
        block_probs = tuple(block_probs)
        return math.fsum(block_probs[s] for s in self.leaf_set(k))

    def branching_distribution(self, k: int, block_probs) -> tuple[float, ...]:
        block_probs = tuple(block_probs)
        sums = [math.fsum(block_probs[s] for s in lst) for lst in self.nodes[k].leaves]
        total = math.fsum(sums)
        if total <= 0:
            raise ValueError(f"zero-probability node {k + 1}")
        return tuple(x / total for x in sums)

    def leaf_entropy_sum(self, block_probs, base: float = 2) -> float:
        """``sum_v P(v) H(pi(v))`` over internal nodes."""
        block_probs = tuple(block_probs)
        terms = []
        for v in self.nodes:
            pv = self.node_probability(v.index, block_probs)
            if pv > 0:
                terms.append(pv * entropy(self.branching_distribution(v.index, block_probs), base))
        return math.fsum(terms)


def interleave(branch: Sequence[int], subs: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Merge ``subs`` by taking the next symbol of ``subs[b]`` for each ``b`` in ``branch``."""
    pos = [0] * len(subs)
    out = []
    for b in branch:
        if b >= len(subs) or pos[b] >= len(subs[b]):
            raise StructureError(f"branch string asks for more symbols from part {b} than it has")
        out.append(subs[b][pos[b]])
        pos[b] += 1
    for i, sub in enumerate(subs):
        if pos[i] != len(sub):
            raise StructureError(f"part {i} has {len(sub) - pos[i]} unused symbols")
    return tuple(out)


# -- text format --------------------------------------------------------------

_TOKEN = re.compile(r"\s+|#[^\n]*|\(|\)|[A-Za-z]+|\d+|.")


def _tokens(text):
    line, col0 = 1, 0
    for m in _TOKEN.finditer(text):
        tok = m.group()
        col = m.start() - col0 + 1
        if tok[0].isspace() or tok[0] == "#":
            nl = tok.count("\n")
            if nl:
                line += nl
                col0 = m.start() + tok.rindex("\n") + 1
            continue
        yield tok, line, col


def parse_tree(text: str, alphabet_size: int | None = None,
               output_alphabet: int | None = None) -> BinarizationTree:
    return BinarizationTree(parse_node(text), alphabet_size, output_alphabet)


def parse_node(text: str) -> Node:
    toks = list(_tokens(text))
    pos = 0

    def expect(pred, what):
        nonlocal pos
        if pos >= len(toks):
            last = toks[-1] if toks else ("", 1, 0)
            raise TreeSyntaxError(f"unexpected end of input, expected {what}", last[1], last[2] + 1)
        tok, line, col = toks[pos]
        if not pred(tok):
            raise TreeSyntaxError(f"expected {what}, found {tok!r}", line, col)
        pos += 1
        return tok

    def node():
        expect(lambda t: t == "(", "'('")
        role = expect(lambda t: t in ("L", "O", "R"), "node role L, O or R")
        if role == "L":
            label = expect(str.isdigit, "leaf symbol")
            expect(lambda t: t == ")", "')'")
            return leaf(label)
        children = []
        while pos < len(toks) and toks[pos][0] == "(":
            children.append(node())
        if len(children) < 2:
            _, line, col = toks[pos - 1]
            raise TreeSyntaxError("internal node needs at least two children", line, col)
        expect(lambda t: t == ")", "')'")
        return Node(role, tuple(children))

    root = node()
    if pos != len(toks):
        tok, line, col = toks[pos]
        raise TreeSyntaxError(f"trailing input {tok!r}", line, col)
    return root


def format_node(node: Node) -> str:
    if node.is_leaf:
        return f"(L {node.label})"
    return f"({node.role} " + " ".join(format_node(c) for c in node.children) + ")"


def show(tree: BinarizationTree, names: dict[int, str] | None = None) -> str:
    """Indented rendering with pre-order component numbers."""
    names = names or {}
    lines = []
    counter = iter(range(tree.size))

    def walk(node, depth):
        pad = "  " * depth
        if node.is_leaf:
            lines.append(f"{pad}{node.label}")
            return
        k = next(counter)
        tag = "output" if node.role == OUTPUT else "recurse"
        name = names.get(k, f"Phi{k + 1}")
        lines.append(f"{pad}[{k + 1}] {name} ({tag}, degree {len(node.children)})")
        for c in node.children:
            walk(c, depth + 1)

    walk(tree.root, 0)
    return "\n".join(lines)

