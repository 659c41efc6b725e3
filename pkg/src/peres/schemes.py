"""Catalog of builtin schemes.

Trees for peres2, the 3- and 4-face schemes, the 3-bit scheme and the
3-bit Dijkstra roulette reproduce the printed component tables. The 4-bit
(E4 base), m=5 and m=11 Dijkstra trees are reconstructions checked by the
exhaustive extraction harness.
"""
from __future__ import annotations

from functools import lru_cache

from .core import to_text
from .extractors import Scheme, rotation_orbits
from .tree import BinarizationTree, leaf, out, parse_tree, rec


def L(*labels):
    return [leaf(x) for x in labels]


def _named(tree_root, names, name, plan=None, **kw):
    tree = BinarizationTree(tree_root, **kw)
    return Scheme(name, tree, plan, dict(enumerate_names(tree_root, names)))


def enumerate_names(root, names):
    """Pair pre-order internal indices with ``names`` (``None`` skips a node)."""
    k = 0
    it = iter(names)

    def walk(node):
        nonlocal k
        if node.is_leaf:
            return
        name = next(it, None)
        if name is not None:
            yield k, name
        k += 1
        for c in node.children:
            yield from walk(c)

    return list(walk(root))


PERES2_TEXT = "(R (R (L 00) (L 11)) (O (L 01) (L 10)))"

# ten leaves, five component functions; no output role intended
EXAMPLE_TREE_TEXT = """
(R (R (L 2) (L 5))
   (L 6)
   (R (R (L 1)
         (R (L 4) (L 0) (L 8) (L 9)))
      (L 7)
      (L 3)))
"""


def example_tree() -> BinarizationTree:
    return parse_tree(EXAMPLE_TREE_TEXT)


def peres2():
    root = rec(rec(*L("00", "11")), out(*L("01", "10")))
    return _named(root, ["u", "v", "Psi1"], "peres2")


def peres3face():
    root = rec(
        rec(*L("00", "11", "22")),
        rec(out(*L("12", "21")), out(*L("01", "10")), out(*L("02", "20"))),
    )
    return _named(root, ["u", "v", "w", "Psi11", "Psi12", "Psi13"], "peres3face")


def _four_face_pairs():
    # w1 groups (child order gives w1 = 0..3) and w2 groups
    w1 = [("01", "10"), ("02", "20"), ("03", "30"), ("12", "21")]
    w2 = [("13", "31"), ("23", "32")]
    return [out(*L(*g)) for g in w1], [out(*L(*g)) for g in w2]


def peres4face():
    w1, w2 = _four_face_pairs()
    root = rec(rec(*L("00", "11", "22", "33")), rec(*w1), rec(*w2))
    names = ["u", "v", "w1"] + [None] * 4 + ["w2"]
    return _named(root, names, "peres4face")


def peres4face_alt():
    # u is binary here, so an extra node h separates the w1 and w2 blocks;
    # it is recursed like every other non-output node
    w1, w2 = _four_face_pairs()
    root = rec(rec(*L("00", "11", "22", "33")), rec(rec(*w1), rec(*w2)))
    names = ["u", "v", "h", "w1"] + [None] * 4 + ["w2"]
    return _named(root, names, "peres4face_alt")


def peres3bit():
    root = rec(
        rec(rec(*L("000", "111")), rec(*L("100", "110"))),
        rec(out(*L("001", "010")), out(*L("011", "101"))),
    )
    return _named(root, ["u", "v", "v1", "v2", "w"], "peres3bit")


def peres4bit_e4():
    # children of each output node are in lexicographic (class) order, so
    # branch indices are exactly the E4 codes
    k1 = out(*L("0001", "0010", "0100", "1000"))
    k3 = out(*L("0111", "1011", "1101", "1110"))
    k2_long = out(*L("0011", "0101", "0110", "1001"))
    k2_short = out(*L("1010", "1100"))
    root = rec(
        rec(*L("0000", "1111")),
        rec(rec(k1, k3), rec(k2_long, k2_short)),
    )
    names = ["u", "v", "w", "w1", None, None, "w2"]
    return _named(root, names, "peres4bit_e4")


def _orbit_node(rep):
    # child i is the rotation reached from rep by i left shifts, i.e. the
    # string whose rotation count is i
    m = len(rep)
    return out(*[leaf(to_text(rep[i:] + rep[:i])) for i in range(m)])


def _left_spine(nodes):
    """Binary Recurse spine: the last item hangs right, the rest recurse left."""
    if len(nodes) == 1:
        return nodes[0]
    return rec(_left_spine(nodes[:-1]), nodes[-1])


def _dijkstra_root(m, selector):
    zeros, ones = "0" * m, "1" * m
    return rec(rec(leaf(zeros), leaf(ones)), selector)


def dijkstra3():
    orbits = [_orbit_node(r) for r in rotation_orbits(3)]
    root = _dijkstra_root(3, rec(*orbits))
    return _named(root, ["u", "v", "w"], "dijkstra3", output_alphabet=3)


def dijkstra5():
    orbits = [_orbit_node(r) for r in rotation_orbits(5)]
    root = _dijkstra_root(5, _left_spine(orbits))
    names = ["u", "v", "w", "w1", "w2", "w3", "w4"]
    return _named(root, names, "dijkstra5", output_alphabet=5)


DIJKSTRA11_PARTS = ((1, 3), (4, 5), (6, 7), (8, 10))


def dijkstra11_partial():
    reps = rotation_orbits(11)
    parts = []
    for lo, hi in DIJKSTRA11_PARTS:
        group = [_orbit_node(r) for r in reps if lo <= sum(r) <= hi]
        parts.append(_left_spine(group))
    selector = rec(rec(parts[0], parts[1]), rec(parts[2], parts[3]))
    root = _dijkstra_root(11, selector)
    tree = BinarizationTree(root, output_alphabet=11)
    # pre-order: u=0, v=1, w=2, w1=3, then the S1 and S2 spines, then w2
    names = {0: "u", 1: "v", 2: "w", 3: "w1"}
    w2 = next(v.index for v in tree.nodes
              if v.parent == 2 and v.index != 3)
    names[w2] = "w2"
    plan = (0, 1, 3, w2)
    return Scheme("dijkstra11_partial", tree, plan, names)


BUILTIN = {
    "peres2": lru_cache(None)(peres2),
    "peres3face": lru_cache(None)(peres3face),
    "peres4face": lru_cache(None)(peres4face),
    "peres4face_alt": lru_cache(None)(peres4face_alt),
    "peres3bit": lru_cache(None)(peres3bit),
    "peres4bit_e4": lru_cache(None)(peres4bit_e4),
    "dijkstra3": lru_cache(None)(dijkstra3),
    "dijkstra5": lru_cache(None)(dijkstra5),
    "dijkstra11_partial": lru_cache(None)(dijkstra11_partial),
}

