"""Per-class output multisets and digit totals for n=6 (von Neumann and Peres).

    python3 scripts/class_images.py [--n 6]
"""
import argparse

from peres.core import class_size
from peres.extractors import builtin
from peres.verify import class_image


def describe(image):
    by_len = {}
    for z, cnt in image.items():
        by_len.setdefault(len(z), 0)
        by_len[len(z)] += cnt
    parts = []
    for length in sorted(by_len):
        mult = by_len[length] // 2 ** length
        parts.append(f"{mult}*{{0,1}}^{length}" if length else f"{mult}*{{λ}}")
    return " + ".join(parts)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=6)
    n = ap.parse_args().n
    peres2 = builtin("peres2")
    schemes = {"von Neumann": peres2.with_plan(()), "Peres": peres2}
    for label, s in schemes.items():
        print(f"== {label} (n={n})")
        print(f"{'k':>2} {'|S|':>5} {'bits':>5}  multiset image")
        totals = []
        for k in range(n + 1):
            c = (n - k, k)
            image = class_image(s.extract_tuple, c)
            bits = sum(len(z) * m for z, m in image.items())
            totals.append(bits)
            print(f"{k:>2} {class_size(c):>5} {bits:>5}  {describe(image)}")
        print("bits column:", tuple(totals))


if __name__ == "__main__":
    main()
