"""Run every harness check on every builtin scheme and print a summary table.

    python3 scripts/run_verification.py [--quick]
"""
import argparse
import time

from peres.analysis import default_grid, fixed_point_residual
from peres.extractors import builtin, builtin_names
from peres.verify import check_extracting, check_structure, check_uniform_outputs, golden_tables

CAPS = {"peres2": 14, "peres3bit": 12, "peres4bit_e4": 12, "dijkstra3": 12, "dijkstra5": 15,
        "dijkstra11_partial": 22, "peres3face": 8, "peres4face": 6, "peres4face_alt": 6}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true", help="halve the exhaustive caps")
    quick = ap.parse_args().quick
    print(golden_tables().render())
    print(f"{'scheme':<20}{'cap':>4} {'extracting':<11}{'uniform':<8}{'structure':<10}"
          f"{'max residual':>13} {'secs':>6}")
    for name in builtin_names():
        s = builtin(name)
        start = time.perf_counter()
        cap = CAPS[name] // 2 if quick else CAPS[name]
        ext = check_extracting(s, cap).ok
        uni = check_uniform_outputs(s.tree, 50, seed=0, symbolic=True)
        n = 1
        while s.tree.num_blocks ** (n + 1) <= 2 * 10 ** 4:
            n += 1
        struct = check_structure(s.tree, n).ok
        if s.alphabet_size == 2:
            res = max(fixed_point_residual(s, p) for p in default_grid())
        else:
            res = fixed_point_residual(s, [1 / s.alphabet_size] * s.alphabet_size)
        secs = time.perf_counter() - start
        print(f"{name:<20}{cap:>4} {str(ext):<11}{str(uni):<8}{str(struct):<10}"
              f"{res:>13.3g} {secs:>6.1f}")


if __name__ == "__main__":
    main()
