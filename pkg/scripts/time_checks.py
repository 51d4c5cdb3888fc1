"""Cold timings of the expensive checks per genus, printed as a table.

    python3 scripts/time_checks.py --max-genus 6
"""
import argparse
import time
from dataclasses import dataclass

from sigmaheat.construct import context
from sigmaheat.verify import check_dual_construction, check_lemma33, check_q_structure, clear_caches

STAGES = {
    "dual": check_dual_construction,
    "lemma33": check_lemma33,
    "q-structure": check_q_structure,
}


@dataclass
class TimingConfig:
    max_genus: int = 5
    q_structure_max_genus: int = 6


def timed(fn, ctx):
    clear_caches()
    t0 = time.perf_counter()
    entries = fn(ctx)
    ok = all(e["status"] == "pass" for e in entries)
    return time.perf_counter() - t0, ok


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-genus", type=int, default=TimingConfig.max_genus)
    ap.add_argument("--q-structure-max-genus", type=int, default=TimingConfig.q_structure_max_genus)
    args = ap.parse_args(argv)
    cfg = TimingConfig(args.max_genus, args.q_structure_max_genus)

    print(f"{'g':>3} " + " ".join(f"{name:>16}" for name in STAGES))
    for g in range(1, cfg.max_genus + 1):
        ctx = context(g)
        cells = []
        for name, fn in STAGES.items():
            if name == "q-structure" and g > cfg.q_structure_max_genus:
                cells.append(f"{'skipped':>16}")
                continue
            dt, ok = timed(fn, ctx)
            cells.append(f"{dt:>10.2f} s {'ok' if ok else 'FAIL':>4}")
        print(f"{g:>3} " + " ".join(cells))


if __name__ == "__main__":
    main()
