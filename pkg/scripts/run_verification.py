"""Run the verification suite over a range of genera and write a JSON-lines report.

    python3 scripts/run_verification.py --genera 1-4 --out results/verify.jsonl
"""
import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from sigmaheat.verify import CHECKS, run_checks


@dataclass
class VerifyConfig:
    genera: list[int] = field(default_factory=lambda: [1, 2, 3, 4])
    checks: list[str] = field(default_factory=lambda: list(CHECKS))
    out: str | None = None


def parse_range(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        if "-" in part:
            lo, hi = part.split("-")
            out += range(int(lo), int(hi) + 1)
        else:
            out.append(int(part))
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--genera", type=parse_range, default=[1, 2, 3, 4])
    ap.add_argument("--checks", type=lambda s: s.split(","), default=list(CHECKS))
    ap.add_argument("--out", default=None)
    cfg = VerifyConfig(**vars(ap.parse_args(argv)))

    rows = [{"config": asdict(cfg)}]
    ok = True
    for g in cfg.genera:
        t0 = time.perf_counter()
        entries = run_checks(g, checks=cfg.checks)
        summary = entries[-1]
        summary["seconds"] = round(time.perf_counter() - t0, 3)
        rows += entries
        ok &= summary["status"] == "pass"
        print(f"g={g}: {summary['status']}  passed={summary['passed']} failed={summary['failed']} "
              f"reported={summary['reported']}  {summary['seconds']} s", file=sys.stderr)
        for name in summary["typo_candidates"]:
            print(f"    paper typo candidate: {name}", file=sys.stderr)
    if cfg.out:
        Path(cfg.out).parent.mkdir(parents=True, exist_ok=True)
        Path(cfg.out).write_text("".join(json.dumps(r) + "\n" for r in rows))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
