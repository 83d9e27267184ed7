#!/usr/bin/env python3
"""
Run every verification suite with one seed

Usage:
    python scripts/run_all_suites.py
    python scripts/run_all_suites.py --seed 7 --out reports/
    python scripts/run_all_suites.py --suite pi --suite gm --workers 4
"""
import argparse
import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.config import settings
from src.documents import serialize
from src.logging_config import configure_logging
from src.metrics import render_metrics
from src.verification import SUITES, run_suite


def main():
    parser = argparse.ArgumentParser(description="Run the verification suites")
    parser.add_argument('--seed', type=int, default=1, help='Seed shared by every suite')
    parser.add_argument('--suite', action='append', choices=sorted(SUITES), help='Run only these suites')
    parser.add_argument('--workers', type=int, default=None, help='Process pool size')
    parser.add_argument('--out', default='suite-reports', help='Directory for JSON reports')
    args = parser.parse_args()

    configure_logging(settings.log_level, json_logs=settings.json_logs)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    names = args.suite or list(SUITES)
    failed = []
    print(f"\n{'='*60}")
    print(f"{'Suite':<16} {'Pass':>6} {'Fail':>6} {'Error':>6} {'Seconds':>10}")
    print(f"{'='*60}")
    for name in names:
        report = run_suite(name, args.seed, workers=args.workers)
        (out / f"{name}.json").write_text(serialize(report), encoding="utf-8")
        counts = report.summary()
        print(f"{name:<16} {counts['pass']:>6} {counts['fail']:>6} {counts['error']:>6} {report.duration_seconds:>10.2f}")
        if not report.passed:
            failed.append(name)
    print(f"{'='*60}\n")

    (out / "metrics.prom").write_bytes(render_metrics())
    if failed:
        print(f"Failed suites: {', '.join(failed)}")
        sys.exit(1)
    print("All suites passed")


if __name__ == '__main__':
    main()
