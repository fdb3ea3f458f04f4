#!/usr/bin/env python
"""
Utility to view and analyze traces from the traces/ directory.

Usage:
    python view_traces.py                    # Summary plus the latest run's span tree
    python view_traces.py --summary          # Show summary only
    python view_traces.py --file traces/trace_20261019_143022.jsonl
    python view_traces.py --prefix equilibrium --last 20
"""

import argparse
import json
from collections import Counter, defaultdict
from datetime import datetime
from pathlib import Path
from typing import Dict, List


def parse_timestamp(ts_str: str) -> datetime:
    """Parse OpenTelemetry timestamp."""
    return datetime.fromisoformat(ts_str.replace('Z', '+00:00'))


def span_seconds(span: Dict) -> float:
    start, end = span.get("start_time"), span.get("end_time")
    if not start or not end:
        return 0.0
    return (parse_timestamp(end) - parse_timestamp(start)).total_seconds()


def format_duration(seconds: float) -> str:
    if seconds < 1:
        return f"{seconds*1000:.0f}ms"
    return f"{seconds:.2f}s"


def print_span_summary(span: Dict, indent: int = 0):
    """Print one line per span with the attributes worth reading."""
    prefix = "  " * indent
    name = span.get("name", "unknown")
    attrs = span.get("attributes", {})
    duration = format_duration(span_seconds(span))

    if name.startswith("checks."):
        mark = "✓" if attrs.get("passed") else "❌"
        print(f"{prefix}{mark} {attrs.get('check', name)} ({duration})")
    elif name == "equilibrium.run_best_response":
        status = attrs.get("status", "?")
        cycle = " (cycle)" if attrs.get("cycle_detected") else ""
        print(f"{prefix}🔁 {name} [{status}{cycle}, {attrs.get('passes', '?')} passes] ({duration})")
    elif name.startswith("experiment."):
        cell = f"n={attrs['n']} m={attrs['m']} " if "n" in attrs else ""
        print(f"{prefix}📊 {name} {cell}({duration})")
        if "successes" in attrs:
            print(f"{prefix}   successes: {attrs['successes']}")
    elif name.startswith("hardness."):
        print(f"{prefix}🧩 {name} ({duration})")
        if "nodes" in attrs:
            print(f"{prefix}   nodes: {attrs['nodes']}, agree: {attrs.get('agree')}")
    else:
        print(f"{prefix}📝 {name} ({duration})")


def load_traces(file_path: Path) -> List[Dict]:
    """Load every span from a trace file; the exporter writes indented objects back to back."""
    if not file_path.exists():
        print(f"❌ Trace file not found: {file_path}")
        return []

    content = file_path.read_text()
    decoder = json.JSONDecoder()
    spans: List[Dict] = []
    pos = 0
    while True:
        pos = content.find("{", pos)
        if pos < 0:
            break
        try:
            obj, end = decoder.raw_decode(content, pos)
        except json.JSONDecodeError:
            # truncated tail of a file still being written
            break
        if obj.get("name") and obj.get("context"):
            spans.append(obj)
        pos = end
    return spans


def show_summary(traces: List[Dict]):
    """Span counts and total time per operation, dynamics outcomes and failed checks."""
    print("\n📊 Trace Summary")
    print("=" * 60)
    print(f"Total spans: {len(traces)}")

    counts = Counter(t.get("name", "unknown") for t in traces)
    seconds = defaultdict(float)
    for t in traces:
        seconds[t.get("name", "unknown")] += span_seconds(t)

    print(f"\n{'operation':<44} {'spans':>6} {'total':>9}")
    for name, count in sorted(counts.items(), key=lambda kv: -seconds[kv[0]]):
        print(f"{name:<44} {count:>6} {format_duration(seconds[name]):>9}")

    dynamics = [t for t in traces if t.get("name") == "equilibrium.run_best_response"]
    if dynamics:
        statuses = Counter(t.get("attributes", {}).get("status", "?") for t in dynamics)
        cycles = sum(1 for t in dynamics if t.get("attributes", {}).get("cycle_detected"))
        print(f"\nBest-response runs: {statuses.get('converged', 0)} converged, "
              f"{statuses.get('gave_up', 0)} gave up ({cycles} on a detected cycle)")

    checks = [t for t in traces if t.get("name") == "checks.run"]
    if checks:
        failed = [t["attributes"].get("check") for t in checks if not t.get("attributes", {}).get("passed")]
        print(f"\nChecks: {len(checks) - len(failed)}/{len(checks)} passed")
        for name in failed:
            print(f"  ❌ {name}")

    print()


def main():
    parser = argparse.ArgumentParser(description="View OpenTelemetry traces")
    parser.add_argument(
        "--file", help="Path to specific trace file (default: latest in traces/)")
    parser.add_argument("--last", type=int, help="Show only last N spans")
    parser.add_argument("--summary", action="store_true",
                        help="Show summary only")
    parser.add_argument("--prefix", help="Only spans whose name starts with this, e.g. hardness")

    args = parser.parse_args()

    if args.file:
        file_path = Path(args.file)
    else:
        traces_dir = Path("traces")
        if not traces_dir.exists():
            print("❌ No traces directory found. Run voronoi-games --trace first.")
            return

        trace_files = sorted(traces_dir.glob("trace_*.jsonl"), reverse=True)
        if not trace_files:
            print("❌ No trace files found in traces/ directory.")
            return

        file_path = trace_files[0]
        print(f"📁 Reading latest trace file: {file_path}\n")

    traces = load_traces(file_path)

    if not traces:
        print("No traces found.")
        return

    if args.prefix:
        traces = [t for t in traces if t.get("name", "").startswith(args.prefix)]

    show_summary(traces)
    if args.summary:
        return

    if args.last:
        traces = traces[-args.last:]

    print("📋 Spans")
    print("=" * 60)

    children = defaultdict(list)
    span_ids = {t.get("context", {}).get("span_id") for t in traces}
    roots = []
    for span in traces:
        parent = span.get("parent_id")
        if parent is None or parent not in span_ids:
            roots.append(span)
        else:
            children[parent].append(span)

    def walk(span: Dict, depth: int):
        print_span_summary(span, indent=depth)
        for child in children.get(span.get("context", {}).get("span_id"), []):
            walk(child, depth + 1)

    for root in roots:
        walk(root, 0)

    print()


if __name__ == "__main__":
    main()
