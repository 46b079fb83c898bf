# scripts/export_tables.py
from __future__ import annotations

import argparse
import csv
import json
import pathlib
import sys
import time
from datetime import datetime, timezone

# 允许用 “python scripts/export_tables.py” 直接运行：
# 把项目根目录加入 sys.path，避免 import src 失败
PROJECT_ROOT = pathlib.Path(__file__).resolve().parents[1]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from tqdm import tqdm

from src.config import configure_logging
from src.gelfand import casimir_invariants
from src.liealg import KINEMATICAL_NAMES, catalog, display_name, num_invariants
from src.mlp import REFERENCE_LABELS, mlp_analyze, compare_with_reference


def _ensure_parent(path: pathlib.Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)


def _invariant_rows(keys: list[str], show_progress: bool) -> list[dict]:
    rows = []
    for key in tqdm(keys, desc="invariants", disable=not show_progress):
        g = catalog(key)
        found = casimir_invariants(g)
        for inv in found:
            rows.append({
                "algebra": key,
                "display": display_name(key),
                "N": num_invariants(g),
                "degree": inv.degree,
                "source": inv.source,
                "polynomial": str(inv.polynomial),
            })
    return rows


def _label_rows(keys: list[str], show_progress: bool) -> list[dict]:
    rows = []
    for key in tqdm(keys, desc="mlp", disable=not show_progress):
        report = mlp_analyze(key)
        row = compare_with_reference(report)
        rows.append({
            "algebra": key,
            "n": report.n,
            "m": report.m,
            "N_prime": report.N_prime,
            "pool": " ".join(row["pool"]),
            "pool_ok": row["pool_ok"],
            "count": row["count"],
            "expected_count": row["expected_count"],
            "matches_reference": row["matches_reference"],
            "labels": "; ".join(row["accepted"]),
            "note": row["note"],
        })
    return rows


def _save_csv(path: pathlib.Path, rows: list[dict]) -> None:
    _ensure_parent(path)
    with path.open("w", encoding="utf-8", newline="") as f:
        if not rows:
            return
        w = csv.DictWriter(f, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)


def _save_meta_json(path: pathlib.Path, args: argparse.Namespace, inv_rows: list[dict],
                    label_rows: list[dict], elapsed: float) -> None:
    _ensure_parent(path)
    meta = {
        "timestamp": datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"),
        "params": {"algebras": args.algebras, "skip_mlp": args.skip_mlp},
        "summary": {
            "invariants": len(inv_rows),
            "label_rows": len(label_rows),
            "label_mismatches": [r["algebra"] for r in label_rows
                                 if r["count"] != r["expected_count"]],
            "elapsed_s": round(elapsed, 2),
        },
    }
    with path.open("w", encoding="utf-8") as f:
        json.dump(meta, f, ensure_ascii=False, indent=2)


def main() -> None:
    parser = argparse.ArgumentParser(
        description="Export the invariant table and the so(3) missing-label table"
    )
    parser.add_argument(
        "--algebras",
        nargs="+",
        default=list(KINEMATICAL_NAMES),
        help="Catalog keys to include",
    )
    parser.add_argument(
        "--out-prefix",
        type=str,
        default=None,
        help="Path prefix for outputs (will create: *_invariants.csv, *_labels.csv, *_meta.json). "
             "Defaults to a timestamped prefix under ./runs/.",
    )
    parser.add_argument("--skip-mlp", action="store_true", help="Only export the invariant table")
    parser.add_argument("--verbose", action="store_true", help="Show progress and module logs")
    args = parser.parse_args()
    configure_logging(1 if args.verbose else 0)

    t0 = time.perf_counter()
    inv_rows = _invariant_rows(args.algebras, args.verbose)
    label_keys = [] if args.skip_mlp else [k for k in args.algebras if k in REFERENCE_LABELS]
    label_rows = _label_rows(label_keys, args.verbose)
    elapsed = time.perf_counter() - t0

    for r in inv_rows:
        print(f"{r['algebra']:<14} deg {r['degree']}  {r['polynomial']}")
    for r in label_rows:
        flag = "" if r["count"] == r["expected_count"] else "  [count differs]"
        print(f"{r['algebra']:<14} n={r['n']} m={r['m']} labels={{{r['labels']}}}{flag}")
    print(f"elapsed        : {elapsed:.2f}s")

    prefix = args.out_prefix
    if prefix is None:
        prefix = f"runs/tables_{int(time.time())}"
        print(f"[info] --out-prefix not set; using default: {prefix}")
    base = pathlib.Path(prefix)
    inv_path = base.with_name(base.name + "_invariants.csv")
    labels_path = base.with_name(base.name + "_labels.csv")
    meta_path = base.with_name(base.name + "_meta.json")
    _save_csv(inv_path, inv_rows)
    print(f"[saved] {inv_path}")
    if label_rows:
        _save_csv(labels_path, label_rows)
        print(f"[saved] {labels_path}")
    _save_meta_json(meta_path, args, inv_rows, label_rows, elapsed)
    print(f"[saved] {meta_path}")


if __name__ == "__main__":
    main()
