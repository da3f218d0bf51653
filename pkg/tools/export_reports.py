#!/usr/bin/env python3
"""
Export cached assessment reports into one JSON or CSV file.

Reports can be filtered by the order of Gamma' or by the adequacy verdict.
"""
import argparse
import json
import os
import sys
from typing import Dict, List, Optional

# Add the project root to the Python path
project_root = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
sys.path.insert(0, project_root)

from app.models.schemas import AdequacyReport, verdict_text  # noqa: E402
from app.services.cache_service import get_report, list_reports  # noqa: E402
from app.services.pipeline_service import report_csv  # noqa: E402


def collect_reports(backend: str, cache_dir: Optional[str] = None, order: Optional[int] = None,
                    adequate: Optional[str] = None) -> List[Dict]:
    """Cached reports matching the filters, in key order."""
    collected = []
    for key in list_reports(backend, cache_dir):
        data = get_report(key, backend, cache_dir)
        if not data:
            continue
        if order is not None and data.get("order_gamma_prime") != order:
            continue
        if adequate is not None and verdict_text(data.get("adequate")) != adequate:
            continue
        collected.append({"key": key, **data})
    return collected


def export_reports(output_file: str, backend: str, cache_dir: Optional[str] = None,
                   order: Optional[int] = None, adequate: Optional[str] = None,
                   fmt: str = "json") -> int:
    reports = collect_reports(backend, cache_dir, order, adequate)
    with open(output_file, "w", encoding="utf-8") as f:
        if fmt == "csv":
            models = [AdequacyReport.model_validate({k: v for k, v in r.items() if k != "key"}) for r in reports]
            f.write(report_csv(models))
        else:
            json.dump(reports, f, indent=2, sort_keys=True)
    print(f"Exported {len(reports)} report(s) to {output_file}")
    return len(reports)


def main():
    parser = argparse.ArgumentParser(description="Export cached assessment reports")
    parser.add_argument("-o", "--output", required=True, help="Output file path")
    parser.add_argument("-b", "--backend", choices=["file", "redis"], default="file", help="Cache backend")
    parser.add_argument("-d", "--cache-dir", help="Directory of the file cache")
    parser.add_argument("--order", type=int, help="Keep reports with this order of Gamma'")
    parser.add_argument("--adequate", choices=["TRUE", "FALSE", "INDETERMINATE"], help="Keep this verdict")
    parser.add_argument("--format", choices=["json", "csv"], default="json", help="Output format")

    args = parser.parse_args()

    try:
        export_reports(args.output, args.backend, args.cache_dir, args.order, args.adequate, args.format)
    except Exception as e:
        print(f"Error: {str(e)}")
        sys.exit(1)


if __name__ == "__main__":
    main()
