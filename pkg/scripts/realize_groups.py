"""Run the group realisation pipeline on a few small groups and print the reports.

    python3 scripts/realize_groups.py trivial cyclic:2 cyclic:3
"""

import argparse
import json

from tridouble.errors import ResourceLimitError
from tridouble.group_builder import DEFAULT_MAX_CURLED, realize_group
from tridouble.groups import group_from_spec


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("specs", nargs="*", default=["trivial", "cyclic:2", "cyclic:3"])
    ap.add_argument("--max-vertices", type=int, default=DEFAULT_MAX_CURLED)
    args = ap.parse_args()

    for spec in args.specs:
        try:
            _, report = realize_group(group_from_spec(spec), max_vertices=args.max_vertices)
        except ResourceLimitError as e:
            print(f"{spec}: stopped at stage {e.stage}: {e}")
            continue
        print(spec, json.dumps(report.to_json(), indent=2, ensure_ascii=False))


if __name__ == "__main__":
    main()
