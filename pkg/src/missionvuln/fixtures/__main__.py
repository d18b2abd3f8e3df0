"""Materialize the bundled UAV fixture as a workspace directory.

Usage: python -m missionvuln.fixtures DEST [--empty-triage]
"""

from __future__ import annotations

import argparse

from . import materialize


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("dest", help="target workspace directory")
    parser.add_argument("--empty-triage", action="store_true",
                        help="start with an empty triage ledger")
    args = parser.parse_args()
    path = materialize(args.dest, include_triage=not args.empty_triage)
    print(path)


if __name__ == "__main__":
    main()
