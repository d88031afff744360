"""Run the acceptance criteria and print one line per criterion.

    python3 scripts/run_acceptance.py            # all fourteen
    python3 scripts/run_acceptance.py 9 11 14    # a subset
"""

import sys

from rmtpoly.acceptance import run_all


def main(argv):
    only = [int(a) for a in argv] or None
    results = run_all(only=only, echo=print)
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} passed")
    return 0 if passed == len(results) else 1


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
