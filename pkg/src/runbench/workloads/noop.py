"""Startup probe: print a greeting and exit."""

import sys


def main(argv=None):
    sys.stdout.write("Hello World!\n")
    sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
