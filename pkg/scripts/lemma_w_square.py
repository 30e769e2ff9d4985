"""Decompose W(n) x W(n) into components and print the census for each n."""

import argparse

from stature import closure as cl


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=16)
    args = ap.parse_args()
    for n in range(5, args.max_n + 1):
        r = cl.verify_w_square(n)
        print(f"n={n:2d} {r.census()}")


if __name__ == "__main__":
    main()
