"""Rebuild the 16-row component table for n=4 and compare it with the reference values."""

import argparse

from stature import closure as cl


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--limit", type=int, default=100_000)
    args = ap.parse_args()
    rows = cl.build_table(cl.closure(4, limit=args.limit), limit=args.limit)
    print(f"{'pair':10s} " + " ".join(f"{c:>4s}" for c in cl.TABLE_COLUMNS) + "  match")
    ok = True
    for r in cl.compare_table(rows):
        ok &= r["match"]
        cells = " ".join(f"{v:4d}" for v in r["counts"])
        print(f"{'x'.join(r['pair']):10s} {cells}  {r['match']}")
    print("all rows match" if ok else "MISMATCH")
    raise SystemExit(0 if ok else 1)


if __name__ == "__main__":
    main()
