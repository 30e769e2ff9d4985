"""Run the closure for a range of n and print the maximal elements with timings."""

import argparse
import time

from stature import closure as cl
from stature.formats import encode_certificate
from stature.graph import rank


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=list(range(4, 11)))
    ap.add_argument("--limit", type=int, default=100_000)
    ap.add_argument("--save", metavar="DIR", help="write one certificate per n into DIR")
    args = ap.parse_args()
    for n in args.n:
        t0 = time.perf_counter()
        cert = cl.closure(n, limit=args.limit)
        dt = time.perf_counter() - t0
        shapes = ", ".join(f"{e.name}(|V|={len(e.graph)}, rank={rank(e.graph)})" for e in cert.maximal_elements)
        print(f"n={n:2d} rounds={cert.rounds} q-bucket={len(cert.q_bucket):3d} {dt:6.2f}s  {shapes}")
        if args.save:
            with open(f"{args.save}/closure_{n}.json", "w") as fh:
                fh.write(encode_certificate(cert))


if __name__ == "__main__":
    main()
