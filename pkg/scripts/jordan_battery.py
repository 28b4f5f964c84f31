"""Compare the grading-based weight filtration with the closed Deligne formula
on random conjugated Jordan nilpotents."""

import argparse
import random
import time

from pwv.filtrations import deligne_filtration, weight_filtration_from_grading
from pwv.linalg import Subspace
from pwv.synthetic import JordanConfig, random_jordan_sample


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-block", type=int, default=5)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    cfg = JordanConfig(max_block=args.max_block)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(args.count):
        s = random_jordan_sample(rng, cfg)
        V = Subspace.full(s.N.rows)
        d = rng.randint(0, 6)
        D = deligne_filtration(s.N, d, V)
        G = weight_filtration_from_grading(s.H, d, V, args.max_block)
        if any(D.piece(d, k) != G.piece(d, k) for k in range(d - args.max_block - 1,
                                                            d + args.max_block + 2)):
            bad += 1
            print(f"mismatch for blocks {s.sizes}")
    print(f"{args.count - bad}/{args.count} agree in {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    main()
