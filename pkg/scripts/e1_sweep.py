"""Closed form against lattice sum for the E1 polynomial over random Betti vectors.

    python3 scripts/e1_sweep.py --vectors 50 --max-vertices 5 --seed 1
"""
import argparse
import random
import time
from dataclasses import dataclass

from orliksolomon.chromatic import e1_poly_closed, e1_poly_direct
from orliksolomon.manifold import from_betti
from orliksolomon.suites import graphs_up_to, random_betti


@dataclass
class Config:
    vectors: int = 20
    max_vertices: int = 5
    seed: int = 0


def run(cfg: Config) -> int:
    rng = random.Random(cfg.seed)
    graphs = list(graphs_up_to(cfg.max_vertices))
    mismatches = 0
    t = time.time()
    for _ in range(cfg.vectors):
        b = random_betti(rng)
        M = from_betti(b)
        bad = [G for G in graphs if e1_poly_closed(M, G) != e1_poly_direct(M, G)]
        mismatches += len(bad)
        print(f"betti {b}: {len(graphs) - len(bad)}/{len(graphs)} agree")
    print(f"{cfg.vectors * len(graphs)} pairs, {mismatches} mismatches, {time.time() - t:.2f}s")
    return mismatches


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--vectors", type=int, default=Config.vectors)
    ap.add_argument("--max-vertices", type=int, default=Config.max_vertices)
    ap.add_argument("--seed", type=int, default=Config.seed)
    a = ap.parse_args(argv)
    raise SystemExit(1 if run(Config(a.vectors, a.max_vertices, a.seed)) else 0)


if __name__ == "__main__":
    main()
