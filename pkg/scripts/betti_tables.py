"""Betti numbers and collapse labels of F(M, G) for every graph up to a given size.

    python3 scripts/betti_tables.py --max-vertices 4 --manifolds CP1 R2 S1
"""
import argparse
import csv
import sys
import time
from dataclasses import dataclass, field
from typing import List

from orliksolomon.chromatic import betti, euler_char
from orliksolomon.manifold import BUILTIN
from orliksolomon.suites import graphs_up_to


@dataclass
class Config:
    max_vertices: int = 4
    min_vertices: int = 2
    manifolds: List[str] = field(default_factory=lambda: ["CP1", "R2", "S1xR"])
    ring: bool = False
    out: str = "-"


def run(cfg: Config) -> List[dict]:
    rows = []
    for name in cfg.manifolds:
        M = BUILTIN[name]()
        for G in graphs_up_to(cfg.max_vertices, cfg.min_vertices):
            t = time.time()
            page = betti(M, G, ring=cfg.ring)
            rows.append({
                "manifold": name,
                "field": M.field.name,
                "n": G.n,
                "edges": " ".join(f"{i}{j}" for i, j in G.sorted_edges),
                "betti": " ".join(map(str, page.betti())),
                "euler": page.euler_char(),
                "euler_ok": page.euler_char() == euler_char(M, G),
                "collapse": page.collapse,
                "seconds": round(time.time() - t, 3),
            })
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-vertices", type=int, default=Config.max_vertices)
    ap.add_argument("--min-vertices", type=int, default=Config.min_vertices)
    ap.add_argument("--manifolds", nargs="+", default=Config().manifolds, choices=sorted(BUILTIN))
    ap.add_argument("--ring", action="store_true", help="also build product tables")
    ap.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    a = ap.parse_args(argv)
    cfg = Config(a.max_vertices, a.min_vertices, a.manifolds, a.ring, a.out)
    rows = run(cfg)
    fh = sys.stdout if cfg.out == "-" else open(cfg.out, "w", newline="")
    w = csv.DictWriter(fh, fieldnames=list(rows[0]))
    w.writeheader()
    w.writerows(rows)
    if fh is not sys.stdout:
        fh.close()


if __name__ == "__main__":
    main()
