#!/usr/bin/env python3
"""Random disk-problem ensemble: solve, certify, and summarize.

Draws problems with distinct interior nodes and target moduli in a configured
range, runs the full solver on each, and reports residuals, unimodularity
defects, degree windows, and certificate verdicts.
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass

import numpy as np

from takagi.disk import solve
from takagi.pick import DiskProblem
from takagi.verify import check_unimodular


@dataclass(frozen=True)
class EnsembleConfig:
    n_problems: int = 200
    n_max: int = 6
    seed: int = 0
    min_modulus: float = 0.2
    max_modulus: float = 3.0
    node_radius: float = 0.6
    min_separation: float = 0.05
    out: str | None = None


def random_problem(cfg: EnsembleConfig, rng: np.random.Generator) -> DiskProblem:
    N = int(rng.integers(1, cfg.n_max + 1))
    while True:
        nodes = (rng.uniform(-1, 1, N) + 1j * rng.uniform(-1, 1, N)) * cfg.node_radius
        if N == 1 or min(
            abs(nodes[i] - nodes[j]) for i in range(N) for j in range(i + 1, N)
        ) > cfg.min_separation:
            break
    values = rng.uniform(cfg.min_modulus, cfg.max_modulus, N) * np.exp(
        2j * np.pi * rng.uniform(0, 1, N)
    )
    return DiskProblem(nodes=nodes, values=values)


def run(cfg: EnsembleConfig) -> dict:
    rng = np.random.default_rng(cfg.seed)
    rows = []
    start = time.perf_counter()
    failures = 0
    for trial in range(cfg.n_problems):
        problem = random_problem(cfg, rng)
        sol = solve(problem, seed=trial)
        vals = sol.interpolant(problem.nodes)
        residual = float(np.max(np.abs(vals - problem.values)))
        defect = check_unimodular(sol.interpolant.numerator, sol.interpolant.denominator)
        pi, nu, zeta = sol.inertia.as_tuple()
        ok = bool(sol.certificates["pass"])
        failures += 0 if ok else 1
        rows.append(
            {
                "trial": trial,
                "size": problem.size,
                "inertia": [pi, nu, zeta],
                "deg_f": sol.f.degree,
                "deg_g": sol.g.degree,
                "residual": residual,
                "unimodularity_defect": defect,
                "pass": ok,
            }
        )
    elapsed = time.perf_counter() - start
    summary = {
        "config": asdict(cfg),
        "elapsed_seconds": elapsed,
        "failures": failures,
        "worst_residual": max(r["residual"] for r in rows),
        "worst_defect": max(r["unimodularity_defect"] for r in rows),
        "rows": rows,
    }
    return summary


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    defaults = EnsembleConfig()
    parser.add_argument("--n-problems", type=int, default=defaults.n_problems)
    parser.add_argument("--n-max", type=int, default=defaults.n_max)
    parser.add_argument("--seed", type=int, default=defaults.seed)
    parser.add_argument("--min-modulus", type=float, default=defaults.min_modulus)
    parser.add_argument("--max-modulus", type=float, default=defaults.max_modulus)
    parser.add_argument("--out", default=None, help="write the full JSON summary here")
    args = parser.parse_args()
    cfg = EnsembleConfig(
        n_problems=args.n_problems,
        n_max=args.n_max,
        seed=args.seed,
        min_modulus=args.min_modulus,
        max_modulus=args.max_modulus,
        out=args.out,
    )
    summary = run(cfg)
    print(
        f"{cfg.n_problems} problems in {summary['elapsed_seconds']:.1f}s: "
        f"{summary['failures']} failures, worst residual {summary['worst_residual']:.3e}, "
        f"worst unimodularity defect {summary['worst_defect']:.3e}"
    )
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"summary written to {cfg.out}")


if __name__ == "__main__":
    main()
