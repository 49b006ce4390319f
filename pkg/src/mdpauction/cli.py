"""Batch front end: load instances, run solvers, sweep parameters.

Thin wrappers only; all numerics live in the library modules. Exit codes:
0 optimal, 2 infeasible, 3 node budget exceeded, 4 parse error, 5
combinatorial blowup guard.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .auction import (
    allocation_report,
    auction_from_json,
    flat_wdp,
    solve_wdp,
    vcg_payments,
)
from .benchgen import DeliveryParams, gen_delivery
from .distributed import DistributionPolicy, run_distributed, worker_from_spec
from .errors import BlowupError, DeadlockError, NodeBudgetExceeded
from .mdp import mdp_from_json, policy_from_occupation, solve_dual_lp
from .milp import MilpConfig
from .privacy import allocation_from_encrypted, build_wdp_milp_encrypted, solve_wdp_encrypted
from .resources import cmdp_from_json, solve_constrained

EXIT_OPTIMAL = 0
EXIT_INFEASIBLE = 2
EXIT_BUDGET = 3
EXIT_PARSE = 4
EXIT_BLOWUP = 5

BENCH_SCHEMA_VERSION = 1
BENCH_COLUMNS = [
    "schema",
    "c_loc",
    "c_glob",
    "num_agents",
    "num_resources",
    "resources_per_action",
    "rep",
    "seed",
    "wall_time_s",
    "nodes",
    "lp_solves",
    "welfare",
    "status",
]


@dataclass(frozen=True)
class SweepSpec:
    """Axis definitions for a benchmark sweep; the cell grid is their product."""

    constraint_levels: tuple = (0.5,)
    num_resources: tuple = (3,)
    num_agents: tuple = (2,)
    resources_per_action: tuple = (2,)
    reps: int = 1
    seed_base: int = 0
    solver: str = "wdp"  # or "flat"
    grid_n: int = 3
    time_budget_s: float = 60.0
    node_budget: int = 200_000

    def __post_init__(self):
        for axis in (
            self.constraint_levels,
            self.num_resources,
            self.num_agents,
            self.resources_per_action,
        ):
            if len(axis) == 0:
                raise ValueError("sweep axes must be non-empty")
        if self.reps < 1:
            raise ValueError("reps must be at least 1")
        if self.solver not in ("wdp", "flat"):
            raise ValueError("solver must be 'wdp' or 'flat'")

    def cells(self) -> list:
        out = []
        for level in self.constraint_levels:
            for num_o in self.num_resources:
                for num_m in self.num_agents:
                    for rpa in self.resources_per_action:
                        out.append((level, num_o, num_m, rpa))
        return out


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_solve(args) -> int:
    try:
        payload = _load_json(args.input)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        if args.mode == "mdp":
            mdp = mdp_from_json(payload)
            measure, sol = solve_dual_lp(mdp)
            report = {
                "mode": args.mode,
                "objective": sol.objective,
                "policy": policy_from_occupation(measure).probs.tolist(),
                "bundle": None,
                "stats": {"nodes": 0, "lp_solves": 1},
            }
        else:
            cmdp = cmdp_from_json(payload)
            sol, policy, bundle, _ = solve_constrained(
                cmdp,
                nonbinary=(args.mode == "constrained-nonbinary"),
                config=MilpConfig(node_budget=args.node_budget),
            )
            if sol.status != "optimal":
                print("infeasible", file=sys.stderr)
                return EXIT_INFEASIBLE
            report = {
                "mode": args.mode,
                "objective": sol.objective,
                "policy": policy.probs.tolist(),
                "bundle": bundle.quantities.tolist(),
                "stats": {"nodes": sol.nodes_explored, "lp_solves": sol.lp_solves},
            }
    except ValueError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NodeBudgetExceeded as exc:
        print(f"node budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    _emit(report, args.out)
    return EXIT_OPTIMAL


def cmd_auction(args) -> int:
    try:
        instance = auction_from_json(_load_json(args.input))
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    report: dict = {}
    try:
        cfg = MilpConfig(node_budget=args.node_budget)
        allocation = None
        if args.distributed:
            workers = _build_workers(args.distributed, args.adversary)
            if args.encrypt_bids is not None:
                milp, transforms = build_wdp_milp_encrypted(instance, args.encrypt_bids)
                sol, audit = run_distributed(milp, workers, DistributionPolicy())
                allocation = allocation_from_encrypted(instance, transforms, sol)
            else:
                from .auction import build_wdp_milp

                sol, audit = run_distributed(build_wdp_milp(instance), workers, DistributionPolicy())
                from .auction import _allocation_from_wdp

                allocation = _allocation_from_wdp(instance, sol)
            report["audit"] = {
                "flagged_workers": sorted(audit.flagged),
                "tasks_issued": audit.tasks_issued,
                "responses_verified": audit.responses_verified,
                "rejections": len(audit.rejections()),
            }
        elif args.encrypt_bids is not None:
            allocation = solve_wdp_encrypted(instance, args.encrypt_bids, config=cfg)
        elif args.mdp_wdp or not args.flat:
            allocation = solve_wdp(instance, cfg)

        if args.vcg:
            allocation, payments = vcg_payments(instance, cfg)
            report.update(allocation_report(instance, allocation, payments))
        elif allocation is not None:
            report.update(allocation_report(instance, allocation))

        if args.flat:
            flat = flat_wdp(instance)
            report["flat_welfare"] = flat.welfare
            if allocation is not None:
                report["welfare_difference"] = abs(flat.welfare - allocation.welfare)
            else:
                report.update(allocation_report(instance, flat))
    except BlowupError as exc:
        print(f"blowup guard: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    except (NodeBudgetExceeded, DeadlockError) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    _emit(report, args.out)
    return EXIT_OPTIMAL


def _build_workers(count: int, adversary_spec: str | None):
    behaviors = {}
    if adversary_spec:
        for part in adversary_spec.split(","):
            kind, _, idx = part.partition(":")
            behaviors[int(idx)] = kind
    return [worker_from_spec(behaviors.get(i, "honest")) for i in range(count)]


def bench_cell(spec: SweepSpec, cell, rep: int) -> dict:
    level, num_o, num_m, rpa = cell
    seed = spec.seed_base + 7919 * spec.cells().index(cell) + rep
    params = DeliveryParams(
        grid_n=spec.grid_n,
        num_agents=num_m,
        num_resources=num_o,
        c_glob=level,
        c_loc=level,
        resources_per_action=min(rpa, num_o),
        seed=seed,
    )
    instance = gen_delivery(params)
    row = {
        "schema": BENCH_SCHEMA_VERSION,
        "c_loc": level,
        "c_glob": level,
        "num_agents": num_m,
        "num_resources": num_o,
        "resources_per_action": min(rpa, num_o),
        "rep": rep,
        "seed": seed,
        "wall_time_s": 0.0,
        "nodes": 0,
        "lp_solves": 0,
        "welfare": float("nan"),
        "status": "optimal",
    }
    start = time.perf_counter()
    try:
        if spec.solver == "flat":
            allocation = flat_wdp(instance)
        else:
            allocation = solve_wdp(instance, MilpConfig(node_budget=spec.node_budget))
        row["welfare"] = allocation.welfare
        row["nodes"] = allocation.nodes_explored
        row["lp_solves"] = allocation.lp_solves
    except NodeBudgetExceeded:
        row["status"] = "budget"
    except BlowupError:
        row["status"] = "blowup"
    row["wall_time_s"] = time.perf_counter() - start
    if row["status"] == "optimal" and row["wall_time_s"] > spec.time_budget_s:
        row["status"] = "timeout"
    return row


def cmd_bench(args) -> int:
    try:
        spec = SweepSpec(
            constraint_levels=tuple(args.constraint_levels),
            num_resources=tuple(args.resources),
            num_agents=tuple(args.agents),
            resources_per_action=tuple(args.resources_per_action),
            reps=args.reps,
            seed_base=args.seed_base,
            solver=args.solver,
            grid_n=args.grid,
            time_budget_s=args.time_budget,
            node_budget=args.node_budget,
        )
    except ValueError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    jobs = args.jobs or int(os.environ.get("MDPAUCTION_JOBS", "1"))
    tasks = [(cell, rep) for cell in spec.cells() for rep in range(spec.reps)]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_bench_cell_star, [(spec, c, r) for c, r in tasks]))
    else:
        rows = [bench_cell(spec, cell, rep) for cell, rep in tasks]

    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS)
    writer.writeheader()
    writer.writerows(rows)
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OPTIMAL


def _bench_cell_star(packed):
    spec, cell, rep = packed
    return bench_cell(spec, cell, rep)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mdpauction")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve a single instance")
    p_solve.add_argument("input")
    p_solve.add_argument(
        "--mode", choices=["mdp", "constrained", "constrained-nonbinary"], default="constrained"
    )
    p_solve.add_argument("--node-budget", type=int, default=1_000_000)
    p_solve.add_argument("--out")
    p_solve.set_defaults(func=cmd_solve)

    p_auction = sub.add_parser("auction", help="run winner determination")
    p_auction.add_argument("input")
    p_auction.add_argument("--flat", action="store_true")
    p_auction.add_argument("--mdp-wdp", action="store_true")
    p_auction.add_argument("--vcg", action="store_true")
    p_auction.add_argument("--distributed", type=int, metavar="N_WORKERS")
    p_auction.add_argument("--adversary", help="e.g. inflate:1,silent:3")
    p_auction.add_argument("--encrypt-bids", type=int, metavar="SEED")
    p_auction.add_argument("--node-budget", type=int, default=1_000_000)
    p_auction.add_argument("--out")
    p_auction.set_defaults(func=cmd_auction)

    p_bench = sub.add_parser("bench", help="sweep delivery instances to CSV")
    p_bench.add_argument("--constraint-levels", type=float, nargs="+", default=[0.5])
    p_bench.add_argument("--resources", type=int, nargs="+", default=[3])
    p_bench.add_argument("--agents", type=int, nargs="+", default=[2])
    p_bench.add_argument("--resources-per-action", type=int, nargs="+", default=[2])
    p_bench.add_argument("--reps", type=int, default=1)
    p_bench.add_argument("--seed-base", type=int, default=0)
    p_bench.add_argument("--solver", choices=["wdp", "flat"], default="wdp")
    p_bench.add_argument("--grid", type=int, default=3)
    p_bench.add_argument("--time-budget", type=float, default=60.0)
    p_bench.add_argument("--node-budget", type=int, default=200_000)
    p_bench.add_argument("--jobs", type=int)
    p_bench.add_argument("--out")
    p_bench.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
