"""Distributed branch and bound with untrusted workers.

The auctioneer farms each node relaxation out to simulated workers,
verifies every response through the duality checks, and falls back to
solving locally (or reassigning) when a response fails. Accepted
responses are provably optimal, so the search visits exactly the nodes
the centralized solver would and ends at the same solution no matter how
the workers misbehave.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DeadlockError
from .lp import LpProblem, LpSolution, OpCounters, solve_lp, verify_solution
from .milp import MilpConfig, MilpProblem, MilpSolution, solve_milp


@dataclass(frozen=True)
class WorkerTask:
    task_id: str
    relaxation: LpProblem


@dataclass(frozen=True)
class WorkerResponse:
    task_id: str
    claimed: Optional[LpSolution]  # None models a silent worker


@dataclass
class TaskRecord:
    task_id: str
    worker: int
    verdict: str  # accepted | rejected | silent
    reason: str
    resolution: str  # accepted | re-solved locally | reassigned


@dataclass
class AuditLog:
    records: list = field(default_factory=list)
    flagged: set = field(default_factory=set)
    tasks_issued: int = 0
    responses_verified: int = 0

    def rejections(self, worker: Optional[int] = None) -> list:
        return [
            r
            for r in self.records
            if r.verdict != "accepted" and (worker is None or r.worker == worker)
        ]


@dataclass
class DistributionPolicy:
    on_rejection: str = "resolve-locally"  # or "reassign"
    redundancy: int = 1
    allow_local_solve: bool = True

    def __post_init__(self):
        if self.on_rejection not in ("resolve-locally", "reassign"):
            raise ValueError("on_rejection must be 'resolve-locally' or 'reassign'")
        if self.redundancy < 1:
            raise ValueError("redundancy must be at least 1")


# ---------------------------------------------------------------------------
# worker behaviors (all take a WorkerTask, return a WorkerResponse)
# ---------------------------------------------------------------------------


def honest_worker() -> Callable[[WorkerTask], WorkerResponse]:
    def run(task: WorkerTask) -> WorkerResponse:
        return WorkerResponse(task.task_id, solve_lp(task.relaxation))

    return run


def inflating_worker(delta: float = 10.0) -> Callable[[WorkerTask], WorkerResponse]:
    """Solves honestly, then overstates the objective."""

    def run(task: WorkerTask) -> WorkerResponse:
        sol = solve_lp(task.relaxation)
        if sol.status == "optimal":
            sol = LpSolution(
                x=sol.x, dual=sol.dual, objective=sol.objective + delta,
                basis=sol.basis, status="optimal",
            )
        return WorkerResponse(task.task_id, sol)

    return run


def infeasible_worker(shift: float = -1e-2) -> Callable[[WorkerTask], WorkerResponse]:
    """Returns a point pushed outside the feasible region."""

    def run(task: WorkerTask) -> WorkerResponse:
        sol = solve_lp(task.relaxation)
        if sol.status == "optimal":
            x = sol.x.copy()
            x[int(np.argmax(np.abs(x)))] += shift
            sol = LpSolution(x=x, dual=sol.dual, objective=sol.objective,
                             basis=sol.basis, status="optimal")
        return WorkerResponse(task.task_id, sol)

    return run


def sign_flip_worker() -> Callable[[WorkerTask], WorkerResponse]:
    """Negates the dual certificate."""

    def run(task: WorkerTask) -> WorkerResponse:
        sol = solve_lp(task.relaxation)
        if sol.status == "optimal":
            sol = LpSolution(x=sol.x, dual=-sol.dual, objective=sol.objective,
                             basis=sol.basis, status="optimal")
        return WorkerResponse(task.task_id, sol)

    return run


def suboptimal_vertex_worker(pivots: int = 1) -> Callable[[WorkerTask], WorkerResponse]:
    """Stops phase 2 early and passes the feasible vertex off as optimal."""

    def run(task: WorkerTask) -> WorkerResponse:
        sol = solve_lp(task.relaxation, pivot_limit=pivots)
        if sol.status == "pivot-limit":
            sol = LpSolution(x=sol.x, dual=sol.dual, objective=sol.objective,
                             basis=sol.basis, status="optimal")
        return WorkerResponse(task.task_id, sol)

    return run


def silent_worker() -> Callable[[WorkerTask], WorkerResponse]:
    """Never answers; the auctioneer times the task out."""

    def run(task: WorkerTask) -> WorkerResponse:
        return WorkerResponse(task.task_id, None)

    return run


ADVERSARY_FACTORIES = {
    "honest": honest_worker,
    "inflate": inflating_worker,
    "infeasible": infeasible_worker,
    "sign-flip": sign_flip_worker,
    "suboptimal": suboptimal_vertex_worker,
    "silent": silent_worker,
}


def worker_from_spec(spec: str) -> Callable[[WorkerTask], WorkerResponse]:
    if spec not in ADVERSARY_FACTORIES:
        raise ValueError(f"unknown worker behavior {spec!r}")
    return ADVERSARY_FACTORIES[spec]()


# ---------------------------------------------------------------------------
# the auctioneer
# ---------------------------------------------------------------------------


def run_distributed(
    problem: MilpProblem,
    workers: list,
    policy: Optional[DistributionPolicy] = None,
    milp_config: Optional[MilpConfig] = None,
    verify_counters: Optional[OpCounters] = None,
) -> tuple[MilpSolution, AuditLog]:
    """Branch and bound with every relaxation farmed to untrusted workers.

    Tasks go round-robin over unflagged workers, redundancy k sends each
    task to k of them. Every response is verified; rejection flags the
    worker and the task is reassigned or solved locally per the policy.
    The returned solution matches the centralized solve_milp exactly.
    """
    if not workers:
        raise ValueError("need at least one worker")
    pol = policy or DistributionPolicy()
    audit = AuditLog()
    counters = verify_counters if verify_counters is not None else OpCounters()
    rotation = itertools.cycle(range(len(workers)))
    task_seq = itertools.count()

    def pick_workers(k: int) -> list:
        avail = [i for i in range(len(workers)) if i not in audit.flagged]
        chosen = []
        for idx in rotation:
            if len(chosen) >= min(k, len(avail)):
                break
            if idx not in audit.flagged and idx not in chosen:
                chosen.append(idx)
        return chosen

    def _resolve(task_id: str, resolution: str) -> None:
        for rec in audit.records:
            if rec.task_id == task_id and rec.resolution == "pending":
                rec.resolution = resolution

    def relaxation_solver(lp: LpProblem) -> LpSolution:
        task = WorkerTask(task_id=f"task-{next(task_seq)}", relaxation=lp)
        audit.tasks_issued += 1
        attempted: set = set()
        local: Optional[LpSolution] = None  # lazy ground truth for status claims

        def local_solve() -> LpSolution:
            nonlocal local
            if local is None:
                local = solve_lp(lp)
            return local

        while True:
            chosen = [w for w in pick_workers(pol.redundancy) if w not in attempted]
            if not chosen:
                if pol.allow_local_solve:
                    audit.records.append(
                        TaskRecord(task.task_id, -1, "accepted", "local", "re-solved locally")
                    )
                    return local_solve()
                raise DeadlockError(
                    f"{task.task_id}: every worker rejected and local solving is forbidden"
                )
            results = []  # (worker, usable solution or None, ok, reason)
            for widx in chosen:
                attempted.add(widx)
                response = workers[widx](task)
                if response.claimed is None:
                    audit.flagged.add(widx)
                    audit.records.append(
                        TaskRecord(task.task_id, widx, "silent", "timeout", "pending")
                    )
                    results.append((widx, None, False, "timeout"))
                    continue
                claimed = response.claimed
                if claimed.status == "optimal":
                    audit.responses_verified += 1
                    verdict = verify_solution(lp, claimed, counters=counters)
                    ok, reason, usable = verdict.accepted, verdict.reason, claimed
                else:
                    # no cheap certificate for infeasible/unbounded claims:
                    # confirm against one local solve instead of trusting them
                    ok = claimed.status == local_solve().status
                    reason = "" if ok else f"false-{claimed.status}"
                    usable = local_solve() if ok else None
                if not ok:
                    audit.flagged.add(widx)
                audit.records.append(
                    TaskRecord(
                        task.task_id, widx, "accepted" if ok else "rejected",
                        reason or "", "pending",
                    )
                )
                results.append((widx, usable, ok, reason))

            accepted = [(w, sol) for w, sol, ok, _ in results if ok]
            agree = len(accepted) == len(results) and len(accepted) > 0
            if agree and len(accepted) > 1:
                sols = [sol for _, sol in accepted]
                statuses = {sol.status for sol in sols}
                objs = [sol.objective for sol in sols if sol.status == "optimal"]
                agree = len(statuses) == 1 and (
                    not objs or max(objs) - min(objs) <= 1e-9 * (1.0 + abs(objs[0]))
                )
                if not agree:
                    # verified certificates cannot disagree; flag defensively
                    for w, _ in accepted:
                        audit.flagged.add(w)
            if agree:
                _resolve(task.task_id, "accepted")
                return accepted[0][1]
            if pol.on_rejection == "resolve-locally" and pol.allow_local_solve:
                _resolve(task.task_id, "re-solved locally")
                return local_solve()
            _resolve(task.task_id, "reassigned")
            # loop: reassign to the next unflagged workers

    cfg = milp_config or MilpConfig()
    cfg = MilpConfig(
        node_budget=cfg.node_budget,
        relaxation_solver=relaxation_solver,
        integrality_tol=cfg.integrality_tol,
        prune_tol=cfg.prune_tol,
        counters=cfg.counters,
        primal_heuristic=cfg.primal_heuristic,
    )
    solution = solve_milp(problem, cfg)
    return solution, audit
