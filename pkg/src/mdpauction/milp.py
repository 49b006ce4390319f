"""Branch and bound over binary variables on top of LP relaxations.

Maximization convention throughout: relaxation values are upper bounds,
incumbents are lower bounds. Node relaxations materialize binary ranges
and fixings as rows, so every LP handed to the relaxation hook is a plain
nonnegative, bound-free problem (the shape the distributed layer ships).
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import NodeBudgetExceeded, NumericalError
from .lp import LpProblem, LpSolution, OpCounters, solve_lp

INTEGRALITY_TOL = 1e-6
PRUNE_TOL = 1e-9


@dataclass(frozen=True)
class MilpProblem:
    base: LpProblem
    binary_vars: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "binary_vars", tuple(sorted(set(self.binary_vars))))
        lo, hi = self.base.var_bounds()
        for j in self.binary_vars:
            if not (0 <= j < self.base.num_vars):
                raise ValueError(f"binary index {j} out of range")
            if lo[j] != 0.0 or hi[j] != 1.0:
                raise ValueError(f"binary variable {j} must have bounds [0, 1] in the base LP")


@dataclass(frozen=True)
class BnbNode:
    fixings: dict
    parent_bound: float = np.inf

    def __post_init__(self):
        object.__setattr__(self, "fixings", dict(self.fixings))
        for j, v in self.fixings.items():
            if v not in (0, 1):
                raise ValueError("fixings must map binary indices to 0 or 1")

    def child(self, var: int, value: int, bound: float) -> "BnbNode":
        if var in self.fixings:
            raise ValueError(f"variable {var} is already fixed")
        fix = dict(self.fixings)
        fix[var] = value
        return BnbNode(fix, bound)


@dataclass
class MilpSolution:
    x: np.ndarray
    objective: float
    status: str  # optimal | infeasible
    nodes_explored: int = 0
    lp_solves: int = 0


@dataclass
class ExpandedNode:
    relaxation: LpProblem
    solution: LpSolution
    branch_var: Optional[int]


@dataclass
class MilpConfig:
    node_budget: int = 1_000_000
    relaxation_solver: Optional[Callable[[LpProblem], LpSolution]] = None
    integrality_tol: float = INTEGRALITY_TOL
    prune_tol: float = PRUNE_TOL
    counters: Optional[OpCounters] = None
    # optional incumbent hook: (problem, relaxation solution) -> (x, value) or None
    primal_heuristic: Optional[Callable[[MilpProblem, LpSolution], Optional[tuple]]] = None


def node_relaxation(problem: MilpProblem, node: BnbNode) -> LpProblem:
    """The node's LP: binary ranges as rows, fixings as equality rows."""
    base = problem.base
    n = base.num_vars
    lo, hi = base.var_bounds()
    free_binaries = [j for j in problem.binary_vars if j not in node.fixings]

    eq_rows, eq_rhs = [], []
    for j, v in sorted(node.fixings.items()):
        row = np.zeros(n)
        row[j] = 1.0
        eq_rows.append(row)
        eq_rhs.append(float(v))
    in_rows, in_rhs = [], []
    for j in range(n):
        if hi[j] != np.inf:
            if j in node.fixings:
                continue
            row = np.zeros(n)
            row[j] = 1.0
            in_rows.append(row)
            in_rhs.append(hi[j])
        if lo[j] not in (0.0, -np.inf):
            raise ValueError("nonzero lower bounds are not supported in MILP bases")

    a_eq = base.a_eq
    b_eq = base.b_eq
    if eq_rows:
        a_eq = np.vstack([base.a_eq, np.array(eq_rows)])
        b_eq = np.concatenate([base.b_eq, np.array(eq_rhs)])
    g = base.g_ineq
    h = base.h_ineq
    if in_rows:
        g = np.vstack([base.g_ineq, np.array(in_rows)])
        h = np.concatenate([base.h_ineq, np.array(in_rhs)])
    return LpProblem(c=base.c.copy(), sense=base.sense, a_eq=a_eq, b_eq=b_eq, g_ineq=g, h_ineq=h)


def expand_node(
    problem: MilpProblem,
    node: BnbNode,
    relaxation_solver: Optional[Callable[[LpProblem], LpSolution]] = None,
) -> ExpandedNode:
    """Solve the node's relaxation and pick the branch variable.

    Branching is most-fractional: the free binary closest to one half,
    distance ties broken by the lowest index. branch_var is None when
    every binary is integral or the node did not solve to optimality.
    """
    solver = relaxation_solver or solve_lp
    relaxation = node_relaxation(problem, node)
    solution = solver(relaxation)
    branch_var = None
    if solution.status == "optimal":
        frac_dist = []
        for j in problem.binary_vars:
            if j in node.fixings:
                continue
            f = solution.x[j]
            if min(abs(f), abs(1.0 - f)) > INTEGRALITY_TOL:
                frac_dist.append((abs(f - 0.5), j))
        if frac_dist:
            branch_var = min(frac_dist)[1]
    return ExpandedNode(relaxation=relaxation, solution=solution, branch_var=branch_var)


def _is_integral(problem: MilpProblem, x: np.ndarray, tol: float) -> bool:
    vals = x[list(problem.binary_vars)]
    return bool(np.all(np.minimum(np.abs(vals), np.abs(1.0 - vals)) <= tol))


def solve_milp(problem: MilpProblem, config: Optional[MilpConfig] = None) -> MilpSolution:
    """Exact best-bound branch and bound over the binary variables.

    Deterministic: the frontier is ordered by (bound, insertion order) and
    branching ties break on the lowest variable index, so identical inputs
    give identical node counts.
    """
    cfg = config or MilpConfig()
    solver = cfg.relaxation_solver or (
        (lambda lp: solve_lp(lp, counters=cfg.counters)) if cfg.counters else solve_lp
    )
    sense_sign = 1.0 if problem.base.sense == "max" else -1.0

    incumbent_x = None
    incumbent_val = -np.inf  # in max terms
    nodes_explored = 0
    lp_solves = 0
    counter = itertools.count()
    root = BnbNode({}, np.inf)
    frontier = [(-np.inf, next(counter), root)]

    def consider(x, value_max):
        nonlocal incumbent_x, incumbent_val
        if value_max > incumbent_val + 1e-12:
            incumbent_val = value_max
            incumbent_x = np.asarray(x, dtype=float).copy()

    while frontier:
        neg_bound, _, node = heapq.heappop(frontier)
        bound = -neg_bound
        if incumbent_x is not None and bound <= incumbent_val + cfg.prune_tol:
            # best-bound order: every remaining node is at least as weak
            break
        if nodes_explored >= cfg.node_budget:
            raise NodeBudgetExceeded(
                f"node budget {cfg.node_budget} exhausted",
                incumbent=_finish(problem, incumbent_x, incumbent_val, sense_sign, nodes_explored, lp_solves),
            )
        nodes_explored += 1
        expanded = expand_node(problem, node, solver)
        lp_solves += 1
        sol = expanded.solution
        if sol.status == "infeasible":
            continue
        if sol.status == "unbounded":
            raise NumericalError("relaxation unbounded; MILP is ill-posed")
        relax_val = sense_sign * sol.objective
        if relax_val <= incumbent_val + cfg.prune_tol:
            continue
        if _is_integral(problem, sol.x, cfg.integrality_tol):
            consider(sol.x, relax_val)
            continue
        if cfg.primal_heuristic is not None:
            guess = cfg.primal_heuristic(problem, sol)
            if guess is not None:
                gx, gval = guess
                consider(gx, sense_sign * gval)
        var = expanded.branch_var
        if var is None:  # only when tolerances disagree; accept as integral
            consider(sol.x, relax_val)
            continue
        for value in (0, 1):
            child = node.child(var, value, relax_val)
            heapq.heappush(frontier, (-relax_val, next(counter), child))

    return _finish(problem, incumbent_x, incumbent_val, sense_sign, nodes_explored, lp_solves)


def _finish(problem, incumbent_x, incumbent_val, sense_sign, nodes, solves):
    if incumbent_x is None:
        return MilpSolution(
            x=np.full(problem.base.num_vars, np.nan),
            objective=np.nan,
            status="infeasible",
            nodes_explored=nodes,
            lp_solves=solves,
        )
    x = incumbent_x.copy()
    idx = list(problem.binary_vars)
    x[idx] = np.round(x[idx])
    return MilpSolution(
        x=x,
        objective=sense_sign * incumbent_val,
        status="optimal",
        nodes_explored=nodes,
        lp_solves=solves,
    )


def brute_force_milp(problem: MilpProblem, solver=None) -> MilpSolution:
    """Oracle: enumerate all 2^|B| fixings, one pure LP each. Test-scale only."""
    solver = solver or solve_lp
    nb = len(problem.binary_vars)
    if nb > 20:
        raise ValueError("brute force limited to 20 binaries")
    sense_sign = 1.0 if problem.base.sense == "max" else -1.0
    best_x, best_val, solves = None, -np.inf, 0
    for bits in itertools.product((0, 1), repeat=nb):
        node = BnbNode(dict(zip(problem.binary_vars, bits)), np.inf)
        sol = solver(node_relaxation(problem, node))
        solves += 1
        if sol.status != "optimal":
            continue
        val = sense_sign * sol.objective
        if val > best_val + 1e-12:
            best_val, best_x = val, sol.x.copy()
    return _finish(problem, best_x, best_val, sense_sign, 2**nb, solves)
