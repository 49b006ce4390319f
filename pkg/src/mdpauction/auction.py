"""Multiagent winner determination and GVA payments.

Two routes compute the same welfare: the combined MILP couples every
agent's occupation measure with per-agent resource indicators and shared
supply rows, while the flat baseline enumerates bundles, values each one
by solving the pruned MDP, and solves an assignment integer program. The
flat route exists as the oracle the combined route is checked against.
"""

from __future__ import annotations

import numpy as np

from dataclasses import dataclass, replace
from typing import Optional

from .errors import NodeBudgetExceeded
from .lp import LpProblem
from .mdp import (
    OccupationMeasure,
    Policy,
    _frozen_array,
    build_dual_lp,
    occupation_from_policy,
    policy_from_occupation,
)
from .milp import MilpConfig, MilpProblem, solve_milp
from .resources import (
    ACTIVITY_TOL,
    Bundle,
    ConstrainedMdp,
    all_bundles_within,
    bundle_value,
    check_capacity,
    cmdp_from_json,
    cmdp_to_json,
    policy_resource_usage,
    _sync_normalizers,
)


@dataclass(frozen=True)
class AuctionInstance:
    """Per-agent constrained MDPs plus shared capacity costs and supply."""

    agents: tuple
    kappa: np.ndarray  # shared (O, C)
    rho_hat: Bundle
    discount: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "agents", tuple(self.agents))
        kappa = _frozen_array(self, "kappa", self.kappa)
        if not self.agents:
            raise ValueError("an auction needs at least one agent")
        first = self.agents[0]
        for agent in self.agents:
            if not isinstance(agent, ConstrainedMdp):
                raise ValueError("agents must be ConstrainedMdp instances")
            if (
                agent.mdp.num_states != first.mdp.num_states
                or agent.mdp.num_actions != first.mdp.num_actions
                or agent.spec.num_resources != first.spec.num_resources
                or agent.spec.num_capacities != first.spec.num_capacities
            ):
                raise ValueError("all agents must share state/action/resource/capacity sizes")
            if not np.allclose(agent.spec.kappa, kappa):
                raise ValueError("agents must carry the shared capacity-cost matrix")
        if self.rho_hat.quantities.shape[0] != first.spec.num_resources:
            raise ValueError("rho_hat length must match the resource set")

    @property
    def num_agents(self) -> int:
        return len(self.agents)

    @property
    def num_resources(self) -> int:
        return self.agents[0].spec.num_resources

    def without_agent(self, idx: int) -> "AuctionInstance":
        agents = tuple(a for i, a in enumerate(self.agents) if i != idx)
        return AuctionInstance(
            agents=agents, kappa=self.kappa.copy(), rho_hat=self.rho_hat, discount=self.discount
        )


@dataclass
class Allocation:
    bundles: tuple
    occupations: tuple
    policies: tuple
    values: np.ndarray
    welfare: float
    nodes_explored: int = 0
    lp_solves: int = 0

    def supply_used(self) -> np.ndarray:
        return np.sum([b.quantities for b in self.bundles], axis=0)


@dataclass
class PaymentVector:
    payments: np.ndarray


# ---------------------------------------------------------------------------
# combined MDP + winner-determination MILP
# ---------------------------------------------------------------------------


def build_wdp_milp(instance: AuctionInstance) -> MilpProblem:
    """One MILP over every agent's occupation measure and indicators.

    Layout: agent-major x blocks, then agent-major delta blocks. Equality
    rows are the per-agent flow constraints; inequality rows are per-agent
    capacity, global supply, then per-agent synchronization.
    """
    m = instance.num_agents
    first = instance.agents[0]
    s, a = first.mdp.num_states, first.mdp.num_actions
    o, c = first.spec.num_resources, first.spec.num_capacities
    for agent in instance.agents:
        if not agent.spec.is_binary():
            raise ValueError("the combined WDP requires binary resource requirements")
    nx = m * s * a
    n = nx + m * o

    obj = np.zeros(n)
    a_eq = np.zeros((m * s, n))
    b_eq = np.zeros(m * s)
    for i, agent in enumerate(instance.agents):
        dual = build_dual_lp(agent.mdp)
        rows = slice(i * s, (i + 1) * s)
        cols = slice(i * s * a, (i + 1) * s * a)
        a_eq[rows, cols] = dual.a_eq
        b_eq[rows] = dual.b_eq
        obj[cols] = agent.mdp.reward.ravel()

    cap = np.zeros((m * c, n))
    cap_rhs = np.zeros(m * c)
    for i, agent in enumerate(instance.agents):
        rows = slice(i * c, (i + 1) * c)
        cap[rows, nx + i * o : nx + (i + 1) * o] = agent.spec.kappa.T
        cap_rhs[rows] = agent.spec.kappa_hat

    glob = np.zeros((o, n))
    for i in range(m):
        glob[:, nx + i * o : nx + (i + 1) * o] = np.eye(o)
    glob_rhs = instance.rho_hat.quantities.astype(float)

    sync = np.zeros((m * o, n))
    for i, agent in enumerate(instance.agents):
        x_o = _sync_normalizers(agent, "per-resource")
        for k in range(o):
            row = i * o + k
            sync[row, i * s * a : (i + 1) * s * a] = np.tile(agent.spec.rho[:, k], s) / x_o[k]
            sync[row, nx + i * o + k] = -1.0

    bounds = np.column_stack([np.zeros(n), np.full(n, np.inf)])
    bounds[nx:, 1] = 1.0
    base = LpProblem(
        c=obj,
        sense="max",
        a_eq=a_eq,
        b_eq=b_eq,
        g_ineq=np.vstack([cap, glob, sync]),
        h_ineq=np.concatenate([cap_rhs, glob_rhs, np.zeros(m * o)]),
        bounds=bounds,
    )
    return MilpProblem(base=base, binary_vars=tuple(range(nx, n)))


def _usage_rounding_heuristic(instance: AuctionInstance):
    """Round a relaxation to a candidate incumbent via actual resource usage.

    The relaxed occupation measures already satisfy flow conservation; if
    the bundles they actually use fit every agent's capacity and the global
    supply, setting delta to that usage is integral and feasible, and its
    objective equals the relaxation value.
    """
    m = instance.num_agents
    first = instance.agents[0]
    s, a, o = first.mdp.num_states, first.mdp.num_actions, first.spec.num_resources
    nx = m * s * a

    def heuristic(problem: MilpProblem, relax_sol):
        x = relax_sol.x
        deltas = np.zeros(m * o)
        total = np.zeros(o)
        for i, agent in enumerate(instance.agents):
            xi = np.maximum(x[i * s * a : (i + 1) * s * a].reshape(s, a), 0.0)
            usage = policy_resource_usage(OccupationMeasure(xi), agent.spec)
            if not check_capacity(usage, agent.spec):
                return None
            deltas[i * o : (i + 1) * o] = usage.quantities
            total += usage.quantities
        if np.any(total > instance.rho_hat.quantities):
            return None
        candidate = x.copy()
        candidate[nx:] = deltas
        return candidate, float(problem.base.c @ candidate)

    return heuristic


def _allocation_from_wdp(instance: AuctionInstance, sol) -> Allocation:
    m = instance.num_agents
    first = instance.agents[0]
    s, a = first.mdp.num_states, first.mdp.num_actions
    bundles, occupations, policies, values = [], [], [], []
    for i, agent in enumerate(instance.agents):
        xi = np.maximum(sol.x[i * s * a : (i + 1) * s * a].reshape(s, a), 0.0)
        measure = OccupationMeasure(xi)
        bundles.append(policy_resource_usage(measure, agent.spec))
        occupations.append(measure)
        policies.append(policy_from_occupation(measure))
        values.append(float(np.sum(agent.mdp.reward * xi)))
    return Allocation(
        bundles=tuple(bundles),
        occupations=tuple(occupations),
        policies=tuple(policies),
        values=np.array(values),
        welfare=float(sol.objective),
        nodes_explored=sol.nodes_explored,
        lp_solves=sol.lp_solves,
    )


def solve_wdp(instance: AuctionInstance, config: Optional[MilpConfig] = None) -> Allocation:
    """Welfare-optimal allocation via the combined MILP."""
    milp = build_wdp_milp(instance)
    cfg = replace(config) if config is not None else MilpConfig()
    if cfg.primal_heuristic is None:
        cfg.primal_heuristic = _usage_rounding_heuristic(instance)
    try:
        sol = solve_milp(milp, cfg)
    except NodeBudgetExceeded as exc:
        incumbent = exc.incumbent
        if incumbent is not None and incumbent.status == "optimal":
            exc.incumbent = _allocation_from_wdp(instance, incumbent)
        raise
    if sol.status != "optimal":
        raise ArithmeticError("winner determination came back infeasible on a valid instance")
    return _allocation_from_wdp(instance, sol)


# ---------------------------------------------------------------------------
# flat bundle-enumeration baseline
# ---------------------------------------------------------------------------


def flat_wdp(instance: AuctionInstance) -> Allocation:
    """Enumerate bundles per agent, value each, and solve the assignment IP.

    Capacity-violating bundles are valued by their best capacity-feasible
    sub-bundle (free disposal makes the two coincide), so the assignment
    runs over every 0/1 bundle under the per-agent cap like the textbook
    formulation.
    """
    m = instance.num_agents
    o = instance.num_resources
    cap = Bundle(np.minimum(instance.rho_hat.quantities, 1))
    per_agent: list[list[Bundle]] = []
    values: list[dict] = []
    policies: list[dict] = []
    lp_solves = 0
    for agent in instance.agents:
        bundles = all_bundles_within(agent.spec, cap)
        vals, pols = {}, {}
        for b in bundles:
            if check_capacity(b, agent.spec):
                vals[b], pols[b] = bundle_value(agent, b)
                lp_solves += 1
        for b in bundles:
            if b in vals:
                continue
            best, best_b = -np.inf, None
            for fb, fv in vals.items():
                if fb <= b and check_capacity(fb, agent.spec) and fv > best:
                    best, best_b = fv, fb
            vals[b], pols[b] = best, pols[best_b]
        per_agent.append(bundles)
        values.append(vals)
        policies.append(pols)

    # bids are gains over the agent's resource-free value: a losing agent
    # still acts with the empty bundle, exactly like the combined MILP
    empty = Bundle.empty(o)
    baseline = np.array([values[i][empty] for i in range(m)])
    n = sum(len(b) for b in per_agent)
    obj = np.zeros(n)
    offsets = np.cumsum([0] + [len(b) for b in per_agent])
    one_each = np.zeros((m, n))
    supply = np.zeros((o, n))
    for i, bundles in enumerate(per_agent):
        for j, b in enumerate(bundles):
            col = offsets[i] + j
            obj[col] = values[i][b] - baseline[i]
            one_each[i, col] = 1.0
            supply[:, col] = b.quantities
    base = LpProblem(
        c=obj,
        sense="max",
        g_ineq=np.vstack([one_each, supply]),
        h_ineq=np.concatenate([np.ones(m), instance.rho_hat.quantities.astype(float)]),
        bounds=np.column_stack([np.zeros(n), np.ones(n)]),
    )
    sol = solve_milp(MilpProblem(base=base, binary_vars=tuple(range(n))))

    bundles_out, occs, pols_out, vals_out = [], [], [], []
    for i, bundles in enumerate(per_agent):
        chosen = Bundle.empty(o)
        for j, b in enumerate(bundles):
            if sol.x[offsets[i] + j] > 0.5:
                chosen = b
                break
        policy = policies[i][chosen]
        measure = occupation_from_policy(instance.agents[i].mdp, policy)
        bundles_out.append(policy_resource_usage(measure, instance.agents[i].spec))
        occs.append(measure)
        pols_out.append(policy)
        vals_out.append(values[i][chosen])
    return Allocation(
        bundles=tuple(bundles_out),
        occupations=tuple(occs),
        policies=tuple(pols_out),
        values=np.array(vals_out),
        welfare=float(sum(vals_out)),
        nodes_explored=sol.nodes_explored,
        lp_solves=lp_solves + sol.lp_solves,
    )


def flat_binary_variable_count(instance: AuctionInstance) -> int:
    """Assignment variables the flat formulation carries."""
    cap = Bundle(np.minimum(instance.rho_hat.quantities, 1))
    return sum(len(all_bundles_within(agent.spec, cap)) for agent in instance.agents)


# ---------------------------------------------------------------------------
# GVA payments
# ---------------------------------------------------------------------------


def vcg_payments(
    instance: AuctionInstance, config: Optional[MilpConfig] = None
) -> tuple[Allocation, PaymentVector]:
    """Winner pays the welfare the others lose because of its presence."""
    full = solve_wdp(instance, config)
    m = instance.num_agents
    payments = np.zeros(m)
    for i in range(m):
        if m == 1:
            v_minus = 0.0
        else:
            try:
                v_minus = solve_wdp(instance.without_agent(i)).welfare
            except NodeBudgetExceeded as exc:
                raise NodeBudgetExceeded(
                    f"node budget exceeded while re-solving without agent {i}",
                    incumbent=exc.incumbent,
                ) from exc
        others = full.welfare - full.values[i]
        payments[i] = v_minus - others
    return full, PaymentVector(payments=payments)


# ---------------------------------------------------------------------------
# JSON interface
# ---------------------------------------------------------------------------


def auction_to_json(instance: AuctionInstance) -> dict:
    return {
        "agents": [cmdp_to_json(agent) for agent in instance.agents],
        "kappa": instance.kappa.tolist(),
        "rho_hat": instance.rho_hat.quantities.tolist(),
        "discount": instance.discount,
    }


def auction_from_json(payload: dict) -> AuctionInstance:
    try:
        agents = tuple(cmdp_from_json(p) for p in payload["agents"])
        rho_hat = Bundle(np.array(payload["rho_hat"], dtype=int))
        kappa = np.array(payload["kappa"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed auction payload: {exc}") from exc
    return AuctionInstance(
        agents=agents, kappa=kappa, rho_hat=rho_hat, discount=payload.get("discount")
    )


def allocation_report(
    instance: AuctionInstance,
    allocation: Allocation,
    payments: Optional[PaymentVector] = None,
) -> dict:
    report = {
        "welfare": allocation.welfare,
        "nodes_explored": allocation.nodes_explored,
        "lp_solves": allocation.lp_solves,
        "agents": [],
    }
    for i, agent in enumerate(instance.agents):
        entry = {
            "bundle": allocation.bundles[i].quantities.tolist(),
            "value": float(allocation.values[i]),
            "policy": allocation.policies[i].probs.tolist(),
        }
        if payments is not None:
            entry["payment"] = float(payments.payments[i])
        report["agents"].append(entry)
    return report
