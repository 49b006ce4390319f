"""Resources, capacities, and the single-agent constrained MILP builders.

An agent's problem couples an MDP with a resource layer: actions need
resources (rho), resources cost capacity (kappa), and the agent has
capacity budgets (kappa_hat). The binary-requirement builder introduces
one indicator per resource; the general builder introduces one indicator
per resource-using action and expands the per-capacity max over actions
into a pruned product of rows.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import BlowupError
from .lp import LpProblem
from .mdp import (
    Mdp,
    OccupationMeasure,
    Policy,
    _frozen_array,
    build_dual_lp,
    mdp_from_json,
    mdp_to_json,
    policy_from_occupation,
    solve_dual_lp,
)
from .milp import MilpConfig, MilpProblem, solve_milp

ACTIVITY_TOL = 1e-9  # occupation mass below this counts as "action unused"
MAX_ENUM_RESOURCES = 25


@dataclass(frozen=True)
class ResourceSpec:
    """Resource set, capacity set, requirements rho(a, o) and costs kappa(o, c)."""

    resources: tuple
    capacities: tuple
    rho: np.ndarray  # (A, O)
    kappa: np.ndarray  # (O, C)
    kappa_hat: np.ndarray  # (C,)

    def __post_init__(self):
        object.__setattr__(self, "resources", tuple(self.resources))
        object.__setattr__(self, "capacities", tuple(self.capacities))
        rho = _frozen_array(self, "rho", self.rho)
        kappa = _frozen_array(self, "kappa", self.kappa)
        kappa_hat = _frozen_array(self, "kappa_hat", self.kappa_hat)
        o, c = len(self.resources), len(self.capacities)
        if rho.ndim != 2 or rho.shape[1] != o:
            raise ValueError("rho must have shape (A, O)")
        if kappa.shape != (o, c):
            raise ValueError("kappa must have shape (O, C)")
        if kappa_hat.shape != (c,):
            raise ValueError("kappa_hat must have shape (C,)")
        if np.any(rho < 0) or np.any(kappa < 0):
            raise ValueError("rho and kappa must be nonnegative")
        if not np.all(np.isfinite(kappa_hat)):
            raise ValueError("kappa_hat must be finite")

    @property
    def num_resources(self) -> int:
        return len(self.resources)

    @property
    def num_capacities(self) -> int:
        return len(self.capacities)

    @property
    def num_actions(self) -> int:
        return self.rho.shape[0]

    def is_binary(self) -> bool:
        return bool(np.all((self.rho == 0) | (self.rho == 1)))


@dataclass(frozen=True)
class Bundle:
    """Nonnegative integer quantities per resource."""

    quantities: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.quantities)
        if not np.all(q == np.round(q)):
            raise ValueError("bundle quantities must be integers")
        q = _frozen_array(self, "quantities", np.round(q), dtype=int)
        if q.ndim != 1 or np.any(q < 0):
            raise ValueError("bundle quantities must be a nonnegative vector")

    def __le__(self, other: "Bundle") -> bool:
        return bool(np.all(self.quantities <= other.quantities))

    def __eq__(self, other) -> bool:
        return isinstance(other, Bundle) and np.array_equal(self.quantities, other.quantities)

    def __hash__(self):
        return hash(self.quantities.tobytes())

    @staticmethod
    def empty(num_resources: int) -> "Bundle":
        return Bundle(np.zeros(num_resources, dtype=int))


@dataclass(frozen=True)
class ConstrainedMdp:
    mdp: Mdp
    spec: ResourceSpec

    def __post_init__(self):
        if self.spec.num_actions != self.mdp.num_actions:
            raise ValueError("rho action dimension must match the MDP")


def policy_resource_usage(x: OccupationMeasure, spec: ResourceSpec) -> Bundle:
    """Resources a policy actually needs, from its occupation measure.

    Usage per resource is max_a rho(a, o) over actions carrying mass; with
    binary rho this is the step function of sum_a rho(a, o) sum_s x(s, a).
    """
    mat = x.x if isinstance(x, OccupationMeasure) else np.asarray(x, dtype=float)
    if mat.ndim != 2:
        raise ValueError("occupation measure must be (S, A)")
    if mat.shape[1] != spec.num_actions:
        raise ValueError("occupation measure action dimension must match rho")
    active = mat.sum(axis=0) > ACTIVITY_TOL
    usage = np.where(active[:, None], spec.rho, 0.0).max(axis=0, initial=0.0)
    return Bundle(np.round(usage).astype(int))


def check_capacity(bundle: Bundle, spec: ResourceSpec) -> bool:
    """True iff the bundle's capacity cost stays within every bound."""
    q = bundle.quantities
    if q.shape[0] != spec.num_resources:
        raise ValueError("bundle length must match the resource set")
    cost = spec.kappa.T @ q
    return bool(np.all(cost <= spec.kappa_hat + 1e-9))


def _sync_normalizers(cmdp: ConstrainedMdp, x_norm: str) -> np.ndarray:
    """Upper bounds X(o) on sum_a rho(a,o) sum_s x(s,a), one per resource."""
    gamma = cmdp.mdp.discount
    col_mass = cmdp.spec.rho.sum(axis=0)  # sum_a rho(a, o)
    if x_norm == "per-resource":
        x_o = col_mass / (1.0 - gamma)
    elif x_norm == "global":
        x_o = np.full(cmdp.spec.num_resources, col_mass.max(initial=0.0) / (1.0 - gamma))
    else:
        raise ValueError("x_norm must be 'per-resource' or 'global'")
    return np.maximum(x_o, 1e-12)  # unused resources keep a vacuous row


def build_single_agent_milp(cmdp: ConstrainedMdp, x_norm: str = "per-resource") -> MilpProblem:
    """Constrained policy optimization as a MILP over (x, delta).

    Variables: S*A continuous occupation entries then |O| binary resource
    indicators. Rows: S flow equalities, |C| capacity rows linear in delta,
    |O| synchronization rows (1/X(o)) sum rho x <= delta(o).
    """
    if not cmdp.spec.is_binary():
        raise ValueError(
            "rho has non-binary entries; use build_single_agent_milp_nonbinary"
        )
    mdp, spec = cmdp.mdp, cmdp.spec
    s, a, o, c = mdp.num_states, mdp.num_actions, spec.num_resources, spec.num_capacities
    n = s * a + o
    dual = build_dual_lp(mdp)

    a_eq = np.zeros((s, n))
    a_eq[:, : s * a] = dual.a_eq
    b_eq = dual.b_eq

    cap = np.zeros((c, n))
    cap[:, s * a :] = spec.kappa.T
    cap_rhs = spec.kappa_hat.copy()

    x_o = _sync_normalizers(cmdp, x_norm)
    sync = np.zeros((o, n))
    for k in range(o):
        sync[k, : s * a] = np.tile(spec.rho[:, k], s) / x_o[k]
        sync[k, s * a + k] = -1.0
    sync_rhs = np.zeros(o)

    obj = np.zeros(n)
    obj[: s * a] = mdp.reward.ravel()
    bounds = np.column_stack([np.zeros(n), np.full(n, np.inf)])
    bounds[s * a :, 1] = 1.0
    base = LpProblem(
        c=obj,
        sense="max",
        a_eq=a_eq,
        b_eq=b_eq,
        g_ineq=np.vstack([cap, sync]),
        h_ineq=np.concatenate([cap_rhs, sync_rhs]),
        bounds=bounds,
    )
    return MilpProblem(base=base, binary_vars=tuple(range(s * a, n)))


def nonbinary_capacity_row_counts(cmdp: ConstrainedMdp) -> tuple[int, int]:
    """(unpruned, pruned) capacity-row counts of the general builder.

    Unpruned enumerates an action choice for every resource, |C| * |A|^|O|
    rows; pruning keeps only actions that actually use each resource.
    """
    spec = cmdp.spec
    a = spec.num_actions
    users = [int(np.sum(spec.rho[:, k] > 0)) for k in range(spec.num_resources)]
    unpruned = spec.num_capacities * a ** spec.num_resources
    pruned = spec.num_capacities * int(np.prod([u for u in users if u > 0] or [1]))
    return unpruned, pruned


def build_single_agent_milp_nonbinary(cmdp: ConstrainedMdp) -> MilpProblem:
    """General-rho MILP with per-action indicators Delta(a).

    Zero-resource actions get no indicator. Capacity rows enumerate, for
    each capacity, one using action per resource (coefficients accumulate
    when the same action is chosen for several resources); resources used
    by no action drop out, reducing |C||A|^|O| rows to |C| * prod |A_o|.
    """
    mdp, spec = cmdp.mdp, cmdp.spec
    s, a, o, c = mdp.num_states, mdp.num_actions, spec.num_resources, spec.num_capacities
    delta_actions = [i for i in range(a) if np.any(spec.rho[i] > 0)]
    col_of_action = {act: s * a + j for j, act in enumerate(delta_actions)}
    n = s * a + len(delta_actions)
    dual = build_dual_lp(mdp)

    a_eq = np.zeros((s, n))
    a_eq[:, : s * a] = dual.a_eq

    users = [
        [i for i in range(a) if spec.rho[i, k] > 0] for k in range(o)
    ]
    active_resources = [k for k in range(o) if users[k]]
    combos = (
        list(itertools.product(*(users[k] for k in active_resources)))
        if active_resources
        else [()]
    )
    cap_rows, cap_rhs = [], []
    for cap_idx in range(c):
        for choice in combos:
            row = np.zeros(n)
            for k, act in zip(active_resources, choice):
                row[col_of_action[act]] += spec.kappa[k, cap_idx] * spec.rho[act, k]
            cap_rows.append(row)
            cap_rhs.append(spec.kappa_hat[cap_idx])

    x_norm = 1.0 / (1.0 - mdp.discount)
    sync_rows, sync_rhs = [], []
    for act in delta_actions:
        row = np.zeros(n)
        row[[st * a + act for st in range(s)]] = 1.0 / x_norm
        row[col_of_action[act]] = -1.0
        sync_rows.append(row)
        sync_rhs.append(0.0)

    obj = np.zeros(n)
    obj[: s * a] = mdp.reward.ravel()
    bounds = np.column_stack([np.zeros(n), np.full(n, np.inf)])
    bounds[s * a :, 1] = 1.0
    base = LpProblem(
        c=obj,
        sense="max",
        a_eq=a_eq,
        b_eq=dual.b_eq,
        g_ineq=np.vstack([cap_rows, sync_rows]) if cap_rows or sync_rows else None,
        h_ineq=np.concatenate([cap_rhs, sync_rhs]) if cap_rhs or sync_rhs else None,
        bounds=bounds,
    )
    return MilpProblem(base=base, binary_vars=tuple(range(s * a, n)))


def prune_actions(cmdp: ConstrainedMdp, bundle: Bundle) -> list[int]:
    """Actions executable within the bundle: rho(a, .) <= bundle pointwise."""
    q = bundle.quantities
    return [i for i in range(cmdp.spec.num_actions) if np.all(cmdp.spec.rho[i] <= q)]


def restrict_to_actions(cmdp: ConstrainedMdp, actions: Sequence[int]) -> ConstrainedMdp:
    actions = list(actions)
    if not actions:
        raise ValueError("cannot restrict an MDP to an empty action set")
    mdp = cmdp.mdp
    sub = Mdp(
        transition=mdp.transition[:, actions, :],
        reward=mdp.reward[:, actions],
        discount=mdp.discount,
        initial=mdp.initial,
    )
    spec = ResourceSpec(
        resources=cmdp.spec.resources,
        capacities=cmdp.spec.capacities,
        rho=cmdp.spec.rho[actions],
        kappa=cmdp.spec.kappa,
        kappa_hat=cmdp.spec.kappa_hat,
    )
    return ConstrainedMdp(mdp=sub, spec=spec)


def _expand_policy(policy: Policy, actions: Sequence[int], num_actions: int) -> Policy:
    probs = np.zeros((policy.probs.shape[0], num_actions))
    probs[:, list(actions)] = policy.probs
    return Policy(probs)


def bundle_value(cmdp: ConstrainedMdp, bundle: Bundle) -> tuple[float, Policy]:
    """Value of holding a bundle: best policy using only its resources.

    If the bundle itself violates the agent's capacity bounds, the value is
    that of the best capacity-feasible behavior inside the bundle (solved
    as a constrained MILP on the pruned action set); extra resources never
    help, so the value is monotone in the bundle.
    """
    actions = prune_actions(cmdp, bundle)
    if not actions:
        raise ValueError("bundle admits no executable action; include a zero-resource action")
    sub = restrict_to_actions(cmdp, actions)
    if check_capacity(bundle, cmdp.spec):
        measure, sol = solve_dual_lp(sub.mdp)
        policy = policy_from_occupation(measure)
        return float(sol.objective), _expand_policy(policy, actions, cmdp.spec.num_actions)
    milp = build_single_agent_milp(sub) if sub.spec.is_binary() else build_single_agent_milp_nonbinary(sub)
    sol = solve_milp(milp)
    if sol.status != "optimal":
        raise ArithmeticError("constrained valuation MILP came back infeasible")
    s, a = sub.mdp.num_states, sub.mdp.num_actions
    x = np.maximum(sol.x[: s * a].reshape(s, a), 0.0)
    policy = policy_from_occupation(OccupationMeasure(x))
    return float(sol.objective), _expand_policy(policy, actions, cmdp.spec.num_actions)


def feasible_bundles(spec: ResourceSpec, global_bound: Optional[Bundle] = None) -> list[Bundle]:
    """All capacity-feasible 0/1 bundles within the bound, lexicographic.

    Exists for the enumeration-based oracle baseline; guarded against
    combinatorial blowup.
    """
    o = spec.num_resources
    if o > MAX_ENUM_RESOURCES:
        raise BlowupError(f"refusing to enumerate 2^{o} bundles (limit {MAX_ENUM_RESOURCES})")
    cap = np.ones(o, dtype=int)
    if global_bound is not None:
        cap = np.minimum(cap, global_bound.quantities)
    out = []
    for bits in itertools.product(*(range(int(c) + 1) for c in cap)):
        bundle = Bundle(np.array(bits, dtype=int))
        if check_capacity(bundle, spec):
            out.append(bundle)
    return out


def all_bundles_within(spec: ResourceSpec, global_bound: Optional[Bundle] = None) -> list[Bundle]:
    """Every 0/1 bundle within the bound, capacity-feasible or not."""
    o = spec.num_resources
    if o > MAX_ENUM_RESOURCES:
        raise BlowupError(f"refusing to enumerate 2^{o} bundles (limit {MAX_ENUM_RESOURCES})")
    cap = np.ones(o, dtype=int)
    if global_bound is not None:
        cap = np.minimum(cap, global_bound.quantities)
    return [
        Bundle(np.array(bits, dtype=int))
        for bits in itertools.product(*(range(int(c) + 1) for c in cap))
    ]


def solve_constrained(
    cmdp: ConstrainedMdp,
    x_norm: str = "per-resource",
    nonbinary: bool = False,
    config: Optional[MilpConfig] = None,
):
    """Solve the constrained problem and extract (value, policy, bundle, stats)."""
    if nonbinary or not cmdp.spec.is_binary():
        milp = build_single_agent_milp_nonbinary(cmdp)
    else:
        milp = build_single_agent_milp(cmdp, x_norm)
    sol = solve_milp(milp, config)
    s, a = cmdp.mdp.num_states, cmdp.mdp.num_actions
    if sol.status != "optimal":
        return sol, None, None, None
    x = np.maximum(sol.x[: s * a].reshape(s, a), 0.0)
    measure = OccupationMeasure(x)
    policy = policy_from_occupation(measure)
    bundle = policy_resource_usage(measure, cmdp.spec)
    return sol, policy, bundle, measure


# ---------------------------------------------------------------------------
# JSON interface
# ---------------------------------------------------------------------------


def cmdp_to_json(cmdp: ConstrainedMdp) -> dict:
    payload = mdp_to_json(cmdp.mdp)
    payload.update(
        {
            "resources": list(cmdp.spec.resources),
            "capacities": list(cmdp.spec.capacities),
            "rho": cmdp.spec.rho.tolist(),
            "kappa": cmdp.spec.kappa.tolist(),
            "kappa_hat": cmdp.spec.kappa_hat.tolist(),
        }
    )
    return payload


def cmdp_from_json(payload: dict) -> ConstrainedMdp:
    mdp = mdp_from_json(payload)
    try:
        spec = ResourceSpec(
            resources=tuple(payload["resources"]),
            capacities=tuple(payload["capacities"]),
            rho=np.array(payload["rho"], dtype=float),
            kappa=np.array(payload["kappa"], dtype=float).reshape(
                len(payload["resources"]), len(payload["capacities"])
            ),
            kappa_hat=np.array(payload["kappa_hat"], dtype=float),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed constrained-MDP payload: {exc}") from exc
    return ConstrainedMdp(mdp=mdp, spec=spec)
