"""Finite discounted MDPs: evaluation, value iteration, and the LP pair.

Conventions: transition[s, a, sigma] is the probability of landing in
sigma after doing a in s; reward[s, a] is the immediate reward; occupation
measures and policies are (S, A) matrices. Dual-LP variables are laid out
state-major, x[s * A + a], which fixes the column order of the flow
constraint matrix everywhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .lp import LpProblem, solve_lp

STOCHASTIC_TOL = 1e-9  # at construction
COMPUTED_TOL = 1e-7  # on computed quantities


def _frozen_array(obj, name, value, dtype=float):
    arr = np.array(value, dtype=dtype)
    arr.setflags(write=False)
    object.__setattr__(obj, name, arr)
    return arr


@dataclass(frozen=True)
class Mdp:
    """A finite discounted MDP, immutable after construction."""

    transition: np.ndarray  # (S, A, S)
    reward: np.ndarray  # (S, A)
    discount: float
    initial: np.ndarray  # (S,)

    def __post_init__(self):
        p = _frozen_array(self, "transition", self.transition)
        r = _frozen_array(self, "reward", self.reward)
        alpha = _frozen_array(self, "initial", self.initial)
        if p.ndim != 3 or p.shape[0] != p.shape[2]:
            raise ValueError("transition must have shape (S, A, S)")
        s, a, _ = p.shape
        if r.shape != (s, a):
            raise ValueError("reward must have shape (S, A)")
        if alpha.shape != (s,):
            raise ValueError("initial must have shape (S,)")
        if not (0.0 <= self.discount < 1.0):
            raise ValueError("discount must lie in [0, 1)")
        if np.any(p < -STOCHASTIC_TOL) or np.any(p > 1.0 + STOCHASTIC_TOL):
            raise ValueError("transition entries must lie in [0, 1]")
        if np.abs(p.sum(axis=2) - 1.0).max() > STOCHASTIC_TOL:
            raise ValueError("every (s, a) transition row must sum to 1")
        if not np.all(np.isfinite(r)):
            raise ValueError("rewards must be finite")
        if np.any(alpha < -STOCHASTIC_TOL) or abs(alpha.sum() - 1.0) > STOCHASTIC_TOL:
            raise ValueError("initial distribution must be a probability vector")

    @property
    def num_states(self) -> int:
        return self.transition.shape[0]

    @property
    def num_actions(self) -> int:
        return self.transition.shape[1]


@dataclass(frozen=True)
class Policy:
    """A stationary randomized policy; rows are distributions over actions."""

    probs: np.ndarray  # (S, A)

    def __post_init__(self):
        pi = _frozen_array(self, "probs", self.probs)
        if pi.ndim != 2:
            raise ValueError("policy must be a (S, A) matrix")
        if np.any(pi < -STOCHASTIC_TOL):
            raise ValueError("policy entries must be nonnegative")
        if np.abs(pi.sum(axis=1) - 1.0).max() > STOCHASTIC_TOL:
            raise ValueError("policy rows must sum to 1")

    @property
    def is_deterministic(self) -> bool:
        return bool(np.all((self.probs > 0).sum(axis=1) == 1))

    def action(self, state: int) -> int:
        return int(np.argmax(self.probs[state]))

    @staticmethod
    def deterministic(actions: Sequence[int], num_actions: int) -> "Policy":
        probs = np.zeros((len(actions), num_actions))
        probs[np.arange(len(actions)), list(actions)] = 1.0
        return Policy(probs)


@dataclass(frozen=True)
class OccupationMeasure:
    """Expected discounted visit counts x(s, a)."""

    x: np.ndarray  # (S, A)

    def __post_init__(self):
        x = _frozen_array(self, "x", self.x)
        if x.ndim != 2:
            raise ValueError("occupation measure must be a (S, A) matrix")
        if np.any(x < -COMPUTED_TOL):
            raise ValueError("occupation measure entries must be nonnegative")

    def total_mass(self) -> float:
        return float(self.x.sum())

    def is_feasible_for(self, mdp: Mdp, tol: float = COMPUTED_TOL) -> bool:
        resid = flow_residual(mdp, self.x)
        mass_ok = abs(self.total_mass() - 1.0 / (1.0 - mdp.discount)) <= 1e-6 * self.total_mass()
        return bool(np.abs(resid).max() <= tol) and mass_ok


@dataclass(frozen=True)
class CostConstraint:
    """A linear expected-cost constraint sum eta(s,a) x(s,a) <= bound."""

    cost: np.ndarray  # (S, A)
    bound: float

    def __post_init__(self):
        _frozen_array(self, "cost", self.cost)
        if not np.isfinite(self.bound):
            raise ValueError("cost bound must be finite")


def flow_matrix(mdp: Mdp) -> np.ndarray:
    """The (S, S*A) conservation-of-flow matrix of the dual LP.

    Column (s, a) holds e_s - gamma * p(.|s, a); columns of the result sum
    to 1 - gamma, which the privacy transforms rely on.
    """
    s, a = mdp.num_states, mdp.num_actions
    mat = np.zeros((s, s * a))
    for st in range(s):
        cols = slice(st * a, (st + 1) * a)
        mat[st, cols] += 1.0
        mat[:, cols] -= mdp.discount * mdp.transition[st].T
    return mat


def flow_residual(mdp: Mdp, x: np.ndarray) -> np.ndarray:
    return flow_matrix(mdp) @ x.ravel() - mdp.initial


def evaluate_policy(mdp: Mdp, policy: Policy) -> np.ndarray:
    """Value of a fixed policy: the unique solution of the linear system."""
    if policy.probs.shape != (mdp.num_states, mdp.num_actions):
        raise ValueError("policy shape does not match the MDP")
    pi = policy.probs
    r_pi = (pi * mdp.reward).sum(axis=1)
    p_pi = np.einsum("sa,saz->sz", pi, mdp.transition)
    v = np.linalg.solve(np.eye(mdp.num_states) - mdp.discount * p_pi, r_pi)
    resid = np.abs(r_pi + mdp.discount * p_pi @ v - v).max()
    if resid > 1e-8:
        raise ArithmeticError(f"policy evaluation residual {resid:.2e} above 1e-8")
    return v


def bellman_backup(mdp: Mdp, v: np.ndarray) -> np.ndarray:
    """Action values r(s,a) + gamma * E[v]."""
    return mdp.reward + mdp.discount * np.einsum("saz,z->sa", mdp.transition, v)


def value_iteration(mdp: Mdp, tol: float = 1e-8, max_iter: int = 10_000_000) -> np.ndarray:
    """Optimal value function with sup-norm Bellman residual <= tol."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    v = np.zeros(mdp.num_states)
    for _ in range(max_iter):
        v_next = bellman_backup(mdp, v).max(axis=1)
        if np.abs(v_next - v).max() <= tol:
            # residual of v_next itself is at most gamma * tol <= tol
            return v_next
        v = v_next
    raise ArithmeticError("value iteration did not converge")


def greedy_policy(mdp: Mdp, v: np.ndarray) -> Policy:
    """Deterministic greedy policy; ties broken by lowest action index."""
    v = np.asarray(v, dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError("value function must be finite")
    best = np.argmax(bellman_backup(mdp, v), axis=1)
    return Policy.deterministic(best, mdp.num_actions)


def build_primal_lp(mdp: Mdp) -> LpProblem:
    """min alpha @ v subject to v(s) >= r(s,a) + gamma * E[v] for all (s, a)."""
    s, a = mdp.num_states, mdp.num_actions
    g = np.zeros((s * a, s))
    h = np.zeros(s * a)
    for st in range(s):
        for ac in range(a):
            row = st * a + ac
            g[row, st] -= 1.0
            g[row] += mdp.discount * mdp.transition[st, ac]
            h[row] = -mdp.reward[st, ac]
    return LpProblem(
        c=mdp.initial.copy(),
        sense="min",
        g_ineq=g,
        h_ineq=h,
        nonneg=np.zeros(s, dtype=bool),
    )


def build_dual_lp(mdp: Mdp, costs: Iterable[CostConstraint] = ()) -> LpProblem:
    """max r @ x subject to flow conservation, optional expected-cost rows, x >= 0."""
    costs = list(costs)
    g = h = None
    if costs:
        g = np.vstack([c.cost.ravel() for c in costs])
        h = np.array([c.bound for c in costs])
    return LpProblem(
        c=mdp.reward.ravel().copy(),
        sense="max",
        a_eq=flow_matrix(mdp),
        b_eq=mdp.initial.copy(),
        g_ineq=g,
        h_ineq=h,
    )


def solve_dual_lp(mdp: Mdp, costs: Iterable[CostConstraint] = ()):
    """Convenience wrapper: solve the dual LP and reshape the measure."""
    sol = solve_lp(build_dual_lp(mdp, costs))
    if sol.status != "optimal":
        raise ArithmeticError(f"dual LP of a valid MDP came back {sol.status}")
    x = np.maximum(sol.x.reshape(mdp.num_states, mdp.num_actions), 0.0)
    return OccupationMeasure(x), sol


def policy_from_occupation(x: OccupationMeasure) -> Policy:
    """pi(s, a) = x(s, a) / x(s); unreachable states get the lowest action."""
    mat = x.x if isinstance(x, OccupationMeasure) else np.asarray(x, dtype=float)
    if np.any(mat < -1e-12):
        raise ValueError("occupation measure entries must be nonnegative")
    totals = mat.sum(axis=1)
    probs = np.zeros_like(mat)
    reachable = totals > 1e-12
    probs[reachable] = mat[reachable] / totals[reachable, None]
    probs[~reachable, 0] = 1.0
    return Policy(probs)


def occupation_from_policy(mdp: Mdp, policy: Policy) -> OccupationMeasure:
    """The occupation measure induced by a policy under mdp.initial."""
    pi = policy.probs
    p_pi = np.einsum("sa,saz->sz", pi, mdp.transition)
    mu = np.linalg.solve(np.eye(mdp.num_states) - mdp.discount * p_pi.T, mdp.initial)
    return OccupationMeasure(np.maximum(mu[:, None] * pi, 0.0))


def policy_value(mdp: Mdp, policy: Policy) -> float:
    """Expected total discounted reward from the initial distribution."""
    return float(mdp.initial @ evaluate_policy(mdp, policy))


# ---------------------------------------------------------------------------
# JSON interface
# ---------------------------------------------------------------------------


def mdp_to_json(mdp: Mdp) -> dict:
    return {
        "num_states": mdp.num_states,
        "num_actions": mdp.num_actions,
        "discount": mdp.discount,
        "initial": mdp.initial.tolist(),
        "reward": mdp.reward.tolist(),
        "transition": mdp.transition.tolist(),
    }


def mdp_from_json(payload: dict) -> Mdp:
    try:
        mdp = Mdp(
            transition=np.array(payload["transition"], dtype=float),
            reward=np.array(payload["reward"], dtype=float),
            discount=float(payload["discount"]),
            initial=np.array(payload["initial"], dtype=float),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed MDP payload: {exc}") from exc
    if mdp.num_states != int(payload["num_states"]) or mdp.num_actions != int(
        payload["num_actions"]
    ):
        raise ValueError("declared sizes disagree with the array shapes")
    return mdp
