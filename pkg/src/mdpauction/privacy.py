"""Linear bid encryption for MDP-originated LPs.

An agent's dual LP (flow equalities, nonnegative variables) is rewritten
in new coordinates y = D x with a positive diagonal D, while an invertible
F mixes the equality rows. The transformed LP solves to the same objective,
decodes by x = y / diag(D), and preserves the support of the solution, so
non-consumable resource usage survives encryption. D and F can be chosen
so the transformed columns sum to a constant matching a fake discount,
making the source MDP unidentifiable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from typing import Optional

from .errors import DegenerateInputError
from .lp import LpProblem
from .mdp import OccupationMeasure, _frozen_array


@dataclass(frozen=True)
class Transform:
    """y = diag(d) x on dual variables, u = f v on primal coordinates."""

    d: np.ndarray  # (S*A,) strictly positive diagonal
    f: np.ndarray  # (S, S) invertible

    def __post_init__(self):
        d = _frozen_array(self, "d", self.d)
        f = _frozen_array(self, "f", self.f)
        if d.ndim != 1 or np.any(d <= 0):
            raise ValueError("D must be a strictly positive diagonal")
        if f.ndim != 2 or f.shape[0] != f.shape[1]:
            raise ValueError("F must be square")
        if abs(np.linalg.det(f)) <= 1e-12:
            raise ValueError("F must be invertible")


@dataclass(frozen=True)
class TransformedLp:
    """The encrypted LP; optimal objective equals the source LP's."""

    problem: LpProblem

    def to_json(self, rho=None, kappa_hat=None, sync_normalizers=None) -> dict:
        """Encrypted-bid payload. Resource costs and capacity bounds stay
        public; the transform itself is never serialized."""
        payload = {
            "version": 1,
            "c": self.problem.c.tolist(),
            "A": self.problem.a_eq.tolist(),
            "b": self.problem.b_eq.tolist(),
        }
        if rho is not None:
            payload["rho"] = np.asarray(rho).tolist()
        if kappa_hat is not None:
            payload["kappa_hat"] = np.asarray(kappa_hat).tolist()
        if sync_normalizers is not None:
            payload["sync_normalizers"] = np.asarray(sync_normalizers).tolist()
        return payload


def _require_dual_shape(lp: LpProblem) -> None:
    if lp.num_ineq != 0 or lp.bounds is not None or not np.all(lp.nonneg):
        raise ValueError("transforms apply to the equality-form dual LP only")
    if lp.sense != "max":
        raise ValueError("the dual LP is a maximization")


def apply_transform(lp: LpProblem, t: Transform) -> TransformedLp:
    """Rewrite the dual LP in the stretched, mixed coordinates.

    Objective becomes c / d, the equality block (F^-1)^T A D^-1, the right
    side (F^-1)^T alpha. Identity transforms return the input bit for bit.
    """
    _require_dual_shape(lp)
    s = lp.num_eq
    if t.f.shape[0] != s or t.d.shape[0] != lp.num_vars:
        raise ValueError("transform dimensions do not match the LP")
    a_scaled = lp.a_eq / t.d[None, :]
    new_a = np.linalg.solve(t.f.T, a_scaled)
    new_b = np.linalg.solve(t.f.T, lp.b_eq)
    return TransformedLp(
        problem=LpProblem(c=lp.c / t.d, sense="max", a_eq=new_a, b_eq=new_b)
    )


def invert_solution(y: np.ndarray, t: Transform) -> OccupationMeasure:
    """Decode an encrypted solution: x = y / diag(D), shaped back to (S, A).

    Positive scaling preserves zeros exactly, which keeps resource usage
    computable from encrypted bids.
    """
    y = np.asarray(y, dtype=float)
    if np.any(y < -1e-9):
        raise ValueError("encrypted solutions are nonnegative")
    x = np.maximum(y, 0.0) / t.d
    s = t.f.shape[0]
    return OccupationMeasure(x.reshape(s, -1))


def random_transform(lp: LpProblem, seed: int, target_discount: float) -> Transform:
    """Draw a transform whose output columns sum to 1 - target_discount.

    The column-sum camouflage consumes the available freedom jointly: a
    positive row-mixing vector u fixes D via d = (u @ A) / (1 - gamma'),
    then F is any well-conditioned matrix with F u = 1. D is rescaled to
    center its entries around one so conditioning stays bounded.
    """
    _require_dual_shape(lp)
    if not (0.0 < target_discount < 1.0):
        raise ValueError("target discount must lie in (0, 1)")
    a = lp.a_eq
    if a.shape[0] == 0 or a.shape[1] == 0:
        raise DegenerateInputError("empty LP cannot be transformed")
    if np.abs(a).max(axis=0).min() <= 1e-12:
        raise DegenerateInputError("a zero column cannot be camouflaged; perturb the input")
    col_sums = a.sum(axis=0)
    gamma = 1.0 - float(col_sums.mean())
    if np.abs(col_sums - (1.0 - gamma)).max() > 1e-6:
        raise ValueError("input columns must share a common sum (a flow matrix)")
    if not (0.0 <= gamma < 1.0):
        raise DegenerateInputError("column sums are not consistent with a discounted MDP")

    rng = np.random.default_rng(seed)
    s = a.shape[0]
    # positive d needs min(u) > gamma * max(u)
    ratio = min(2.0, (1.0 - 1e-6) / max(gamma, 1e-6))
    for _ in range(100):
        u = np.exp(rng.uniform(0.0, np.log(ratio), size=s))
        d_raw = (u @ a) / (1.0 - target_discount)
        if np.any(d_raw <= 0):
            continue
        scale = np.exp(-np.mean(np.log(d_raw)))
        d = d_raw * scale
        u = u * scale
        b = np.eye(s) + 0.3 * rng.standard_normal((s, s))
        f = b + np.outer(1.0 - b @ u, u) / (u @ u)
        if abs(np.linalg.det(f)) <= 1e-12 or np.linalg.cond(f) > 1e8:
            continue
        t = Transform(d=d, f=f)
        check = apply_transform(lp, t).problem.a_eq.sum(axis=0)
        if np.abs(check - (1.0 - target_discount)).max() <= 1e-6:
            return t
    raise DegenerateInputError("could not draw a well-conditioned transform; perturb the input")


# ---------------------------------------------------------------------------
# encrypted winner determination
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EncryptedBid:
    """What an agent reveals: the transformed LP, its public resource data,
    and valid synchronization normalizers for the encrypted coordinates."""

    lp: TransformedLp
    rho: np.ndarray
    kappa_hat: np.ndarray
    sync_normalizers: np.ndarray

    def to_json(self) -> dict:
        return self.lp.to_json(
            rho=self.rho, kappa_hat=self.kappa_hat, sync_normalizers=self.sync_normalizers
        )


def encrypt_bid(agent, seed: int, target_discount: Optional[float] = None):
    """Transform one agent's dual LP; returns the bid and the private key.

    The normalizers bound sum_s y(s, a) per resource without revealing D:
    every column of y carries at most max_s d(s, a) times the total
    occupation mass.
    """
    from .mdp import build_dual_lp  # local import to keep module deps one-way

    gamma = agent.mdp.discount
    target = target_discount if target_discount is not None else gamma
    dual = build_dual_lp(agent.mdp)
    t = random_transform(dual, seed, target)
    tlp = apply_transform(dual, t)
    s, a = agent.mdp.num_states, agent.mdp.num_actions
    d_max_per_action = t.d.reshape(s, a).max(axis=0)
    norms = np.maximum(
        (agent.spec.rho * d_max_per_action[:, None]).sum(axis=0) / (1.0 - gamma), 1e-12
    )
    bid = EncryptedBid(
        lp=tlp,
        rho=agent.spec.rho.copy(),
        kappa_hat=agent.spec.kappa_hat.copy(),
        sync_normalizers=norms,
    )
    return bid, t


def build_wdp_milp_encrypted(instance, seed: int, target_discount: Optional[float] = None):
    """The combined winner-determination MILP over encrypted coordinates.

    Same row structure as the plaintext MILP; flow blocks, objectives and
    synchronization normalizers come from the agents' encrypted bids.
    Returns (milp, transforms).
    """
    from .milp import MilpProblem  # local import: auction-layer assembly

    m = instance.num_agents
    first = instance.agents[0]
    s, a = first.mdp.num_states, first.mdp.num_actions
    o, c = first.spec.num_resources, first.spec.num_capacities
    bids, transforms = [], []
    for i, agent in enumerate(instance.agents):
        bid, t = encrypt_bid(agent, seed + i, target_discount)
        bids.append(bid)
        transforms.append(t)

    nx = m * s * a
    n = nx + m * o
    obj = np.zeros(n)
    a_eq = np.zeros((m * s, n))
    b_eq = np.zeros(m * s)
    for i, bid in enumerate(bids):
        rows = slice(i * s, (i + 1) * s)
        cols = slice(i * s * a, (i + 1) * s * a)
        a_eq[rows, cols] = bid.lp.problem.a_eq
        b_eq[rows] = bid.lp.problem.b_eq
        obj[cols] = bid.lp.problem.c

    cap = np.zeros((m * c, n))
    cap_rhs = np.zeros(m * c)
    for i, bid in enumerate(bids):
        rows = slice(i * c, (i + 1) * c)
        cap[rows, nx + i * o : nx + (i + 1) * o] = instance.agents[i].spec.kappa.T
        cap_rhs[rows] = bid.kappa_hat

    glob = np.zeros((o, n))
    for i in range(m):
        glob[:, nx + i * o : nx + (i + 1) * o] = np.eye(o)

    sync = np.zeros((m * o, n))
    for i, bid in enumerate(bids):
        for k in range(o):
            row = i * o + k
            sync[row, i * s * a : (i + 1) * s * a] = (
                np.tile(bid.rho[:, k], s) / bid.sync_normalizers[k]
            )
            sync[row, nx + i * o + k] = -1.0

    bounds = np.column_stack([np.zeros(n), np.full(n, np.inf)])
    bounds[nx:, 1] = 1.0
    base = LpProblem(
        c=obj,
        sense="max",
        a_eq=a_eq,
        b_eq=b_eq,
        g_ineq=np.vstack([cap, glob, sync]),
        h_ineq=np.concatenate(
            [cap_rhs, instance.rho_hat.quantities.astype(float), np.zeros(m * o)]
        ),
        bounds=bounds,
    )
    milp = MilpProblem(base=base, binary_vars=tuple(range(nx, n)))
    return milp, transforms


def allocation_from_encrypted(instance, transforms, milp_solution):
    """Decode an encrypted WDP solution back to measures, bundles, policies."""
    from .auction import Allocation
    from .resources import policy_resource_usage
    from .mdp import policy_from_occupation

    m = instance.num_agents
    first = instance.agents[0]
    s, a = first.mdp.num_states, first.mdp.num_actions
    bundles, occs, pols, vals = [], [], [], []
    for i, agent in enumerate(instance.agents):
        y = milp_solution.x[i * s * a : (i + 1) * s * a]
        measure = invert_solution(y, transforms[i])
        bundles.append(policy_resource_usage(measure, agent.spec))
        occs.append(measure)
        pols.append(policy_from_occupation(measure))
        vals.append(float(np.sum(agent.mdp.reward * measure.x)))
    return Allocation(
        bundles=tuple(bundles),
        occupations=tuple(occs),
        policies=tuple(pols),
        values=np.array(vals),
        welfare=float(sum(vals)),
        nodes_explored=milp_solution.nodes_explored,
        lp_solves=milp_solution.lp_solves,
    )


def solve_wdp_encrypted(
    instance, seed: int, target_discount: Optional[float] = None, config=None
):
    """Winner determination over encrypted bids; welfare matches plaintext."""
    from .milp import MilpConfig, solve_milp

    milp, transforms = build_wdp_milp_encrypted(instance, seed, target_discount)
    sol = solve_milp(milp, config or MilpConfig())
    if sol.status != "optimal":
        raise ArithmeticError("encrypted winner determination came back infeasible")
    return allocation_from_encrypted(instance, transforms, sol)
