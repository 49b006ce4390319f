"""Instance generators: the grid delivery domain, utility-to-MDP and
knapsack-to-MDP constructions with known optima, and random desk-scale
instances for tests.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .auction import AuctionInstance
from .mdp import Mdp
from .resources import Bundle, ConstrainedMdp, ResourceSpec

DELIVERY_DISCOUNT = 0.95


@dataclass(frozen=True)
class DeliveryParams:
    grid_n: int
    num_agents: int
    num_resources: int
    c_glob: float = 0.5
    c_loc: float = 0.5
    resources_per_action: int = 2
    seed: int = 0

    def __post_init__(self):
        if min(self.grid_n, self.num_agents, self.num_resources) < 1:
            raise ValueError("grid size, agent count and resource count must be positive")
        if not (0.0 <= self.c_glob <= 1.0 and 0.0 <= self.c_loc <= 1.0):
            raise ValueError("constraint levels must lie in [0, 1]")
        if not (1 <= self.resources_per_action <= self.num_resources):
            raise ValueError("resources_per_action must lie in [1, num_resources]")


def gen_delivery(params: DeliveryParams) -> AuctionInstance:
    """Agents on an n-by-n grid bid for the resources their deliveries need.

    States are grid cells. Four move actions succeed with probability 0.8
    (stay otherwise; moving off the edge always stays) and cost agent m a
    penalty of -1 - 9(m-1)/(M-1). Delivery task i pays 100 i / |O| at the
    locations hosting it and teleports the agent to a fixed random cell;
    attempted elsewhere it does nothing. Task i is hosted with probability
    0.1 + 0.4 (|O|-i)/(|O|-1) per location, needs a random subset of
    resources, and its resources cost i units of the single "size"
    capacity. Supply is floor(c_glob M) of each resource and each agent's
    size budget is c_loc |O|(|O|+1)/2. Deterministic in the seed.
    """
    rng = np.random.default_rng(params.seed)
    n, m_agents, num_o = params.grid_n, params.num_agents, params.num_resources
    s = n * n
    a = 4 + num_o

    num_locations = max(n * n // 5, 1)
    locations = rng.choice(s, size=num_locations, replace=False)
    if num_o > 1:
        availability = 0.1 + 0.4 * (num_o - np.arange(1, num_o + 1)) / (num_o - 1)
    else:
        availability = np.array([0.5])
    hosts = {
        i: [loc for loc in locations if rng.random() < availability[i - 1]]
        for i in range(1, num_o + 1)
    }
    relocation = {
        (int(loc), i): int(rng.integers(0, s))
        for i in range(1, num_o + 1)
        for loc in locations
    }
    task_resources = {
        i: sorted(rng.choice(num_o, size=params.resources_per_action, replace=False))
        for i in range(1, num_o + 1)
    }

    def cell(r, c):
        return r * n + c

    moves = [(-1, 0), (1, 0), (0, -1), (0, 1)]
    transition = np.zeros((s, a, s))
    for st in range(s):
        r, c = divmod(st, n)
        for mv, (dr, dc) in enumerate(moves):
            rr, cc = r + dr, c + dc
            if 0 <= rr < n and 0 <= cc < n:
                transition[st, mv, cell(rr, cc)] = 0.8
                transition[st, mv, st] = 0.2
            else:
                transition[st, mv, st] = 1.0  # edge moves collapse to the stay branch
        for i in range(1, num_o + 1):
            act = 3 + i
            if st in hosts[i]:
                transition[st, act, relocation[(st, i)]] = 1.0
            else:
                transition[st, act, st] = 1.0

    rho = np.zeros((a, num_o))
    for i in range(1, num_o + 1):
        rho[3 + i, task_resources[i]] = 1.0
    kappa = np.arange(1, num_o + 1, dtype=float)[:, None]  # size cost of resource i is i
    kappa_hat = np.array([params.c_loc * num_o * (num_o + 1) / 2.0])
    spec = ResourceSpec(
        resources=tuple(f"res{i}" for i in range(1, num_o + 1)),
        capacities=("size",),
        rho=rho,
        kappa=kappa,
        kappa_hat=kappa_hat,
    )

    agents = []
    for m in range(1, m_agents + 1):
        if m_agents > 1:
            penalty = -1.0 - 9.0 * (m - 1) / (m_agents - 1)
        else:
            penalty = -1.0
        reward = np.zeros((s, a))
        reward[:, :4] = penalty
        for i in range(1, num_o + 1):
            for loc in hosts[i]:
                reward[loc, 3 + i] = 100.0 * i / num_o
        mdp = Mdp(
            transition=transition,
            reward=reward,
            discount=DELIVERY_DISCOUNT,
            initial=np.full(s, 1.0 / s),
        )
        agents.append(ConstrainedMdp(mdp=mdp, spec=spec))

    supply = int(np.floor(params.c_glob * m_agents))
    return AuctionInstance(
        agents=tuple(agents),
        kappa=kappa.copy(),
        rho_hat=Bundle(np.full(num_o, supply, dtype=int)),
        discount=DELIVERY_DISCOUNT,
    )


# ---------------------------------------------------------------------------
# utility-function-to-MDP construction
# ---------------------------------------------------------------------------


def gen_from_utility(
    f: Callable[[tuple], float], m: int, n: int, discount: float = 0.9
) -> ConstrainedMdp:
    """An MDP whose induced bundle utility reproduces f exactly.

    One state per bundle z in [0, m]^n plus a sink. Action a_{ij} walks
    resource i from j-1 to j units and needs j units of o_i; the cash-out
    action a0 pays f(z) scaled by discount^(-sum z) so the discounted
    total equals f(z), then parks in the sink. f must be non-decreasing
    with f(0) >= 0 (idling in the sink floors every value at zero).
    """
    if m < 1 or n < 1:
        raise ValueError("need at least one resource and one unit")
    if (m + 1) ** n > 10_000:
        raise ValueError("bundle space too large for the desk-scale construction")
    bundles = list(itertools.product(range(m + 1), repeat=n))
    index = {z: k for k, z in enumerate(bundles)}
    for z in bundles:
        for i in range(n):
            if z[i] + 1 <= m:
                up = tuple(z[k] + 1 if k == i else z[k] for k in range(n))
                if f(up) < f(z) - 1e-12:
                    raise ValueError("utility function must be non-decreasing")
    if f(bundles[0]) < -1e-12:
        raise ValueError("the empty bundle must have nonnegative utility")

    num_states = len(bundles) + 1
    sink = len(bundles)
    actions = [("cash", 0, 0)] + [("add", i, j) for i in range(n) for j in range(1, m + 1)]
    num_actions = len(actions)

    transition = np.zeros((num_states, num_actions, num_states))
    reward = np.zeros((num_states, num_actions))
    transition[:, 0, sink] = 1.0  # cash-out from everywhere
    for z in bundles:
        st = index[z]
        reward[st, 0] = f(z) * discount ** (-float(sum(z)))
    for act, (_, i, j) in enumerate(actions):
        if act == 0:
            continue
        for z in bundles:
            st = index[z]
            if z[i] == j - 1:
                up = tuple(z[k] + 1 if k == i else z[k] for k in range(n))
                transition[st, act, index[up]] = 1.0
            else:
                transition[st, act, sink] = 1.0  # inapplicable: bail out for nothing
        transition[sink, act, sink] = 1.0

    alpha = np.zeros(num_states)
    alpha[index[bundles[0]]] = 1.0
    mdp = Mdp(transition=transition, reward=reward, discount=discount, initial=alpha)

    rho = np.zeros((num_actions, n))
    for act, (kind, i, j) in enumerate(actions):
        if kind == "add":
            rho[act, i] = j
    spec = ResourceSpec(
        resources=tuple(f"res{i}" for i in range(n)),
        capacities=(),
        rho=rho,
        kappa=np.zeros((n, 0)),
        kappa_hat=np.zeros(0),
    )
    return ConstrainedMdp(mdp=mdp, spec=spec)


# ---------------------------------------------------------------------------
# knapsack reduction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KnapsackInstance:
    items: tuple  # of (cost, value) pairs
    bound: float

    def __post_init__(self):
        items = tuple((float(c), float(v)) for c, v in self.items)
        object.__setattr__(self, "items", items)
        if any(c <= 0 or v <= 0 for c, v in items):
            raise ValueError("item costs and values must be positive")
        if self.bound < 0:
            raise ValueError("the bound must be nonnegative")


def knapsack_optimum(instance: KnapsackInstance) -> float:
    """Independent oracle: DP over integer costs, else subset enumeration."""
    costs = [c for c, _ in instance.items]
    values = [v for _, v in instance.items]
    if all(float(c).is_integer() for c in costs):
        cap = int(np.floor(instance.bound))
        dp = np.zeros(cap + 1)
        for c, v in zip(costs, values):
            c = int(c)
            if c > cap:
                continue
            for w in range(cap, c - 1, -1):
                dp[w] = max(dp[w], dp[w - c] + v)
        return float(dp[cap])
    if len(costs) > 20:
        raise ValueError("non-integer costs limited to 20 items")
    best = 0.0
    for mask in itertools.product((0, 1), repeat=len(costs)):
        cost = sum(c for c, b in zip(costs, mask) if b)
        if cost <= instance.bound + 1e-9:
            best = max(best, sum(v for v, b in zip(values, mask) if b))
    return best


def gen_from_knapsack(
    instance: KnapsackInstance, gamma: float
) -> tuple[ConstrainedMdp, float]:
    """A chain MDP whose constrained optimum equals the knapsack optimum.

    State i offers item i+1 (reward v * gamma^(-i), needing resource i+1)
    or skipping; both advance the chain. The single capacity prices
    resource i at the item's cost with the knapsack bound as budget.
    """
    if not (0.0 < gamma < 1.0):
        raise ValueError("gamma must lie in (0, 1)")
    m = len(instance.items)
    num_states = m + 1
    num_actions = m + 1  # skip + one action per item

    transition = np.zeros((num_states, num_actions, num_states))
    reward = np.zeros((num_states, num_actions))
    for st in range(num_states):
        for act in range(num_actions):
            if st < m and act in (0, st + 1):
                transition[st, act, st + 1] = 1.0
            else:
                transition[st, act, st] = 1.0
    for i, (cost, value) in enumerate(instance.items):
        reward[i, i + 1] = value * gamma ** (-float(i))

    alpha = np.zeros(num_states)
    alpha[0] = 1.0
    mdp = Mdp(transition=transition, reward=reward, discount=gamma, initial=alpha)

    rho = np.zeros((num_actions, m))
    for i in range(m):
        rho[i + 1, i] = 1.0
    kappa = np.array([[c] for c, _ in instance.items])
    spec = ResourceSpec(
        resources=tuple(f"item{i + 1}" for i in range(m)),
        capacities=("budget",),
        rho=rho,
        kappa=kappa,
        kappa_hat=np.array([float(instance.bound)]),
    )
    return ConstrainedMdp(mdp=mdp, spec=spec), knapsack_optimum(instance)


# ---------------------------------------------------------------------------
# random desk-scale instances
# ---------------------------------------------------------------------------


def random_mdp(
    rng: np.random.Generator,
    num_states: int,
    num_actions: int,
    discount: float = 0.9,
    reward_scale: float = 1.0,
    positive_initial: bool = True,
) -> Mdp:
    transition = rng.dirichlet(np.ones(num_states), size=(num_states, num_actions))
    reward = reward_scale * rng.uniform(0.0, 1.0, size=(num_states, num_actions))
    if positive_initial:
        initial = rng.dirichlet(np.ones(num_states) * 5.0)
    else:
        initial = np.zeros(num_states)
        initial[int(rng.integers(num_states))] = 1.0
    return Mdp(transition=transition, reward=reward, discount=discount, initial=initial)


def random_constrained_mdp(
    rng: np.random.Generator,
    num_states: int = 4,
    num_actions: int = 4,
    num_resources: int = 3,
    num_capacities: int = 1,
    discount: float = 0.9,
    level: float = 0.5,
) -> ConstrainedMdp:
    """Random binary-requirement instance; action 0 is always resource-free."""
    mdp = random_mdp(rng, num_states, num_actions, discount)
    rho = (rng.random((num_actions, num_resources)) < 0.45).astype(float)
    rho[0, :] = 0.0
    kappa = rng.uniform(0.5, 2.0, size=(num_resources, num_capacities))
    full_cost = kappa.sum(axis=0)
    kappa_hat = level * full_cost + rng.uniform(0.0, 0.25 * (1 + full_cost))
    spec = ResourceSpec(
        resources=tuple(f"o{i}" for i in range(num_resources)),
        capacities=tuple(f"c{i}" for i in range(num_capacities)),
        rho=rho,
        kappa=kappa,
        kappa_hat=kappa_hat,
    )
    return ConstrainedMdp(mdp=mdp, spec=spec)


def random_auction_instance(
    rng: np.random.Generator,
    num_agents: int = 2,
    num_states: int = 4,
    num_actions: int = 4,
    num_resources: int = 3,
    discount: float = 0.9,
) -> AuctionInstance:
    kappa = rng.uniform(0.5, 2.0, size=(num_resources, 1))
    agents = []
    for _ in range(num_agents):
        mdp = random_mdp(rng, num_states, num_actions, discount)
        rho = (rng.random((num_actions, num_resources)) < 0.45).astype(float)
        rho[0, :] = 0.0
        kappa_hat = np.array([rng.uniform(0.4, 1.0) * kappa.sum()])
        spec = ResourceSpec(
            resources=tuple(f"o{i}" for i in range(num_resources)),
            capacities=("c0",),
            rho=rho,
            kappa=kappa,
            kappa_hat=kappa_hat,
        )
        agents.append(ConstrainedMdp(mdp=mdp, spec=spec))
    rho_hat = Bundle(rng.integers(0, num_agents + 1, size=num_resources))
    return AuctionInstance(
        agents=tuple(agents), kappa=kappa, rho_hat=rho_hat, discount=discount
    )
