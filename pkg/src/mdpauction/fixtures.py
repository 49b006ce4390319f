"""Hand-built worked instances used by tests, demos, and benchmarks.

The fleet story: a delivery operator keeps one vehicle in state "fresh"
(s0), "worn" (s1) or "broken" (s2). Delivering furniture (a1) is gentle
on the vehicle and pays 5; delivering appliances (a2) pays more but wears
the vehicle, and a worn vehicle breaks 10% of the time per period under
appliance loads; servicing (a3) resets a worn vehicle, repairing (a4)
fixes a broken one for a small margin. The noop a0 does nothing. The
operator needs a truck for everything, a forklift for appliances, and a
mechanic for repairs; capacity is a single money budget.
"""

from __future__ import annotations

import numpy as np

from .auction import AuctionInstance
from .mdp import Mdp
from .resources import Bundle, ConstrainedMdp, ResourceSpec

FLEET_DISCOUNT = 0.9
FLEET_KAPPA = np.array([[2.0], [3.0], [4.0]])  # truck, forklift, mechanic cost
FLEET_BUDGET = 8.0


def fleet_mdp(
    appliance_reward: float = 10.0,
    service_reward: float = 9.0,
    alpha=(1.0, 0.0, 0.0),
) -> Mdp:
    """The three-state vehicle-wear MDP with five actions a0..a4."""
    s, a = 3, 5
    p = np.zeros((s, a, s))
    r = np.zeros((s, a))
    # default: every action stays put with no reward
    for st in range(s):
        for ac in range(a):
            p[st, ac, st] = 1.0
    # a1: furniture delivery, only worthwhile with a fresh vehicle
    r[0, 1] = 5.0
    # a2: appliance delivery wears the vehicle; a worn vehicle may break
    p[0, 2] = [0.0, 1.0, 0.0]
    r[0, 2] = appliance_reward
    p[1, 2] = [0.0, 0.9, 0.1]
    r[1, 2] = 10.0
    # a3: service a worn vehicle back to fresh
    p[1, 3] = [1.0, 0.0, 0.0]
    r[1, 3] = service_reward
    # a4: repair a broken vehicle
    p[2, 4] = [1.0, 0.0, 0.0]
    r[2, 4] = 1.0
    return Mdp(transition=p, reward=r, discount=FLEET_DISCOUNT, initial=np.array(alpha, dtype=float))


def fleet_spec() -> ResourceSpec:
    """Truck/forklift/mechanic requirements with a money budget of 8."""
    rho = np.zeros((5, 3))
    rho[1, 0] = 1.0  # furniture needs the truck
    rho[2, 0] = 1.0  # appliances need the truck
    rho[2, 1] = 1.0  # ... and the forklift
    rho[3, 0] = 1.0  # service needs the truck
    rho[4, 0] = 1.0  # repair needs the truck
    rho[4, 2] = 1.0  # ... and the mechanic
    return ResourceSpec(
        resources=("truck", "forklift", "mechanic"),
        capacities=("money",),
        rho=rho,
        kappa=FLEET_KAPPA.copy(),
        kappa_hat=np.array([FLEET_BUDGET]),
    )


def fleet_cmdp(
    alpha=(1.0, 0.0, 0.0),
    appliance_reward: float = 10.0,
    service_reward: float = 9.0,
) -> ConstrainedMdp:
    return ConstrainedMdp(
        mdp=fleet_mdp(appliance_reward, service_reward, alpha), spec=fleet_spec()
    )


def fleet_cmdp_compact(alpha=(1.0, 0.0, 0.0)) -> ConstrainedMdp:
    """The fleet problem without the noop column (actions a1..a4 only).

    Useful for dimension bookkeeping: every remaining action uses the
    truck, so the general builder's capacity expansion has 4^3 raw rows.
    """
    full = fleet_cmdp(alpha)
    keep = [1, 2, 3, 4]
    mdp = Mdp(
        transition=full.mdp.transition[:, keep, :],
        reward=full.mdp.reward[:, keep],
        discount=full.mdp.discount,
        initial=full.mdp.initial,
    )
    spec = ResourceSpec(
        resources=full.spec.resources,
        capacities=full.spec.capacities,
        rho=full.spec.rho[keep],
        kappa=full.spec.kappa,
        kappa_hat=full.spec.kappa_hat,
    )
    return ConstrainedMdp(mdp=mdp, spec=spec)


def fleet_auction() -> AuctionInstance:
    """Two operators share two trucks, one forklift and one mechanic.

    The second operator runs a premium appliance line: higher delivery
    margin (12) and a cheaper service contract (10.4).
    """
    first = fleet_cmdp(alpha=(1.0, 0.0, 0.0))
    second = fleet_cmdp(alpha=(1.0, 0.0, 0.0), appliance_reward=12.0, service_reward=10.4)
    return AuctionInstance(
        agents=(first, second),
        kappa=FLEET_KAPPA.copy(),
        rho_hat=Bundle(np.array([2, 1, 1])),
        discount=FLEET_DISCOUNT,
    )


def market_mdp() -> Mdp:
    """Two-state, two-action sales-strategy MDP used in the privacy demos."""
    p = np.zeros((2, 2, 2))
    p[0, 0] = [1.0, 0.0]
    p[0, 1] = [0.986, 0.014]
    p[1, 0] = [0.5, 0.5]
    p[1, 1] = [0.5, 0.5]
    r = np.array([[1.0, 19.622], [0.063, 0.084]])
    return Mdp(transition=p, reward=r, discount=0.8, initial=np.array([0.5, 0.5]))
