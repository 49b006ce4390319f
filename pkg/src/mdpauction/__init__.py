"""Resource-parameterized MDP solvers and MDP-aware combinatorial auctions."""

from .errors import (
    BlowupError,
    DeadlockError,
    DegenerateInputError,
    NodeBudgetExceeded,
    NumericalError,
)
from .lp import LpProblem, LpSolution, OpCounters, solve_lp, verify_solution
from .mdp import (
    CostConstraint,
    Mdp,
    OccupationMeasure,
    Policy,
    build_dual_lp,
    build_primal_lp,
    evaluate_policy,
    greedy_policy,
    occupation_from_policy,
    policy_from_occupation,
    policy_value,
    value_iteration,
)
from .milp import BnbNode, MilpConfig, MilpProblem, MilpSolution, expand_node, solve_milp
from .resources import (
    Bundle,
    ConstrainedMdp,
    ResourceSpec,
    build_single_agent_milp,
    build_single_agent_milp_nonbinary,
    bundle_value,
    check_capacity,
    feasible_bundles,
    policy_resource_usage,
)
from .auction import (
    Allocation,
    AuctionInstance,
    PaymentVector,
    build_wdp_milp,
    flat_wdp,
    solve_wdp,
    vcg_payments,
)
from .distributed import AuditLog, WorkerResponse, WorkerTask, run_distributed
from .privacy import Transform, TransformedLp, apply_transform, invert_solution, random_transform
from .benchgen import (
    DeliveryParams,
    KnapsackInstance,
    gen_delivery,
    gen_from_knapsack,
    gen_from_utility,
)

__all__ = [name for name in dir() if not name.startswith("_")]
