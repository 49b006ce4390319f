"""Dense two-phase simplex solver and duality-based solution verification.

Problems are stated over a single variable vector x:

    optimize  c @ x          (sense "max" or "min")
    subject   a_eq @ x == b_eq
              g_ineq @ x <= h_ineq
              x[j] >= 0 where nonneg[j]
              bounds[j, 0] <= x[j] <= bounds[j, 1] when bounds are given

Duals are reported one per row, equality rows first, with the sign
convention that at an optimum

    c @ x == b_eq @ y_eq + h_ineq @ y_ineq

holds (for problems without explicit variable bounds; with bounds the
imputed bound multipliers enter the identity, see verify_solution).
For "max" the inequality duals are >= 0, for "min" they are <= 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import NumericalError

# Solver-internal tolerances. Verification tolerances are looser (1e-6)
# so an honest solve is never rejected.
_PIV_TOL = 1e-9
_RATIO_TOL = 1e-9
_FEAS_TOL = 1e-7
_STALL_LIMIT = 50

VERIFY_TOL = 1e-6


@dataclass
class OpCounters:
    """Operation counters used to assert cost properties in tests."""

    factorizations: int = 0
    simplex_runs: int = 0
    pivots: int = 0


@dataclass(frozen=True)
class LpProblem:
    c: np.ndarray
    sense: str = "max"
    a_eq: Optional[np.ndarray] = None
    b_eq: Optional[np.ndarray] = None
    g_ineq: Optional[np.ndarray] = None
    h_ineq: Optional[np.ndarray] = None
    nonneg: Optional[np.ndarray] = None  # default: all True
    bounds: Optional[np.ndarray] = None  # (n, 2) with +-inf for absent sides

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        object.__setattr__(self, "c", c)
        n = c.shape[0]
        if self.sense not in ("max", "min"):
            raise ValueError(f"sense must be 'max' or 'min', got {self.sense!r}")

        def _mat(m, rows_name):
            if m is None:
                return np.zeros((0, n))
            m = np.asarray(m, dtype=float)
            if m.ndim != 2 or m.shape[1] != n:
                raise ValueError(f"{rows_name} must be 2-d with {n} columns")
            return m

        def _vec(v, m, name):
            if v is None:
                return np.zeros(m.shape[0])
            v = np.asarray(v, dtype=float)
            if v.shape != (m.shape[0],):
                raise ValueError(f"{name} length must match its matrix")
            return v

        a_eq = _mat(self.a_eq, "a_eq")
        g_ineq = _mat(self.g_ineq, "g_ineq")
        object.__setattr__(self, "a_eq", a_eq)
        object.__setattr__(self, "b_eq", _vec(self.b_eq, a_eq, "b_eq"))
        object.__setattr__(self, "g_ineq", g_ineq)
        object.__setattr__(self, "h_ineq", _vec(self.h_ineq, g_ineq, "h_ineq"))
        nonneg = self.nonneg
        if nonneg is None:
            nonneg = np.ones(n, dtype=bool)
        else:
            nonneg = np.asarray(nonneg, dtype=bool)
            if nonneg.shape != (n,):
                raise ValueError("nonneg mask length must match c")
        object.__setattr__(self, "nonneg", nonneg)
        if self.bounds is not None:
            bounds = np.asarray(self.bounds, dtype=float)
            if bounds.shape != (n, 2):
                raise ValueError("bounds must have shape (n, 2)")
            if np.any(bounds[:, 0] > bounds[:, 1]):
                raise ValueError("bounds must satisfy lo <= hi")
            object.__setattr__(self, "bounds", bounds)
        for arr in (self.c, self.a_eq, self.b_eq, self.g_ineq, self.h_ineq):
            if not np.all(np.isfinite(arr)):
                raise ValueError("problem data must be finite")

    @property
    def num_vars(self) -> int:
        return self.c.shape[0]

    @property
    def num_eq(self) -> int:
        return self.a_eq.shape[0]

    @property
    def num_ineq(self) -> int:
        return self.g_ineq.shape[0]

    def var_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Effective [lo, hi] per variable, combining nonneg mask and bounds."""
        n = self.num_vars
        lo = np.where(self.nonneg, 0.0, -np.inf)
        hi = np.full(n, np.inf)
        if self.bounds is not None:
            explicit = np.any(np.isfinite(self.bounds), axis=1)
            lo = np.where(explicit, self.bounds[:, 0], lo)
            hi = np.where(explicit, self.bounds[:, 1], hi)
        return lo, hi


@dataclass
class LpSolution:
    x: np.ndarray
    dual: np.ndarray  # one multiplier per row, eq rows then ineq rows
    objective: float
    basis: Optional[np.ndarray]  # indices into the augmented column space
    status: str  # optimal | infeasible | unbounded | pivot-limit


@dataclass
class Verdict:
    accepted: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.accepted


# ---------------------------------------------------------------------------
# canonical form
# ---------------------------------------------------------------------------


@dataclass
class _Canon:
    """max chat @ xhat, M @ xhat (+ slacks) == rhs, xhat >= 0."""

    m_full: np.ndarray  # (m, n_aug) columns: structural | slacks
    rhs: np.ndarray
    c_aug: np.ndarray
    sense_sign: float  # +1 max, -1 min
    obj_const: float
    n_struct: int  # structural columns (after split/shift)
    slack_of_row: np.ndarray  # augmented col index of the slack of row i, -1 for eq rows
    pos_col: np.ndarray  # structural column carrying +x_j (post shift)
    neg_col: np.ndarray  # column carrying the negative part of a free var, -1 otherwise
    mirror: np.ndarray  # bool, variable entered as hi - x
    shift: np.ndarray  # additive term mapping xhat back to x
    n_user_rows: int  # eq + ineq rows of the original problem (bound rows follow)


def _canonicalize(p: LpProblem) -> _Canon:
    n = p.num_vars
    lo, hi = p.var_bounds()
    sense_sign = 1.0 if p.sense == "max" else -1.0
    c = sense_sign * p.c

    pos_col = np.full(n, -1, dtype=int)
    neg_col = np.full(n, -1, dtype=int)
    mirror = np.zeros(n, dtype=bool)
    shift = np.zeros(n)

    cols = []  # (user var, sign) building blocks for structural columns
    for j in range(n):
        if lo[j] == -np.inf and hi[j] == np.inf:
            pos_col[j] = len(cols)
            cols.append((j, 1.0))
            neg_col[j] = len(cols)
            cols.append((j, -1.0))
        elif lo[j] == -np.inf:
            # only an upper bound: substitute x = hi - xhat
            mirror[j] = True
            shift[j] = hi[j]
            pos_col[j] = len(cols)
            cols.append((j, -1.0))
        else:
            shift[j] = lo[j]
            pos_col[j] = len(cols)
            cols.append((j, 1.0))

    n_struct = len(cols)
    col_var = np.array([v for v, _ in cols], dtype=int)
    col_sign = np.array([s for _, s in cols], dtype=float)

    a_all = np.vstack([p.a_eq, p.g_ineq])
    b_all = np.concatenate([p.b_eq, p.h_ineq])
    # extra rows for finite upper bounds of shifted (not mirrored) variables
    ub_rows = []
    ub_rhs = []
    for j in range(n):
        if not mirror[j] and hi[j] != np.inf and lo[j] != -np.inf:
            row = np.zeros(n)
            row[j] = 1.0
            ub_rows.append(row)
            ub_rhs.append(hi[j] - lo[j])
    n_user_rows = a_all.shape[0]

    a_struct = a_all[:, col_var] * col_sign[None, :]
    rhs = b_all - a_all @ shift
    if ub_rows:
        ub_struct = np.array(ub_rows)[:, col_var] * col_sign[None, :]
        a_struct = np.vstack([a_struct, ub_struct])
        rhs = np.concatenate([rhs, np.array(ub_rhs)])

    m_eq = p.num_eq
    m = a_struct.shape[0]
    n_slack = m - m_eq  # every non-eq row gets a slack
    slack_of_row = np.full(m, -1, dtype=int)
    slack_block = np.zeros((m, n_slack))
    for i in range(m_eq, m):
        k = i - m_eq
        slack_block[i, k] = 1.0
        slack_of_row[i] = n_struct + k

    m_full = np.hstack([a_struct, slack_block])
    c_aug = np.zeros(n_struct + n_slack)
    c_aug[:n_struct] = c[col_var] * col_sign

    obj_const = float(sense_sign * (p.c @ shift))
    return _Canon(
        m_full=m_full,
        rhs=rhs,
        c_aug=c_aug,
        sense_sign=sense_sign,
        obj_const=obj_const,
        n_struct=n_struct,
        slack_of_row=slack_of_row,
        pos_col=pos_col,
        neg_col=neg_col,
        mirror=mirror,
        shift=shift,
        n_user_rows=n_user_rows,
    )


# ---------------------------------------------------------------------------
# simplex core
# ---------------------------------------------------------------------------


def _pivot(tab: np.ndarray, row: int, col: int) -> None:
    tab[row] /= tab[row, col]
    factors = tab[:, col].copy()
    factors[row] = 0.0
    tab -= np.outer(factors, tab[row])


def _run_simplex(tab, basis, eligible, counters, pivot_limit=None):
    """Iterate to optimality of the reduced costs in tab[-1, :-1].

    Returns "optimal", "unbounded" or "pivot-limit". Dantzig pricing with a
    switch to Bland's rule after _STALL_LIMIT degenerate pivots keeps the
    method cycling-proof.
    """
    stall = 0
    bland = False
    pivots = 0
    max_pivots = 20000 + 200 * tab.shape[0]
    while True:
        d = tab[-1, :-1]
        cand = np.where(eligible & (d > _PIV_TOL))[0]
        if cand.size == 0:
            return "optimal"
        if bland:
            col = cand[0]
        else:
            col = cand[np.argmax(d[cand])]
        colvals = tab[:-1, col]
        pos = np.where(colvals > _RATIO_TOL)[0]
        if pos.size == 0:
            return "unbounded"
        ratios = tab[:-1, -1][pos] / colvals[pos]
        best = np.min(ratios)
        ties = pos[ratios <= best + 1e-12]
        # break ratio ties on the smallest basic index (needed by Bland's rule)
        row = ties[np.argmin(np.asarray(basis)[ties])]
        degenerate = best <= 1e-12
        _pivot(tab, row, col)
        basis[row] = col
        pivots += 1
        if counters is not None:
            counters.pivots += 1
        if pivot_limit is not None and pivots >= pivot_limit:
            return "pivot-limit"
        if degenerate:
            stall += 1
            if stall >= _STALL_LIMIT:
                bland = True
        else:
            stall = 0
            bland = False
        if pivots > max_pivots:
            raise NumericalError("simplex exceeded its pivot budget")


def _reduced_cost_row(tab, basis, cost):
    """Fill tab[-1] with reduced costs of `cost` and the negated objective."""
    cb = cost[np.asarray(basis)]
    tab[-1, :-1] = cost - cb @ tab[:-1, :-1]
    tab[-1, -1] = -(cb @ tab[:-1, -1])


def solve_lp(
    problem: LpProblem,
    counters: Optional[OpCounters] = None,
    pivot_limit: Optional[int] = None,
) -> LpSolution:
    """Solve an LP exactly enough for MILP relaxations.

    Two-phase dense simplex. On "optimal" the returned solution has primal
    and dual residuals below 1e-7 and a relative duality gap below 1e-6;
    failing that a NumericalError is raised, never a silent bad answer.

    pivot_limit stops phase 2 early and returns the current vertex with
    status "pivot-limit" (used to construct suboptimal-but-feasible
    responses in tests of the verification path).
    """
    if counters is not None:
        counters.simplex_runs += 1
    canon = _canonicalize(problem)
    m, n_aug = canon.m_full.shape
    m_sys = canon.m_full.copy()
    rhs = canon.rhs.copy()
    flip = rhs < 0
    m_sys[flip] *= -1.0
    rhs[flip] *= -1.0

    # initial basis: slack column where usable, artificial otherwise
    art_cols = []
    basis = []
    need_art_rows = []
    for i in range(m):
        s = canon.slack_of_row[i]
        if s >= 0 and not flip[i]:
            basis.append(s)
        else:
            need_art_rows.append(i)
            basis.append(-1)  # placeholder
    n_art = len(need_art_rows)
    art_block = np.zeros((m, n_art))
    for k, i in enumerate(need_art_rows):
        art_block[i, k] = 1.0
        basis[i] = n_aug + k
        art_cols.append(n_aug + k)
    full = np.hstack([m_sys, art_block])
    n_tot = full.shape[1]

    tab = np.zeros((m + 1, n_tot + 1))
    tab[:-1, :-1] = full
    tab[:-1, -1] = rhs

    eligible = np.ones(n_tot, dtype=bool)
    if n_art:
        cost1 = np.zeros(n_tot)
        cost1[n_aug:] = -1.0
        _reduced_cost_row(tab, basis, cost1)
        status = _run_simplex(tab, basis, eligible, counters)
        if status != "optimal":
            raise NumericalError("phase 1 did not terminate at an optimum")
        infeas = tab[-1, -1]  # equals sum of artificials at the phase-1 optimum
        if infeas > _FEAS_TOL * (1.0 + np.abs(rhs).max(initial=0.0)):
            return LpSolution(
                x=np.full(problem.num_vars, np.nan),
                dual=np.full(problem.num_eq + problem.num_ineq, np.nan),
                objective=np.nan,
                basis=None,
                status="infeasible",
            )
        # drive artificials out of the basis where possible
        for i in range(m):
            if basis[i] >= n_aug:
                row = tab[i, :n_aug]
                nz = np.where(np.abs(row) > 1e-9)[0]
                if nz.size:
                    _pivot(tab, i, nz[0])
                    basis[i] = nz[0]
        eligible[n_aug:] = False  # leftover artificials stay pinned at zero

    cost2 = np.zeros(n_tot)
    cost2[:n_aug] = canon.c_aug
    _reduced_cost_row(tab, basis, cost2)
    status = _run_simplex(tab, basis, eligible, counters, pivot_limit=pivot_limit)
    if status == "unbounded":
        return LpSolution(
            x=np.full(problem.num_vars, np.nan),
            dual=np.full(problem.num_eq + problem.num_ineq, np.nan),
            objective=np.inf if problem.sense == "max" else -np.inf,
            basis=None,
            status="unbounded",
        )

    basis_arr = np.asarray(basis, dtype=int)
    x_user, dual_user, obj = _extract(problem, canon, full, rhs, basis_arr, counters, flip)
    if status == "optimal":
        _check_residuals(problem, x_user, dual_user, obj)
    return LpSolution(x=x_user, dual=dual_user, objective=obj, basis=basis_arr, status=status)


def _extract(problem, canon, full, rhs, basis, counters, flip):
    """Recompute the basic solution and duals from a clean factorization.

    The pivoted tableau accumulates rounding error; the authoritative answer
    comes from one LU solve against the original columns.
    """
    b_mat = full[:, basis]
    if counters is not None:
        counters.factorizations += 1
    try:
        xb = np.linalg.solve(b_mat, rhs)
        cost = np.zeros(full.shape[1])
        cost[: canon.c_aug.shape[0]] = canon.c_aug
        y = np.linalg.solve(b_mat.T, cost[basis])
    except np.linalg.LinAlgError as exc:
        raise NumericalError("basis matrix is singular after refactorization") from exc
    y = np.where(flip, -y, y)  # rows negated for a nonnegative rhs flip their dual

    x_aug = np.zeros(full.shape[1])
    x_aug[basis] = xb
    x_aug[np.abs(x_aug) < 1e-11] = 0.0

    n = problem.num_vars
    x_user = np.empty(n)
    for j in range(n):
        v = x_aug[canon.pos_col[j]]
        if canon.neg_col[j] >= 0:
            v -= x_aug[canon.neg_col[j]]
        if canon.mirror[j]:
            x_user[j] = canon.shift[j] - v
        else:
            x_user[j] = canon.shift[j] + v

    # duals for user rows only; bound rows and dropped redundancies stay internal
    y_user = canon.sense_sign * y[: canon.n_user_rows]
    obj = float(problem.c @ x_user)
    return x_user, y_user, obj


def _check_residuals(problem, x, y, obj):
    scale = 1.0 + max(np.abs(problem.b_eq).max(initial=0.0), np.abs(problem.h_ineq).max(initial=0.0))
    if problem.num_eq and np.abs(problem.a_eq @ x - problem.b_eq).max() > _FEAS_TOL * scale:
        raise NumericalError("primal equality residual above budget after refactorization")
    if problem.num_ineq and (problem.g_ineq @ x - problem.h_ineq).max() > _FEAS_TOL * scale:
        raise NumericalError("primal inequality residual above budget after refactorization")
    lo, hi = problem.var_bounds()
    if np.any(x < lo - _FEAS_TOL * scale) or np.any(x > hi + _FEAS_TOL * scale):
        raise NumericalError("variable bound residual above budget after refactorization")
    if problem.bounds is None:
        gap = obj - (problem.b_eq @ y[: problem.num_eq] + problem.h_ineq @ y[problem.num_eq :])
        if abs(gap) > 1e-6 * (1.0 + abs(obj)):
            raise NumericalError("duality gap above budget after refactorization")


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


def verify_solution(
    problem: LpProblem,
    claimed: LpSolution,
    counters: Optional[OpCounters] = None,
    tol: float = VERIFY_TOL,
) -> Verdict:
    """Check a claimed optimal solution without re-solving.

    Accepts iff primal feasibility, dual feasibility, complementary
    slackness and a zero duality gap all hold for the claimed pair. The
    only linear-algebra work is a single factorization of the basis
    implied by the support of x (a consistency probe for vertex claims);
    everything decisive is matrix-vector arithmetic.
    """
    n = problem.num_vars
    m_eq, m_in = problem.num_eq, problem.num_ineq
    x = np.asarray(getattr(claimed, "x", None), dtype=float) if claimed is not None else None
    y = np.asarray(getattr(claimed, "dual", None), dtype=float) if claimed is not None else None
    if (
        claimed is None
        or x is None
        or y is None
        or x.shape != (n,)
        or y.shape != (m_eq + m_in,)
        or not np.all(np.isfinite(x))
        or not np.all(np.isfinite(y))
        or not np.isfinite(claimed.objective)
    ):
        return Verdict(False, "malformed")

    _probe_support_basis(problem, x, counters)

    scale_b = 1.0 + np.abs(problem.b_eq).max(initial=0.0)
    scale_h = 1.0 + np.abs(problem.h_ineq).max(initial=0.0)
    if m_eq and np.abs(problem.a_eq @ x - problem.b_eq).max() > tol * scale_b:
        return Verdict(False, "primal-infeasible")
    slacks = problem.h_ineq - problem.g_ineq @ x if m_in else np.zeros(0)
    if m_in and slacks.min(initial=0.0) < -tol * scale_h:
        return Verdict(False, "primal-infeasible")
    lo, hi = problem.var_bounds()
    if np.any(x < lo - tol) or np.any(x > hi + tol):
        return Verdict(False, "primal-infeasible")

    sgn = 1.0 if problem.sense == "max" else -1.0
    y_eq, y_in = y[:m_eq], y[m_eq:]
    if m_in and (sgn * y_in).min(initial=0.0) < -tol:
        return Verdict(False, "dual-infeasible")

    d = problem.c.copy()
    if m_eq:
        d -= problem.a_eq.T @ y_eq
    if m_in:
        d -= problem.g_ineq.T @ y_in
    # sign conditions on reduced costs; bound multipliers are imputed from d
    at_lo = x <= lo + 1e-7
    at_hi = x >= hi - 1e-7
    interior = ~at_lo & ~at_hi
    if np.any(sgn * d[interior & np.isfinite(lo)] > tol) or np.any(
        np.abs(d[interior & ~np.isfinite(lo)]) > tol
    ):
        return Verdict(False, "dual-infeasible")
    if np.any(sgn * d[at_lo & ~at_hi] > tol):
        return Verdict(False, "dual-infeasible")
    if np.any(sgn * d[at_hi & ~at_lo] < -tol):
        return Verdict(False, "dual-infeasible")

    # complementary slackness, variable- and row-wise
    slack_lo = np.where(np.isfinite(lo), x - lo, 0.0)
    if np.abs(np.where(at_hi, 0.0, slack_lo * d)).max(initial=0.0) > tol * (1.0 + np.abs(x).max(initial=0.0)):
        return Verdict(False, "complementary-slackness")
    if m_in and np.abs(y_in * slacks).max(initial=0.0) > tol * scale_h * (1.0 + np.abs(y_in).max(initial=0.0)):
        return Verdict(False, "complementary-slackness")

    obj = float(problem.c @ x)
    if abs(obj - claimed.objective) > tol * (1.0 + abs(obj)):
        return Verdict(False, "gap")
    dual_obj = float(problem.b_eq @ y_eq + problem.h_ineq @ y_in)
    # bound multipliers enter the dual objective when bounds are active
    bound_term = float(np.sum(np.where(at_hi & np.isfinite(hi), d * hi, 0.0)))
    bound_term += float(np.sum(np.where(at_lo & np.isfinite(lo) & (lo != 0.0), d * lo, 0.0)))
    if abs(obj - dual_obj - bound_term) > tol * (1.0 + abs(obj)):
        return Verdict(False, "gap")
    return Verdict(True)


def _probe_support_basis(problem, x, counters):
    """One factorization of the support-implied basis.

    Probes that the claimed point is a vertex of the canonical system; the
    result is advisory (degenerate completions may be singular) so it never
    rejects on its own, but it pins the verification cost to a single
    factorization, never a simplex run.
    """
    m = problem.num_eq + problem.num_ineq
    if m == 0:
        return
    a_all = np.vstack([problem.a_eq, problem.g_ineq])
    slack_block = np.zeros((m, problem.num_ineq))
    for k in range(problem.num_ineq):
        slack_block[problem.num_eq + k, k] = 1.0
    full = np.hstack([a_all, slack_block])
    slacks = problem.h_ineq - problem.g_ineq @ x if problem.num_ineq else np.zeros(0)
    support = list(np.where(np.abs(x) > 1e-9)[0]) + [
        problem.num_vars + k for k in range(problem.num_ineq) if slacks[k] > 1e-9
    ]
    cols = support[:m]
    for j in range(full.shape[1]):
        if len(cols) == m:
            break
        if j not in cols:
            cols.append(j)
    if counters is not None:
        counters.factorizations += 1
    try:
        np.linalg.solve(full[:, cols], np.concatenate([problem.b_eq, problem.h_ineq]))
    except np.linalg.LinAlgError:
        pass  # degenerate completion; the KKT checks remain authoritative


# ---------------------------------------------------------------------------
# canonical wire format (used by the distributed layer)
# ---------------------------------------------------------------------------

WIRE_VERSION = 1


def problem_to_wire(problem: LpProblem, task_id: str) -> dict:
    """Canonical serialized task: versioned, deterministic field order."""
    if problem.bounds is not None or not np.all(problem.nonneg):
        raise ValueError("wire format covers nonnegative, bound-free problems only")
    return {
        "version": WIRE_VERSION,
        "id": task_id,
        "sense": problem.sense,
        "c": problem.c.tolist(),
        "A": problem.a_eq.tolist(),
        "b": problem.b_eq.tolist(),
        "G": problem.g_ineq.tolist(),
        "h": problem.h_ineq.tolist(),
    }


def problem_from_wire(payload: dict) -> tuple[str, LpProblem]:
    if payload.get("version") != WIRE_VERSION:
        raise ValueError("unsupported task version")
    problem = LpProblem(
        c=np.array(payload["c"], dtype=float),
        sense=payload["sense"],
        a_eq=np.array(payload["A"], dtype=float).reshape(len(payload["A"]), -1)
        if payload["A"]
        else None,
        b_eq=np.array(payload["b"], dtype=float) if payload["A"] else None,
        g_ineq=np.array(payload["G"], dtype=float).reshape(len(payload["G"]), -1)
        if payload["G"]
        else None,
        h_ineq=np.array(payload["h"], dtype=float) if payload["G"] else None,
    )
    return payload["id"], problem


def solution_to_wire(solution: LpSolution, task_id: str) -> dict:
    return {
        "version": WIRE_VERSION,
        "id": task_id,
        "x": solution.x.tolist(),
        "y": solution.dual.tolist(),
        "objective": solution.objective,
    }


def solution_from_wire(payload: dict) -> tuple[str, LpSolution]:
    if payload.get("version") != WIRE_VERSION:
        raise ValueError("unsupported response version")
    return payload["id"], LpSolution(
        x=np.array(payload["x"], dtype=float),
        dual=np.array(payload["y"], dtype=float),
        objective=float(payload["objective"]),
        basis=None,
        status="optimal",
    )
