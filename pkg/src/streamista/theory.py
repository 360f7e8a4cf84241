"""Closed-form tracking-error bounds and their checkable preconditions.

For the streaming solver with step size eta and isometry constant delta at
the level (sparsity + 2 * active budget), the contraction factor is

    c = |eta - 1| + delta * eta

and, with noise energy bound sigma, threshold lam, and active budget q,

    V = (1 - c)^-1 * (eta * sigma + lam * sqrt(q))          steady offset
    W = c / (1 - c**P) * mu * dl + V                        initial offset

give the per-iteration guarantee (i = l mod P)

    error[l] <= c**l * (error[0] - W) + c**(i+1) / (1 - c**P) * mu * dl + V

whose pre-measurement subsequence settles at V + c**P/(1 - c**P) * mu * dl.
The continuous-time analogue contracts at rate (1 - delta)/tau toward

    D = (1 - delta)^-1 * (tau * mu + sigma + lam * sqrt(q)).

All dominance checks in the package compare against these expressions with
an absolute tolerance of 1e-9; precondition failures are reported as data,
never raised.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .measurement import MeasurementMatrix
from .solver import active_set, top_q_energy, top_q_indices

BOUND_TOL = 1e-9


def contraction_factor(eta: float, delta: float) -> float:
    """c = |eta - 1| + delta * eta; requires 0 < eta < 2 / (1 + delta)."""
    if not 0.0 <= delta < 1.0:
        raise ValueError(f"delta must lie in [0, 1), got {delta}")
    if not 0.0 < eta < 2.0 / (1.0 + delta):
        raise ValueError(
            f"step size must lie in (0, 2/(1+delta)) = (0, {2.0 / (1.0 + delta)}), got {eta}"
        )
    return abs(eta - 1.0) + delta * eta


def steady_offset(eta: float, sigma: float, lam: float, q: int, c: float) -> float:
    """V = (1 - c)^-1 * (eta * sigma + lam * sqrt(q))."""
    if not 0.0 <= c < 1.0:
        raise ValueError(f"contraction factor must lie in [0, 1), got {c}")
    return (eta * sigma + lam * math.sqrt(q)) / (1.0 - c)


def drift_offset(c: float, P: int, mu: float, dl: float, V: float) -> float:
    """W = c / (1 - c**P) * mu * dl + V."""
    if not 0.0 <= c < 1.0:
        raise ValueError(f"contraction factor must lie in [0, 1), got {c}")
    if P < 1:
        raise ValueError(f"P must be a positive integer, got {P}")
    return c / (1.0 - c**P) * mu * dl + V


@dataclass(frozen=True)
class IstaBoundParams:
    """Everything the discrete tracking bound needs, with derived constants."""

    eta: float
    delta: float
    sigma: float
    lam: float
    q: int
    mu: float
    dl: float
    P: int
    beta: float
    e1: float  # ||a[1] - target[0]||, the first recorded error
    c: float = field(init=False)
    V: float = field(init=False)
    W: float = field(init=False)

    def __post_init__(self):
        c = contraction_factor(self.eta, self.delta)
        V = steady_offset(self.eta, self.sigma, self.lam, self.q, c)
        W = drift_offset(c, self.P, self.mu, self.dl, V)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "W", W)


@dataclass(frozen=True)
class LcaBoundParams:
    """Everything the continuous-time tracking bound needs."""

    delta: float
    tau: float
    sigma: float
    lam: float
    q: int
    mu: float
    beta: float
    e0: float  # ||a(0) - target(0)||
    D: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "D", lca_steady_bound(self.delta, self.tau, self.mu, self.sigma, self.lam, self.q)
        )


def ista_error_bound(l: int, params: IstaBoundParams) -> float:
    """Tracking-error bound at iteration l (error[l] = ||a[l+1] - target[l]||)."""
    if l < 0:
        raise ValueError(f"iteration index must be nonnegative, got {l}")
    c, P = params.c, params.P
    i = l % P
    drift = c ** (i + 1) / (1.0 - c**P) * params.mu * params.dl
    return c**l * (params.e1 - params.W) + drift + params.V


def ista_steady_state(params: IstaBoundParams) -> float:
    """Limit of the pre-measurement bound: V + c**P / (1 - c**P) * mu * dl."""
    c = params.c
    return params.V + c**params.P / (1.0 - c**params.P) * params.mu * params.dl


def lca_steady_bound(delta: float, tau: float, mu: float, sigma: float, lam: float, q: int) -> float:
    """D = (1 - delta)^-1 * (tau * mu + sigma + lam * sqrt(q))."""
    if not 0.0 <= delta < 1.0:
        raise ValueError(f"delta must lie in [0, 1), got {delta}")
    return (tau * mu + sigma + lam * math.sqrt(q)) / (1.0 - delta)


def lca_error_bound(t: float, params: LcaBoundParams) -> float:
    """Continuous-time tracking bound at time t."""
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t}")
    decay = math.exp(-(1.0 - params.delta) * t / params.tau)
    return decay * params.e0 + (1.0 - decay) * params.D


@dataclass(frozen=True)
class ConditionCheck:
    """One verified inequality: passes when lhs <= rhs (or < when strict)."""

    name: str
    lhs: float
    rhs: float
    strict: bool = False

    @property
    def passed(self) -> bool:
        return self.lhs < self.rhs if self.strict else self.lhs <= self.rhs

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    def line(self) -> str:
        return f"{self.name},{repr(float(self.lhs))},{repr(float(self.rhs))},{int(self.passed)}"


@dataclass(frozen=True)
class PreconditionReport:
    """Structured pass/fail record; failures are data, not errors."""

    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> ConditionCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def lines(self) -> list:
        return [c.line() for c in self.checks]


def check_ista_preconditions(
    delta: float,
    q: int,
    beta: float,
    sigma: float,
    lam: float,
    eta: float,
    init_u: np.ndarray,
    init_gamma_size: int | None = None,
) -> PreconditionReport:
    """Evaluate the hypotheses of the discrete tracking guarantee.

    ``delta`` must be the isometry constant at level s + 2q.  The contraction
    factor is computed inline so out-of-range steps show up as failed rows
    rather than exceptions.
    """
    init_u = np.asarray(init_u, dtype=np.float64)
    if init_gamma_size is None:
        init_gamma_size = int(active_set(init_u, lam).size)
    c = abs(eta - 1.0) + delta * eta
    q_eff = min(q, init_u.size)
    lam_rq = lam * math.sqrt(q)
    checks = (
        ConditionCheck("eta_positive", 0.0, eta, strict=True),
        ConditionCheck("eta_step_bound", eta, 2.0 / (1.0 + delta), strict=True),
        ConditionCheck("initial_active_within_budget", float(init_gamma_size), float(q)),
        ConditionCheck("initial_energy_within_threshold", top_q_energy(init_u, q_eff), lam_rq),
        ConditionCheck(
            "drift_noise_margin", eta * (1.0 + delta) * beta + eta * sigma, (1.0 - c) * lam_rq
        ),
    )
    return PreconditionReport(checks)


def check_lca_preconditions(
    delta: float,
    q: int,
    beta: float,
    sigma: float,
    lam: float,
    e0: float,
    D: float,
    init_u: np.ndarray,
    init_gamma_size: int | None = None,
) -> PreconditionReport:
    """Evaluate the hypotheses of the continuous-time tracking guarantee.

    ``delta`` must be the isometry constant at level s + q.
    """
    init_u = np.asarray(init_u, dtype=np.float64)
    if init_gamma_size is None:
        init_gamma_size = int(active_set(init_u, lam).size)
    q_eff = min(q, init_u.size)
    lam_rq = lam * math.sqrt(q)
    checks = (
        ConditionCheck("delta_below_one", delta, 1.0, strict=True),
        ConditionCheck("initial_active_within_budget", float(init_gamma_size), float(q)),
        ConditionCheck("initial_energy_within_threshold", top_q_energy(init_u, q_eff), lam_rq),
        ConditionCheck("decay_margin", delta * max(e0, D) + beta + sigma, lam_rq),
    )
    return PreconditionReport(checks)


def _restrict(x: np.ndarray, idx: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    out[idx] = x[idx]
    return out


def rip_inequality_suite(
    phi: MeasurementMatrix,
    gamma1: np.ndarray,
    gamma2: np.ndarray,
    x: np.ndarray,
    y: np.ndarray,
    delta: float,
) -> PreconditionReport:
    """Four near-isometry consequences for sets gamma1, gamma2.

    ``delta`` must be an exact isometry constant at level
    |gamma1| + |gamma2|; ``x`` must be supported on their union and ``y`` may
    be any measurement-space vector.  Checks, writing P_T for restriction to
    T and using the column-zeroed submatrix Phi_T:

      1. (1 - delta)||x||^2 <= ||Phi x||^2 <= (1 + delta)||x||^2
      2. ||Phi_g1^T Phi_(g2 \\ g1) x|| <= delta ||x||
      3. ||P_g1 x - P_g1 Phi^T Phi x|| <= delta ||x||
      4. ||P_g1 Phi^T y|| <= sqrt(1 + delta) ||y||
    """
    gamma1 = np.asarray(gamma1, dtype=np.intp)
    gamma2 = np.asarray(gamma2, dtype=np.intp)
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != (phi.cols,):
        raise ValueError(f"x shape {x.shape} does not match ({phi.cols},)")
    if y.shape != (phi.rows,):
        raise ValueError(f"y shape {y.shape} does not match ({phi.rows},)")
    union = np.union1d(gamma1, gamma2)
    outside = np.setdiff1d(np.flatnonzero(x != 0.0), union)
    if outside.size:
        raise ValueError(f"x has support outside gamma1 | gamma2 at indices {outside[:8]}")

    ent = phi.entries
    xn = float(np.linalg.norm(x))
    phix = ent @ x
    phix2 = float(np.dot(phix, phix))

    g2_only = np.setdiff1d(gamma2, gamma1)
    cross = _restrict(ent.T @ (ent @ _restrict(x, g2_only)), gamma1)
    gram_dev = _restrict(x, gamma1) - _restrict(ent.T @ (ent @ x), gamma1)
    adj = _restrict(ent.T @ y, gamma1)

    checks = (
        ConditionCheck("isometry_lower", (1.0 - delta) * xn**2, phix2),
        ConditionCheck("isometry_upper", phix2, (1.0 + delta) * xn**2),
        ConditionCheck("cross_coherence", float(np.linalg.norm(cross)), delta * xn),
        ConditionCheck("gram_deviation", float(np.linalg.norm(gram_dev)), delta * xn),
        ConditionCheck(
            "adjoint_bound",
            float(np.linalg.norm(adj)),
            math.sqrt(1.0 + delta) * float(np.linalg.norm(y)),
        ),
    )
    return PreconditionReport(checks)


@dataclass(frozen=True)
class SupportCapResult:
    """Outcome of the active-set cap check; conclusion is None off-premise."""

    premise_holds: bool
    conclusion_holds: bool | None
    active: np.ndarray
    top_set: np.ndarray


def support_cap_check(u: np.ndarray, lam: float, q: int) -> SupportCapResult:
    """If the top-q energy of u stays within lam*sqrt(q), the active set of
    T_lam(u) has at most q entries and sits inside the top-q index set."""
    u = np.asarray(u, dtype=np.float64)
    q_eff = min(q, u.size)
    top = top_q_indices(u, q_eff)
    premise = top_q_energy(u, q_eff) <= lam * math.sqrt(q)
    act = active_set(u, lam)
    if not premise:
        return SupportCapResult(False, None, act, top)
    conclusion = act.size <= q and np.all(np.isin(act, top))
    return SupportCapResult(True, bool(conclusion), act, top)


@dataclass(frozen=True)
class EnvelopeCheckResult:
    """Status of the target-energy envelope check.

    status is "holds", "violated", or "not_applicable" (premise failed, in
    which case the envelope claim is vacuous rather than broken).
    """

    status: str
    max_premise_excess: float
    max_bound_excess: float


def target_energy_envelope_check(
    trajectory: np.ndarray, tau: float, mu: float, dt: float, tol: float = 1e-6
) -> EnvelopeCheckResult:
    """Check ||x(t)|| <= exp(-t/tau) * (||x(0)|| - tau*mu) + tau*mu on samples.

    The premise, verified by forward differences, is that
    ||dx/dt|| + ||x||/tau <= mu along the trajectory.  ``trajectory`` holds
    one sample per row at spacing ``dt``.
    """
    x = np.asarray(trajectory, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError("trajectory must be 2-d with at least two samples")
    if tau <= 0 or dt <= 0:
        raise ValueError(f"tau and dt must be positive, got tau={tau}, dt={dt}")
    norms = np.linalg.norm(x, axis=1)
    fd = np.linalg.norm(np.diff(x, axis=0), axis=1) / dt
    premise_vals = fd + norms[:-1] / tau
    premise_excess = float(np.max(premise_vals - mu * (1.0 + tol)))
    if premise_excess > 0:
        return EnvelopeCheckResult("not_applicable", premise_excess, float("nan"))
    t = dt * np.arange(x.shape[0])
    envelope = np.exp(-t / tau) * (norms[0] - tau * mu) + tau * mu
    bound_excess = float(np.max(norms - envelope - tol * max(1.0, tau * mu)))
    status = "violated" if bound_excess > 0 else "holds"
    return EnvelopeCheckResult(status, premise_excess, bound_excess)
