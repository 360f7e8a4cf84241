"""Measurement operators, noisy observations, and restricted-isometry estimates.

A measurement matrix maps a length-n signal to m < n linear observations.
The restricted isometry constant at sparsity level s is

    delta_s = max over supports T, |T| = s, of max(1 - lmin(G_T), lmax(G_T) - 1)

where G_T is the s x s Gram block of the matrix restricted to columns T.
``rip_exact`` enumerates every support; ``rip_monte_carlo`` samples them.
"""

from dataclasses import dataclass
from itertools import combinations, islice
import math

import numpy as np

from .rng import make_rng

DEFAULT_SUPPORT_BUDGET = 10**6

# supports are processed in batches so eigvalsh runs vectorized
_BATCH = 8192

NOISE_MODES = ("gaussian_scaled", "capped")


class SupportBudgetError(ValueError):
    """Exact enumeration would exceed the caller's support budget."""


@dataclass(frozen=True)
class MeasurementMatrix:
    """Dense measurement operator with unit-norm columns."""

    rows: int
    cols: int
    entries: np.ndarray
    seed: int = 0  # 0 for deterministic constructions

    def __post_init__(self):
        ent = np.asarray(self.entries, dtype=np.float64)
        if ent.shape != (self.rows, self.cols):
            raise ValueError(
                f"entries shape {ent.shape} does not match ({self.rows}, {self.cols})"
            )
        norms = np.linalg.norm(ent, axis=0)
        if not np.all(np.abs(norms - 1.0) <= 1e-12):
            worst = float(np.max(np.abs(norms - 1.0)))
            raise ValueError(f"columns must have unit norm (worst deviation {worst:.3e})")
        object.__setattr__(self, "entries", ent)


@dataclass(frozen=True)
class RipEstimate:
    """Restricted isometry constant estimate at one sparsity level."""

    sparsity_level: int
    delta: float
    method: str  # "exact" | "monte_carlo"
    samples: int = 0  # supports inspected (monte_carlo only)


def gen_gaussian_matrix(m: int, n: int, seed: int) -> MeasurementMatrix:
    """i.i.d. standard normal entries, columns rescaled to unit norm."""
    if m < 1 or n < 1:
        raise ValueError(f"matrix dimensions must be positive, got ({m}, {n})")
    rng = make_rng(seed)
    entries = rng.standard_normal((m, n))
    entries /= np.linalg.norm(entries, axis=0)
    return MeasurementMatrix(m, n, entries, seed)


def gen_identity(n: int) -> MeasurementMatrix:
    """Identity operator; its isometry constant is 0 at every level."""
    if n < 1:
        raise ValueError(f"matrix dimension must be positive, got {n}")
    return MeasurementMatrix(n, n, np.eye(n), 0)


def measure(phi: MeasurementMatrix, target: np.ndarray, noise: np.ndarray) -> np.ndarray:
    """Observe ``phi @ target + noise``."""
    target = np.asarray(target, dtype=np.float64)
    noise = np.asarray(noise, dtype=np.float64)
    if target.shape != (phi.cols,):
        raise ValueError(f"target shape {target.shape} does not match ({phi.cols},)")
    if noise.shape != (phi.rows,):
        raise ValueError(f"noise shape {noise.shape} does not match ({phi.rows},)")
    return phi.entries @ target + noise


def gen_noise(m: int, sigma: float, delta: float, mode: str, seed: int) -> np.ndarray:
    """Draw one noise vector.

    ``gaussian_scaled`` draws i.i.d. entries with standard deviation ``sigma``
    (the simulation regime, where the energy bound holds only in high
    probability).  ``capped`` rescales any draw whose norm exceeds
    ``(1 + delta)**-0.5 * sigma`` down onto that cap, so the bound holds
    surely (the regime the tracking bounds assume).
    """
    if m < 1:
        raise ValueError(f"noise length must be positive, got {m}")
    if sigma < 0:
        raise ValueError(f"sigma must be nonnegative, got {sigma}")
    if not 0.0 <= delta < 1.0:
        raise ValueError(f"delta must lie in [0, 1), got {delta}")
    if mode not in NOISE_MODES:
        raise ValueError(f"unknown noise mode {mode!r}; expected one of {NOISE_MODES}")
    rng = make_rng(seed)
    eps = sigma * rng.standard_normal(m)
    if mode == "capped":
        cap = sigma / math.sqrt(1.0 + delta)
        nrm = float(np.linalg.norm(eps))
        if nrm > cap:
            eps *= cap / nrm
    return eps


def _support_batches(n: int, s: int):
    it = combinations(range(n), s)
    while True:
        chunk = list(islice(it, _BATCH))
        if not chunk:
            return
        yield np.asarray(chunk, dtype=np.intp)


def _batch_extremes(gram: np.ndarray, supports: np.ndarray):
    """Extreme eigenvalues of the Gram blocks for a batch of supports."""
    blocks = gram[supports[:, :, None], supports[:, None, :]]
    ev = np.linalg.eigvalsh(blocks)
    return ev[:, 0], ev[:, -1]


def rip_exact(
    phi: MeasurementMatrix, s: int, budget: int = DEFAULT_SUPPORT_BUDGET
) -> RipEstimate:
    """Exact isometry constant by enumerating all supports of size ``s``.

    Refuses with :class:`SupportBudgetError` when ``comb(n, s)`` exceeds
    ``budget``; use :func:`rip_monte_carlo` for such sizes.  The maximum is
    order-independent, so batching over supports never changes the result.
    """
    if not 1 <= s <= phi.cols:
        raise ValueError(f"sparsity level must lie in [1, {phi.cols}], got {s}")
    total = math.comb(phi.cols, s)
    if total > budget:
        raise SupportBudgetError(
            f"enumerating {total} supports exceeds budget {budget}; "
            "use rip_monte_carlo instead"
        )
    gram = phi.entries.T @ phi.entries
    lo, hi = np.inf, -np.inf
    for supports in _support_batches(phi.cols, s):
        bmin, bmax = _batch_extremes(gram, supports)
        lo = min(lo, float(bmin.min()))
        hi = max(hi, float(bmax.max()))
    return RipEstimate(s, max(1.0 - lo, hi - 1.0), "exact")


def rip_exact_witness(
    phi: MeasurementMatrix, s: int, budget: int = DEFAULT_SUPPORT_BUDGET
):
    """Exact constant plus a support and unit vector achieving it.

    Returns ``(estimate, support, coeffs)`` where ``coeffs`` are the
    eigenvector weights on ``support`` for the binding eigenvalue.
    """
    if not 1 <= s <= phi.cols:
        raise ValueError(f"sparsity level must lie in [1, {phi.cols}], got {s}")
    total = math.comb(phi.cols, s)
    if total > budget:
        raise SupportBudgetError(
            f"enumerating {total} supports exceeds budget {budget}; "
            "use rip_monte_carlo instead"
        )
    gram = phi.entries.T @ phi.entries
    best_dev, best_support = -np.inf, None
    for supports in _support_batches(phi.cols, s):
        bmin, bmax = _batch_extremes(gram, supports)
        dev = np.maximum(1.0 - bmin, bmax - 1.0)
        i = int(np.argmax(dev))
        if dev[i] > best_dev:
            best_dev = float(dev[i])
            best_support = supports[i].copy()
    block = gram[np.ix_(best_support, best_support)]
    evals, evecs = np.linalg.eigh(block)
    if 1.0 - evals[0] >= evals[-1] - 1.0:
        coeffs = evecs[:, 0]
    else:
        coeffs = evecs[:, -1]
    return RipEstimate(s, best_dev, "exact"), best_support, coeffs


def rip_monte_carlo(
    phi: MeasurementMatrix, s: int, trials: int, seed: int, exhaustive: bool = False
) -> RipEstimate:
    """Lower estimate of the isometry constant from sampled supports.

    Always at or below the exact value.  With ``exhaustive=True`` the sampler
    walks every support instead of drawing, which reproduces ``rip_exact``.
    """
    if not 1 <= s <= phi.cols:
        raise ValueError(f"sparsity level must lie in [1, {phi.cols}], got {s}")
    gram = phi.entries.T @ phi.entries
    if exhaustive:
        lo, hi, count = np.inf, -np.inf, 0
        for supports in _support_batches(phi.cols, s):
            bmin, bmax = _batch_extremes(gram, supports)
            lo = min(lo, float(bmin.min()))
            hi = max(hi, float(bmax.max()))
            count += len(supports)
        return RipEstimate(s, max(1.0 - lo, hi - 1.0), "monte_carlo", count)
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    rng = make_rng(seed)
    lo, hi = np.inf, -np.inf
    done = 0
    while done < trials:
        batch = min(_BATCH, trials - done)
        supports = np.argsort(rng.random((batch, phi.cols)), axis=1)[:, :s]
        bmin, bmax = _batch_extremes(gram, supports)
        lo = min(lo, float(bmin.min()))
        hi = max(hi, float(bmax.max()))
        done += batch
    return RipEstimate(s, max(1.0 - lo, hi - 1.0), "monte_carlo", trials)


def save_matrix_csv(phi: MeasurementMatrix, path) -> None:
    """Write ``m,n,seed`` header then one CSV row per matrix row."""
    with open(path, "w") as fh:
        fh.write(f"{phi.rows},{phi.cols},{phi.seed}\n")
        for row in phi.entries:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def load_matrix_csv(path) -> MeasurementMatrix:
    """Inverse of :func:`save_matrix_csv`; round-trips entries exactly."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        if len(header) != 3:
            raise ValueError(f"malformed matrix header in {path}")
        m, n, seed = int(header[0]), int(header[1]), int(header[2])
        entries = np.empty((m, n))
        for i in range(m):
            line = fh.readline()
            if not line:
                raise ValueError(f"expected {m} data rows in {path}, found {i}")
            entries[i] = [float(v) for v in line.strip().split(",")]
    return MeasurementMatrix(m, n, entries, seed)
