"""Monte-Carlo simulator of the full network, the ground truth for every
closed form in this package.

Each trial samples every channel coefficient fresh: N Rayleigh magnitudes
per source-relay link (coherently combined, then squared), exponential
power gains for all interferers and for the relay-destination links.  A
relay decodes when its SINR clears the threshold; among the decoders the
one with the strongest destination link forwards, and outage is declared
when the destination SINR (or an empty decoding set) fails the threshold.

Sampling is inverse-transform throughout (Rayleigh magnitude as
sigma*sqrt(-2 ln U), exponential as -ln U), branch-free and directly
checkable against the target distributions.  Estimates are reproducible by
construction: trials are partitioned into fixed-size chunks and chunk c
draws from an independent substream seeded by (seed, c), so the result is
a pure function of (config, plan) no matter how chunks are scheduled.
"""

import math
from dataclasses import dataclass

import numpy as np

from .model import SystemConfig, db_to_linear, derive_rate_params

_Z95 = 1.96  # two-sided 95% normal quantile


@dataclass(frozen=True)
class TrialPlan:
    """How to run one estimate: trial count, base seed, chunking."""

    n_trials: int
    seed: int = 42
    chunk_size: int = 250_000

    def __post_init__(self):
        if self.chunk_size < 1:
            raise ValueError(f"chunk_size must be >= 1, got {self.chunk_size}")
        if self.n_trials < self.chunk_size:
            raise ValueError(
                f"n_trials must be >= chunk_size, got {self.n_trials} < {self.chunk_size}"
            )
        if not (0 <= self.seed < 2**64):
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed}")


def make_plan(n_trials: int, seed: int = 42, chunk_size: int = 250_000) -> TrialPlan:
    """TrialPlan with the chunk size clipped to the trial count."""
    return TrialPlan(n_trials=n_trials, seed=seed, chunk_size=min(chunk_size, n_trials))


@dataclass(frozen=True)
class MCEstimate:
    """Outage estimate with a normal-approximation confidence half-width.

    p_upper95 is a rule-of-three one-sided bound, set only when no outage
    event was observed.
    """

    p_hat: float
    n: int
    ci95_halfwidth: float
    seed: int
    p_upper95: float | None = None


def _std_exponential(rng: np.random.Generator, shape) -> np.ndarray:
    """Unit-mean exponentials by inverse transform, -ln(1 - U)."""
    return -np.log1p(-rng.random(shape))


def sample_first_hop_gain(N: int, rng: np.random.Generator) -> float:
    """One combined first-hop power gain: squared sum of N Rayleigh magnitudes.

    Element magnitudes are Rayleigh with scale 1/sqrt(2), so each element
    has unit mean power and mean magnitude sqrt(pi)/2; perfect phase
    alignment makes the magnitudes add before squaring.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    mags = np.sqrt(_std_exponential(rng, N))  # (1/sqrt(2)) * sqrt(-2 ln U)
    return float(mags.sum() ** 2)


def _outage_events(
    cfg: SystemConfig, rng: np.random.Generator, m: int, work: np.ndarray | None = None
) -> np.ndarray:
    """Boolean outage indicators for m independent trials (vectorized).

    All channel draws for a batch come from one uniform block transformed in
    place, so the kernel is a handful of array passes.  Row layout of the
    (components, trials) block: K*N first-hop element magnitudes, K*I_r
    relay-interferer powers, K second-hop powers, I_d destination-interferer
    powers.  Callers looping over chunks pass `work` to reuse the block.
    """
    rho = db_to_linear(cfg.rho_dB)
    rho_ir = db_to_linear(cfg.rhoI_r_dB)
    rho_id = db_to_linear(cfg.rhoI_d_dB)
    u = 2.0 ** (2.0 * cfg.R) - 1.0
    K, N, I_r, I_d = cfg.K, cfg.N, cfg.I_r, cfg.I_d

    c_fh = K * N
    c_ir = K * I_r
    rows = c_fh + c_ir + K + I_d
    if work is None or work.shape != (rows, m):
        work = np.empty((rows, m))

    # exponentials by inverse transform: -ln(1 - U), in place
    rng.random(out=work)
    np.negative(work, out=work)
    np.log1p(work, out=work)
    np.negative(work, out=work)

    fh = work[:c_fh]
    np.sqrt(fh, out=fh)  # Rayleigh magnitudes, scale 1/sqrt(2)
    gain = fh.reshape(K, N, m).sum(axis=1) ** 2
    interference_r = work[c_fh : c_fh + c_ir].reshape(K, I_r, m).sum(axis=1)
    decoded = rho * gain >= u * (rho_ir * cfg.sigma2_Ir * interference_r + 1.0)

    # second-hop power gains; relays outside the decoding set cannot forward,
    # and an empty decoding set leaves best = -inf, always an outage
    h2 = cfg.sigma2_rd * work[c_fh + c_ir : c_fh + c_ir + K]
    best = np.where(decoded, h2, -np.inf).max(axis=0)

    interference_d = work[c_fh + c_ir + K :].sum(axis=0)
    return rho * best < u * (rho_id * cfg.sigma2_Id * interference_d + 1.0)


def simulate_trial(cfg: SystemConfig, rng: np.random.Generator) -> bool:
    """Run one end-to-end trial; True means outage."""
    return bool(_outage_events(cfg, rng, 1)[0])


def _chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    """Independent, order-free substream for one chunk."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, chunk_index))))


def estimate_outage(cfg: SystemConfig, plan: TrialPlan) -> MCEstimate:
    """Estimate the outage probability over plan.n_trials trials.

    Deterministic for fixed (cfg, plan): chunk c always consumes the
    substream seeded by (plan.seed, c), and the chunk tallies are summed,
    so any execution order gives bit-identical results.
    """
    n = plan.n_trials
    rows = cfg.K * (cfg.N + cfg.I_r) + cfg.K + cfg.I_d
    work = np.empty((rows, min(plan.chunk_size, n)))
    count = 0
    offset = 0
    chunk_index = 0
    while offset < n:
        m = min(plan.chunk_size, n - offset)
        rng = _chunk_rng(plan.seed, chunk_index)
        # the reusable block must stay contiguous; a short final chunk gets its own
        block = work if m == work.shape[1] else None
        count += int(_outage_events(cfg, rng, m, block).sum())
        offset += m
        chunk_index += 1

    p_hat = count / n
    ci = _Z95 * math.sqrt(p_hat * (1.0 - p_hat) / n)
    upper = 3.0 / n if count == 0 else None
    return MCEstimate(p_hat=p_hat, n=n, ci95_halfwidth=ci, seed=plan.seed, p_upper95=upper)
