"""High-SNR outage behavior: limiting expressions, diversity and coding gain.

As the intended-link SNR grows with interference held fixed, each hop's
outage CDF can be replaced by the leading term of its series at the origin.
The conditional second-hop outage given L active relays then scales as
SNR^-L and the single-relay first-hop outage as SNR^-N, so the end-to-end
curve follows (Gc * rho)^-Gd with diversity order Gd = K.

Two closed single-term shortcuts exist:

  * one reflecting element (N = 1): the all-first-hops-fail term, accurate
    only where relay-side interference dominates the destination side (all
    decoding-set terms share the SNR^-K slope, so the neglected mixed terms
    matter whenever destination interference is comparable or stronger);
  * N >= 2: the full-decoding-set term, which strictly dominates at high
    SNR since partial decoding sets decay faster.

`asym_outage_general` keeps every decoding-set term and is the curve the
sweep CLI reports as the asymptotic method.  `fit_diversity_coding_gain`
extracts (Gd, Gc) from any curve by log-log regression so slope claims can
be tested numerically rather than read off formulas.

The limiting expressions exceed 1 at low SNR, where they are meaningless;
plain evaluators return the raw value, and only the assembled curve clamps
its ingredients into [0,1] to stay a probability.
"""

import math
from dataclasses import dataclass

import numpy as np

from .model import SystemConfig, derive_rate_params
from .specfun import binom, scaled_upper_gamma


@dataclass(frozen=True)
class AsymptoticFit:
    """Power-law fit of an outage curve: p ~ (Gc * rho)^-Gd.

    G_d        diversity order, negative slope of log p vs log rho
    G_c_dB     coding gain expressed as the SNR-axis shift, in dB
    fit_window (low, high) rho_dB endpoints of the fitted points
    residual   max abs log10 deviation of the fit over the window
    """

    G_d: float
    G_c_dB: float
    fit_window: tuple[float, float]
    residual: float


def asym_second_hop_conditional(
    L: int, u: float, lambda_rd: float, lambda_Id: float, I_d: int
) -> float:
    """High-SNR limit of the second-hop conditional outage with L relays.

    Replaces the best-of-L CDF by its leading power; the result is
    (lambda_rd * u)^L times the L-th moment of the shifted interference
    variable, expressed through incomplete-gamma terms.  Rejects L = 0.
    """
    if L < 1:
        raise ValueError("no active relay: conditional outage is 1 by definition")
    if I_d < 1:
        raise ValueError(f"I_d must be >= 1, got {I_d}")
    if not (u > 0 and lambda_rd > 0 and lambda_Id > 0):
        raise ValueError("u, lambda_rd, lambda_Id must all be > 0")

    factor = (lambda_rd * u) ** L * lambda_Id**I_d / math.factorial(I_d - 1)
    terms = []
    for g in range(I_d):
        mag = (
            factor
            * binom(I_d - 1, g)
            * lambda_Id ** (-g - L - 1)
            * scaled_upper_gamma(g + L, lambda_Id, lambda_Id)
        )
        # overall sign (-1)^(I_d + g + 1)
        terms.append(mag if (I_d + g) % 2 else -mag)
    return math.fsum(terms)


def asym_first_hop_outage(
    u: float, lambda_sk: float, lambda_Ir: float, I_r: int, N: int, B: float
) -> float:
    """High-SNR limit of the single-relay first-hop outage.

    Uses the leading (u*z)^N term of the combined-channel CDF, giving
    (lambda_sk * u / B)^N / N! times the N-th moment of the shifted relay
    interference variable.
    """
    if I_r < 1 or N < 1:
        raise ValueError(f"I_r and N must be >= 1, got I_r={I_r}, N={N}")
    if not (u > 0 and lambda_sk > 0 and lambda_Ir > 0 and B >= 1):
        raise ValueError("u, lambda_sk, lambda_Ir must be > 0 and B >= 1")

    factor = (
        (lambda_sk * u) ** N
        * lambda_Ir**I_r
        / (math.factorial(I_r - 1) * B**N * math.factorial(N))
    )
    terms = []
    for g in range(I_r):
        mag = (
            factor
            * binom(I_r - 1, g)
            * lambda_Ir ** (-g - N - 1)
            * scaled_upper_gamma(g + N, lambda_Ir, lambda_Ir)
        )
        terms.append(mag if (I_r + g) % 2 else -mag)
    return math.fsum(terms)


def asym_outage_case1(cfg: SystemConfig) -> float:
    """Single-term high-SNR outage for N = 1: all K first hops fail.

    Valid where relay-side interference dominates; with destination
    interference comparable or stronger the mixed decoding-set terms it
    drops contribute at the same SNR^-K order and this underestimates.
    """
    if cfg.N != 1:
        raise ValueError(f"single-reflector shortcut requires N == 1, got N={cfg.N}")
    rp = derive_rate_params(cfg)
    # per-relay coefficient: first-hop limit per unit lambda_sk
    factor = rp.u * rp.lambda_Ir**cfg.I_r / (math.factorial(cfg.I_r - 1) * rp.B)
    terms = []
    for g in range(cfg.I_r):
        mag = (
            factor
            * binom(cfg.I_r - 1, g)
            * rp.lambda_Ir ** (-g - 2)
            * scaled_upper_gamma(g + 1, rp.lambda_Ir, rp.lambda_Ir)
        )
        terms.append(mag if (cfg.I_r + g) % 2 else -mag)
    bracket = math.fsum(terms)
    return (bracket * rp.lambda_sk) ** cfg.K


def asym_outage_case2(cfg: SystemConfig) -> float:
    """Single-term high-SNR outage for N >= 2: full decoding set, best of K.

    Equals the K-relay second-hop limit; the SNR axis is the second-hop
    average SNR, so the per-relay rate lambda_rd carries the channel power.
    """
    if cfg.N < 2:
        raise ValueError(f"second-hop-dominated shortcut requires N >= 2, got N={cfg.N}")
    rp = derive_rate_params(cfg)
    L = cfg.K
    factor = rp.u**L * rp.lambda_Id**cfg.I_d / math.factorial(cfg.I_d - 1)
    terms = []
    for g in range(cfg.I_d):
        mag = (
            factor
            * binom(cfg.I_d - 1, g)
            * rp.lambda_Id ** (-g - L - 1)
            * scaled_upper_gamma(g + L, rp.lambda_Id, rp.lambda_Id)
        )
        terms.append(mag if (cfg.I_d + g) % 2 else -mag)
    bracket = math.fsum(terms)
    return bracket * rp.lambda_rd**L


def asym_outage_general(cfg: SystemConfig) -> float:
    """High-SNR outage with every decoding-set term kept.

    Substitutes the limiting per-hop expressions into the decoding-set
    average.  Ingredients are clamped into [0,1] so the assembly remains a
    probability even below the validity region (where the limits blow up).
    """
    rp = derive_rate_params(cfg)
    p1 = min(
        asym_first_hop_outage(rp.u, rp.lambda_sk, rp.lambda_Ir, cfg.I_r, cfg.N, rp.B),
        1.0,
    )
    q = 1.0 - p1
    total_terms = [p1**cfg.K]  # empty decoding set: certain outage
    for L in range(1, cfg.K + 1):
        cond = min(
            asym_second_hop_conditional(L, rp.u, rp.lambda_rd, rp.lambda_Id, cfg.I_d),
            1.0,
        )
        total_terms.append(binom(cfg.K, L) * q**L * p1 ** (cfg.K - L) * cond)
    return min(math.fsum(total_terms), 1.0)


def fit_diversity_coding_gain(points: list[tuple[float, float]]) -> AsymptoticFit:
    """Least-squares power-law fit of (rho_dB, outage) samples.

    Fits log10 p against log10 rho; the diversity order is the negative
    slope, and the coding gain is the rho-axis shift making
    p = (Gc * rho)^-Gd, reported in dB.  Requires at least two points with
    strictly increasing rho_dB and strictly positive outage values.
    """
    if len(points) < 2:
        raise ValueError("need at least 2 points to fit a slope")
    rho_db = [float(r) for r, _ in points]
    p = [float(v) for _, v in points]
    if any(b <= a for a, b in zip(rho_db, rho_db[1:])):
        raise ValueError("rho_dB values must be strictly increasing")
    if any(v <= 0 for v in p):
        raise ValueError("outage values must be > 0 for a log-log fit")

    x = np.asarray(rho_db) / 10.0  # log10 of linear SNR
    y = np.log10(np.asarray(p))
    slope, intercept = np.polyfit(x, y, 1)
    g_d = -float(slope)
    if abs(g_d) < 1e-12:
        raise ValueError("degenerate fit: slope is zero, no coding gain defined")
    g_c_db = -10.0 * float(intercept) / g_d
    residual = float(np.max(np.abs(y - (slope * x + intercept))))
    return AsymptoticFit(
        G_d=g_d,
        G_c_dB=g_c_db,
        fit_window=(rho_db[0], rho_db[-1]),
        residual=residual,
    )
