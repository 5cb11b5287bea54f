"""Physical scenario description and its reduction to rate parameters.

A scenario is a dual-hop network: a source assisted by an N-element
reflecting surface, K decode-and-forward relays, one destination, and
co-channel interferers at every relay (I_r each, identically distributed)
and at the destination (I_d).  All channels are Rayleigh; channel power
gains are exponential.  SNR-like quantities enter in dB at this boundary
and are converted to linear scale exactly once.
"""

import math
from dataclasses import dataclass, replace

# Gamma(3/2)^2 = pi/4, the per-element shape correction of the combined
# first-hop channel.
_REFLECTOR_SHAPE = math.pi / 4.0


def db_to_linear(x_db: float) -> float:
    """Convert a dB quantity to linear scale."""
    return 10.0 ** (x_db / 10.0)


@dataclass(frozen=True)
class SystemConfig:
    """Physical parameters of one scenario.

    N            reflecting elements at the source
    K            decode-and-forward relays
    I_r          co-channel interferers per relay (same count at every relay)
    I_d          co-channel interferers at the destination
    R            spectral efficiency threshold, bits/s/Hz
    rho_dB       average SNR of the intended links, dB
    rhoI_r_dB    interference-to-noise ratio at the relays, dB
    rhoI_d_dB    interference-to-noise ratio at the destination, dB
    sigma2_*     mean channel power gains (second hop, relay interferers,
                 destination interferers); intended first-hop elements are
                 unit mean power by construction
    """

    N: int
    K: int
    I_r: int = 2
    I_d: int = 2
    R: float = 1.0
    rho_dB: float = 20.0
    rhoI_r_dB: float = 10.0
    rhoI_d_dB: float = 10.0
    sigma2_rd: float = 1.0
    sigma2_Ir: float = 1.0
    sigma2_Id: float = 1.0

    def __post_init__(self):
        for name in ("N", "K", "I_r", "I_d"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"{name} must be an integer >= 1, got {v!r}")
        if not (self.R > 0):
            raise ValueError(f"R must be > 0, got {self.R}")
        for name in ("sigma2_rd", "sigma2_Ir", "sigma2_Id"):
            v = getattr(self, name)
            if not (v > 0):
                raise ValueError(f"{name} must be > 0, got {v}")
        for name in ("rho_dB", "rhoI_r_dB", "rhoI_d_dB"):
            v = getattr(self, name)
            if math.isnan(v) or math.isinf(v):
                raise ValueError(f"{name} must be finite, got {v}")

    def with_overrides(self, **kwargs) -> "SystemConfig":
        """Copy of this config with the given fields replaced (revalidated)."""
        return replace(self, **kwargs)


@dataclass(frozen=True)
class RateParams:
    """Derived analytical parameters consumed by every closed form.

    u           SINR outage threshold, 2^(2R) - 1
    lambda_sk   exponential rate of a single first-hop element SNR, 1/rho
    lambda_rd   rate of a relay-to-destination SNR, 1/(rho * sigma2_rd)
    lambda_Ir   rate of one relay interferer's power, 1/(rhoI_r * sigma2_Ir)
    lambda_Id   rate of one destination interferer's power, 1/(rhoI_d * sigma2_Id)
    B           combined first-hop shape constant, 1 + (N-1) * pi/4
    """

    u: float
    lambda_sk: float
    lambda_rd: float
    lambda_Ir: float
    lambda_Id: float
    B: float


def ris_shape_constant(N: int) -> float:
    """Shape constant of the combined N-element first-hop channel: 1 + (N-1)*pi/4."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    return 1.0 + (N - 1) * _REFLECTOR_SHAPE


def derive_rate_params(cfg: SystemConfig) -> RateParams:
    """Convert a scenario to the rate parameters used by the closed forms."""
    rho = db_to_linear(cfg.rho_dB)
    rho_Ir = db_to_linear(cfg.rhoI_r_dB)
    rho_Id = db_to_linear(cfg.rhoI_d_dB)
    return RateParams(
        u=2.0 ** (2.0 * cfg.R) - 1.0,
        lambda_sk=1.0 / rho,
        lambda_rd=1.0 / (rho * cfg.sigma2_rd),
        lambda_Ir=1.0 / (rho_Ir * cfg.sigma2_Ir),
        lambda_Id=1.0 / (rho_Id * cfg.sigma2_Id),
        B=ris_shape_constant(cfg.N),
    )
