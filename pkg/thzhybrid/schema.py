"""Centralised Pydantic models used across the project.

Physical quantities are SI unless a field says otherwise: densities in 1/m²,
frequencies in Hz, powers in W, distances in m, temperatures in K and
pressures in Pa. Powers in :class:`RunConfig` are kept in dBm because that is
how scenarios are written down.
"""
from __future__ import annotations

from enum import Enum
from typing import Annotated, Dict, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# Validity band of the simplified molecular absorption model.
ABSORPTION_BAND_HZ: Tuple[float, float] = (275e9, 400e9)


def _check_fraction(v: float) -> float:
    if v > 1:
        raise ValueError(f"expected fraction in [0,1], got {v:g}; divide percent values by 100")
    return v


class Tier(str, Enum):
    THZ = "thz"
    MMWAVE = "mmwave"


class Mode(str, Enum):
    """Which tiers the simulator deploys."""

    THZ_ONLY = "thz_only"
    MM_ONLY = "mm_only"
    HYBRID = "hybrid"


class GainModel(str, Enum):
    """How the simulator draws interferer antenna gains."""

    DISCRETE = "discrete"  # MLFT level G_k w.p. 2ψ, zero otherwise
    ACTUAL = "actual"  # φ ~ U[-1/2, 1/2] through the array factor


class AssociationModel(str, Enum):
    """Null probability used for the competing tier in the association rule."""

    UNBOUNDED = "unbounded"  # e^{-πλρ²} for any ρ
    LOS_BALL = "los_ball"  # ρ capped at that tier's LOS radius


class Metric(str, Enum):
    COVERAGE_THZ = "coverage_thz"
    COVERAGE_MM = "coverage_mm"
    COVERAGE_HYBRID = "coverage_hybrid"
    SE_HYBRID = "se_hybrid"
    SE_THZ = "se_thz"
    SE_MM = "se_mm"
    ASSOCIATION = "association"
    ABSORPTION_COEFFICIENT = "absorption_coefficient"

    @property
    def uses_tau(self) -> bool:
        return self in {Metric.COVERAGE_THZ, Metric.COVERAGE_MM, Metric.COVERAGE_HYBRID}

    @property
    def analytic_only(self) -> bool:
        return self is Metric.ABSORPTION_COEFFICIENT


class Engines(str, Enum):
    ANALYTIC = "analytic"
    MC = "mc"
    BOTH = "both"

    @property
    def analytic(self) -> bool:
        return self in {Engines.ANALYTIC, Engines.BOTH}

    @property
    def montecarlo(self) -> bool:
        return self in {Engines.MC, Engines.BOTH}


# ---------------------------------------------------------------------------
# Numerical plumbing
# ---------------------------------------------------------------------------


class QuadratureSpec(BaseModel):
    """Tolerances for adaptive and semi-infinite quadrature."""

    model_config = ConfigDict(frozen=True)

    rel_tol: float = Field(1e-8, gt=0)
    abs_tol: float = Field(1e-12, ge=0)
    max_subdivisions: int = Field(2000, ge=1)
    tail_cutoff_tol: float = Field(1e-12, gt=0)
    max_doublings: int = Field(256, ge=1, description="Budget of interval doublings for ∫_a^∞.")


# ---------------------------------------------------------------------------
# Channel
# ---------------------------------------------------------------------------


class Environment(BaseModel):
    """Atmospheric state feeding the absorption model and the thermal noise."""

    model_config = ConfigDict(frozen=True)

    temperature: float = Field(296.0, gt=0, description="Kelvin.")
    pressure: float = Field(101325.0, gt=0, description="Pascal.")
    relative_humidity: float = Field(0.6, ge=0, description="Fraction in [0, 1].")

    @field_validator("relative_humidity")
    def _fraction_not_percent(cls, v: float):  # noqa: N805
        return _check_fraction(v)


class PhysicalConstants(BaseModel):
    """CODATA constants. ``hbar_planck`` is the Planck constant h."""

    model_config = ConfigDict(frozen=True)

    c: float = 299_792_458.0
    hbar_planck: float = 6.626_070_15e-34
    k_boltzmann: float = 1.380_649e-23


CONSTANTS = PhysicalConstants()


class SimplifiedAbsorption(BaseModel):
    """Water-vapour line model valid in the 275-400 GHz band."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["simplified"] = "simplified"
    environment: Environment = Field(default_factory=Environment)


class FixedAbsorption(BaseModel):
    """User override of the absorption coefficient, in 1/m."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["fixed"] = "fixed"
    k_a: float = Field(..., ge=0)


AbsorptionSource = Annotated[
    Union[SimplifiedAbsorption, FixedAbsorption], Field(discriminator="kind")
]


# ---------------------------------------------------------------------------
# Antenna
# ---------------------------------------------------------------------------


class MlftPattern(BaseModel):
    """Multi-level flat-top approximation of a uniform linear array.

    ``levels[k] = (φ_k, G_k)``; level 0 is the main lobe ``(ψ/2, N_t)``.
    """

    model_config = ConfigDict(frozen=True)

    n_elements: int = Field(..., ge=2)
    hpbw: float = Field(..., gt=0)
    levels: Tuple[Tuple[float, float], ...]

    @model_validator(mode="after")
    def _check_levels(self) -> "MlftPattern":
        k = self.n_elements // 2
        if len(self.levels) != k:
            raise ValueError(f"expected {k} levels, got {len(self.levels)}")
        main_center, main_gain = self.levels[0]
        if main_gain != self.n_elements or not np.isclose(main_center, self.hpbw / 2):
            raise ValueError("main lobe must be (ψ/2, N_t)")
        if any(g <= 0 or g > main_gain for _, g in self.levels):
            raise ValueError("level gains must lie in (0, N_t]")
        if 2 * k * self.hpbw > 1:
            raise ValueError("2·K·ψ exceeds 1; zero-gain probability would be negative")
        return self

    @property
    def n_levels(self) -> int:
        return len(self.levels)

    @property
    def centers(self) -> np.ndarray:
        return np.array([c for c, _ in self.levels])

    @property
    def gains(self) -> np.ndarray:
        return np.array([g for _, g in self.levels])

    @property
    def normalized_gains(self) -> np.ndarray:
        """Gains divided by the boresight gain ``N_t`` (Ĝ_k, ĝ_k)."""
        return self.gains / self.n_elements


# ---------------------------------------------------------------------------
# Scenario
# ---------------------------------------------------------------------------


class TierParams(BaseModel):
    """Physical and deployment parameters of one network tier."""

    model_config = ConfigDict(frozen=True)

    density: float = Field(..., gt=0, description="BS density in 1/m².")
    frequency: float = Field(..., gt=0, description="Carrier frequency in Hz.")
    tx_power: float = Field(..., gt=0, description="Transmit power in W.")
    bias: float = Field(..., gt=0)
    pathloss_exponent: float = Field(..., ge=2)
    los_radius: float = Field(..., gt=0, description="LOS ball radius in m.")
    array_size: int = Field(..., ge=2)


class HybridParams(BaseModel):
    """Complete two-tier scenario."""

    model_config = ConfigDict(frozen=True)

    thz: TierParams
    mmwave: TierParams
    nakagami_m: int = Field(4, ge=1)
    mmwave_noise_power: float = Field(..., ge=0, description="σ_m² in W.")
    environment: Environment = Field(default_factory=Environment)
    absorption: AbsorptionSource = None  # type: ignore[assignment]
    association_model: AssociationModel = AssociationModel.UNBOUNDED

    @model_validator(mode="before")
    @classmethod
    def _default_absorption(cls, data):
        if isinstance(data, dict) and data.get("absorption") is None:
            data = dict(data)
            data["absorption"] = SimplifiedAbsorption(
                environment=data.get("environment") or Environment()
            )
        return data

    @model_validator(mode="after")
    def _thz_in_band(self) -> "HybridParams":
        lo, hi = ABSORPTION_BAND_HZ
        if isinstance(self.absorption, SimplifiedAbsorption) and not lo <= self.thz.frequency <= hi:
            raise ValueError(
                f"THz carrier {self.thz.frequency / 1e9:g} GHz is outside the "
                "275-400 GHz validity band of the simplified absorption model"
            )
        return self

    def tier(self, tier: Tier) -> TierParams:
        return self.thz if tier is Tier.THZ else self.mmwave

    def with_tier(self, tier: Tier, **changes) -> "HybridParams":
        """Return a copy with fields of one tier replaced."""
        name = "thz" if tier is Tier.THZ else "mmwave"
        updated = getattr(self, name).model_copy(update=changes)
        return self.model_validate({**self.model_dump(), name: updated.model_dump()})


class NormalizedNoise(BaseModel):
    """Noise terms normalised by the serving link's boresight gain budget."""

    model_config = ConfigDict(frozen=True)

    thz_hat_n: float = Field(..., ge=0)
    mm_sigma2: float = Field(..., ge=0)


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------


class NodeSet(BaseModel):
    """Base stations of one tier inside its LOS ball, as seen by the typical UE."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    distances: np.ndarray
    gains: np.ndarray
    fading: np.ndarray
    nearest: Optional[int] = None

    @property
    def size(self) -> int:
        return int(self.distances.size)


class Realization(BaseModel):
    """One network draw and its association/SINR outcome."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    thz_nodes: NodeSet
    mm_nodes: NodeSet
    association: Optional[Tier] = None
    serving_distance: Optional[float] = None
    sinr: float = 0.0
    interference: float = 0.0
    absorption_noise: float = 0.0


class Estimate(BaseModel):
    """A Monte Carlo statistic.

    ``mean``/``stderr`` are conditioned on the event the estimator names
    (usually "a serving BS exists"); ``unconditional_*`` average over every trial.
    """

    mean: float
    stderr: float
    n_trials: int = Field(..., ge=0)
    n_conditioned: int = Field(..., ge=0)
    unconditional_mean: Optional[float] = None
    unconditional_stderr: Optional[float] = None
    by_tier: Dict[Tier, "Estimate"] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _counts(self) -> "Estimate":
        if self.n_conditioned > self.n_trials:
            raise ValueError("n_conditioned cannot exceed n_trials")
        return self


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------


class RunConfig(BaseModel):
    """Flat run configuration; absent keys take the published default scenario."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    density_thz: float = Field(0.05, gt=0)
    density_mm: float = Field(5e-4, gt=0)
    frequency_thz: float = Field(350e9, gt=0)
    frequency_mm: float = Field(30e9, gt=0)
    tx_power_thz: float = Field(73.0, description="dBm")
    tx_power_mm: float = Field(53.0, description="dBm")
    noise_power_mm: float = Field(-85.0, description="dBm")
    bias_thz: float = Field(10.0, gt=0)
    bias_mm: float = Field(1.0, gt=0)
    pathloss_exponent_thz: float = Field(4.0, ge=2)
    pathloss_exponent_mm: float = Field(2.0, ge=2)
    los_radius_thz: float = Field(100.0, gt=0)
    los_radius_mm: float = Field(20.0, gt=0)
    array_size_thz: int = Field(64, ge=2)
    array_size_mm: int = Field(16, ge=2)
    nakagami_m: int = Field(4, ge=1)
    temperature: float = Field(296.0, gt=0)
    pressure: float = Field(101325.0, gt=0)
    relative_humidity: float = Field(0.6, ge=0)
    absorption_coefficient: Optional[float] = Field(None, ge=0, description="Override k_a in 1/m.")
    master_seed: int = Field(20240601, ge=0, lt=2**64)
    n_trials: int = Field(10_000, ge=1)
    workers: int = Field(1, ge=1)
    interferer_gain_model: GainModel = GainModel.DISCRETE
    association_model: AssociationModel = AssociationModel.UNBOUNDED
    quad_rel_tol: float = Field(1e-8, gt=0)
    quad_abs_tol: float = Field(1e-12, ge=0)
    quad_max_subdivisions: int = Field(2000, ge=1)
    quad_tail_cutoff_tol: float = Field(1e-12, gt=0)

    @field_validator("relative_humidity")
    def _fraction_not_percent(cls, v: float):  # noqa: N805
        return _check_fraction(v)

    @property
    def quadrature(self) -> QuadratureSpec:
        return QuadratureSpec(
            rel_tol=self.quad_rel_tol,
            abs_tol=self.quad_abs_tol,
            max_subdivisions=self.quad_max_subdivisions,
            tail_cutoff_tol=self.quad_tail_cutoff_tol,
        )


class SweepSpec(BaseModel):
    """One experiment: a metric evaluated along a swept parameter."""

    model_config = ConfigDict(frozen=True)

    swept_key: Optional[str] = None
    values: Tuple[float, ...] = ()
    metric: Metric
    tau_db: Tuple[float, ...] = ()
    engines: Engines = Engines.BOTH

    @model_validator(mode="after")
    def _check(self) -> "SweepSpec":
        if self.swept_key is not None and not self.values:
            raise ValueError(f"sweep over {self.swept_key!r} has no values")
        if self.metric.analytic_only and self.engines is not Engines.ANALYTIC:
            raise ValueError(f"metric {self.metric.value!r} is analytic-only; use --engines analytic")
        if self.metric.uses_tau and not self.tau_db:
            raise ValueError(f"metric {self.metric.value!r} needs at least one --tau-db value")
        return self

    @property
    def points(self) -> List[Optional[float]]:
        return list(self.values) if self.swept_key is not None else [None]


class SweepRow(BaseModel):
    """One CSV row; ``None`` renders as an empty field."""

    sweep_key: str = ""
    sweep_value: Optional[float] = None
    tau_db: Optional[float] = None
    analytic_value: Optional[float] = None
    mc_mean: Optional[float] = None
    mc_stderr: Optional[float] = None
    n_trials: Optional[int] = None
    seed: Optional[int] = None


class RunMetadata(BaseModel):
    """Sidecar written next to every CSV so each row can be regenerated."""

    version: str
    config: RunConfig
    sweep: SweepSpec
    seed: int
    n_trials: int
    workers: int
    csv: str


class CheckResult(BaseModel):
    """Outcome of one self-test check."""

    name: str
    passed: bool
    detail: str = ""
