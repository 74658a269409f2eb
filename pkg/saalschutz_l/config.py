"""
Numeric defaults for saalschutz_l.

Everything tunable lives on one frozen pydantic model; callers that need
other values build their own Settings and pass it down explicitly.
"""

from pydantic import BaseModel, ConfigDict, Field


class Settings(BaseModel):
    model_config = ConfigDict(frozen=True)

    # gamma_core
    pole_tolerance: float = Field(1e-12, gt=0, description="Distance to a nonpositive integer treated as a pole")

    # series_engine
    snap_tolerance: float = Field(1e-10, gt=0, description="Numerator parameters this close to -n terminate the series")
    saalschutz_tolerance: float = Field(1e-10, gt=0)
    series_budget: int = Field(20000, ge=64, description="Terms summed by the extrapolated summation")
    series_checkpoints: int = Field(5, ge=3, le=12, description="Doubling checkpoints N, 2N, 4N, ... fed to Richardson")
    series_max_terms: int = Field(200000, ge=1)

    # l_function
    hyperplane_tolerance: float = Field(1e-10, gt=0)
    e_integer_gap: float = Field(1e-3, gt=0, description="Excluded distance of e from the integers")

    # barnes_quadrature
    quadrature_target: float = Field(1e-10, gt=0)
    quadrature_order: int = Field(32, ge=4, le=128, description="Gauss-Legendre nodes per panel")
    quadrature_node_budget: int = Field(200000, ge=1000)
    quadrature_initial_panels: int = Field(8, ge=2)
    min_truncation_height: float = Field(10.0, gt=0)
    integer_pair_tolerance: float = Field(1e-10, gt=0)

    # verifier
    sampler_max_rejections: int = Field(100000, ge=1)

    # cli
    significant_digits: int = Field(17, ge=1, le=17)


DEFAULT_SETTINGS = Settings()
