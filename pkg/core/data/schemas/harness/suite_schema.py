from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from core.geometry.quadrature import QuadratureSpec
from core.utils.config import DEFAULT_SEED, AppConfig


class CheckCounts(BaseModel):
    """Instances per check; zero disables a check."""
    model_config = ConfigDict(extra='forbid')

    main_theorem: int = Field(20, ge=0)
    theorem_mainp: int = Field(5, ge=0)
    partition_identity: int = Field(5, ge=0)
    key_lemma: int = Field(10, ge=0)
    balitskiy: int = Field(50, ge=0)
    pdist_diam: int = Field(30, ge=0)
    triangle_search: int = Field(2, ge=0)
    pipeline: int = Field(1, ge=0)


class SuiteConfig(BaseModel):
    model_config = ConfigDict(extra='forbid')

    schema_version: int = 1
    seed: int = DEFAULT_SEED
    workers: int = Field(4, ge=1)
    include_timing: bool = False
    identity_tol: float = Field(1e-6, gt=0)
    inequality_tol: float = Field(1e-6, gt=0)
    search_budget: int = Field(2000, ge=0)
    max_bodies: int = Field(20, ge=1)
    max_holes: int = Field(3, ge=0)
    quad_method: Literal['exact', 'adaptive', 'fixed'] = 'adaptive'
    abs_tol: float = Field(1e-10, gt=0)
    grid_size: int = Field(4096, ge=8)
    checks: CheckCounts = CheckCounts()
    # negative control: scales every right-hand side before evaluation
    corrupt_rhs_factor: float = Field(1.0, gt=0)

    @property
    def quadrature(self) -> QuadratureSpec:
        return QuadratureSpec(method=self.quad_method, abs_tol=self.abs_tol, grid_size=self.grid_size)

    @staticmethod
    def from_app_config(config: AppConfig) -> 'SuiteConfig':
        h = config.harness
        q = config.quadrature
        return SuiteConfig(
            seed=h.seed,
            workers=h.workers,
            include_timing=h.include_timing,
            identity_tol=h.identity_tol,
            inequality_tol=h.inequality_tol,
            search_budget=h.search_budget,
            quad_method=q.method,
            abs_tol=q.abs_tol,
            grid_size=q.grid_size,
            checks=CheckCounts(main_theorem=h.instances, balitskiy=h.instances, pdist_diam=h.instances,
                               key_lemma=max(1, h.instances // 2)),
        )
