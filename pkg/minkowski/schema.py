import typing as t
from pydantic import BaseModel, ConfigDict, Field


class BodyDescription(BaseModel):
    model_config = ConfigDict(extra='forbid')

    dim: t.Literal[2, 3]
    semi_axes: t.List[float] = Field(..., description="(a, b) in 2D or (a, b, c) in 3D")
    exponents: t.List[float] = Field(..., description="(eps,) in 2D or (eps1, eps2) in 3D")
    M: t.Optional[t.List[t.List[float]]] = Field(
        None, description="Linear map applied to the canonical body (identity if omitted)")
    center: t.Optional[t.List[float]] = Field(
        None, description="World-frame center (origin if omitted)")


class SceneDescription(BaseModel):
    model_config = ConfigDict(extra='forbid')

    robot: BodyDescription
    obstacles: t.List[BodyDescription] = Field(..., min_length=1)


class PointCloudData(BaseModel):
    dim: t.Literal[2, 3]
    mode: t.Literal['contact', 'sum']
    params: t.List[t.List[float]]
    points: t.List[t.List[float]]


class KissingReportData(BaseModel):
    mean_implicit: float
    max_implicit: float
    mean_gradient: float
    max_gradient: float
    n_points: int


class ValidationData(BaseModel):
    kissing: KissingReportData
    support_violation: float
    passed: bool
    thresholds: t.Dict[str, float]


class ProximityData(BaseModel):
    status: t.Literal['separated', 'touching', 'penetrating', 'inconclusive']
    method: t.Literal['ray', 'normal', 'common']
    distance: t.Optional[float]
    witness1: t.Optional[t.List[float]]
    witness2: t.Optional[t.List[float]]
    phi1: t.Optional[t.List[float]]
    ray_ratio: t.Optional[float]
    iterations: int
    residual_norm: t.Optional[float]


class RunManifestData(BaseModel):
    id: t.Optional[int] = None
    command: str
    seed: t.Optional[int]
    config: t.Dict[str, t.Any]
    stage_times: t.Dict[str, float]
    output_files: t.List[str]
    failures: t.List[t.Dict[str, t.Any]] = []
    created_at: str


class RunsListData(BaseModel):
    runs: t.List[RunManifestData]
    has_next: bool
    has_previous: bool
    current_page: int
    total_pages: int


class AboutData(BaseModel):
    name: str
    description: str
    features: t.List[str]
    version: str


class AboutResponse(BaseModel):
    about: AboutData
