import json
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PlainSerializer,
    computed_field,
    field_validator,
    model_validator,
)

from fqcover_cli.base import SCHEMA_VERSION, VERSION
from fqcover_cli.errors import BoundViolated, IdentityViolated

FLOAT_EXACT_LIMIT = 2**53


def _big_int(value: int):
    return str(value) if abs(value) >= FLOAT_EXACT_LIMIT else value


# integers that may outgrow a double are written as decimal strings
BigInt = Annotated[int, PlainSerializer(_big_int, when_used="json")]
# inequality witnesses are always written as decimal strings
ExactInt = Annotated[int, PlainSerializer(str, return_type=str, when_used="json")]

Check = Literal[
    "cover", "remainder", "keylowerbound", "identities", "second_moment", "bilinear"
]
ALL_CHECKS: Tuple[str, ...] = (
    "cover",
    "remainder",
    "keylowerbound",
    "identities",
    "second_moment",
    "bilinear",
)


class FieldDescriptor(BaseModel):
    p: int
    n: int
    q: int
    modulus: List[int]


class RemainderEntry(BaseModel):
    t: int
    nu: BigInt
    r_numerator: BigInt
    holds: bool


class RemainderReport(BaseModel):
    field: FieldDescriptor
    d: int
    size: int
    entries: List[RemainderEntry]
    sharpness: float
    zero_ratio: float
    violations: List[int] = []

    @computed_field  # type: ignore[misc]
    @property
    def holds(self) -> bool:
        return len(self.violations) == 0

    def raise_for_violation(self):
        if self.violations:
            t = self.violations[0]
            raise BoundViolated(f"Remainder bound violated at t={t}", t=t)


class IdentityReport(BaseModel):
    name: str
    max_error: float
    tolerance: float

    @computed_field  # type: ignore[misc]
    @property
    def holds(self) -> bool:
        return self.max_error <= self.tolerance

    def raise_for_violation(self):
        if not self.holds:
            raise IdentityViolated(
                f"{self.name}: error {self.max_error:.3e} exceeds {self.tolerance:.3e}"
            )


class SecondMomentReport(BaseModel):
    size: int
    max_line: int
    dot_set_size: int
    sum_nu_squared: ExactInt
    lhs: ExactInt
    rhs: ExactInt
    plane_bound: ExactInt
    cauchy_schwarz_lhs: ExactInt
    cauchy_schwarz_rhs: ExactInt

    @computed_field  # type: ignore[misc]
    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    @computed_field  # type: ignore[misc]
    @property
    def plane_bound_holds(self) -> bool:
        return self.sum_nu_squared <= self.plane_bound

    @computed_field  # type: ignore[misc]
    @property
    def cauchy_schwarz_holds(self) -> bool:
        return self.cauchy_schwarz_lhs <= self.cauchy_schwarz_rhs

    def raise_for_violation(self):
        if not self.holds:
            raise BoundViolated(f"Second moment bound violated: {self.lhs} > {self.rhs}")
        if not self.plane_bound_holds:
            raise BoundViolated(
                f"Hyperplane bound violated: {self.sum_nu_squared} > {self.plane_bound}"
            )
        if not self.cauchy_schwarz_holds:
            raise BoundViolated(
                "Cauchy-Schwarz bound violated: "
                f"{self.cauchy_schwarz_lhs} > {self.cauchy_schwarz_rhs}"
            )


class CoverageVerdict(BaseModel):
    field: FieldDescriptor
    d: int
    source_size: int
    set_size: int
    covers_units: bool
    missing: List[int]
    missing_count: int
    zero_covered: bool
    threshold_met: bool
    witness_lhs: ExactInt
    witness_rhs: ExactInt
    origin_stripped: bool = False
    max_line: Optional[int] = None
    density_ratio: Optional[float] = None
    measured_ratio: Optional[float] = None
    c_size: Optional[float] = None
    implied_proportion: Optional[float] = None
    empirical_constant: Optional[float] = None
    # the witness is a threshold (lhs > rhs implies coverage), not a lower bound
    threshold_witness: bool = False

    @computed_field  # type: ignore[misc]
    @property
    def holds(self) -> bool:
        if self.threshold_witness:
            return self.covers_units or not self.threshold_met
        return self.witness_lhs >= self.witness_rhs

    def raise_for_violation(self):
        if self.holds:
            return
        if self.threshold_witness:
            raise BoundViolated(
                f"Threshold met ({self.witness_lhs} > {self.witness_rhs}) without coverage"
            )
        raise BoundViolated(f"Lower bound violated: {self.witness_lhs} < {self.witness_rhs}")


class ExperimentSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    p: int
    n: int = 1
    d: int = 2
    mode: Literal["exhaustive", "sample", "structured"] = "sample"
    sizes: Optional[Tuple[int, int]] = None
    samples: int = 100
    seed: BigInt = 0
    checks: Tuple[Check, ...] = ("cover",)

    @field_validator("d")
    @classmethod
    def validate_d(cls, value: int) -> int:
        if value < 1:
            raise ValueError("d must be at least 1")
        return value

    @field_validator("samples")
    @classmethod
    def validate_samples(cls, value: int) -> int:
        if value < 0:
            raise ValueError("samples must be non-negative")
        return value

    @field_validator("seed")
    @classmethod
    def validate_seed(cls, value: int) -> int:
        if not 0 <= value < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        return value

    @model_validator(mode="after")
    def validate_sizes(self):
        if self.sizes is not None:
            lo, hi = self.sizes
            if lo < 0 or lo > hi:
                raise ValueError(f"Bad size range {lo}..{hi}")
        return self


class CheckTally(BaseModel):
    passed: int = 0
    failed: int = 0

    def merge(self, other: "CheckTally") -> "CheckTally":
        return CheckTally(
            passed=self.passed + other.passed, failed=self.failed + other.failed
        )


class Counterexample(BaseModel):
    check: str
    size: int
    elements: List[int]
    detail: str = ""

    def sort_key(self):
        return (self.check, self.size, self.elements, self.detail)


class RunReport(BaseModel):
    schema_version: int = Field(SCHEMA_VERSION, serialization_alias="schema")
    command: str
    version: str = VERSION
    spec: Optional[ExperimentSpec] = None
    field: Optional[FieldDescriptor] = None
    tallies: Dict[str, CheckTally] = {}
    sharpness: Dict[str, float] = {}
    counterexamples: List[Counterexample] = []
    results: Dict[str, Any] = {}
    wall_clock: float = Field(0.0, exclude=True)

    @property
    def exit_code(self) -> int:
        return 2 if self.counterexamples else 0

    def to_json(self) -> str:
        data = self.model_dump(mode="json", by_alias=True)
        return json.dumps(data, sort_keys=True, indent=2) + "\n"
