"""
Pydantic schemas for group files, job configuration and reports.
"""
from pydantic import BaseModel, Field, field_validator
from typing import Optional, List, Dict, Any, Union

# Bit-exact column order of the assessment CSV
REPORT_COLUMNS = [
    "order_gamma_prime", "order_gamma", "condA", "condB", "h1_adjoint", "h1_trivial",
    "adequate", "tidy", "induced", "split_induced", "abs_irred", "notes",
]

HEIGHTS_COLUMNS = ["X", "count", "constant_times_X2", "ratio"]


class ErrorResponse(BaseModel):
    """Error response schema."""
    error: str
    details: Optional[Dict[str, Any]] = None


class FieldSpec(BaseModel):
    """F_{p^k}."""
    p: int
    k: int = 1


class GroupFile(BaseModel):
    """
    A group given by generators.

    Entries are integers (prime fields) or comma-separated coefficient strings
    such as "1,2" for extension fields.
    """
    label: str = ""
    field: FieldSpec
    ambient: str
    n: int
    generators: List[List[List[Union[int, str]]]]
    form: Optional[List[List[Union[int, str]]]] = None
    experimental: bool = False
    expected: Dict[str, Any] = Field(default_factory=dict)

    @field_validator("generators")
    @classmethod
    def check_square(cls, gens, info):
        n = info.data.get("n")
        for idx, g in enumerate(gens):
            if len(g) != n or any(len(row) != n for row in g):
                raise ValueError(f"generator {idx} is not {n}x{n}")
        return gens


class JobConfig(BaseModel):
    """One CLI invocation."""
    command: str
    inputs: List[str] = Field(default_factory=list)
    seed: int
    max_order: int
    threads: int = 1
    samples: int = 0
    num_gens: int = 2
    report_path: Optional[str] = None
    json_path: Optional[str] = None
    output_dir: Optional[str] = None
    cache_backend: str = "none"
    cache_dir: Optional[str] = None

    @field_validator("max_order", "threads", "num_gens")
    @classmethod
    def check_positive(cls, value):
        if value < 1:
            raise ValueError("caps must be positive")
        return value

    @field_validator("samples")
    @classmethod
    def check_non_negative(cls, value):
        if value < 0:
            raise ValueError("sample count must be non-negative")
        return value


def verdict_text(value: Optional[bool]) -> str:
    if value is None:
        return "INDETERMINATE"
    return "TRUE" if value else "FALSE"


class AdequacyReport(BaseModel):
    """Everything assess computes for one group."""
    label: str = ""
    order_gamma_prime: int
    order_gamma: int
    similitude_surjective: bool
    abs_irred: bool
    condA: Optional[bool]
    condB: Optional[bool]
    span_dim_A: int
    span_dim_B: int
    lie_dim: int
    h0_adjoint_dual: int
    h1_trivial: int
    h1_adjoint: int
    adequate: Optional[bool]
    tidy: bool
    tidy_witness: Optional[str] = None
    induced: bool
    split_induced: bool
    g_irreducible: Optional[bool] = None
    oracle_B: Optional[bool] = None
    self_duality_witness: Optional[List[List[int]]] = None
    fingerprint: Dict[str, Any] = Field(default_factory=dict)
    table_rows: List[str] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)
    seed: int
    version: str

    def csv_row(self) -> List[str]:
        values = {
            "order_gamma_prime": str(self.order_gamma_prime),
            "order_gamma": str(self.order_gamma),
            "condA": verdict_text(self.condA),
            "condB": verdict_text(self.condB),
            "h1_adjoint": str(self.h1_adjoint),
            "h1_trivial": str(self.h1_trivial),
            "adequate": verdict_text(self.adequate),
            "tidy": verdict_text(self.tidy),
            "induced": verdict_text(self.induced),
            "split_induced": verdict_text(self.split_induced),
            "abs_irred": verdict_text(self.abs_irred),
            "notes": ";".join(self.notes),
        }
        return [values[c] for c in REPORT_COLUMNS]


class PrecheckReport(BaseModel):
    """Finite-group data entering the reasonableness condition; a PRECHECK only."""
    kind: str = "PRECHECK"
    condA: Optional[bool]
    h0_adjoint_dual: int
    h1_trivial: int
    passes: Optional[bool]
    obstructions: List[str] = Field(default_factory=list)


class CohomologyReport(BaseModel):
    label: str = ""
    order: int
    module: str
    dim: int
    h0: int
    h1: int
    seed: int
    version: str


class SearchEntry(BaseModel):
    sample: int
    order: Optional[int] = None
    abs_irred: Optional[bool] = None
    condA: Optional[bool] = None
    h0_adjoint_dual: Optional[int] = None
    adequate: Optional[bool] = None
    file: Optional[str] = None
    note: Optional[str] = None


class SearchSummary(BaseModel):
    ambient: str
    seed: int
    samples: int
    num_gens: int
    version: str
    entries: List[SearchEntry] = Field(default_factory=list)


class RootDataReport(BaseModel):
    name: str
    rank: int
    roots: int
    bad_primes: List[int]
    weyl_order: int
    bound: int


class LiftCheckReport(BaseModel):
    seed: int
    trials: int
    ring: str
    properties: Dict[str, Dict[str, int]]
    ok: bool
