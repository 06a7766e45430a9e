from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing import Dict, FrozenSet, List, Optional, Tuple
from enum import Enum

from app.models.schemas import (
    BipartiteGraph,
    Digraph,
    DirectedTwoFactor,
    Graph,
    Matching,
    MCycle,
    MTwoFactor,
    Node,
)
from app.utils.config import settings


class TheoremId(str, Enum):
    ORE = "ore"
    BRANDT_ET_AL = "brandt_et_al"
    WOODALL = "woodall"
    DIRECTED_K_CYCLES = "directed_k_cycles"
    SHORT_CYCLE_PACKING = "short_cycle_packing"
    ALTERNATING_K_CYCLES = "alternating_k_cycles"
    LAS_VERGNAS = "las_vergnas"
    SIGMA2_DISJOINT_CYCLES = "sigma2_disjoint_cycles"

class PackStatus(str, Enum):
    SUCCESS = "success"
    STALLED = "stalled"
    HYPOTHESIS_UNMET = "hypothesis-unmet"

class PackMove(str, Enum):
    DIRECT = "m1-direct"
    SHRINK = "m2-shrink"
    PATH_PAIR = "m3-path-pair"
    EXACT = "exact"

class CrossingVariant(str, Enum):
    SMALL_OR_HAMILTONIAN = "small-or-hamiltonian"
    TWO_FACTOR_ABSORB = "two-factor-absorb"
    HIGH_OUTSIDE_DEGREE = "high-outside-degree"
    INCONCLUSIVE = "inconclusive"

class SolveStatus(str, Enum):
    SOLVED = "solved"
    HYPOTHESIS_UNMET = "hypothesis-unmet"
    FALLBACK_EXHAUSTED = "fallback-exhausted"

class SolveStage(str, Enum):
    CONSTRUCTIVE = "constructive"
    EXACT = "exact"

class OracleStatus(str, Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    BUDGET = "budget"

class ExploreMode(str, Enum):
    PROBLEM1 = "problem1"
    BERMOND_THOMASSEN = "bermond_thomassen"
    SIGMA2_DISJOINT = "sigma2_disjoint"

class GenFamily(str, Enum):
    SHARPNESS_DEGREE = "sharpness_degree"
    SHARPNESS_ORDER = "sharpness_order"
    RANDOM_WOODALL = "random_woodall"
    RANDOM_LASVERGNAS = "random_lasvergnas"
    COMPLETE = "complete"
    DIRECTED_CYCLE = "directed_cycle"

class InstanceKind(str, Enum):
    DIGRAPH = "digraph"
    BIPARTITE = "bipartite"
    GRAPH = "graph"


class Violation(BaseModel):
    rule: str
    detail: str


class VerificationReport(BaseModel):
    """Outcome of checking a candidate solution"""
    passed: bool
    violations: List[Violation] = []

    @model_validator(mode="after")
    def _passed_iff_clean(self) -> "VerificationReport":
        if self.passed != (not self.violations):
            raise ValueError("passed must hold exactly when there are no violations")
        return self

    @classmethod
    def from_violations(cls, violations: List[Violation]) -> "VerificationReport":
        return cls(passed=not violations, violations=violations)

    def rules(self) -> List[str]:
        return [v.rule for v in self.violations]


class ConditionReport(BaseModel):
    """A degree quantity against its threshold; unbounded stands for +infinity"""
    name: str
    value: Optional[int] = None
    unbounded: bool = False
    threshold: int
    satisfied: bool
    witness: Optional[Tuple[int, int]] = None

    @model_validator(mode="after")
    def _consistent(self) -> "ConditionReport":
        if self.unbounded != (self.value is None):
            raise ValueError("value is absent exactly when the quantity is unbounded")
        expected = self.unbounded or self.value >= self.threshold
        if self.satisfied != expected:
            raise ValueError("satisfied must equal value >= threshold")
        return self

    @classmethod
    def of(cls, name: str, value: Optional[int], threshold: int,
           witness: Optional[Tuple[int, int]] = None) -> "ConditionReport":
        unbounded = value is None
        return cls(
            name=name,
            value=value,
            unbounded=unbounded,
            threshold=threshold,
            satisfied=unbounded or value >= threshold,
            witness=witness,
        )


class Applicability(BaseModel):
    theorem: TheoremId
    hypotheses_met: bool
    missing: List[str] = []


class Packing(BaseModel):
    """Disjoint M-cycles of length 6 or 8 and the uncovered remainder H"""
    model_config = ConfigDict(frozen=True)

    cycles: Tuple[MCycle, ...] = Field(default_factory=tuple)
    remainder: FrozenSet[Node] = Field(default_factory=frozenset)

    @property
    def total_length(self) -> int:
        return sum(c.length for c in self.cycles)


class PackReport(BaseModel):
    achieved: int
    target: int
    moves_log: List[PackMove] = []
    status: PackStatus
    iterations: int = 0


class CrossingOutcome(BaseModel):
    """Self-certifying result of analysing a maximal M-path against the cycles"""
    variant: CrossingVariant
    hamilton_cycle: Optional[MCycle] = None
    absorb_index: Optional[int] = None
    new_cycle: Optional[MCycle] = None  # D0
    grown_cycle: Optional[MCycle] = None  # D_i'
    outside_edges: Optional[int] = None
    outside_order: Optional[int] = None


class SolveOutcome(BaseModel):
    status: SolveStatus
    k: int
    min_len: int
    gate_passed: bool
    factor: Optional[DirectedTwoFactor] = None
    m_factor: Optional[MTwoFactor] = None
    stage: Optional[SolveStage] = None
    proven_infeasible: bool = False
    pack_iterations: int = 0
    absorb_iterations: int = 0
    applicability: List[Applicability] = []
    diagnostics: List[str] = []


class OracleBudget(BaseModel):
    max_vertices: int = Field(default_factory=lambda: settings.oracle_max_vertices, gt=0)
    max_nodes_expanded: int = Field(default_factory=lambda: settings.budget_nodes, gt=0)
    time_limit: float = Field(default_factory=lambda: settings.budget_seconds, gt=0)


class OracleResult(BaseModel):
    status: OracleStatus
    witness: Optional[DirectedTwoFactor] = None
    m_witness: Optional[MTwoFactor] = None
    cycles: Optional[List[Tuple[int, ...]]] = None
    nodes_expanded: int = 0
    elapsed: float = 0.0


class ExploreParams(BaseModel):
    mode: ExploreMode
    n_min: int = Field(ge=2)
    n_max: int = Field(ge=2)
    k: int = Field(ge=1)
    samples: int = Field(ge=0)
    seed: int = Field(default_factory=lambda: settings.default_seed, ge=0)
    workers: int = Field(default_factory=lambda: settings.explore_workers, ge=1)
    budget: OracleBudget = Field(default_factory=OracleBudget)

    @model_validator(mode="after")
    def _check_range(self) -> "ExploreParams":
        if self.n_min > self.n_max:
            raise ValueError(f"empty order range {self.n_min}..{self.n_max}")
        return self


class ExploreReport(BaseModel):
    params: ExploreParams
    samples_run: int = 0
    feasible: int = 0
    budget_hits: int = 0
    skipped: int = 0
    violations: List[Digraph] = []
    by_order: Dict[int, int] = {}


class GenSpec(BaseModel):
    family: GenFamily
    n: Optional[int] = Field(default=None, ge=1)
    k: Optional[int] = Field(default=None, ge=1)
    margin: int = 0
    density: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    seed: int = Field(default_factory=lambda: settings.default_seed, ge=0)


class InstanceFile(BaseModel):
    """Parsed instance: exactly one of digraph / bipartite+matching / graph is set"""
    kind: InstanceKind
    n: int
    digraph: Optional[Digraph] = None
    bipartite: Optional[BipartiteGraph] = None
    matching: Optional[Matching] = None
    graph: Optional[Graph] = None
