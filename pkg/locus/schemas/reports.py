from fractions import Fraction
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field


class Rational(BaseModel):
    num: int
    den: int
    value: float

    @classmethod
    def of(cls, x) -> "Rational":
        x = Fraction(x)
        return cls(num=x.numerator, den=x.denominator, value=float(x))


def rational(x) -> Optional[Rational]:
    return None if x is None else Rational.of(x)


class ReportRecord(BaseModel):
    """One JSON line of a report."""
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(1, serialization_alias="schema")
    kind: str

    def to_line(self) -> str:
        return self.model_dump_json(by_alias=True)


class SelftestRecord(ReportRecord):
    kind: str = "selftest"
    suite: str
    t: int
    cases: int
    passed: bool


class EvalRecord(ReportRecord):
    kind: str = "eval"
    label: str
    mode: str
    completeness: Optional[Rational] = None
    soundness: Optional[Rational] = None
    estimate: Optional[float] = None  # Monte Carlo soundness estimate
    half_width: Optional[float] = None
    q_max: int
    trials: int = 0
    seed: int = 0
    witness: Optional[dict] = None


class ExtractionRecord(ReportRecord):
    kind: str = "extract"
    target: str
    heavy: List[int]
    p_good: Rational
    flagged: bool


class CertificateRecord(ReportRecord):
    kind: str = "certificate"
    label: str  # measured | a_priori | smooth
    q: int
    radius: Rational
    completeness: Rational
    soundness: Rational
    verified_error: Optional[Rational] = None


class FoolingRecord(ReportRecord):
    kind: str = "fool"
    target: str
    Q: List[int]
    H: List[int]
    L: List[int]
    sigma: int
    quotient: int
    exact: Optional[Rational] = None
    lower_bound: Rational
    headline_bound: Rational  # |F|^{-min(|H|,|L|)}


class AttackWitnessRecord(ReportRecord):
    kind: str = "attack_witness"
    target: str
    Q: List[List[int]]
    H: List[int]
    L: List[int]
    y: Optional[List[int]] = None
    exact_error: Rational
    mean_error: Rational
    bound: Rational
    bad_mass: Rational
    no_attack: bool = False


class GoldbergStageRecord(ReportRecord):
    kind: str = "goldberg_stage"
    toy: int
    stage: str
    completeness: Rational
    soundness: Rational
    toxic_rate: Optional[Rational] = None
    q_max: int
    certified: Optional[Rational] = None


class ReductionRecord(ReportRecord):
    kind: str = "reduction"
    mode: str
    X: List[str]
    k: int
    k_prime: int
    radius: Rational
    soundness: Rational
    measured: Optional[Rational] = None  # exact error of the reduced decoder at the radius
    class_mass: Dict[str, Dict[str, Rational]]


class LinecodeRecord(ReportRecord):
    kind: str = "linecode"
    op: str
    t: int
    n: int
    d: int
    num_lines: int
    N: int
    message_bits: int
    r1: Optional[int] = None
    r2: Optional[int] = None
    reuse: Optional[bool] = None
    rho: Optional[float] = None
    trials: int = 0
    seed: int = 0
    queries: Optional[int] = None
    query_formula: Optional[int] = None
    rlcc_formula: Optional[int] = None
    error_rate: Optional[float] = None
    bottom_rate: Optional[float] = None
    half_width: Optional[float] = None
    predicted_bottom: Optional[Rational] = None
    value: Optional[float] = None  # eta envelope or exact fact value


class ErasureRecord(ReportRecord):
    kind: str = "erasure"
    t: int
    n: int
    d: int
    decoder_name: str
    mode: str
    success: Optional[Rational] = None
    estimate: Optional[float] = None
    half_width: Optional[float] = None
    erased_fraction: Rational
    coset_checked: Optional[int] = None
    coset_ok: Optional[bool] = None


class RepeatRecord(ReportRecord):
    kind: str = "repeat"
    repetitions: int
    base_soundness: Rational
    soundness: Rational
    expected: Rational
    estimate: Optional[float] = None
    half_width: Optional[float] = None


class MatchingRecord(ReportRecord):
    kind: str = "matching"
    target: str
    size: int
    weight: int
    worst_error: Rational
    bound: Rational


class BlrRecord(ReportRecord):
    kind: str = "blr"
    bits: int
    distance: Rational
    tables: int
    min_rejection: Rational
    max_self_correct_error: Rational
