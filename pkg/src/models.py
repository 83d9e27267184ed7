"""
Pydantic models for documents and reports
All models in one place for simplicity

Scalars travel as strings of exact integers or fractions ("3", "-1/2"),
never as JSON numbers.
"""
import re
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

SCALAR_PATTERN = re.compile(r"^-?\d+(/\d+)?$")

# ============================================================
# Enums
# ============================================================

class DocumentKind(str, Enum):
    """Document kinds accepted by the CLI"""
    AINFTY = "ainfty"            # Shifted A∞ tables, shifted degrees
    DGA = "dga"                  # Unshifted dg algebra: arity 1 = d, arity 2 = product
    GROUP = "group"
    REPRESENTATION = "representation"
    RING = "ring"
    MORPHISM = "morphism"

class Verdict(str, Enum):
    """Outcome of one suite check"""
    PASS = "pass"
    FAIL = "fail"
    ERROR = "error"

# ============================================================
# Validation Mixins
# ============================================================

def _check_scalar(value: str) -> str:
    if not SCALAR_PATTERN.match(value.strip()):
        raise ValueError(f"Not an exact scalar: {value!r}")
    return value.strip()


class StrictModel(BaseModel):
    """Unknown keys are input errors, not silently dropped"""
    model_config = ConfigDict(extra="forbid", use_enum_values=True)

# ============================================================
# Algebra Documents
# ============================================================

class FieldDescriptor(StrictModel):
    """Prime characteristic p, or 0 for the rationals"""
    characteristic: int = Field(..., ge=0, description="0 for QQ, else a prime")

class BasisEntry(StrictModel):
    name: str = Field(..., min_length=1, max_length=64)
    degree: int
    weight: int = Field(1, ge=1)

class TableEntry(StrictModel):
    """One input word and the linear combination it maps to"""
    inputs: List[str] = Field(..., min_length=1)
    output: Dict[str, str] = Field(default_factory=dict)

    @field_validator("output")
    @classmethod
    def validate_scalars(cls, v: Dict[str, str]) -> Dict[str, str]:
        return {name: _check_scalar(c) for name, c in v.items()}

class OperationTable(StrictModel):
    arity: int = Field(..., ge=1)
    entries: List[TableEntry] = Field(default_factory=list)

    @model_validator(mode="after")
    def validate_lengths(self):
        """Every input word has length = arity"""
        for entry in self.entries:
            if len(entry.inputs) != self.arity:
                raise ValueError(
                    f"Entry {entry.inputs} has {len(entry.inputs)} inputs in an arity-{self.arity} table"
                )
        return self

class AlgebraDocument(StrictModel):
    """A shifted A∞-algebra, or a dg algebra presented in unshifted degrees"""
    kind: DocumentKind = DocumentKind.AINFTY
    label: str = ""
    field: FieldDescriptor
    nilpotency: int = Field(..., ge=2)
    basis: List[BasisEntry] = Field(default_factory=list)
    operations: List[OperationTable] = Field(default_factory=list)

    @field_validator("kind")
    @classmethod
    def validate_kind(cls, v):
        if DocumentKind(v) not in (DocumentKind.AINFTY, DocumentKind.DGA):
            raise ValueError(f"Algebra documents have kind ainfty or dga, got {v}")
        return v

    @model_validator(mode="after")
    def validate_basis(self):
        """Unique names, weights in 1..N-1, tables only mention basis names"""
        names = [b.name for b in self.basis]
        if len(set(names)) != len(names):
            raise ValueError("Duplicate basis names")
        for b in self.basis:
            if b.weight > self.nilpotency - 1:
                raise ValueError(f"Weight {b.weight} of {b.name!r} outside 1..{self.nilpotency - 1}")
        known = set(names)
        arities = [t.arity for t in self.operations]
        if len(set(arities)) != len(arities):
            raise ValueError("Two tables for the same arity")
        for table in self.operations:
            for entry in table.entries:
                unknown = (set(entry.inputs) | set(entry.output)) - known
                if unknown:
                    raise ValueError(f"Unknown basis names {sorted(unknown)} in arity-{table.arity} table")
        if DocumentKind(self.kind) == DocumentKind.DGA and any(a > 2 for a in arities):
            raise ValueError("dg algebra documents carry only arity 1 (d) and arity 2 (product)")
        return self

class MorphismDocument(StrictModel):
    """An ∞-morphism with its source and target embedded"""
    kind: DocumentKind = DocumentKind.MORPHISM
    source: AlgebraDocument
    target: AlgebraDocument
    components: List[OperationTable] = Field(default_factory=list)

# ============================================================
# Group Documents
# ============================================================

class GroupDocument(StrictModel):
    kind: DocumentKind = DocumentKind.GROUP
    elements: List[str] = Field(..., min_length=1)
    table: List[List[str]]
    identity: Optional[str] = None

    @model_validator(mode="after")
    def validate_table(self):
        """Square table over the element names"""
        known = set(self.elements)
        if len(known) != len(self.elements):
            raise ValueError("Duplicate group element names")
        if len(self.table) != len(self.elements) or any(len(row) != len(self.elements) for row in self.table):
            raise ValueError("Cayley table is not square")
        for row in self.table:
            unknown = set(row) - known
            if unknown:
                raise ValueError(f"Unknown group elements {sorted(unknown)} in the table")
        if self.identity is not None and self.identity not in known:
            raise ValueError(f"Identity {self.identity!r} is not an element")
        return self

class RepresentationDocument(StrictModel):
    kind: DocumentKind = DocumentKind.REPRESENTATION
    field: FieldDescriptor
    matrices: Dict[str, List[List[str]]]

    @field_validator("matrices")
    @classmethod
    def validate_matrices(cls, v: Dict[str, List[List[str]]]) -> Dict[str, List[List[str]]]:
        """Square matrices of exact scalars, all the same size"""
        sizes = set()
        for element, rows in v.items():
            if any(len(row) != len(rows) for row in rows):
                raise ValueError(f"Matrix of {element!r} is not square")
            sizes.add(len(rows))
            for row in rows:
                for c in row:
                    _check_scalar(c)
        if len(sizes) > 1:
            raise ValueError("Matrices have different sizes")
        return v

class RingDocument(StrictModel):
    """𝔽[t]/(tᴺ)"""
    kind: DocumentKind = DocumentKind.RING
    field: FieldDescriptor
    order: int = Field(..., ge=2)

# ============================================================
# Reports
# ============================================================

class InstanceDescriptor(BaseModel):
    """Where a suite instance came from"""
    name: str
    generator: str
    seed: Optional[int] = None
    parameters: Dict[str, Any] = Field(default_factory=dict)

class CheckVerdict(BaseModel):
    check: str
    instance: str
    verdict: Verdict
    details: Dict[str, Any] = Field(default_factory=dict)
    reproducer: Optional[Dict[str, Any]] = None

    model_config = ConfigDict(use_enum_values=True)

class VerificationReport(BaseModel):
    suite: str
    seed: int
    app_version: str
    instances: List[InstanceDescriptor] = Field(default_factory=list)
    checks: List[CheckVerdict] = Field(default_factory=list)
    duration_seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.verdict == Verdict.PASS.value for c in self.checks)

    def summary(self) -> Dict[str, int]:
        counts = {v.value: 0 for v in Verdict}
        for c in self.checks:
            counts[c.verdict] += 1
        return counts

class CommandResult(BaseModel):
    """Envelope printed on stdout by every command"""
    command: str
    ok: bool
    result: Dict[str, Any] = Field(default_factory=dict)
    error: Optional[Dict[str, Any]] = None
