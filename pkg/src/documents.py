"""
JSON documents ↔ engine structures

Parsing goes text → pydantic model → structure, so malformed input fails
with a positional DocumentParseError before any mathematics runs, and
structural failures (filtration, Stasheff, group axioms) surface as the
InvariantViolation raised by the constructors. Serialization is canonical:
basis in carrier order, entries sorted by input word, outputs by index.
"""
import json
from pathlib import Path
from typing import Any, Mapping, Optional, Union

from pydantic import BaseModel, ValidationError

from .ainfty import DGAlgebraPresentation, InftyMorphism, ShiftedAInftyAlgebra
from .defrep import ArtinLocalRing, FiniteGroup, Representation
from .exceptions import DocumentParseError, UnsupportedDocumentError
from .linalg import BasisVector, FilteredGradedSpace, Vector, get_field
from .logging_config import get_logger
from .models import (
    AlgebraDocument,
    BasisEntry,
    DocumentKind,
    FieldDescriptor,
    GroupDocument,
    MorphismDocument,
    OperationTable,
    RepresentationDocument,
    RingDocument,
    TableEntry,
)
from .multilinear import MultilinearMap, Word

logger = get_logger(__name__)

Document = Union[AlgebraDocument, MorphismDocument, GroupDocument, RepresentationDocument, RingDocument]

_MODELS: dict[str, type[BaseModel]] = {
    DocumentKind.AINFTY.value: AlgebraDocument,
    DocumentKind.DGA.value: AlgebraDocument,
    DocumentKind.MORPHISM.value: MorphismDocument,
    DocumentKind.GROUP.value: GroupDocument,
    DocumentKind.REPRESENTATION.value: RepresentationDocument,
    DocumentKind.RING.value: RingDocument,
}

# ============================================================
# Text ↔ Models
# ============================================================

def parse_document(text: str, expected: Optional[list[str]] = None) -> Document:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentParseError(e.msg, {"line": e.lineno, "column": e.colno}) from None
    if not isinstance(raw, dict):
        raise DocumentParseError("Document must be a JSON object", {"path": []})
    kind = raw.get("kind", DocumentKind.AINFTY.value)
    model = _MODELS.get(kind)
    if model is None:
        raise UnsupportedDocumentError(str(kind), sorted(_MODELS))
    if expected is not None and kind not in expected:
        raise UnsupportedDocumentError(str(kind), expected)
    try:
        return model.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        raise DocumentParseError(
            f"{first['msg']}",
            {"path": [str(p) for p in first["loc"]], "errors": len(e.errors())}
        ) from None


def load_document(path: Union[str, Path], expected: Optional[list[str]] = None) -> Document:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise DocumentParseError(f"Cannot read {path}: {e.strerror}", {"file": str(path)}) from None
    return parse_document(text, expected)


def serialize(document: BaseModel) -> str:
    """Canonical text; serialize(parse(serialize(d))) == serialize(d)"""
    return json.dumps(document.model_dump(mode="json"), indent=2, ensure_ascii=False) + "\n"

# ============================================================
# Algebras
# ============================================================

def _space(document: AlgebraDocument, degree_shift: int = 0) -> FilteredGradedSpace:
    field = get_field(document.field.characteristic)
    basis = [BasisVector(b.name, b.degree + degree_shift, b.weight) for b in document.basis]
    return FilteredGradedSpace(field, basis, document.nilpotency)


def _tables(space: FilteredGradedSpace, tables: list[OperationTable]) -> dict[int, dict[Word, Vector]]:
    result: dict[int, dict[Word, Vector]] = {}
    for table in tables:
        entries: dict[Word, Vector] = {}
        for entry in table.entries:
            word = tuple(space.index(name) for name in entry.inputs)
            if word in entries:
                raise DocumentParseError(
                    f"Repeated entry {entry.inputs} in the arity-{table.arity} table",
                    {"arity": table.arity, "inputs": entry.inputs}
                )
            entries[word] = space.parse_vector(entry.output)
        result[table.arity] = entries
    return result


def dga_from_document(document: AlgebraDocument) -> DGAlgebraPresentation:
    if document.kind != DocumentKind.DGA.value:
        raise UnsupportedDocumentError(document.kind, [DocumentKind.DGA.value])
    space = _space(document)
    tables = _tables(space, document.operations)
    differential = {word[0]: v for word, v in tables.get(1, {}).items()}
    product = {(word[0], word[1]): v for word, v in tables.get(2, {}).items()}
    return DGAlgebraPresentation(space, differential, product, label=document.label)


def algebra_from_document(document: AlgebraDocument) -> ShiftedAInftyAlgebra:
    """dg algebra documents are shifted on load"""
    if document.kind == DocumentKind.DGA.value:
        return dga_from_document(document).shifted
    space = _space(document)
    return ShiftedAInftyAlgebra(space, _tables(space, document.operations), label=document.label)


def table_models(space: FilteredGradedSpace, tables: Mapping[int, Mapping[Word, Vector]]) -> list[OperationTable]:
    result = []
    for arity in sorted(tables):
        entries = [
            TableEntry(inputs=[space.names[i] for i in word], output=space.format_vector(value))
            for word, value in sorted(tables[arity].items())
            if value
        ]
        if entries:
            result.append(OperationTable(arity=arity, entries=entries))
    return result


def _basis_models(space: FilteredGradedSpace, degree_shift: int = 0) -> list[BasisEntry]:
    return [BasisEntry(name=b.name, degree=b.degree + degree_shift, weight=b.weight) for b in space.basis]


def algebra_to_document(A: ShiftedAInftyAlgebra) -> AlgebraDocument:
    return AlgebraDocument(
        kind=DocumentKind.AINFTY,
        label=A.label,
        field=FieldDescriptor(characteristic=A.field.characteristic),
        nilpotency=A.nilpotency,
        basis=_basis_models(A.space),
        operations=table_models(A.space, {k: op.table for k, op in A.operations.items()}),
    )


def dga_to_document(C: DGAlgebraPresentation) -> AlgebraDocument:
    tables: dict[int, dict[Word, Vector]] = {
        1: {(i,): v for i, v in C.differential.items()},
        2: dict(C.product.items()),
    }
    return AlgebraDocument(
        kind=DocumentKind.DGA,
        label=C.label,
        field=FieldDescriptor(characteristic=C.field.characteristic),
        nilpotency=C.space.nilpotency,
        basis=_basis_models(C.space),
        operations=table_models(C.space, tables),
    )

# ============================================================
# Morphisms
# ============================================================

def morphism_from_document(document: MorphismDocument) -> InftyMorphism:
    source = algebra_from_document(document.source)
    target = algebra_from_document(document.target)
    components: dict[int, MultilinearMap] = {}
    for table in document.components:
        entries: dict[Word, Vector] = {}
        for entry in table.entries:
            word = tuple(source.space.index(name) for name in entry.inputs)
            entries[word] = target.space.parse_vector(entry.output)
        components[table.arity] = MultilinearMap(source.space, target.space, table.arity, entries, 0)
    return InftyMorphism(source, target, components)


def morphism_to_document(phi: InftyMorphism) -> MorphismDocument:
    source, target = phi.source.space, phi.target.space
    components = []
    for arity in sorted(phi.components):
        entries = [
            TableEntry(inputs=[source.names[i] for i in word], output=target.format_vector(value))
            for word, value in sorted(phi.components[arity].table.items())
        ]
        components.append(OperationTable(arity=arity, entries=entries))
    return MorphismDocument(
        source=algebra_to_document(phi.source),
        target=algebra_to_document(phi.target),
        components=components,
    )

# ============================================================
# Groups, Representations, Rings
# ============================================================

def group_from_document(document: GroupDocument) -> FiniteGroup:
    index = {name: k for k, name in enumerate(document.elements)}
    table = [[index[name] for name in row] for row in document.table]
    identity = index[document.identity] if document.identity is not None else 0
    return FiniteGroup(document.elements, table, identity)


def group_to_document(G: FiniteGroup) -> GroupDocument:
    return GroupDocument(
        elements=list(G.elements),
        table=[[G.elements[x] for x in row] for row in G.table],
        identity=G.elements[G.identity],
    )


def representation_from_document(document: RepresentationDocument, group: FiniteGroup) -> Representation:
    missing = set(group.elements) - set(document.matrices)
    extra = set(document.matrices) - set(group.elements)
    if missing or extra:
        raise DocumentParseError(
            "Representation matrices do not match the group elements",
            {"missing": sorted(missing), "unknown": sorted(extra)}
        )
    field = get_field(document.field.characteristic)
    matrices = [[[field(c) for c in row] for row in document.matrices[g]] for g in group.elements]
    return Representation(group, field, matrices)


def representation_to_document(rho: Representation) -> RepresentationDocument:
    field = rho.field
    return RepresentationDocument(
        field=FieldDescriptor(characteristic=field.characteristic),
        matrices={
            rho.group.elements[g]: [[field.format(c) for c in row] for row in rho.entries[g]]
            for g in range(rho.group.order)
        },
    )


def ring_from_document(document: RingDocument) -> ArtinLocalRing:
    return ArtinLocalRing(get_field(document.field.characteristic), document.order)

# ============================================================
# Vectors on the Command Line
# ============================================================

def parse_vector_argument(space: FilteredGradedSpace, text: Optional[str]) -> Vector:
    """'name=c,name=c' or a JSON object {name: c}; empty means zero"""
    if not text:
        return {}
    body = text.strip()
    if body.startswith("{"):
        try:
            entries: Any = json.loads(body)
        except json.JSONDecodeError as e:
            raise DocumentParseError(e.msg, {"argument": text, "column": e.colno}) from None
    else:
        entries = {}
        for part in body.split(","):
            name, sep, value = part.partition("=")
            if not sep:
                raise DocumentParseError(f"Expected name=value, got {part!r}", {"argument": text})
            entries[name.strip()] = value.strip()
    return space.parse_vector({str(k): str(v) for k, v in entries.items()})
