"""
Custom exceptions for the engine
Each error carries a machine-readable code, a details dict and a CLI exit code
"""
from typing import Any, Optional


class EngineError(Exception):
    """Base exception for all engine errors"""

    exit_code = 1

    def __init__(
        self,
        message: str,
        error_code: Optional[str] = None,
        details: Optional[dict] = None
    ):
        self.message = message
        self.error_code = error_code or self.__class__.__name__
        self.details = details or {}
        super().__init__(self.message)

    def to_dict(self) -> dict:
        """Convert exception to dictionary for CLI output and reports"""
        return {
            "error": self.error_code,
            "message": self.message,
            "details": self.details
        }

# ============================================================
# Input Exceptions (exit code 2)
# ============================================================

class InputError(EngineError):
    """Malformed or unsupported input"""

    exit_code = 2


class DocumentParseError(InputError):
    """Document could not be parsed"""

    def __init__(self, message: str, location: Optional[dict] = None):
        super().__init__(
            message=message,
            error_code="DOCUMENT_PARSE_ERROR",
            details={"location": location or {}}
        )


class UnsupportedDocumentError(InputError):
    """Document kind not accepted by the requested command"""

    def __init__(self, kind: str, expected: list[str]):
        super().__init__(
            message=f"Document kind '{kind}' not accepted here (expected {', '.join(expected)})",
            error_code="UNSUPPORTED_DOCUMENT",
            details={"kind": kind, "expected": expected}
        )

# ============================================================
# Invariant Violations
# ============================================================

class InvariantViolation(EngineError):
    """A structure failed one of its defining identities"""

    def __init__(self, invariant: str, message: str, details: Optional[dict] = None):
        super().__init__(
            message=message,
            error_code="INVARIANT_VIOLATION",
            details={"invariant": invariant, **(details or {})}
        )
        self.invariant = invariant


class FiltrationError(InvariantViolation):
    """Weight outside 1..N-1 or an operation lowering weight"""

    def __init__(self, message: str, details: Optional[dict] = None):
        super().__init__("filtration-compatibility", message, details)


class DegreeError(InvariantViolation):
    """Element or table entry in the wrong degree"""

    def __init__(self, message: str, details: Optional[dict] = None):
        super().__init__("degree-homogeneity", message, details)


class StasheffError(InvariantViolation):
    """Σ Q¹ₖ Qᵏₙ ≠ 0 on some word"""

    def __init__(self, arity: int, word: tuple, details: Optional[dict] = None):
        super().__init__(
            "stasheff",
            f"Stasheff identity fails in arity {arity} on {word}",
            {"arity": arity, "word": list(word), **(details or {})}
        )


class MorphismError(InvariantViolation):
    """∞-morphism identity fails"""

    def __init__(self, arity: int, word: tuple, details: Optional[dict] = None):
        super().__init__(
            "infinity-morphism",
            f"Morphism identity fails in arity {arity} on {word}",
            {"arity": arity, "word": list(word), **(details or {})}
        )


class NotAComplexError(InvariantViolation):
    """d∘d ≠ 0"""

    def __init__(self, message: str = "Differential does not square to zero"):
        super().__init__("d-squared-zero", message)


class NotAChainMapError(InvariantViolation):
    """f∘d ≠ d′∘f"""

    def __init__(self, message: str = "Map does not commute with the differentials"):
        super().__init__("chain-map", message)


class DGAlgebraError(InvariantViolation):
    """Associativity, Leibniz or unit law fails"""

    def __init__(self, law: str, message: str, details: Optional[dict] = None):
        super().__init__(law, message, details)


class GroupAxiomError(InvariantViolation):
    """Group or representation axiom fails"""

    def __init__(self, axiom: str, message: str):
        super().__init__(axiom, message)


class NotMaurerCartanError(InvariantViolation):
    """Element with nonzero curvature used where an MC element is required"""

    def __init__(self, message: str = "Element is not Maurer-Cartan", details: Optional[dict] = None):
        super().__init__("maurer-cartan", message, details)


class KanViolation(InvariantViolation):
    """Homotopy relation on spherical simplices is not an equivalence relation"""

    def __init__(self, message: str, details: Optional[dict] = None):
        super().__init__("kan-property", message, details)

# ============================================================
# Operation Refusals
# ============================================================

class NotAFibrationError(EngineError):
    """Tangent map is not surjective at some filtration level"""

    def __init__(self, message: str = "Morphism is not a fibration"):
        super().__init__(message=message, error_code="NOT_A_FIBRATION")


class NotAcyclicFibrationError(EngineError):
    """Tangent map is not an acyclic fibration"""

    def __init__(self, message: str = "Morphism is not an acyclic fibration"):
        super().__init__(message=message, error_code="NOT_ACYCLIC_FIBRATION")


class NotStrictError(EngineError):
    """Higher components present where a strict morphism is required"""

    def __init__(self, message: str = "Morphism is not strict"):
        super().__init__(message=message, error_code="NOT_STRICT")


class CharacteristicError(EngineError):
    """Operation defined only in characteristic zero"""

    def __init__(self, characteristic: int):
        super().__init__(
            message=f"Operation requires characteristic 0, got {characteristic}",
            error_code="CHARACTERISTIC",
            details={"characteristic": characteristic}
        )


class FiniteFieldRequiredError(EngineError):
    """Enumeration requested over an infinite field"""

    def __init__(self, operation: str):
        super().__init__(
            message=f"{operation} enumerates elements and requires a finite ground field",
            error_code="FINITE_FIELD_REQUIRED",
            details={"operation": operation}
        )


class NonSphericalError(EngineError):
    """Simplex with a nonzero face where a spherical simplex is required"""

    def __init__(self, face: int):
        super().__init__(
            message=f"Simplex is not spherical: face {face} is nonzero",
            error_code="NON_SPHERICAL",
            details={"face": face}
        )


class TransferError(EngineError):
    """Contraction data for homotopy transfer cannot be built"""

    def __init__(self, message: str):
        super().__init__(message=message, error_code="TRANSFER")


class ArityError(EngineError):
    """Arity outside the admissible range"""

    def __init__(self, message: str):
        super().__init__(message=message, error_code="ARITY")


class FieldMismatchError(EngineError):
    """Structures over different ground fields or with mismatched carriers"""

    def __init__(self, message: str):
        super().__init__(message=message, error_code="FIELD_MISMATCH")


class IncompatibleHornError(EngineError):
    """Horn faces violate the simplicial identities"""

    def __init__(self, i: int, j: int):
        super().__init__(
            message=f"Horn faces {i} and {j} are not compatible",
            error_code="INCOMPATIBLE_HORN",
            details={"faces": [i, j]}
        )

# ============================================================
# Search Limits
# ============================================================

class SearchCapExceeded(EngineError):
    """Maurer-Cartan search would visit more leaves than allowed"""

    def __init__(self, limit: int, explored: int, space_size: Any):
        super().__init__(
            message=f"Search aborted after {explored} leaves (limit {limit}, naive space {space_size})",
            error_code="SEARCH_CAP_EXCEEDED",
            details={"limit": limit, "explored": explored, "space_size": str(space_size)}
        )


class InfiniteSolutionSetError(EngineError):
    """Enumeration requested for an infinite solution set (characteristic 0)"""

    def __init__(self, weight: int, kernel_dimension: int):
        super().__init__(
            message=(
                f"Weight layer {weight} has a {kernel_dimension}-dimensional solution space "
                "over Q; use the symbolic solver instead"
            ),
            error_code="INFINITE_SOLUTION_SET",
            details={"weight": weight, "kernel_dimension": kernel_dimension}
        )


class HornFillerNotFound(EngineError):
    """No filler exists for a compatible horn"""

    def __init__(self, n: int, k: int):
        super().__init__(
            message=f"No filler found for a horn Λ^{n}_{k}",
            error_code="HORN_FILLER_NOT_FOUND",
            details={"n": n, "k": k}
        )


class SizeCapExceeded(EngineError):
    """A construction would exceed a configured dimension cap"""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(
            message=f"{what} has dimension {size}, above the cap {cap}",
            error_code="SIZE_CAP_EXCEEDED",
            details={"what": what, "size": size, "cap": cap}
        )
