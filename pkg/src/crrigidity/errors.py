"""Exception hierarchy.

Every error carries a short machine-readable ``code`` and an exit status
used by the command line front end.
"""


class CRRigidityError(Exception):
    code = "error"
    exit_status = 3


class NumericDomainError(CRRigidityError):
    """A point or input lies outside the region where a formula is defined."""

    code = "numeric_domain"
    exit_status = 3


class DivisionNearZero(NumericDomainError):
    code = "division_near_zero"


class LogNonPositive(NumericDomainError):
    code = "log_non_positive"


class NotInDomain(NumericDomainError):
    code = "not_in_domain"


class NotPseudoconvex(NumericDomainError):
    code = "not_pseudoconvex"


class DegenerateGradient(NumericDomainError):
    code = "degenerate_gradient"


class EmptyDomain(NumericDomainError):
    code = "empty_domain"


class NonHermitianInput(NumericDomainError):
    code = "non_hermitian_input"


class SingularMetric(NumericDomainError):
    code = "singular_metric"


class DimensionTooSmall(NumericDomainError):
    code = "dimension_too_small"


class OutOfDomain(NumericDomainError):
    code = "out_of_domain"


class NotImmersion(NumericDomainError):
    code = "not_immersion"


class EmptySampleSet(NumericDomainError):
    code = "empty_sample_set"


class FamilySizeMismatch(NumericDomainError):
    code = "family_size_mismatch"


class DimensionWindowViolated(NumericDomainError):
    code = "dimension_window_violated"


class SchemaError(CRRigidityError):
    code = "schema_error"
    exit_status = 2

    def __init__(self, path, reason):
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")


class RealityViolation(SchemaError):
    code = "reality_violation"

    def __init__(self, index, reason="coefficient table is not Hermitian"):
        self.index = index
        super().__init__(f"q_coeffs{list(index)}", reason)


class InternalInconsistency(CRRigidityError):
    """A proved identity failed numerically; indicates a bug, not bad input."""

    code = "internal_inconsistency"
    exit_status = 4
