"""
Exception hierarchy for FuncBoost
"""

from typing import Optional


class FuncBoostError(ValueError):
    """Base class for every error raised by the library"""


class BasisError(FuncBoostError):
    """Invalid basis definition, domain, derivative order or evaluation point"""


class SingularSystemError(FuncBoostError):
    """Normal equations are singular or too badly conditioned to trust"""


class LearnerError(FuncBoostError):
    """A weak learner cannot be fitted to the given sample"""


class BoostingError(FuncBoostError):
    """A boosting engine was called with unusable data or settings"""


class CrossValidationError(FuncBoostError):
    """Training failed on one of the cross-validation folds"""

    def __init__(self, fold: int, cause: Exception):
        self.fold = fold
        self.cause = cause
        super().__init__(f"fold {fold} failed: {cause}")


class DataFormatError(FuncBoostError):
    """Malformed curve table or model file"""

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        self.row = row
        self.column = column
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column '{column}'")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)


class UsageError(FuncBoostError):
    """Invalid or conflicting command-line flags"""
