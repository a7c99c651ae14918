class BmmpyError(Exception):
    def __init__(self, message: str) -> None:
        super().__init__(message)


class InvalidInputError(BmmpyError):
    def __init__(self, message: str) -> None:
        super().__init__(message)


class DimensionMismatchError(BmmpyError):
    def __init__(self, message: str) -> None:
        super().__init__(message)


class DuplicateIndexError(BmmpyError):
    def __init__(self, message: str) -> None:
        super().__init__(message)


class RankDeficiencyError(BmmpyError):
    def __init__(self, message: str) -> None:
        super().__init__(message)


class InvalidInstanceFileError(BmmpyError):
    def __init__(self, message: str) -> None:
        super().__init__(message)


class SchemaVersionError(BmmpyError):
    def __init__(self, message: str) -> None:
        super().__init__(message)


class InvalidChecksumError(BmmpyError):
    def __init__(self, message: str) -> None:
        super().__init__(message)


class InfeasibleSizeError(BmmpyError):
    def __init__(self, message: str) -> None:
        super().__init__(message)


class UnknownSolverError(BmmpyError):
    def __init__(self, message: str) -> None:
        super().__init__(message)


class InvalidImageError(BmmpyError):
    def __init__(self, message: str) -> None:
        super().__init__(message)


class DenseImageError(BmmpyError):
    def __init__(self, message: str) -> None:
        super().__init__(message)


class InconsistentGridError(BmmpyError):
    def __init__(self, message: str) -> None:
        super().__init__(message)


class OutputExistsError(BmmpyError):
    def __init__(self, message: str) -> None:
        super().__init__(message)


class InvalidTOMLConfigurationError(BmmpyError):
    def __init__(self, message: str) -> None:
        super().__init__(message)
