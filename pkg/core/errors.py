class MoralFrameError(RuntimeError):
    exit_code = 4


class UsageError(MoralFrameError):
    exit_code = 1


class InputError(MoralFrameError):
    exit_code = 2


class EmptyDataError(MoralFrameError):
    exit_code = 3


class NumericalError(MoralFrameError):
    exit_code = 4


class EmbeddingFormatError(InputError):
    def __init__(self, message: str, *, path: str = "", line_no: int | None = None):
        location = f"{path}:{line_no}" if line_no is not None else path
        super().__init__(f"{location}: {message}" if location else message)
        self.path = path
        self.line_no = line_no


class DimensionMismatchError(EmbeddingFormatError):
    pass


class LexiconError(InputError):
    def __init__(self, message: str, *, frame: str = "", pole: str = "", token: str = ""):
        super().__init__(message)
        self.frame = frame
        self.pole = pole
        self.token = token


class CoverageError(EmptyDataError):
    def __init__(self, message: str, *, frame: str = "", pole: str = ""):
        super().__init__(message)
        self.frame = frame
        self.pole = pole


class AxisError(NumericalError):
    pass


class RankDeficientError(NumericalError):
    def __init__(self, message: str, *, columns=()):
        super().__init__(message)
        self.columns = list(columns)


class InsufficientDataError(EmptyDataError):
    pass


class IngestError(EmptyDataError):
    def __init__(self, message: str, *, rejects=()):
        super().__init__(message)
        self.rejects = list(rejects)


class UnknownCategoryError(ValueError):
    pass
