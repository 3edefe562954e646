"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class SympleqError(Exception):
    exit_code = 1

    def __init__(self, message, **info):
        super().__init__(message)
        self.info = info

    def to_dict(self):
        out = {"error": type(self).__name__, "message": str(self)}
        for k, v in self.info.items():
            out[k] = v if isinstance(v, (str, int, float, bool, type(None))) else repr(v)
        return out


class SchemaError(SympleqError):
    exit_code = 2


class BranchCut(SympleqError):
    exit_code = 3


class StructureViolation(SympleqError):
    exit_code = 4


class DimensionMismatch(SchemaError):
    pass


class IllConditioned(SympleqError):
    exit_code = 5


class Singular(SympleqError):
    exit_code = 5


class NonFinite(SympleqError):
    exit_code = 2


class DegenerateEigenvalues(SympleqError):
    exit_code = 5


class NoConvergence(SympleqError):
    exit_code = 5


class OutOfPeriod(SympleqError):
    exit_code = 3


class NearDivergence(SympleqError):
    exit_code = 5


class DimensionOverflow(SympleqError):
    exit_code = 5


class TruncationDominates(SympleqError):
    exit_code = 1
