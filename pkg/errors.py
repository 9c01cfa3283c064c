class RingFluxError(Exception):
    """Base class for every error raised by ringflux"""
    exit_code = 1


class InvalidParameter(RingFluxError, ValueError):
    exit_code = 2


class ConfigError(RingFluxError):
    """Invalid configuration, with one message per offending field"""
    exit_code = 2

    def __init__(self, field_errors):
        self.field_errors = dict(field_errors)
        lines = [f"{field}: {message}" for field, message in sorted(self.field_errors.items())]
        super().__init__("invalid configuration\n  " + "\n  ".join(lines))


class EnvelopeError(RingFluxError):
    """A numerical precondition (grid size, time step, packet width) is violated"""
    exit_code = 3


class UndersizedGrid(EnvelopeError):
    def __init__(self, grid_size, required):
        self.grid_size = grid_size
        self.required = required
        super().__init__(f"grid of {grid_size} points is below the required {required}")


class OverlapError(EnvelopeError):
    pass


class SolverError(EnvelopeError):
    def __init__(self, message, residual):
        self.residual = residual
        super().__init__(f"{message} (residual {residual:.3e})")


class PeakError(RingFluxError):
    exit_code = 3


class UniformDensity(PeakError):
    pass


class MultiModal(PeakError):
    pass


class OutputError(RingFluxError):
    exit_code = 4

    def __init__(self, path, reason):
        self.path = str(path)
        super().__init__(f"cannot write {self.path}: {reason}")
