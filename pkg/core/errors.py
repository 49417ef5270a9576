class LabError(Exception):
    """Root of every error raised by the lab."""


# --- linear algebra & model ---
class NonHermitianInput(LabError):
    pass


class DomainError(LabError):
    pass


class NormalizationError(LabError):
    pass


class SizeError(LabError):
    pass


class RangeError(LabError):
    pass


class DimensionMismatch(LabError):
    pass


# --- polynomial construction ---
class NoConvergence(LabError):
    pass


class CompletionFailure(LabError):
    def __init__(self, message, residual=float("nan")):
        super().__init__(f"{message} (residual={residual:.3e})")
        self.residual = residual


class DecompositionFailure(LabError):
    def __init__(self, message, layer=None, residual=float("nan")):
        where = f" at layer {layer}" if layer is not None else ""
        super().__init__(f"{message}{where} (residual={residual:.3e})")
        self.layer = layer
        self.residual = residual


# --- simulation & mitigation ---
class ZeroProbability(LabError):
    def __init__(self, probability):
        super().__init__(f"post-selection probability {probability:.3e} is below 1e-12")
        self.probability = probability


class DegenerateSchedule(LabError):
    pass


class FitNotFound(LabError):
    def __init__(self, reason):
        super().__init__(reason)
        self.reason = reason


# --- I/O ---
class IoError(LabError):
    pass


class ConfigError(LabError):
    pass
