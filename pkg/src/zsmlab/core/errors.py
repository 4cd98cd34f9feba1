"""Error types shared by every zsmlab module."""

from __future__ import annotations


class ZsmError(Exception):
    """Base class for zsmlab failures."""


class InvalidParameterError(ZsmError, ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class GridMismatchError(ZsmError, ValueError):
    pass


class DensityError(ZsmError, ValueError):
    def __init__(self, node: tuple[int, ...] | None, message: str):
        where = f" at node {node}" if node is not None else ""
        super().__init__(f"{message}{where}")
        self.node = node


class NormalizationError(ZsmError, ValueError):
    pass


class UnsupportedFeatureError(ZsmError, ValueError):
    pass


class NodeEncounteredError(ZsmError):
    def __init__(self, time: float, message: str = "node formed during evolution"):
        super().__init__(f"{message} at t={time:.6g}")
        self.time = time


class ConvergenceError(ZsmError):
    def __init__(self, residual: float, message: str = "iteration did not converge"):
        super().__init__(f"{message}; last residual={residual:.3e}")
        self.residual = residual


class MaskedLoopError(ZsmError, ValueError):
    def __init__(self, node: tuple[int, ...]):
        super().__init__(f"loop crosses masked node {node}")
        self.node = node


class SamplingError(ZsmError):
    pass


class MissingFramesError(ZsmError, ValueError):
    pass


class SuperluminalError(ZsmError, ValueError):
    def __init__(self, index: int, speed: float):
        super().__init__(f"sample {index} has |v|={speed:.6g} >= c")
        self.index = index


class EndpointConstraintError(ZsmError, ValueError):
    pass


class UnknownExperimentError(ZsmError, KeyError):
    def __init__(self, name: str, known: list[str]):
        super().__init__(name)
        self.name = name
        self.known = known

    def __str__(self) -> str:
        return f"unknown experiment {self.name!r}; known: {', '.join(self.known)}"


class ConfigError(ZsmError, ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
