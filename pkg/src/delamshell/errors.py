"""Exception types shared across the package."""


class DelamshellError(Exception):
    """Base class for all package errors."""


class MaterialError(DelamshellError, ValueError):
    """Non-physical material data or an invalid layup."""


class DegenerateElementError(DelamshellError, ValueError):
    """Element geometry unusable (collinear nodes, extreme aspect ratio)."""


class ModelError(DelamshellError, ValueError):
    """Inconsistent model definition (geometry, mesh, boundary conditions)."""


class ConfigError(DelamshellError, ValueError):
    """Run configuration could not be resolved."""


class ConvergenceError(DelamshellError, RuntimeError):
    """The nonlinear solver failed to converge within its cut budget."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
