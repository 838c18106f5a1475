"""Exception types raised by tcpda."""


class TCPError(Exception):
    """Base class for all tcpda errors."""


class InvalidInputError(TCPError, ValueError):
    """Inputs with wrong shape, non-finite entries or inconsistent structure."""


class ConfigurationError(TCPError, ValueError):
    """Invalid hyperparameters (negative regularization, bad iteration budget, ...)."""


class EstimationError(TCPError, ArithmeticError):
    """A class model could not be evaluated, e.g. its covariance is singular."""

    def __init__(self, message, class_index=None):
        super().__init__(message)
        self.class_index = class_index


class UndefinedMetricError(TCPError, ValueError):
    """A metric is not defined for the given labels (e.g. AUC with one class)."""


class DivergedOptimizationError(TCPError, RuntimeError):
    """The saddle-point iteration produced a non-finite objective."""

    def __init__(self, message, iteration, trace):
        super().__init__(message)
        self.iteration = iteration
        self.trace = list(trace)


class IngestionError(TCPError, ValueError):
    """A dataset file could not be read or split into domains."""
