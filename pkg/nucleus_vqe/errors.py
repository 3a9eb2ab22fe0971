"""Exceptions raised by nucleus-vqe."""


class NucleusVQEError(Exception):
    """Base class for all nucleus-vqe errors."""


class ConfigError(NucleusVQEError, ValueError):
    """An input or configuration value is invalid."""


class ContractViolation(NucleusVQEError, ArithmeticError):
    """A numerical contract does not hold (asymmetric input, count mismatch, ...)."""


class OutputError(NucleusVQEError, OSError):
    """Results could not be written."""
