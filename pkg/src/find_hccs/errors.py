"""Exception types shared across the pipeline."""

from __future__ import annotations


class PipelineError(Exception):
    """Base class for errors raised by this package."""


class MalformedInputError(PipelineError):
    """An input stream could not be read or decoded at all."""


class EmptyCorpusError(PipelineError):
    """Parsing produced zero valid posts."""


class ContractError(PipelineError):
    """A documented precondition of an operation was violated."""


class ConfigError(PipelineError):
    """A run configuration is invalid or inconsistent."""
