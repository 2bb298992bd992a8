"""Exception types shared across the classifier package."""

from __future__ import annotations


class ClassifierError(Exception):
    """Base class for errors raised by this package."""


class SchemaError(ClassifierError):
    """A feature CSV does not match the published column schema."""


class ConfigError(ClassifierError):
    """A run configuration is invalid or inconsistent."""
