"""Toolkit for template-based diagnostic comments on argumentation."""

from .templates import NOT_APPLICABLE, bundled_template_set  # noqa: F401

__version__ = "0.1.0"
