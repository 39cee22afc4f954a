"""Constraint satisfaction with counting quantifiers over graph templates.

The game oracle in :mod:`countcsp.oracle` decides any instance on a finite
template by exhaustive search.  The other modules hold polynomial deciders for
special templates, which are checked against that oracle.
"""

from .classify import ComplexityLabel, Label, classify
from .formula import Instance, ParseError, TemplateGraph, parse_instance, resolve_template, serialize_instance
from .oracle import BudgetExceeded, decide

__all__ = [
    "BudgetExceeded",
    "ComplexityLabel",
    "Instance",
    "Label",
    "ParseError",
    "TemplateGraph",
    "classify",
    "decide",
    "parse_instance",
    "resolve_template",
    "serialize_instance",
]
__version__ = "0.1.0"
