"""Unified validation system for LTS.

The same rules back config-file loading (pydantic) and command-line flags (typer),
so a value rejected in one place is rejected with the same message in the other.
"""

from .adapters import for_pydantic, for_typer
from .rules import ValidationRules

__all__ = ["ValidationRules", "for_pydantic", "for_typer"]
