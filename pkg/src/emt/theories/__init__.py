"""Decidable complete theory plugins: dlo, pure-eq, vecf2."""

from .base import (
    AclResult,
    AdequacyError,
    FiniteTargetError,
    IndependentSequence,
    QEError,
    TheoryPlugin,
    get_plugin,
    plugin_ids,
    register_plugin,
)
from . import dlo as _dlo  # noqa: F401  (registers on import)
from . import pure_eq as _pure_eq  # noqa: F401
from . import vecf2 as _vecf2  # noqa: F401

__all__ = [
    "AclResult",
    "AdequacyError",
    "FiniteTargetError",
    "IndependentSequence",
    "QEError",
    "TheoryPlugin",
    "get_plugin",
    "plugin_ids",
    "register_plugin",
]
