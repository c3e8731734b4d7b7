"""Fixed subgroups of automorphisms of free products, on finite windows."""

from ._relfix import (
    Automorphism,
    CapExceeded,
    Group,
    ParseError,
    PreconditionError,
    ValidationError,
    __version__,
    run_command,
    suite_names,
)

__all__ = [
    "Automorphism",
    "CapExceeded",
    "Group",
    "ParseError",
    "PreconditionError",
    "ValidationError",
    "__version__",
    "run_command",
    "suite_names",
]
