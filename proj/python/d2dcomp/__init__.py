"""Python interface to the d2dcomp core library.

Everything is implemented in the compiled extension; this package simply
re-exports it under a stable name.
"""

from ._d2dcomp import *  # noqa: F401,F403

__all__ = [name for name in dir() if not name.startswith("_")]
