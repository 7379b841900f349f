"""Offline figure rendering for ftrl-exploit experiment logs.

Reads the CSV/NDJSON logs emitted by the ftrl-exploit CLI and renders the
standard figure archetypes.  Strictly read-only over its inputs and
deterministic: rerunning a render overwrites the output byte-for-byte.
"""

from .figures import FIGURE_KINDS, FigureSpec, SchemaError, render

__version__ = "0.1.0"

__all__ = ["FIGURE_KINDS", "FigureSpec", "SchemaError", "render"]
