"""Exact verification toolkit for window collections on G(2,7) and their monodromy."""

__version__ = "0.1.0"

from .weights import SBundle, VirtualBundle  # noqa: E402

__all__ = ["SBundle", "VirtualBundle", "__version__"]
