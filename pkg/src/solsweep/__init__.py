"""solsweep — run security analyzers over Solidity contracts and normalize the results.

The package bundles a pattern-based detector operating on a lightweight
parse-tree IR, a plugin registry for containerized external analyzers,
a batch executor, result normalization onto the DASP10 taxonomy, dataset
management, a CLI and an HTTP API.
"""

from solsweep.taxonomy import DaspCategory

__version__ = "0.1.0"

__all__ = ["DaspCategory", "__version__"]
