"""Innovation representations of stochastic processes.

Entropy primitives, minimum entropy coupling (greedy, exact, lower bound),
lossy memoryless approximation of binary Markov sources, entropic causal
direction tests, continuous-law shaping, and rectangular storage design.
"""

try:
    from ._innokit import *  # noqa: F401,F403
    from ._innokit import __doc__ as _core_doc  # noqa: F401
except ImportError:  # in-tree builds put the extension on sys.path directly
    from _innokit import *  # noqa: F401,F403

__version__ = "0.1.0"
