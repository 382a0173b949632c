"""Finite p-group engine built around power-commutator presentations.

Core capabilities: Hall collection arithmetic, lower-central and
maximal-class structure analysis, construction of the extension nu(G)
of Rocco type from a pc presentation, nilpotent quotients of finite
presentations, tensor/exterior square subgroups with the Schur
multiplier as the kernel of the commutator map, and an independent
bar-resolution homology oracle for cross-checks.
"""

from .pcp import PcPresentation, parse_pcp, dump_pcp  # noqa: F401
from .errors import PgmError  # noqa: F401

__version__ = "0.1.0"
