"""Finite-dimensional toolkit for the orthogonality equation.

Verify candidate solution pairs, synthesise instances from structure
certificates, extract certificates back out of sampled data, and refine
them on inner-product spaces.  The heavy lifting happens in the compiled
extension; this package just re-exports it.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc

__version__ = "0.1.0"
__doc__ = _core_doc or __doc__
