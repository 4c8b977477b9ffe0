"""Exact functionals, explicit constants and verification tools for discrete
Hardy inequalities on the nonnegative and full integer lattices."""

try:
    from ._core import *  # noqa: F401,F403
    from ._core import __version__
except ImportError:  # build-tree layout: the extension sits next to the package
    from _core import *  # noqa: F401,F403
    from _core import __version__
