"""Budgeted edge deletion for epidemic mitigation on contact networks."""

try:
    from ._epimit import *  # noqa: F401,F403  (installed package layout)
except ImportError:
    from _epimit import *  # noqa: F401,F403  (in-tree build layout)

__version__ = "0.1.0"
