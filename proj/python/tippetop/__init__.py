"""Rolling/sliding unbalanced-ball dynamics: bindings over the C++ core."""

from ._core import *  # noqa: F401,F403
