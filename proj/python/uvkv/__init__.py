"""Iterated (U|U+V) codes with Koetter-Vardy soft-decision decoding of Reed-Solomon leaves."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
