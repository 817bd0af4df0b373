"""Smoothed online quadratic decision policies.

Thin re-export of the compiled core; see the package README for the model
and the guarantees each function evaluates.
"""

from ._soqo import *  # noqa: F401,F403
from ._soqo import __doc__, __version__  # noqa: F401
