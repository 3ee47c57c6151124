"""Python front end to the nsdv core (1D compressible Navier-Stokes, rho^alpha viscosity)."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
