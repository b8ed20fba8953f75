"""Transmission operators for Schwarz iterations on rectangular Helmholtz cavities.

Everything is formulated per transverse mode: the cavity cross-section is
expanded in sine modes, each mode reduces to a 1-D Helmholtz problem, and
subdomain solves, transmission conditions, convergence radii, and Krylov
runs all act on closed-form mode data rather than on a mesh.
"""

from . import convergence, krylov, rational, schwarz, symbols

__all__ = ["rational", "symbols", "convergence", "schwarz", "krylov"]
__version__ = "0.1.0"
