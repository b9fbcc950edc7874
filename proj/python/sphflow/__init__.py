"""Spherically symmetric compressible heat-conductive flow in Lagrangian
mass coordinates: solver, functionals and blowup monitors."""

try:
    # Installed layout: the extension lives inside the package.
    from ._sphflow import *  # noqa: F401,F403
except ImportError:
    # In-tree builds put the extension on sys.path directly.
    from _sphflow import *  # noqa: F401,F403
