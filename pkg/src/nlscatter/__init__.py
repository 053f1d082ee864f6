"""Split-step simulation and diagnostics for defocusing NLS scattering."""

__version__ = "0.1.0"
