"""2D density-dependent nematic liquid crystal flow: solver and diagnostics."""

__version__ = "0.1.0"
