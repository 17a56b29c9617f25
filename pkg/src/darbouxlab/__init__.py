"""Darboux-generated solvable potentials from the free particle, with
numerical cross-checks (Numerov shooting, phase shifts, KdV residuals)."""

__version__ = "0.1.0"
