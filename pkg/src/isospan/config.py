"""Process-wide defaults."""

GEOM_TOL = 1e-9
