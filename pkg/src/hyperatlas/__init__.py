"""Coordinate charts, isometries and Helmholtz modes on the hyperboloid model of H^2 and H^3."""

from hyperatlas.ambient import AmbientPoint, Isometry, boost, general_point, horolation, minkowski_inner, rotation
from hyperatlas.charts import ChartPoint, from_ambient, get_chart, list_charts, metric, to_ambient
from hyperatlas.diffops import Grid, ScalarField, helmholtz_residual, laplace_beltrami, pullback_metric
from hyperatlas.errors import (
    AdmissibilityError,
    DegenerateInputError,
    DegenerateModeWarning,
    DomainError,
    IntegrationError,
    NotSeparableError,
    RangeError,
)
from hyperatlas.projections import DiskPoint, distance, geodesic, klein, klein_inverse, poincare, poincare_inverse

__version__ = "0.1.0"
