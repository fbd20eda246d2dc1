"""Exception types shared across eventgeo modules."""


class InvalidGeometryError(ValueError):
    """Polygon geometry is degenerate (e.g. a ring with fewer than 3 distinct vertices)."""


class RegionTooThinError(RuntimeError):
    """Rejection sampling acceptance ratio fell below the workable floor."""


class SchemaError(ValueError):
    """CSV input is missing a mapped column or is otherwise structurally unusable."""


class InsufficientDataError(ValueError):
    """Too few observations for the requested statistic."""
