"""prokit: finite-window computations with pro-objects, ideal towers,
truncated power series and Pfaff forms, in exact arithmetic."""

__version__ = "0.1.0"
