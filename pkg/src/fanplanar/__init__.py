"""Fan-planar drawings: representation, checking and simplification."""
