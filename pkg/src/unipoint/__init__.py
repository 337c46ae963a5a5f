"""Universal point sets for planar graphs: exact small-n verification tools."""

__version__ = "0.1.0"
