"""Codes over Z_2k, Leech-lattice frames, and exact graded-character decompositions."""

__version__ = "0.1.0"
