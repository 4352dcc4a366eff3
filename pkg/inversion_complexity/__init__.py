"""
Inversion complexity of k-valued logic functions and systems.
"""

__version__ = "0.1.0"
