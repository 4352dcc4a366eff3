"""
Utilities module for inversion-complexity.

This module contains common utilities used across the inversion-complexity project.
"""
