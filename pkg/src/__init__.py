"""
A-infinity Nerve Engine
Exact computations with complete filtered A-infinity algebras and their nerves
"""

__version__ = "1.0.0"
