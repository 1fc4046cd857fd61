"""Random-rule cellular automata: DEC construction, cemetery counts and longest periods."""
__version__ = "0.1.0"
