"""
indeftheta: indefinite theta series with polynomial insertions,
their exact q-expansions and their non-holomorphic completions.
"""

__version__ = "0.1.0"
