"""Human-in-the-loop extraction of data subject rights from privacy policies."""

__version__ = "0.1.0"
