"""funcint - functional integrals by finite-element reduction."""

__version__ = "1.0.0"
