"""Version identifier."""

__version__ = "2026.10.0"
