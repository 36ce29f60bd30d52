"""Chaotic-waveform WPT / SWIPT simulator."""

from chaos_swipt.errors import DivergenceError, DomainError

__version__ = "0.1.0"

__all__ = ["DomainError", "DivergenceError", "__version__"]
