"""Contextuality toolkit: CHSH quantities, classical representability and the
vessels / liar / soccer potentiality-state models."""

__version__ = "0.1.0"
