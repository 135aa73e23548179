"""Synthetic corpora with known effects."""
