"""Checking engine: obligation conditions, ideality constructions, derivations, search."""
