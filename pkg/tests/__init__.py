"""Scorealign test suite."""
