"""Scorealign utilities: logging setup and preflight checks."""
