"""Integration tests for Scorealign."""
