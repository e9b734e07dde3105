"""Unit tests for Scorealign."""
