"""Integration tests for pointed-mobius."""
