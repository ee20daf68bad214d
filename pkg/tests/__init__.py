"""Test package for pointed-mobius."""
