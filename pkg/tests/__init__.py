"""Test suite package for mindepth."""
