"""API tests module."""
