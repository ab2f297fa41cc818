"""Core tests module."""
