"""Config tests module."""
