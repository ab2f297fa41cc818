"""Client for external text-generation services used by synthesis."""
