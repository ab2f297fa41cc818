#!/usr/bin/env python3
"""
tabforge - table structure tooling built around the atomic cell matrix.

Modules:
- table: Cell matrices, logical cells, block layouts and implicit-line repair
- markup: HTML table codec and structural tokens
- metrics: TEDS / S-TEDS scoring
- instructions: Instruction templates and training triplets
- synth: Table Mix Expand synthesis pipeline
- render: Style augmentation and headless-render manifests
- corpus: Annotation loading and dataset audits
- core: Logging and error handling
- config: Configuration management
- tests: Test modules
"""

# Version information
__version__ = "0.3.0"
__author__ = "tabforge developers"
