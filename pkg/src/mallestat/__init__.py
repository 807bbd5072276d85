"""Counting framework for S_n x G extensions: exact group invariants, discriminant
models for composita, product counting, and desk-scale field censuses over Q."""

__version__ = "0.1.0"

SCHEMA_VERSION = 1
