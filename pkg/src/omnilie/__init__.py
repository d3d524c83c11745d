"""Exact symbolic calculus for higher omni-Lie algebroids of vector bundles."""
