"""Bundled demo analyzers executed by the local process runtime."""
