"""Batch command-line interface (``nosignal-bounds``)."""
