"""Unit tests for the Seqera Platform Benchling integration app."""
