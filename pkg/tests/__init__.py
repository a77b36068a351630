"""Tests for the Seqera Platform Benchling integration app."""
