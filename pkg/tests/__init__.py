"""Tests for StreamTL."""
