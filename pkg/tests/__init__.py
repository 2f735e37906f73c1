"""Tests for the mitigation threshold lab."""
