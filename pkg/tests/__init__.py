"""Tests for bikedet."""
