"""Seeded property and end-to-end tests."""
