"""Test suite for the process model reconstructor."""
