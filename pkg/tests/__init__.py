"""Test suite for lts."""
