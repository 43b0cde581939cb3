"""Reporting and verification helpers shared by the operations."""
