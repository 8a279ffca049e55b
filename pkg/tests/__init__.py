"""
Tests package for Image Deduplicator.

This package contains all the test cases for the application.
"""
# This file makes the tests directory a Python package
