"""
Tests package for full_house.

This package contains the unit tests for the full_house application and the
synthetic league generator they share.

Author: Ron Webb
Since: 1.0.0
"""
