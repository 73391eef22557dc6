"""
Utility functions and modules for hetanova
"""
