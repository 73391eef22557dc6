"""
Command-line interface for hetanova
"""
