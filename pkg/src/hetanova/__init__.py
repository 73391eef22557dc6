"""
hetanova: two-way ANOVA tests under heterogeneous cell variances
"""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("hetanova")
except PackageNotFoundError:  # running from a source checkout
    __version__ = "0.1.0"
