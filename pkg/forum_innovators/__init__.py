"""
Innovator profiling from forum corpora
"""

__version__ = "0.1.0"
