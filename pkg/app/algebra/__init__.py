"""
Algebra package initialization.
"""
