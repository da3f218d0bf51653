"""
Utilities package initialization.
""" 