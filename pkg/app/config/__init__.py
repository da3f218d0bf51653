"""
Configuration package initialization.
""" 