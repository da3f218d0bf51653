"""
App package initialization.
""" 