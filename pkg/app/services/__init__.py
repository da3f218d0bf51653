"""
Services package initialization.
""" 