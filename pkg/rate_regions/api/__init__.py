"""
Region generation, projection and verification operations.
"""
