"""
Services Package - Numerical Layer
Contains the tensor, inverse, solver, verify and generator service modules
"""
