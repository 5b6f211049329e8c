"""
stochdiff test suite
"""
