#
# __init__.py
#
"""
Sample-rate independent inference for recurrent audio-effect models.
"""
__version__ = "1.0.0"
