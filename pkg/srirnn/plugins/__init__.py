#
# __init__.py
#
"""
Pluggable implementations, one subpackage per plugin kind.
"""
