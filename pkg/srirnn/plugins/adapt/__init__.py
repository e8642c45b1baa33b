#
# __init__.py
#
"""
Adaptation plugins. Each module <Kind>.py defines an AdapterState subclass
named <Kind>, looked up by srirnn.adapt.getplugin.
"""
from os.path import basename, dirname, splitext
import glob

allmods = []

leftpath = dirname(__file__)

for filename in sorted(glob.glob("%s/*.py" % leftpath)):
    if filename.find("__") < 0:   # ignore __init__.py files
        modname, ext = splitext(basename(filename))
        allmods.append(modname)

# Adaptation kinds with an installed plugin
__all__ = allmods
