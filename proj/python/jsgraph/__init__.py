"""Jenkins-Serrin graphs: structural checks, meshing, capped continuation."""

try:
    from ._jsgraph import *  # packaged extension
except ImportError:  # in-tree build: extension on PYTHONPATH
    from _jsgraph import *
