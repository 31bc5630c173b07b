"""Self-similar groups whose action graphs are iterated zig-zag or replacement products."""

from .constructions import Preset, build_GP, build_GQ, example1, example2
from .graph import RotationGraph, add_loops, power, replacement, zigzag
from .perm import Perm, compose, inverse, parse_cycles
from .selfsim import WreathRecursion, action_graph, evaluate

__version__ = "0.1.0"
