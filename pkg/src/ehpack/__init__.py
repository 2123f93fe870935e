"""Online packing of squares and cubes with the Extended Harmonic algorithm,
plus the tools used to analyze it: per-case weights, an integer-program
bound engine, and adversarial inputs."""

from .params import ParameterSet, builtin, resolve

__all__ = ["ParameterSet", "builtin", "resolve"]
__version__ = "0.1.0"
