"""Adversarial reinforcement learning benchmark for collision avoidance policies."""

from advbench.core import log as _log  # registers the TRACE level
from advbench._version import __version__
