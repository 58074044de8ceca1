"""Agentization harness and three-stage benchmark for A2A agents."""

__version__ = "0.1.0"
