"""Safety coalition games with a parameterized number of agents."""

__version__ = "0.1.0"
