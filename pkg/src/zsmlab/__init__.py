"""zsmlab: numerical lab for Nelson-Yasue stochastic mechanics and its zitterbewegung extension."""

__version__ = "0.1.0"
