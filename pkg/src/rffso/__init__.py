"""Mixed RF/FSO dual-hop relaying: analytic metrics and Monte-Carlo oracle."""
__version__ = "0.1.0"
