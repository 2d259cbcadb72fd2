"""Exact generation and colouring of chair, Ammann-Beenker, rational pinwheel and pinwheel patches."""

__version__ = "0.1.0"
