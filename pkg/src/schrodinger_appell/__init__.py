"""Exact computations for the Schrödinger algebra and its Appell systems."""
