"""Straight-through-estimator training of the binary network."""
