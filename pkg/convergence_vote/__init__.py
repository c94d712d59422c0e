"""Convergence voting - rank candidates by the limit of a pairwise-comparison Markov chain."""

__version__ = "1.0.0"
__author__ = "Convergence Vote Team"
