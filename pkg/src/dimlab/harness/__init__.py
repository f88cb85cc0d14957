"""Inequality checkers, the shipped instance corpus and the command-line interface."""
