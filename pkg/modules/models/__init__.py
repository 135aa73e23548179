"""Regression model specifications and fits."""
