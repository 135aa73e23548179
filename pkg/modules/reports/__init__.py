"""PDF report of descriptives and model fits."""
