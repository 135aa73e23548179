"""Data behind the comment and donation-position figures."""
