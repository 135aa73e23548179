"""Campaign ingestion, features and descriptives."""
