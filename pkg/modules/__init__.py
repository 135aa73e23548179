"""Feature modules package."""
