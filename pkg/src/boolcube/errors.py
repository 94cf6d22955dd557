class CapacityError(ValueError):
    """Raised when an instance exceeds the dense enumeration budget."""
