class DomainError(ValueError):
    """An argument lies outside the range where a formula or theorem applies."""
