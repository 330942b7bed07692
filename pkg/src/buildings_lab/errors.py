class ResourceCapError(RuntimeError):
    """Raised when a build or computation would exceed a configured resource cap."""

    def __init__(self, message: str, projected: int | None = None, cap: int | None = None):
        super().__init__(message)
        self.projected = projected
        self.cap = cap
