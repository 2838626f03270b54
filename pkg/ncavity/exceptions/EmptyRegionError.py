class EmptyRegionError(Exception):
    def __init__(
        self,
        type="diagnostics_error.empty_region",
        message="The search region does not contain any cell center.",
    ):
        self.type = type
        self.message = message
        super().__init__(self.message)
