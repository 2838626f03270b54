class SingularSystemError(Exception):
    def __init__(
        self,
        type="solver_error.singular",
        message="The saddle point system is singular.",
        block="saddle",
    ):
        self.type = type
        self.message = message
        self.block = block
        super().__init__(f"{self.message} (failing block: {self.block})")
