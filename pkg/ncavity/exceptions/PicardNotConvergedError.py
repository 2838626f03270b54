class PicardNotConvergedError(Exception):
    def __init__(
        self,
        type="solver_error.max_iterations",
        message="The Picard iteration did not converge within the iteration budget.",
        residual_history=None,
    ):
        self.type = type
        self.message = message
        self.residual_history = list(residual_history or [])
        super().__init__(self.message)
