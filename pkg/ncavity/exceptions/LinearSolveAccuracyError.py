class LinearSolveAccuracyError(Exception):
    def __init__(
        self,
        type="solver_error.inaccurate",
        message="The linear solve did not reach the requested algebraic residual.",
        residual=None,
    ):
        self.type = type
        self.message = message
        self.residual = residual
        super().__init__(self.message)
