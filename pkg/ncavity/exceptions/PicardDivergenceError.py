class PicardDivergenceError(Exception):
    def __init__(
        self,
        type="solver_error.divergence",
        message="The Picard residual grew over consecutive iterations.",
        residual_history=None,
    ):
        self.type = type
        self.message = message
        self.residual_history = list(residual_history or [])
        super().__init__(self.message)
