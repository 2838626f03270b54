class NeumannIncompatibilityError(Exception):
    def __init__(
        self,
        type="diagnostics_error.incompatible",
        message="The Neumann data of the stream function problem is incompatible; "
        "the velocity field is probably not converged.",
    ):
        self.type = type
        self.message = message
        super().__init__(self.message)
