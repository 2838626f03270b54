class InvalidMeshSizeError(Exception):
    def __init__(
        self,
        type="mesh_error.invalid_size",
        message="The number of cells per side must be an even integer >= 2.",
    ):
        self.type = type
        self.message = message
        super().__init__(self.message)
