class IndexOutOfRangeError(Exception):
    def __init__(
        self, type="mesh_error.index", message="The cell index is outside the mesh."
    ):
        self.type = type
        self.message = message
        super().__init__(self.message)
