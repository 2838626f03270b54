class PointOutsideCellError(Exception):
    def __init__(
        self,
        type="field_error.outside_cell",
        message="The evaluation point does not lie in the hinted cell.",
    ):
        self.type = type
        self.message = message
        super().__init__(self.message)
