from enum import Enum


class CellColor(Enum):
    RED = 0
    BLACK = 1
