from enum import Enum


class InitialGuess(Enum):
    STOKES = "stokes"
    ZERO = "zero"
