from enum import Enum


class PressureBasis(Enum):
    # Red/black zero-mean rows enforced by two Lagrange multipliers
    MULTIPLIER = "multiplier"
    # Explicit basis chi_Q - chi_pin with one pinned cell per color
    PINNED = "pinned"
