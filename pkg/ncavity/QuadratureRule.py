from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from ncavity.exceptions.InvalidParameterError import InvalidParameterError


@dataclass(frozen=True)
class QuadratureRule:
    """
    Tensor Gauss-Legendre rule on the reference square [-1, 1]^2
    """

    points: np.ndarray
    weights: np.ndarray
    points_per_direction: int

    @property
    def size(self) -> int:
        return len(self.weights)

    def integrate(self, function: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> float:
        values = function(self.points[:, 0], self.points[:, 1])
        return float(np.dot(self.weights, values))


@lru_cache(maxsize=None)
def gauss_line_rule(n_g: int) -> Tuple[np.ndarray, np.ndarray]:
    if int(n_g) < 1:
        raise InvalidParameterError(message=f"The number of Gauss points must be >= 1, got {n_g}.")
    nodes, weights = leggauss(int(n_g))
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


@lru_cache(maxsize=None)
def gauss_rule(n_g: int) -> QuadratureRule:
    nodes, weights = gauss_line_rule(n_g)
    xx, yy = np.meshgrid(nodes, nodes, indexing="xy")
    points = np.column_stack((xx.ravel(), yy.ravel()))
    tensor_weights = np.outer(weights, weights).ravel()
    points.setflags(write=False)
    tensor_weights.setflags(write=False)
    return QuadratureRule(points=points, weights=tensor_weights, points_per_direction=int(n_g))
