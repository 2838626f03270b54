from typing import Sequence

from ncavity.exceptions.LinearSolveAccuracyError import LinearSolveAccuracyError
from ncavity.exceptions.PicardDivergenceError import PicardDivergenceError
from ncavity.exceptions.PicardNotConvergedError import PicardNotConvergedError
from ncavity.exceptions.SingularSystemError import SingularSystemError


class SolveEvaluator:
    """
    This class is used to validate the outcome of every linear and nonlinear solve. If something goes wrong the
    evaluate methods throw the according Error, otherwise they report whether the iteration may stop
    """

    def __init__(self) -> None:
        pass

    @staticmethod
    def evaluate_factorization(error: Exception, block: str) -> None:
        """
        Translates a failed sparse factorization into a SingularSystemError
        :param error: The exception raised by the factorization
        :param block: Name of the block that failed to factor ("velocity" or "saddle")
        """
        raise SingularSystemError(
            message=f"The sparse LU factorization failed: {error}", block=block
        )

    @staticmethod
    def evaluate_linear(relative_residual: float, tolerance: float) -> bool:
        """
        :param relative_residual: ||b - Ax|| / ||b|| after iterative refinement
        :param tolerance: Required relative algebraic residual
        :return: True if the residual is within tolerance otherwise an exception will be raised!
        """
        if relative_residual <= tolerance:
            return True

        raise LinearSolveAccuracyError(
            message=f"The linear solve stopped at a relative residual of {relative_residual:.3e} "
            f"(required {tolerance:.1e}).",
            residual=relative_residual,
        )

    @staticmethod
    def evaluate(
        residual_history: Sequence[float],
        tol_rel: float,
        max_iters: int,
        divergence_window: int = 10,
    ) -> bool:
        """
        Evaluates the residual history of a Picard iteration
        :param residual_history: Relative nonlinear residuals, one per completed iteration
        :param tol_rel: Relative stopping tolerance
        :param max_iters: Iteration budget
        :param divergence_window: Number of consecutive residual increases treated as divergence
        :return: True if converged, False if the iteration should continue. Raises on divergence or an exhausted budget.
        """
        if len(residual_history) == 0:
            return False

        if residual_history[-1] <= tol_rel:
            return True

        if len(residual_history) > divergence_window:
            tail = residual_history[-(divergence_window + 1):]
            if all(later > earlier for earlier, later in zip(tail[:-1], tail[1:])):
                raise PicardDivergenceError(
                    message=f"The Picard residual grew over {divergence_window} consecutive iterations "
                    f"(last {residual_history[-1]:.3e}).",
                    residual_history=residual_history,
                )

        if len(residual_history) >= max_iters:
            raise PicardNotConvergedError(
                message=f"The Picard iteration did not reach {tol_rel:.1e} within {max_iters} iterations "
                f"(last {residual_history[-1]:.3e}).",
                residual_history=residual_history,
            )

        return False
