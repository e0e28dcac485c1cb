"""Exception types raised by the numerical pipeline and the CLI."""


class NotHermitianError(ValueError):
    """Input matrix is not Hermitian within the accepted tolerance."""

    def __init__(self, asymmetry: float):
        self.asymmetry = asymmetry
        super().__init__(f"matrix is not Hermitian: max |A - A^H| = {asymmetry:.3e}")


class ConvergenceError(RuntimeError):
    """Jacobi sweeps hit the cap before the off-diagonal mass was small enough."""

    def __init__(self, residual: float, sweeps: int):
        self.residual = residual
        self.sweeps = sweeps
        super().__init__(
            f"eigensolver did not converge after {sweeps} sweeps "
            f"(relative off-diagonal norm {residual:.3e})"
        )


class InvalidStateError(ValueError):
    """Matrix is not a density matrix (wrong trace or negative eigenvalues)."""


class ConfigError(ValueError):
    """Bad sweep configuration or command-line usage."""
