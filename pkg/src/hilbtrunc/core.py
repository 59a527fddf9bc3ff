"""Scalar/vector/matrix substrate shared by all other modules.

Complex coefficient vectors with a declared basis and index origin,
Gauss-Legendre quadrature rules, dense minimum-norm least squares, and
singular values.  Everything here is immutable after construction and
safe to share across threads; the operations are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

#: Relative rank threshold for least squares: singular values below
#: RANK_RTOL times the largest one are treated as zero.
RANK_RTOL = 1e-12


class CapabilityError(Exception):
    """An operator or basis was asked for a capability it does not have."""


class SpaceMismatchError(Exception):
    """Two objects living in different ambient spaces were combined."""


class ConfigError(Exception):
    """An experiment configuration could not be parsed or validated."""


@dataclass(frozen=True)
class Coefficients:
    """A finite complex coefficient vector relative to a declared basis.

    Parameters
    ----------
    values : array_like
        The coefficients, in basis order.
    origin : int
        Index of the first entry (1 for N-indexed bases, -K for
        Z-indexed ones).  Immutable after construction.
    basis_tag : str
        Opaque identifier of the basis the entries refer to.  Arithmetic
        between vectors with different tags or origins is rejected.
    """

    values: np.ndarray
    origin: int = 1
    basis_tag: str = ""

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex).reshape(-1)
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)

    @property
    def norm(self) -> float:
        """Euclidean norm; equals the ambient norm for orthonormal bases."""
        return float(np.linalg.norm(self.values))

    def component(self, index: int) -> complex:
        """Entry at the absolute basis index, zero outside the stored range."""
        k = index - self.origin
        if 0 <= k < len(self.values):
            return complex(self.values[k])
        return 0.0

    def _check_compatible(self, other: "Coefficients"):
        if self.origin != other.origin or self.basis_tag != other.basis_tag:
            raise SpaceMismatchError(
                f"incompatible coefficient vectors: "
                f"({self.basis_tag!r}, origin {self.origin}) vs "
                f"({other.basis_tag!r}, origin {other.origin})"
            )

    def __add__(self, other: "Coefficients") -> "Coefficients":
        self._check_compatible(other)
        n = max(len(self), len(other))
        out = np.zeros(n, dtype=complex)
        out[: len(self)] += self.values
        out[: len(other)] += other.values
        return Coefficients(out, self.origin, self.basis_tag)

    def __sub__(self, other: "Coefficients") -> "Coefficients":
        return self + (-1.0) * other

    def __rmul__(self, scalar) -> "Coefficients":
        return Coefficients(scalar * self.values, self.origin, self.basis_tag)


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights of a quadrature rule on [a, b]."""

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        weights = np.array(self.weights, dtype=float)
        if nodes.shape != weights.shape:
            raise ValueError("nodes and weights must have equal length")
        nodes.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def integrate(self, fn) -> complex:
        """Apply the rule to a callable vectorized over the nodes."""
        return complex(np.sum(self.weights * np.asarray(fn(self.nodes))))


@dataclass(frozen=True)
class DenseMatrix:
    """Dense complex matrix with row-major entry semantics."""

    array: np.ndarray

    def __post_init__(self):
        arr = np.array(self.array, dtype=complex, order="C")
        if arr.ndim != 2:
            raise ValueError("DenseMatrix requires a 2-D entry layout")
        arr.flags.writeable = False
        object.__setattr__(self, "array", arr)

    @property
    def rows(self) -> int:
        return self.array.shape[0]

    @property
    def cols(self) -> int:
        return self.array.shape[1]

    @property
    def entries(self) -> np.ndarray:
        """Row-major flat view of the entries."""
        return self.array.reshape(-1)


def gauss_legendre(order: int, a: float, b: float) -> QuadratureRule:
    """Gauss-Legendre rule with `order` points, mapped affinely to [a, b].

    Exact for polynomials of degree <= 2*order - 1.

    Raises
    ------
    ValueError
        If order < 1 or the interval is degenerate (a >= b).
    """
    if order < 1:
        raise ValueError(f"quadrature order must be >= 1, got {order}")
    if not a < b:
        raise ValueError(f"degenerate interval [{a}, {b}]")
    x, w = np.polynomial.legendre.leggauss(order)
    half = 0.5 * (b - a)
    return QuadratureRule(a + half * (x + 1.0), half * w, order)


def qr_least_squares(A: DenseMatrix, b) -> Coefficients:
    """Minimum-norm minimizer of ||A x - b|| via pivoted-QR least squares.

    For square nonsingular A this is the exact solution.  Rank decisions
    use RANK_RTOL relative to the largest singular value; in the
    rank-deficient case the minimum-norm solution is returned.
    """
    bvals = b.values if isinstance(b, Coefficients) else np.asarray(b, dtype=complex)
    bvals = bvals.reshape(-1)
    if A.rows != len(bvals):
        raise ValueError(f"dimension mismatch: A has {A.rows} rows, b has {len(bvals)}")
    x, _, _, _ = scipy.linalg.lstsq(
        A.array, bvals, cond=RANK_RTOL, lapack_driver="gelsy"
    )
    return Coefficients(x, origin=1, basis_tag="")


def singular_values(A: DenseMatrix) -> np.ndarray:
    """Singular values of A in descending order."""
    return np.linalg.svd(A.array, compute_uv=False)
