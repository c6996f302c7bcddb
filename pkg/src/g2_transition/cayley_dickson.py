"""
The octonion algebra built by Cayley-Dickson doubling.

Octonions are stored as 8 real coordinates in the basis order
(1, i, j, k, e, f, g, h) with f = ie, g = je and h = ke.

The product is defined by the doubling rule

    (a, b)(u, v) = (au - conj(v) b, b conj(u) + va)

applied recursively R -> C -> H -> O. At import time the rule is
evaluated on every pair of basis elements to produce the signed
MULTIPLICATION_TABLE, and all arithmetic afterwards goes through the
table. Every function accepts numpy arrays whose last axis has length 8
and broadcasts over the leading axes.
"""

import logging
from collections.abc import Callable, Iterable
from dataclasses import dataclass

import numpy as np

from .exceptions import PreconditionError, ZeroDivisorError
from .report import IdentityCheck, IdentityReport

logger = logging.getLogger(__name__)

BASIS_NAMES = ("1", "i", "j", "k", "e", "f", "g", "h")
DIMENSION = len(BASIS_NAMES)
ZERO_DIVISOR_EPSILON = 1e-30

Product = Callable[[np.ndarray, np.ndarray], np.ndarray]


def conjugate(x: np.ndarray) -> np.ndarray:
    """Return the conjugate: the real coordinate is kept and the others are negated."""
    x = np.asarray(x, dtype=float)
    result = -x
    result[..., 0] = x[..., 0]
    return result


def doubling_product(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Multiply two elements of a 2**n dimensional Cayley-Dickson algebra with the recursive rule."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    size = x.shape[-1]
    if size == 1:
        return x * y
    if size % 2:
        message = f"Cannot split an element of dimension {size} into halves"
        raise PreconditionError(message)

    half = size // 2
    a, b = x[..., :half], x[..., half:]
    u, v = y[..., :half], y[..., half:]
    first = doubling_product(a, u) - doubling_product(conjugate(v), b)
    second = doubling_product(b, conjugate(u)) + doubling_product(v, a)
    return np.concatenate([first, second], axis=-1)


def _contract(x: np.ndarray, y: np.ndarray, tensor: np.ndarray) -> np.ndarray:
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    outer = x[..., :, None] * y[..., None, :]
    flat = outer.reshape(*outer.shape[:-2], DIMENSION * DIMENSION)
    return flat @ tensor.reshape(DIMENSION * DIMENSION, DIMENSION)


@dataclass(frozen=True)
class MultiplicationTable:
    """
    Signed products of the basis elements.

    basis[p] * basis[q] == signs[p, q] * basis[indices[p, q]]
    """

    signs: np.ndarray
    indices: np.ndarray

    @classmethod
    def from_doubling(cls: type["MultiplicationTable"]) -> "MultiplicationTable":
        """Evaluate the doubling rule on every pair of basis elements."""
        identity = np.eye(DIMENSION)
        products = doubling_product(identity[:, None, :], identity[None, :, :])
        indices = np.argmax(np.abs(products), axis=-1)
        signs = np.take_along_axis(products, indices[..., None], axis=-1)[..., 0]
        signs = np.rint(signs).astype(int)
        indices = indices.astype(int)
        signs.flags.writeable = False
        indices.flags.writeable = False
        return cls(signs, indices)

    def with_flipped_sign(self: "MultiplicationTable", left: int, right: int) -> "MultiplicationTable":
        """Return a copy of the table with the sign of one product negated."""
        signs = self.signs.copy()
        signs[left, right] = -signs[left, right]
        signs.flags.writeable = False
        return MultiplicationTable(signs, self.indices)

    def structure_tensor(self: "MultiplicationTable") -> np.ndarray:
        """Return T with basis[p] * basis[q] == sum_k T[p, q, k] basis[k]."""
        tensor = np.zeros((DIMENSION, DIMENSION, DIMENSION))
        p, q = np.indices((DIMENSION, DIMENSION))
        tensor[p, q, self.indices] = self.signs
        return tensor

    def multiply(self: "MultiplicationTable", x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Multiply octonion arrays with the table."""
        return _contract(x, y, self.structure_tensor())

    def is_consistent(self: "MultiplicationTable") -> bool:
        """Check the unit row and column and that every imaginary basis element squares to -1."""
        unit_row = np.all(self.indices[0] == np.arange(DIMENSION)) and np.all(self.signs[0] == 1)
        unit_column = np.all(self.indices[:, 0] == np.arange(DIMENSION)) and np.all(self.signs[:, 0] == 1)
        diagonal = np.arange(1, DIMENSION)
        squares = np.all(self.indices[diagonal, diagonal] == 0) and np.all(self.signs[diagonal, diagonal] == -1)
        return bool(unit_row and unit_column and squares)

    def dump(self: "MultiplicationTable") -> str:
        """Render the table as 8 lines of '+name' or '-name', rows are left factors."""
        lines = []
        for p in range(DIMENSION):
            entries = []
            for q in range(DIMENSION):
                sign = "+" if self.signs[p, q] > 0 else "-"
                entries.append(f"{sign}{BASIS_NAMES[self.indices[p, q]]}")
            lines.append(" ".join(entries))
        return "\n".join(lines)

    def __eq__(self: "MultiplicationTable", other: object) -> bool:
        """Compare two tables entry by entry."""
        if not isinstance(other, MultiplicationTable):
            return NotImplemented
        return bool(np.array_equal(self.signs, other.signs) and np.array_equal(self.indices, other.indices))

    def __hash__(self: "MultiplicationTable") -> int:
        """Hash the table entries."""
        return hash((self.signs.tobytes(), self.indices.tobytes()))


MULTIPLICATION_TABLE = MultiplicationTable.from_doubling()
_STRUCTURE_TENSOR = MULTIPLICATION_TABLE.structure_tensor()
_STRUCTURE_TENSOR.flags.writeable = False


def multiply(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Multiply octonion arrays with the standard table."""
    return _contract(x, y, _STRUCTURE_TENSOR)


def inner(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Return the Euclidean inner product of the coordinates."""
    return np.sum(np.asarray(x, dtype=float) * np.asarray(y, dtype=float), axis=-1)


def norm(x: np.ndarray) -> np.ndarray:
    """Return the Euclidean norm of the coordinates."""
    return np.linalg.norm(np.asarray(x, dtype=float), axis=-1)


def inverse(x: np.ndarray) -> np.ndarray:
    """Return conj(x) / |x|**2, raising ZeroDivisorError when |x|**2 is below the epsilon."""
    x = np.asarray(x, dtype=float)
    squared = inner(x, x)
    if np.any(squared < ZERO_DIVISOR_EPSILON):
        smallest = float(np.min(squared))
        logger.error(f"Cannot invert an octonion with squared norm {smallest:.3e}")
        message = f"Octonion with squared norm {smallest:.3e} is not invertible"
        raise ZeroDivisorError(message, residual=smallest)
    return conjugate(x) / squared[..., None]


def associator(x: np.ndarray, y: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Return (xy)z - x(yz)."""
    return multiply(multiply(x, y), z) - multiply(x, multiply(y, z))


class Octonion:
    """An immutable octonion c1*1 + c2*i + ... + c8*h."""

    __slots__ = ("_coords",)

    def __init__(self: "Octonion", coords: Iterable[float] | np.ndarray) -> None:
        """Create an octonion from 8 real coordinates."""
        values = np.array(coords, dtype=float).reshape(-1)
        if values.shape != (DIMENSION,):
            message = f"An octonion needs {DIMENSION} coordinates, got {values.shape[0]}"
            raise PreconditionError(message)
        values.flags.writeable = False
        self._coords = values

    @classmethod
    def basis(cls: type["Octonion"], name: str | int) -> "Octonion":
        """Return a basis element by name ('1', 'i', ..., 'h') or by index 0-7."""
        index = BASIS_NAMES.index(name) if isinstance(name, str) else int(name)
        return cls(np.eye(DIMENSION)[index])

    @classmethod
    def one(cls: type["Octonion"]) -> "Octonion":
        """Return the unit."""
        return cls.basis(0)

    @classmethod
    def zero(cls: type["Octonion"]) -> "Octonion":
        """Return zero."""
        return cls(np.zeros(DIMENSION))

    @property
    def coords(self: "Octonion") -> np.ndarray:
        """Return the read-only coordinate array."""
        return self._coords

    @property
    def real(self: "Octonion") -> float:
        """Return the coefficient of 1."""
        return float(self._coords[0])

    @property
    def imaginary(self: "Octonion") -> np.ndarray:
        """Return the seven coefficients of i through h."""
        return self._coords[1:]

    def __add__(self: "Octonion", other: "Octonion") -> "Octonion":
        """Add coordinate-wise."""
        return Octonion(self._coords + other.coords)

    def __sub__(self: "Octonion", other: "Octonion") -> "Octonion":
        """Subtract coordinate-wise."""
        return Octonion(self._coords - other.coords)

    def __neg__(self: "Octonion") -> "Octonion":
        """Negate."""
        return Octonion(-self._coords)

    def __mul__(self: "Octonion", other: "Octonion | float") -> "Octonion":
        """Multiply by an octonion on the right or by a real scalar."""
        if isinstance(other, Octonion):
            return oct_mul(self, other)
        return Octonion(self._coords * float(other))

    def __rmul__(self: "Octonion", other: float) -> "Octonion":
        """Multiply by a real scalar on the left."""
        return Octonion(float(other) * self._coords)

    def __truediv__(self: "Octonion", other: "Octonion | float") -> "Octonion":
        """Multiply by the inverse of an octonion on the right, or divide by a real scalar."""
        if isinstance(other, Octonion):
            return oct_mul(self, oct_inv(other))
        return Octonion(self._coords / float(other))

    def __eq__(self: "Octonion", other: object) -> bool:
        """Compare coordinates exactly."""
        if not isinstance(other, Octonion):
            return NotImplemented
        return bool(np.array_equal(self._coords, other.coords))

    def __hash__(self: "Octonion") -> int:
        """Hash the coordinates."""
        return hash(self._coords.tobytes())

    def __repr__(self: "Octonion") -> str:
        """Show the coordinates."""
        values = ", ".join(f"{value:.6g}" for value in self._coords)
        return f"Octonion([{values}])"

    def isclose(self: "Octonion", other: "Octonion", tol: float = 1e-12) -> bool:
        """Return True when every coordinate differs by less than tol."""
        return bool(np.max(np.abs(self._coords - other.coords)) < tol)


def oct_mul(a: Octonion, b: Octonion) -> Octonion:
    """Return the product ab."""
    return Octonion(multiply(a.coords, b.coords))


def oct_conj(a: Octonion) -> Octonion:
    """Return the conjugate of a."""
    return Octonion(conjugate(a.coords))


def oct_inner(a: Octonion, b: Octonion) -> float:
    """Return the inner product of a and b."""
    return float(inner(a.coords, b.coords))


def oct_norm(a: Octonion) -> float:
    """Return |a|."""
    return float(norm(a.coords))


def oct_inv(a: Octonion) -> Octonion:
    """Return the inverse of a."""
    return Octonion(inverse(a.coords))


def random_octonions(rng: np.random.Generator, count: int, *, normalize: bool = True) -> np.ndarray:
    """Draw count octonions with standard normal coordinates, optionally scaled to unit norm."""
    samples = rng.standard_normal((count, DIMENSION))
    if normalize:
        samples /= norm(samples)[:, None]
    return samples


def basis_sweep(arity: int) -> tuple[np.ndarray, ...]:
    """Return arity arrays that together enumerate every tuple of basis elements."""
    identity = np.eye(DIMENSION)
    grid = np.indices((DIMENSION,) * arity).reshape(arity, -1)
    return tuple(identity[axis] for axis in grid)


def _max_residual(difference: np.ndarray) -> float:
    if difference.size == 0:
        return 0.0
    return float(np.max(np.abs(difference)))


def verify_algebra_identities(
    n_samples: int,
    seed: int,
    tol: float,
    *,
    table: MultiplicationTable | None = None,
    normalize: bool = True,
    include_basis: bool = True,
) -> IdentityReport:
    """
    Measure the largest residual of every octonion identity over random samples.

    The samples are n_samples random quadruples (a, b, x, y) drawn from a
    generator seeded with seed. With include_basis the 4096 quadruples of
    basis elements are checked too, which makes a single wrong sign in the
    table show up deterministically. Passing a table other than the
    standard one evaluates the identities in that (possibly broken) algebra.
    """
    if n_samples < 1:
        message = f"The algebra suite needs at least one sample, got {n_samples}"
        raise PreconditionError(message)

    if table is None:
        table = MULTIPLICATION_TABLE
    mul: Product = table.multiply
    rng = np.random.default_rng(seed)
    a, b, x, y = (random_octonions(rng, n_samples, normalize=normalize) for _ in range(4))
    if include_basis:
        sweep = basis_sweep(4)
        a, b, x, y = (np.concatenate([random, basis]) for random, basis in zip((a, b, x, y), sweep, strict=True))
    logger.debug(f"Checking the algebra identities on {a.shape[0]} quadruples")

    ab = mul(a, b)
    checks = [
        IdentityCheck(
            "left_alternative",
            "a(ab) = (aa)b",
            _max_residual(mul(a, ab) - mul(mul(a, a), b)),
            tol,
            reference="alternative law",
        ),
        IdentityCheck(
            "right_alternative",
            "(ab)b = a(bb)",
            _max_residual(mul(ab, b) - mul(a, mul(b, b))),
            tol,
            reference="alternative law",
        ),
        IdentityCheck(
            "flexible",
            "(ab)a = a(ba)",
            _max_residual(mul(ab, a) - mul(a, mul(b, a))),
            tol,
            reference="flexible law",
        ),
        IdentityCheck(
            "norm_multiplicative",
            "|ab| = |a||b|",
            _max_residual(norm(ab) - norm(a) * norm(b)),
            tol,
            reference="normed algebra",
        ),
        IdentityCheck(
            "conjugate_products",
            "(ax)conj(y) + (ay)conj(x) = 2<x,y>a",
            _max_residual(
                mul(mul(a, x), conjugate(y)) + mul(mul(a, y), conjugate(x)) - 2 * inner(x, y)[:, None] * a,
            ),
            tol,
            reference="conjugate composition law",
        ),
        IdentityCheck(
            "linearized_alternative",
            "(ax)y + (ay)x = a(xy) + a(yx)",
            _max_residual(mul(mul(a, x), y) + mul(mul(a, y), x) - mul(a, mul(x, y)) - mul(a, mul(y, x))),
            tol,
            reference="linearized alternative law",
        ),
        IdentityCheck(
            "linearized_norm",
            "<ax,by> + <bx,ay> = 2<a,b><x,y>",
            _max_residual(
                inner(mul(a, x), mul(b, y)) + inner(mul(b, x), mul(a, y)) - 2 * inner(a, b) * inner(x, y),
            ),
            tol,
            reference="polarized composition law",
        ),
        IdentityCheck(
            "moufang",
            "(a(bx))a = (ab)(xa)",
            _max_residual(mul(mul(a, mul(b, x)), a) - mul(ab, mul(x, a))),
            tol,
            reference="Moufang identity",
        ),
        IdentityCheck(
            "conjugation_antiautomorphism",
            "conj(ab) = conj(b)conj(a)",
            _max_residual(conjugate(ab) - mul(conjugate(b), conjugate(a))),
            tol,
            reference="conjugation reverses products",
        ),
        IdentityCheck(
            "conjugate_from_real_part",
            "conj(a) = 2 a_1 - a",
            _max_residual(conjugate(a) - (2 * a[:, :1] * np.eye(DIMENSION)[0] - a)),
            tol,
            reference="Cayley-Dickson conjugation",
        ),
        IdentityCheck(
            "table_matches_doubling",
            "table(a, b) = doubling(a, b)",
            _max_residual(ab - doubling_product(a, b)),
            tol,
            reference="Cayley-Dickson doubling",
        ),
    ]
    report = IdentityReport("algebra", tuple(checks), n_samples, seed)
    logger.debug(f"Algebra suite largest residual {report.max_residual:.3e}")
    return report
