"""
Elements of G2, the automorphism group of the octonions.

An automorphism fixes 1 and acts orthogonally on the seven imaginary
units, so it is stored as a real 7x7 matrix acting on (i, j, k, e, f, g, h).
It is determined by the images (xi, eta, zeta) of (i, j, e), which this
module keeps next to the matrix.
"""

import logging
from dataclasses import dataclass
from typing import Any

import numpy as np

from . import cayley_dickson as cd
from .exceptions import NotInnerAutomorphismError, NotUnitError, OrthogonalityViolationError, PreconditionError
from .report import IdentityCheck, IdentityReport

logger = logging.getLogger(__name__)

IMAGINARY_DIMENSION = 7
SPHERE_TOL = 1e-12
ORTHOGONALITY_TOL = 1e-10
MULTIPLICATIVITY_TOL = 1e-9
FRAME_TOL = 1e-9
DEGENERATE_CANDIDATE = 1e-6

# Imaginary coordinate index of each generator of a triple.
_I, _J, _E = 0, 1, 3

_IMAGINARY_BASIS = np.eye(cd.DIMENSION)[1:]
_BASIS_PRODUCTS = cd.multiply(_IMAGINARY_BASIS[:, None, :], _IMAGINARY_BASIS[None, :, :])


class SpherePoint6(cd.Octonion):
    """A unit purely imaginary octonion, a point of S6."""

    __slots__ = ()

    def __init__(self: "SpherePoint6", coords: Any) -> None:  # noqa: ANN401 Matches Octonion's accepted inputs
        """Create a point, rejecting a nonzero real part or a norm away from 1."""
        super().__init__(coords)
        if self.coords[0] != 0.0:
            message = f"A point of S6 has zero real part, got {self.coords[0]:.3e}"
            raise PreconditionError(message, residual=abs(self.coords[0]))
        deviation = abs(float(cd.norm(self.coords)) - 1.0)
        if deviation >= SPHERE_TOL:
            message = f"A point of S6 has unit norm, off by {deviation:.3e}"
            raise NotUnitError(message, residual=deviation)

    @classmethod
    def from_imaginary(cls: type["SpherePoint6"], values: Any) -> "SpherePoint6":  # noqa: ANN401
        """Create a point from its seven imaginary coordinates x2..x8."""
        return cls(np.concatenate([[0.0], np.asarray(values, dtype=float)]))

    @classmethod
    def project(cls: type["SpherePoint6"], x: cd.Octonion | np.ndarray, tol: float = FRAME_TOL) -> "SpherePoint6":
        """Drop the real part and rescale to unit norm, as long as both corrections are within tol."""
        coords = np.array(x.coords if isinstance(x, cd.Octonion) else x, dtype=float)
        size = float(cd.norm(coords[1:]))
        if abs(coords[0]) >= tol or abs(size - 1.0) >= tol:
            message = f"Cannot project onto S6: real part {coords[0]:.3e}, norm {size:.12g}"
            raise NotUnitError(message, residual=max(abs(coords[0]), abs(size - 1.0)))
        coords[0] = 0.0
        coords[1:] /= size
        return cls(coords)

    @classmethod
    def from_json(cls: type["SpherePoint6"], payload: list[float]) -> "SpherePoint6":
        """Read the JSON form [x2, ..., x8]."""
        return cls.from_imaginary(payload)

    def to_json(self: "SpherePoint6") -> list[float]:
        """Return the JSON form [x2, ..., x8]."""
        return [float(value) for value in self.imaginary]

    def __neg__(self: "SpherePoint6") -> "SpherePoint6":
        """Return the antipodal point."""
        return SpherePoint6(-self.coords)

    def __repr__(self: "SpherePoint6") -> str:
        """Show the imaginary coordinates."""
        values = ", ".join(f"{value:.6g}" for value in self.imaginary)
        return f"SpherePoint6([{values}])"


NORTH_POLE = SpherePoint6.from_imaginary([1, 0, 0, 0, 0, 0, 0])
SOUTH_POLE = -NORTH_POLE


@dataclass(frozen=True, eq=False)
class G2Element:
    """An automorphism of the octonions, as its 7x7 matrix on the imaginary units."""

    matrix: np.ndarray
    triple: tuple[SpherePoint6, SpherePoint6, SpherePoint6]

    def __post_init__(self: "G2Element") -> None:
        """Freeze the matrix."""
        frozen = np.array(self.matrix, dtype=float)
        if frozen.shape != (IMAGINARY_DIMENSION, IMAGINARY_DIMENSION):
            message = f"A G2 element is a 7x7 matrix, got shape {frozen.shape}"
            raise PreconditionError(message)
        frozen.flags.writeable = False
        object.__setattr__(self, "matrix", frozen)

    @classmethod
    def identity(cls: type["G2Element"]) -> "G2Element":
        """Return the identity automorphism."""
        return cls.from_matrix(np.eye(IMAGINARY_DIMENSION))

    @classmethod
    def from_matrix(cls: type["G2Element"], matrix: np.ndarray, *, validate: bool = True) -> "G2Element":
        """Wrap a matrix, reading the triple from the columns for i, j and e."""
        matrix = np.asarray(matrix, dtype=float)
        if validate:
            orthogonality = orthogonality_residual(matrix)
            if orthogonality >= ORTHOGONALITY_TOL:
                message = f"Matrix is not orthogonal, residual {orthogonality:.3e}"
                raise OrthogonalityViolationError(message, condition="orthogonal", residual=orthogonality)
            multiplicativity = multiplicativity_residual(matrix)
            if multiplicativity >= MULTIPLICATIVITY_TOL:
                message = f"Matrix is not an automorphism, residual {multiplicativity:.3e}"
                raise OrthogonalityViolationError(message, condition="multiplicative", residual=multiplicativity)
        xi, eta, zeta = (SpherePoint6.project(np.concatenate([[0.0], matrix[:, column]])) for column in (_I, _J, _E))
        return cls(matrix, (xi, eta, zeta))

    @classmethod
    def from_json(cls: type["G2Element"], payload: dict[str, Any]) -> "G2Element":
        """Read the JSON form written by to_json()."""
        return cls.from_matrix(np.array(payload["matrix"], dtype=float))

    def to_json(self: "G2Element") -> dict[str, Any]:
        """Return {"matrix": 7x7 rows, "triple": {"xi", "eta", "zeta"}}."""
        xi, eta, zeta = self.triple
        return {
            "matrix": self.matrix.tolist(),
            "triple": {"xi": xi.to_json(), "eta": eta.to_json(), "zeta": zeta.to_json()},
        }

    @property
    def determinant(self: "G2Element") -> float:
        """Return the determinant of the matrix."""
        return float(np.linalg.det(self.matrix))

    def apply(self: "G2Element", x: cd.Octonion) -> cd.Octonion:
        """Return the image of x."""
        return apply(self, x)

    def inverse(self: "G2Element") -> "G2Element":
        """Return the inverse automorphism."""
        return inverse(self)


def orthogonality_residual(matrix: np.ndarray) -> float:
    """Return the largest entry of |M^T M - I|."""
    matrix = np.asarray(matrix, dtype=float)
    gram = np.swapaxes(matrix, -1, -2) @ matrix
    return float(np.max(np.abs(gram - np.eye(matrix.shape[-1]))))


def apply_matrix(matrix: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Apply one or more 7x7 matrices to octonion arrays, fixing the real part."""
    x = np.asarray(x, dtype=float)
    imaginary = np.einsum("...ab,...b->...a", matrix, x[..., 1:])
    real = np.broadcast_to(x[..., :1], (*imaginary.shape[:-1], 1))
    return np.concatenate([real, imaginary], axis=-1)


def basis_images(matrix: np.ndarray) -> np.ndarray:
    """Return the images of the seven imaginary units as octonion arrays, shape (..., 7, 8)."""
    columns = np.swapaxes(np.asarray(matrix, dtype=float), -1, -2)
    zeros = np.zeros((*columns.shape[:-1], 1))
    return np.concatenate([zeros, columns], axis=-1)


def multiplicativity_residual(matrix: np.ndarray) -> float:
    """
    Return the largest |M(b_p b_q) - M(b_p) M(b_q)| over the 49 pairs of imaginary units.

    Accepts a single 7x7 matrix or a stack of them.
    """
    images = basis_images(matrix)
    left = apply_matrix(np.asarray(matrix, dtype=float)[..., None, None, :, :], _BASIS_PRODUCTS)
    right = cd.multiply(images[..., :, None, :], images[..., None, :, :])
    return float(np.max(np.abs(left - right)))


def automorphism_from_triple(
    xi: SpherePoint6,
    eta: SpherePoint6,
    zeta: SpherePoint6,
    tol: float = FRAME_TOL,
) -> G2Element:
    """
    Build the unique automorphism sending (i, j, e) to (xi, eta, zeta).

    The triple must satisfy eta _|_ xi and zeta _|_ xi, eta, xi*eta. The
    remaining units go to k -> xi eta, f -> xi zeta, g -> eta zeta and
    h -> (xi eta) zeta.
    """
    xi_eta = cd.oct_mul(xi, eta)
    conditions = {
        "<eta, xi>": cd.oct_inner(eta, xi),
        "<zeta, xi>": cd.oct_inner(zeta, xi),
        "<zeta, eta>": cd.oct_inner(zeta, eta),
        "<zeta, xi eta>": cd.oct_inner(zeta, xi_eta),
    }
    for condition, value in conditions.items():
        if abs(value) >= tol:
            logger.error(f"Frame condition {condition} = {value:.3e} exceeds {tol:.1e}")
            message = f"Cannot build an automorphism: {condition} = {value:.3e}"
            raise OrthogonalityViolationError(message, condition=condition, residual=abs(value))

    images = [
        xi,
        eta,
        xi_eta,
        zeta,
        cd.oct_mul(xi, zeta),
        cd.oct_mul(eta, zeta),
        cd.oct_mul(xi_eta, zeta),
    ]
    matrix = np.column_stack([image.imaginary for image in images])
    residual = multiplicativity_residual(matrix)
    if residual >= MULTIPLICATIVITY_TOL:
        message = f"Frame does not define an automorphism, residual {residual:.3e}"
        raise OrthogonalityViolationError(message, condition="multiplicative", residual=residual)
    return G2Element(matrix, (xi, eta, zeta))


def apply(g: G2Element, x: cd.Octonion) -> cd.Octonion:
    """Fix the real part of x and rotate its imaginary part."""
    return cd.Octonion(apply_matrix(g.matrix, x.coords))


def compose(g: G2Element, h: G2Element) -> G2Element:
    """Return g after h."""
    return G2Element.from_matrix(g.matrix @ h.matrix, validate=False)


def inverse(g: G2Element) -> G2Element:
    """Return the inverse, which is the transpose."""
    return G2Element.from_matrix(g.matrix.T, validate=False)


def conjugation_matrix(r: cd.Octonion | np.ndarray) -> np.ndarray:
    """Return the 7x7 matrix of x -> r x r^-1 on the imaginary units, for any invertible r."""
    coords = np.asarray(r.coords if isinstance(r, cd.Octonion) else r, dtype=float)
    r_inverse = cd.inverse(coords)
    conjugated = cd.multiply(cd.multiply(coords[..., None, :], _IMAGINARY_BASIS), r_inverse[..., None, :])
    return np.swapaxes(conjugated[..., 1:], -1, -2)


def inner_automorphism_residual(r: cd.Octonion | np.ndarray) -> np.ndarray:
    """Return |4 r1**2 - |r|**2| / |r|**2, which vanishes exactly for the admissible r."""
    coords = np.asarray(r.coords if isinstance(r, cd.Octonion) else r, dtype=float)
    squared = cd.inner(coords, coords)
    return np.abs(4 * coords[..., 0] ** 2 - squared) / squared


def inner_automorphism(r: cd.Octonion, tol: float = FRAME_TOL) -> G2Element:
    """Return x -> r x r^-1, which is an automorphism exactly when r is not real and 4 r1**2 = |r|**2."""
    cd.oct_inv(r)
    imaginary_size = float(np.linalg.norm(r.imaginary))
    if imaginary_size < SPHERE_TOL * max(1.0, cd.oct_norm(r)):
        message = f"Conjugation by the real number {r.real:.6g} is the identity on every algebra, not a rotation"
        raise NotInnerAutomorphismError(message, residual=imaginary_size)
    criterion = float(inner_automorphism_residual(r))
    if criterion >= tol:
        logger.error(f"4 r1^2 - |r|^2 criterion residual {criterion:.3e} for {r!r}")
        message = f"Conjugation by {r!r} is not an automorphism: |4 r1^2 - |r|^2| / |r|^2 = {criterion:.3e}"
        raise NotInnerAutomorphismError(message, residual=criterion)
    return G2Element.from_matrix(conjugation_matrix(r))


def bracketing_residual(r: np.ndarray, x: np.ndarray) -> float:
    """Return the largest |(r x) r^-1 - r (x r^-1)|."""
    r_inverse = cd.inverse(r)
    left = cd.multiply(cd.multiply(r, x), r_inverse)
    right = cd.multiply(r, cd.multiply(x, r_inverse))
    return float(np.max(np.abs(left - right)))


def random_imaginary(rng: np.random.Generator, count: int) -> np.ndarray:
    """Draw count points of S6 as octonion arrays."""
    samples = rng.standard_normal((count, IMAGINARY_DIMENSION))
    samples /= np.linalg.norm(samples, axis=-1, keepdims=True)
    return np.concatenate([np.zeros((count, 1)), samples], axis=-1)


def _unit_orthogonal_to(rng: np.random.Generator, vectors: list[np.ndarray]) -> np.ndarray:
    while True:
        candidate = np.concatenate([[0.0], rng.standard_normal(IMAGINARY_DIMENSION)])
        for vector in vectors:
            candidate -= cd.inner(candidate, vector) * vector
        # products like xi * eta carry a real part of order 1e-17
        candidate[0] = 0.0
        size = float(cd.norm(candidate))
        if size > DEGENERATE_CANDIDATE:
            return candidate / size


def random_g2(seed: int | np.random.Generator) -> G2Element:
    """Sample a frame (xi, eta, zeta) uniformly and return its automorphism."""
    rng = np.random.default_rng(seed)
    xi = random_imaginary(rng, 1)[0]
    eta = _unit_orthogonal_to(rng, [xi])
    xi_eta = cd.multiply(xi, eta)
    zeta = _unit_orthogonal_to(rng, [xi, eta, xi_eta])
    return automorphism_from_triple(SpherePoint6(xi), SpherePoint6(eta), SpherePoint6(zeta))


def random_tangent_pairs(rng: np.random.Generator, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Draw base points on S6 and unit tangent vectors at them."""
    xi = random_imaginary(rng, count)
    v = random_imaginary(rng, count)
    v -= cd.inner(v, xi)[:, None] * xi
    v /= cd.norm(v)[:, None]
    return xi, v


def check_j_equivariance(
    g: G2Element | np.ndarray,
    n_samples: int,
    seed: int,
    tol: float = MULTIPLICATIVITY_TOL,
) -> IdentityReport:
    """
    Measure |g(xi v) - g(xi) g(v)| for tangent vectors v at random xi.

    Accepts any 7x7 matrix so that rotations outside G2 can be measured.
    Every ordered pair of distinct imaginary units is checked alongside the
    random samples.
    """
    if n_samples < 1:
        message = f"The J-equivariance check needs at least one sample, got {n_samples}"
        raise PreconditionError(message)
    matrix = g.matrix if isinstance(g, G2Element) else np.asarray(g, dtype=float)
    rng = np.random.default_rng(seed)
    xi, v = random_tangent_pairs(rng, n_samples)

    p, q = np.nonzero(~np.eye(IMAGINARY_DIMENSION, dtype=bool))
    xi = np.concatenate([xi, _IMAGINARY_BASIS[p]])
    v = np.concatenate([v, _IMAGINARY_BASIS[q]])

    left = apply_matrix(matrix, cd.multiply(xi, v))
    right = cd.multiply(apply_matrix(matrix, xi), apply_matrix(matrix, v))
    residual = float(np.max(np.abs(left - right)))
    check = IdentityCheck(
        "j_equivariance",
        "g(J_xi v) = J_g(xi) g(v)",
        residual,
        tol,
        reference="G2 preserves the almost complex structure",
    )
    return IdentityReport("j_equivariance", (check,), n_samples, seed)


def random_admissible_r(rng: np.random.Generator, count: int) -> np.ndarray:
    """Draw unit octonions with real part 1/2, the ones whose conjugation is an automorphism."""
    directions = random_imaginary(rng, count)
    return 0.5 * np.eye(cd.DIMENSION)[0] + (np.sqrt(3.0) / 2.0) * directions


def verify_g2_group(n_samples: int, seed: int, tol: float) -> IdentityReport:
    """Check random G2 elements, compositions and inner automorphisms."""
    if n_samples < 1:
        message = f"The G2 suite needs at least one sample, got {n_samples}"
        raise PreconditionError(message)
    rng = np.random.default_rng(seed)
    element_count = min(n_samples, 200)
    elements = [random_g2(rng) for _ in range(element_count)]
    matrices = np.stack([element.matrix for element in elements])
    logger.debug(f"Checking {element_count} random G2 elements")

    x = cd.random_octonions(rng, element_count)
    y = cd.random_octonions(rng, element_count)
    homomorphism = apply_matrix(matrices, cd.multiply(x, y)) - cd.multiply(
        apply_matrix(matrices, x),
        apply_matrix(matrices, y),
    )
    shifted = np.roll(matrices, 1, axis=0)
    composed = apply_matrix(matrices @ shifted, x) - apply_matrix(matrices, apply_matrix(shifted, x))
    inverted = np.swapaxes(matrices, -1, -2) @ matrices - np.eye(IMAGINARY_DIMENSION)

    admissible = random_admissible_r(rng, min(n_samples, 2000))
    r = cd.random_octonions(rng, n_samples, normalize=False)
    z = cd.random_octonions(rng, n_samples, normalize=False)
    identity_triple = automorphism_from_triple(
        NORTH_POLE,
        SpherePoint6.from_imaginary([0, 1, 0, 0, 0, 0, 0]),
        SpherePoint6.from_imaginary([0, 0, 0, 1, 0, 0, 0]),
    )
    equivariance = check_j_equivariance(elements[0], n_samples, seed, tol)

    checks = (
        IdentityCheck(
            "identity_from_basis_triple",
            "Phi(i, j, e) = id",
            float(np.max(np.abs(identity_triple.matrix - np.eye(IMAGINARY_DIMENSION)))),
            tol,
            reference="automorphism from a basic triple",
        ),
        IdentityCheck("orthogonal", "M^T M = I", orthogonality_residual(matrices), tol, reference="G2 inside SO(7)"),
        IdentityCheck(
            "determinant_one",
            "det M = 1",
            float(np.max(np.abs(np.linalg.det(matrices) - 1.0))),
            tol,
            reference="G2 inside SO(7)",
        ),
        IdentityCheck(
            "multiplicative",
            "M(b_p b_q) = M(b_p) M(b_q)",
            multiplicativity_residual(matrices),
            tol,
            reference="automorphism of O",
        ),
        IdentityCheck(
            "homomorphism",
            "g(xy) = g(x) g(y)",
            float(np.max(np.abs(homomorphism))),
            tol,
            reference="automorphism of O",
        ),
        IdentityCheck(
            "composition",
            "(gh)(x) = g(h(x))",
            float(np.max(np.abs(composed))),
            tol,
            reference="group law of G2",
        ),
        IdentityCheck("inverse", "g^-1 g = id", float(np.max(np.abs(inverted))), tol, reference="group law of G2"),
        IdentityCheck(
            "inner_automorphism",
            "x -> r x r^-1 multiplicative when 4 r1^2 = |r|^2",
            multiplicativity_residual(conjugation_matrix(admissible)),
            tol,
            reference="inner automorphism criterion",
        ),
        IdentityCheck(
            "well_bracketed",
            "(r x) r^-1 = r (x r^-1)",
            bracketing_residual(r, z),
            tol,
            reference="inner automorphism criterion",
        ),
        *equivariance.checks,
    )
    report = IdentityReport("g2", checks, n_samples, seed)
    logger.debug(f"G2 suite largest residual {report.max_residual:.3e}")
    return report
