"""
Chart trivializations of the principal SU(3)-bundle p: G2 -> S6.

The base S6 is covered by two caps around the poles N = i and S = -i.
Over the cap U1 around N the translating automorphism Q_xi is
conjugation by r_xi, which carries i to xi. Over the cap U2 around S
the translator Q~_xi is conjugation by r_{-xi}, which carries -i to xi.
An automorphism g over xi gets the fiber coordinate theta_xi(g): the
complex coordinates of g(j), g(e) and g(g) in the frame obtained by
translating (j, e, g) to xi, with J_xi(v) = xi v as the complex
structure. The transition t12 compares the two coordinates on the
overlap.
"""

import logging
from dataclasses import dataclass
from enum import StrEnum
from typing import Any

import numpy as np

from . import cayley_dickson as cd
from . import g2_group as g2
from .exceptions import (
    ChartViolationError,
    FiberMismatchError,
    NonUnitaryError,
    NotOnEquatorError,
    OrthogonalityViolationError,
    PoleSingularityError,
    PreconditionError,
    TangencyViolationError,
)
from .g2_group import G2Element, SpherePoint6
from .report import IdentityCheck, IdentityReport

logger = logging.getLogger(__name__)

SU3_TOL = 1e-8
POLE_DELTA = 1e-6
CAP_SLACK = 1e-12
TANGENCY_TOL = 1e-9
FRAME_TOL = 1e-10
EQUATOR_TOL = 1e-9
FIBER_TOL = 1e-9

_BASIS = np.eye(cd.DIMENSION)
_J, _E, _G = _BASIS[2], _BASIS[4], _BASIS[6]


class ChartId(StrEnum):
    """The two trivializing charts: U1 avoids S = -i and U2 avoids N = i."""

    U1 = "U1"
    U2 = "U2"


def su3_residuals(matrix: np.ndarray) -> tuple[float, float]:
    """Return the largest entry of |M^H M - I| and |det M - 1|."""
    matrix = np.asarray(matrix, dtype=complex)
    unitarity = float(np.max(np.abs(matrix.conj().swapaxes(-1, -2) @ matrix - np.eye(3))))
    determinant = float(np.max(np.abs(np.linalg.det(matrix) - 1.0)))
    return unitarity, determinant


def su3_check(matrix: "SU3Matrix | np.ndarray", tol: float = SU3_TOL) -> bool:
    """Return True when the matrix is unitary with determinant 1 within tol."""
    entries = matrix.entries if isinstance(matrix, SU3Matrix) else np.asarray(matrix, dtype=complex)
    if entries.shape[-2:] != (3, 3):
        return False
    unitarity, determinant = su3_residuals(entries)
    return unitarity < tol and determinant < tol


class SU3Matrix:
    """A 3x3 special unitary matrix; construction fails for matrices outside SU(3) unless tol is None."""

    __slots__ = ("_entries",)

    def __init__(self: "SU3Matrix", entries: Any, *, tol: float | None = SU3_TOL) -> None:  # noqa: ANN401
        """Create a matrix from 3x3 complex entries."""
        values = np.array(entries, dtype=complex)
        if values.shape != (3, 3):
            message = f"An SU(3) matrix is 3x3, got shape {values.shape}"
            raise PreconditionError(message)
        if tol is not None and not su3_check(values, tol):
            unitarity, determinant = su3_residuals(values)
            message = f"Matrix is not in SU(3): unitarity {unitarity:.3e}, determinant {determinant:.3e}"
            raise NonUnitaryError(message, residual=max(unitarity, determinant))
        values.flags.writeable = False
        self._entries = values

    @classmethod
    def identity(cls: type["SU3Matrix"]) -> "SU3Matrix":
        """Return the identity."""
        return cls(np.eye(3))

    @classmethod
    def from_json(cls: type["SU3Matrix"], payload: dict[str, Any]) -> "SU3Matrix":
        """Read {"rows": [[[re, im], ...], ...]}."""
        rows = np.array(payload["rows"], dtype=float)
        return cls(rows[..., 0] + 1j * rows[..., 1])

    @property
    def entries(self: "SU3Matrix") -> np.ndarray:
        """Return the read-only complex entries."""
        return self._entries

    def to_json(self: "SU3Matrix") -> dict[str, Any]:
        """Return {"rows": [[[re, im], ...], ...]} in row-major order."""
        return {"rows": [[[float(entry.real), float(entry.imag)] for entry in row] for row in self._entries]}

    def conj(self: "SU3Matrix") -> "SU3Matrix":
        """Return the entrywise complex conjugate."""
        return SU3Matrix(self._entries.conj(), tol=None)

    def transpose(self: "SU3Matrix") -> "SU3Matrix":
        """Return the transpose."""
        return SU3Matrix(self._entries.T, tol=None)

    def dagger(self: "SU3Matrix") -> "SU3Matrix":
        """Return the conjugate transpose, the inverse of a unitary matrix."""
        return SU3Matrix(self._entries.conj().T, tol=None)

    def max_difference(self: "SU3Matrix", other: "SU3Matrix | np.ndarray") -> float:
        """Return the largest entrywise distance to another matrix."""
        entries = other.entries if isinstance(other, SU3Matrix) else np.asarray(other, dtype=complex)
        return float(np.max(np.abs(self._entries - entries)))

    def __matmul__(self: "SU3Matrix", other: "SU3Matrix") -> "SU3Matrix":
        """Multiply matrices."""
        return SU3Matrix(self._entries @ other.entries, tol=None)

    def __repr__(self: "SU3Matrix") -> str:
        """Show the entries."""
        return f"SU3Matrix({np.array2string(self._entries, precision=6, suppress_small=True)})"


def random_su3(rng: np.random.Generator) -> SU3Matrix:
    """Draw a Haar-random SU(3) matrix from the QR decomposition of a complex Gaussian matrix."""
    gaussian = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    q, r = np.linalg.qr(gaussian)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    unitary = q * phases
    unitary /= np.linalg.det(unitary) ** (1.0 / 3.0)
    return SU3Matrix(unitary)


@dataclass(frozen=True, eq=False)
class ComplexFrame:
    """A complex orthonormal basis (a, b, c) of the tangent space at xi, with J_xi(v) = xi v."""

    xi: SpherePoint6
    a: cd.Octonion
    b: cd.Octonion
    c: cd.Octonion

    @property
    def vectors(self: "ComplexFrame") -> np.ndarray:
        """Return a, b, c as the rows of a 3x8 array."""
        return np.stack([self.a.coords, self.b.coords, self.c.coords])

    def orthonormality_residual(self: "ComplexFrame") -> float:
        """Return the largest deviation of (a, b, c, Ja, Jb, Jc) from an orthonormal set tangent at xi."""
        rows = self.vectors
        real_basis = np.concatenate([rows, cd.multiply(self.xi.coords, rows)])
        gram = real_basis @ real_basis.T
        tangency = np.abs(real_basis @ self.xi.coords)
        return float(max(np.max(np.abs(gram - np.eye(6))), np.max(tangency)))

    def coordinates(self: "ComplexFrame", y: cd.Octonion | np.ndarray) -> np.ndarray:
        """Return <y, a> + I<y, J a>, and likewise for b and c."""
        coords = np.asarray(y.coords if isinstance(y, cd.Octonion) else y, dtype=float)
        rows = self.vectors
        turned = cd.multiply(self.xi.coords, rows)
        return coords @ rows.T + 1j * (coords @ turned.T)

    def vector(self: "ComplexFrame", coordinates: np.ndarray) -> cd.Octonion:
        """Return the tangent vector with the specified complex coordinates."""
        coordinates = np.asarray(coordinates, dtype=complex)
        rows = self.vectors
        turned = cd.multiply(self.xi.coords, rows)
        return cd.Octonion(coordinates.real @ rows + coordinates.imag @ turned)


def fibration_p(g: G2Element) -> SpherePoint6:
    """Return g(i), the base point of g."""
    return g.triple[0]


def complex_structure_J(xi: SpherePoint6, v: cd.Octonion, tol: float = TANGENCY_TOL) -> cd.Octonion:  # noqa: N802
    """Return xi v for a tangent vector v at xi."""
    offset = max(abs(v.real), abs(cd.oct_inner(v, xi)))
    if offset >= tol:
        logger.error(f"Vector {v!r} is not tangent at {xi!r}")
        message = f"Vector is not tangent to S6 at the base point, offset {offset:.3e}"
        raise TangencyViolationError(message, residual=offset)
    return cd.oct_mul(xi, v)


def _require_cap(x2: np.ndarray) -> np.ndarray:
    """Return sqrt(1 + 2 x2), raising when a point is at the south pole or outside the northern cap."""
    x2 = np.asarray(x2, dtype=float)
    nearest_pole = float(np.min(1.0 + x2))
    if nearest_pole <= POLE_DELTA:
        logger.error(f"1 + x2 = {nearest_pole:.3e} is within {POLE_DELTA:.0e} of the pole")
        message = f"Point is at the excluded pole, 1 + x2 = {nearest_pole:.3e}"
        raise PoleSingularityError(message, residual=nearest_pole)
    radicand = 1.0 + 2.0 * x2
    lowest = float(np.min(radicand))
    if lowest < -CAP_SLACK:
        message = f"Point is outside the chart cap x2 >= -1/2, 1 + 2 x2 = {lowest:.3e}"
        raise ChartViolationError(message, residual=-lowest)
    return np.sqrt(np.clip(radicand, 0.0, None))


def translator_r(points: np.ndarray) -> np.ndarray:
    """Return r with r i conj(r) = xi for each point array xi of the northern cap."""
    x = np.asarray(points, dtype=float)
    s = _require_cap(x[..., 1])
    d = 1.0 + x[..., 1]
    x3, x4, x5, x6, x7, x8 = (x[..., index] for index in range(2, 8))
    columns = [
        np.ones_like(s),
        s,
        (x3 * s - x4) / d,
        (x3 + x4 * s) / d,
        (x5 * s - x6) / d,
        (x5 + x6 * s) / d,
        (x7 * s + x8) / d,
        (-x7 + x8 * s) / d,
    ]
    return 0.5 * np.stack(columns, axis=-1)


def r_xi(xi: SpherePoint6) -> cd.Octonion:
    """Return the unit octonion with real part 1/2 whose conjugation carries i to xi."""
    return cd.Octonion(translator_r(xi.coords))


def translator_equations_residual(points: np.ndarray, r: np.ndarray) -> float:
    """Return the largest residual of the seven quadratic equations that r i conj(r) = xi imposes on r."""
    x = np.asarray(points, dtype=float)
    r1, r2, r3, r4, r5, r6, r7, r8 = (np.asarray(r, dtype=float)[..., index] for index in range(8))
    left = np.stack(
        [
            r1**2 + r2**2 - r3**2 - r4**2 - r5**2 - r6**2 - r7**2 - r8**2,
            2 * (r2 * r3 + r1 * r4),
            2 * (r2 * r4 - r1 * r3),
            2 * (r2 * r5 + r1 * r6),
            2 * (r2 * r6 - r1 * r5),
            2 * (r2 * r7 - r1 * r8),
            2 * (r1 * r7 + r2 * r8),
        ],
        axis=-1,
    )
    return float(np.max(np.abs(left - x[..., 1:])))


def r_xi_equator(z_embedded: SpherePoint6) -> cd.Octonion:
    """Return (1 + i)(1 + xi) / 2 for a point xi on the equator."""
    x2 = float(z_embedded.coords[1])
    if abs(x2) >= EQUATOR_TOL:
        message = f"Point is not on the equator, x2 = {x2:.3e}"
        raise NotOnEquatorError(message, residual=abs(x2))
    one = cd.Octonion.one()
    return 0.5 * cd.oct_mul(one + cd.Octonion.basis("i"), one + z_embedded)


def chart_contains(chart: ChartId, xi: SpherePoint6) -> bool:
    """Return True when xi is in the cap where the chart's translator is defined."""
    x2 = float(xi.coords[1])
    if chart == ChartId.U1:
        return 1.0 + x2 > POLE_DELTA and 1.0 + 2.0 * x2 >= -CAP_SLACK
    return 1.0 - x2 > POLE_DELTA and 1.0 - 2.0 * x2 >= -CAP_SLACK


def translator_Q(xi: SpherePoint6) -> G2Element:  # noqa: N802
    """Return Q_xi, conjugation by r_xi, which carries i to xi."""
    return g2.inner_automorphism(r_xi(xi))


def translator_Q_tilde(xi: SpherePoint6) -> G2Element:  # noqa: N802
    """Return Q~_xi, conjugation by r_{-xi}, which carries -i to xi."""
    return g2.inner_automorphism(r_xi(-xi))


def translator(xi: SpherePoint6, chart: ChartId) -> G2Element:
    """Return the translator of the specified chart."""
    if chart == ChartId.U1:
        return translator_Q(xi)
    return translator_Q_tilde(xi)


def frame_at(xi: SpherePoint6, chart: ChartId) -> ComplexFrame:
    """Return the frame (Q j, Q e, Q g) at xi for the translator Q of the chart."""
    q = translator(xi, chart)
    images = [cd.Octonion(g2.apply_matrix(q.matrix, unit)) for unit in (_J, _E, _G)]
    frame = ComplexFrame(xi, *images)
    residual = frame.orthonormality_residual()
    if residual >= FRAME_TOL:
        message = f"Frame at {xi!r} in chart {chart} is not orthonormal, residual {residual:.3e}"
        raise OrthogonalityViolationError(message, condition="frame", residual=residual)
    return frame


def _fiber_columns(g: G2Element) -> np.ndarray:
    """Return g(j), g(e), g(g) as the rows of a 3x8 array."""
    return g2.apply_matrix(g.matrix, np.stack([_J, _E, _G]))


def theta_xi(g: G2Element, chart: ChartId) -> SU3Matrix:
    """Return the fiber coordinate of g in the chart: the frame coordinates of g(j), g(e), g(g) as columns."""
    xi = fibration_p(g)
    frame = frame_at(xi, chart)
    columns = frame.coordinates(_fiber_columns(g))
    return SU3Matrix(columns.T)


def theta_inverse(
    xi: SpherePoint6,
    matrix: SU3Matrix | np.ndarray,
    chart: ChartId,
    tol: float = FIBER_TOL,
) -> G2Element:
    """
    Return the automorphism over xi whose fiber coordinate is matrix.

    Only the first two columns are used to rebuild g(j) and g(e); the
    third column must then agree with the coordinates of g(j) g(e).
    """
    entries = matrix.entries if isinstance(matrix, SU3Matrix) else np.asarray(matrix, dtype=complex)
    frame = frame_at(xi, chart)
    eta = g2.SpherePoint6.project(frame.vector(entries[:, 0]), tol=max(tol, SU3_TOL))
    zeta = g2.SpherePoint6.project(frame.vector(entries[:, 1]), tol=max(tol, SU3_TOL))
    g = g2.automorphism_from_triple(xi, eta, zeta, tol=max(tol, SU3_TOL))
    rebuilt = frame.coordinates(_fiber_columns(g)).T
    mismatch = float(np.max(np.abs(rebuilt - entries)))
    if mismatch >= tol:
        logger.error(f"Fiber coordinate mismatch {mismatch:.3e} at {xi!r} in chart {chart}")
        message = f"Matrix is not the fiber coordinate of any automorphism over xi, mismatch {mismatch:.3e}"
        raise FiberMismatchError(message, residual=mismatch)
    return g


def _require_chart(chart: ChartId, xi: SpherePoint6) -> None:
    if not chart_contains(chart, xi):
        message = f"Point {xi!r} is outside chart {chart}"
        raise ChartViolationError(message)


def psi1(g: G2Element) -> tuple[SpherePoint6, SU3Matrix]:
    """Return the trivialization over U1: (g(i), theta_xi(g))."""
    xi = fibration_p(g)
    _require_chart(ChartId.U1, xi)
    return xi, theta_xi(g, ChartId.U1)


def psi2(g: G2Element) -> tuple[SpherePoint6, SU3Matrix]:
    """Return the trivialization over U2: (g(i), theta~_xi(g))."""
    xi = fibration_p(g)
    _require_chart(ChartId.U2, xi)
    return xi, theta_xi(g, ChartId.U2)


def psi1_inverse(xi: SpherePoint6, matrix: SU3Matrix) -> G2Element:
    """Invert psi1."""
    _require_chart(ChartId.U1, xi)
    return theta_inverse(xi, matrix, ChartId.U1)


def psi2_inverse(xi: SpherePoint6, matrix: SU3Matrix) -> G2Element:
    """Invert psi2."""
    _require_chart(ChartId.U2, xi)
    return theta_inverse(xi, matrix, ChartId.U2)


def transition_t12(xi: SpherePoint6) -> SU3Matrix:
    """Return t12(xi) with psi1(psi2^-1(xi, phi)) = (xi, t12(xi) phi)."""
    _require_chart(ChartId.U1, xi)
    _require_chart(ChartId.U2, xi)
    return theta_xi(theta_inverse(xi, SU3Matrix.identity(), ChartId.U2), ChartId.U1)


def transition_t21(xi: SpherePoint6) -> SU3Matrix:
    """Return t21(xi) with psi2(psi1^-1(xi, phi)) = (xi, t21(xi) phi)."""
    _require_chart(ChartId.U1, xi)
    _require_chart(ChartId.U2, xi)
    return theta_xi(theta_inverse(xi, SU3Matrix.identity(), ChartId.U1), ChartId.U2)


def random_cap_points(
    rng: np.random.Generator,
    count: int,
    chart: ChartId = ChartId.U1,
    margin: float = 0.02,
) -> np.ndarray:
    """Draw points of S6 with 1 + 2 x2 > margin for U1, or 1 - 2 x2 > margin for U2."""
    accepted: list[np.ndarray] = []
    total = 0
    while total < count:
        candidates = g2.random_imaginary(rng, 2 * count)
        x2 = candidates[:, 1]
        keep = 1.0 + 2.0 * x2 > margin if chart == ChartId.U1 else 1.0 - 2.0 * x2 > margin
        accepted.append(candidates[keep])
        total += int(np.count_nonzero(keep))
    return np.concatenate(accepted)[:count]


def random_overlap_points(rng: np.random.Generator, count: int, margin: float = 0.02) -> np.ndarray:
    """Draw points of S6 inside both caps."""
    accepted: list[np.ndarray] = []
    total = 0
    while total < count:
        candidates = g2.random_imaginary(rng, 2 * count)
        keep = 1.0 - 2.0 * np.abs(candidates[:, 1]) > margin
        accepted.append(candidates[keep])
        total += int(np.count_nonzero(keep))
    return np.concatenate(accepted)[:count]


def verify_bundle_charts(n_samples: int, seed: int, tol: float) -> IdentityReport:
    """Check the translators, frames, trivializations and the transition cocycle on random points."""
    if n_samples < 1:
        message = f"The charts suite needs at least one sample, got {n_samples}"
        raise PreconditionError(message)
    rng = np.random.default_rng(seed)

    points = random_cap_points(rng, n_samples)
    r = translator_r(points)
    conjugated = cd.multiply(cd.multiply(r, _BASIS[1]), cd.conjugate(r))
    tangents = g2.random_imaginary(rng, n_samples)
    tangents -= cd.inner(tangents, points)[:, None] * points
    twice = cd.multiply(points, cd.multiply(points, tangents))

    point_count = min(n_samples, 50)
    logger.debug(f"Checking the chart maps at {point_count} points")
    north = [SpherePoint6(point) for point in random_cap_points(rng, point_count, ChartId.U1)]
    south = [SpherePoint6(point) for point in random_cap_points(rng, point_count, ChartId.U2)]
    overlap = [SpherePoint6(point) for point in random_overlap_points(rng, point_count)]
    fibers = [random_su3(rng) for _ in range(point_count)]

    tilde_images = [g2.apply(translator_Q_tilde(xi), -g2.NORTH_POLE).coords - xi.coords for xi in south]
    frame_residuals = [frame_at(xi, ChartId.U1).orthonormality_residual() for xi in north]
    coherence = [theta_xi(translator_Q(xi), ChartId.U1).max_difference(np.eye(3)) for xi in north]
    round_trip_1 = []
    round_trip_2 = []
    for xi_1, xi_2, phi in zip(north, south, fibers, strict=True):
        base_1, matrix_1 = psi1(psi1_inverse(xi_1, phi))
        base_2, matrix_2 = psi2(psi2_inverse(xi_2, phi))
        round_trip_1.append(max(matrix_1.max_difference(phi), float(np.max(np.abs(base_1.coords - xi_1.coords)))))
        round_trip_2.append(max(matrix_2.max_difference(phi), float(np.max(np.abs(base_2.coords - xi_2.coords)))))
    cocycle = []
    linearity = []
    for xi, phi in zip(overlap, fibers, strict=True):
        t12 = transition_t12(xi)
        cocycle.append((t12 @ transition_t21(xi)).max_difference(np.eye(3)))
        _, moved = psi1(psi2_inverse(xi, phi))
        linearity.append(moved.max_difference(t12 @ phi))

    checks = (
        IdentityCheck(
            "translator_equations",
            "r i conj(r) = xi, componentwise",
            translator_equations_residual(points, r),
            tol,
            reference="translator equations",
        ),
        IdentityCheck(
            "translator_real_part",
            "r_1 = 1/2",
            float(np.max(np.abs(r[:, 0] - 0.5))),
            tol,
            reference="translator equations",
        ),
        IdentityCheck(
            "translator_unit",
            "|r| = 1",
            float(np.max(np.abs(cd.norm(r) - 1.0))),
            tol,
            reference="translator equations",
        ),
        IdentityCheck(
            "translator_moves_north_pole",
            "Q_xi(i) = xi",
            float(np.max(np.abs(conjugated - points))),
            tol,
            reference="translator r_xi",
        ),
        IdentityCheck(
            "tilde_translator_moves_south_pole",
            "Q~_xi(-i) = xi",
            float(np.max(np.abs(tilde_images))),
            tol,
            reference="translator r_-xi",
        ),
        IdentityCheck(
            "complex_structure_squared",
            "J_xi J_xi v = -v",
            float(np.max(np.abs(twice + tangents))),
            tol,
            reference="almost complex structure on S6",
        ),
        IdentityCheck(
            "frame_orthonormal",
            "(a, b, c, Ja, Jb, Jc) orthonormal",
            max(frame_residuals),
            tol,
            reference="complex frame of V_xi",
        ),
        IdentityCheck("frame_coherence", "theta_xi(Q_xi) = I", max(coherence), tol, reference="trivialization over U1"),
        IdentityCheck(
            "psi1_round_trip",
            "psi1(psi1^-1(xi, phi)) = (xi, phi)",
            max(round_trip_1),
            tol,
            reference="trivialization over U1",
        ),
        IdentityCheck(
            "psi2_round_trip",
            "psi2(psi2^-1(xi, phi)) = (xi, phi)",
            max(round_trip_2),
            tol,
            reference="trivialization over U2",
        ),
        IdentityCheck("cocycle", "t12 t21 = I", max(cocycle), tol, reference="transition function t12"),
        IdentityCheck(
            "transition_is_left_multiplication",
            "theta(theta~^-1(phi)) = t12 phi",
            max(linearity),
            tol,
            reference="transition function t12",
        ),
    )
    report = IdentityReport("charts", checks, n_samples, seed)
    logger.debug(f"Charts suite largest residual {report.max_residual:.3e}")
    return report
