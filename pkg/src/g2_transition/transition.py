"""
The transition function over the equator and the degree of its first column.

The equator S5 of S6 is the unit sphere of C3 = V_i with coordinates
(u, v, w) dual to (j, e, g):

    xi = u1 j + u2 k + v1 e + v2 f + w1 g - w2 h

Over the equator the transition between the two trivializations is the
closed form

    theta(u, v, w) = [[u^2,      vu + w*, wu - v*],
                      [uv - w*,  v^2,     wv + u*],
                      [uw + v*,  vw - u*, w^2    ]]

which equals z z^t + conj(M_z). The chart computation of
bundle_charts.transition_t12 gives the transpose of this matrix, which is
theta at the antipode.
"""

import logging
from dataclasses import dataclass
from typing import Any

import numpy as np

from . import bundle_charts as charts
from . import cayley_dickson as cd
from . import g2_group as g2
from .exceptions import (
    DomainViolationError,
    NotOnEquatorError,
    NotUnitError,
    PreconditionError,
    SingularJacobianError,
)
from .g2_group import SpherePoint6
from .report import IdentityCheck, IdentityReport

logger = logging.getLogger(__name__)

UNIT_TOL = 1e-12
SUBSPACE_TOL = 1e-9
SINGULAR_DETERMINANT = 1e-6
DEFAULT_FD_STEP = 1e-5
MIN_DAMPING = 1e-6
DISTINCT_ROOT_TOL = 1e-6
ROOT_TOL = 1e-12
ROOT_ITERATIONS = 100

_BASIS = np.eye(cd.DIMENSION)
_ONE, _I = _BASIS[0], _BASIS[1]
_FIBER_UNITS = _BASIS[[2, 4, 6]]


@dataclass(frozen=True)
class EquatorPoint:
    """A point (u, v, w) of C3; a point of S5 when |u|^2 + |v|^2 + |w|^2 = 1."""

    u: complex
    v: complex
    w: complex

    @classmethod
    def from_reals(cls: type["EquatorPoint"], values: Any) -> "EquatorPoint":  # noqa: ANN401
        """Create a point from u_re, u_im, v_re, v_im, w_re, w_im."""
        reals = np.asarray(values, dtype=float).reshape(-1)
        if reals.shape != (6,):
            message = f"An equator point has 6 real coordinates, got {reals.shape[0]}"
            raise PreconditionError(message)
        return cls(complex(reals[0], reals[1]), complex(reals[2], reals[3]), complex(reals[4], reals[5]))

    @classmethod
    def from_vector(cls: type["EquatorPoint"], vector: np.ndarray) -> "EquatorPoint":
        """Create a point from a complex 3-vector."""
        u, v, w = (complex(value) for value in np.asarray(vector, dtype=complex))
        return cls(u, v, w)

    @classmethod
    def from_json(cls: type["EquatorPoint"], payload: dict[str, list[float]]) -> "EquatorPoint":
        """Read {"u": [re, im], "v": [re, im], "w": [re, im]}."""
        return cls(*(complex(*payload[name]) for name in ("u", "v", "w")))

    @property
    def vector(self: "EquatorPoint") -> np.ndarray:
        """Return (u, v, w) as a complex array."""
        return np.array([self.u, self.v, self.w], dtype=complex)

    @property
    def norm(self: "EquatorPoint") -> float:
        """Return sqrt(|u|^2 + |v|^2 + |w|^2)."""
        return float(np.linalg.norm(self.vector))

    def to_reals(self: "EquatorPoint") -> np.ndarray:
        """Return u_re, u_im, v_re, v_im, w_re, w_im."""
        return np.column_stack([self.vector.real, self.vector.imag]).reshape(-1)

    def to_json(self: "EquatorPoint") -> dict[str, list[float]]:
        """Return {"u": [re, im], "v": [re, im], "w": [re, im]}."""
        return {name: [value.real, value.imag] for name, value in zip("uvw", (self.u, self.v, self.w), strict=True)}

    def normalized(self: "EquatorPoint") -> "EquatorPoint":
        """Return the point scaled to unit norm."""
        size = self.norm
        if size == 0.0:
            message = "Cannot normalize the origin of C3"
            raise NotUnitError(message, residual=1.0)
        return EquatorPoint.from_vector(self.vector / size)

    def require_unit(self: "EquatorPoint", tol: float = UNIT_TOL) -> None:
        """Raise NotUnitError unless the point is on S5."""
        deviation = abs(float(np.sum(np.abs(self.vector) ** 2)) - 1.0)
        if deviation >= tol:
            message = f"Point {self} is not on S5: |z|^2 - 1 = {deviation:.3e}"
            raise NotUnitError(message, residual=deviation)

    def __neg__(self: "EquatorPoint") -> "EquatorPoint":
        """Return the antipodal point."""
        return EquatorPoint(-self.u, -self.v, -self.w)


def embed_equator(z: EquatorPoint) -> SpherePoint6:
    """Return u1 j + u2 k + v1 e + v2 f + w1 g - w2 h."""
    z.require_unit()
    return SpherePoint6.from_imaginary([0.0, z.u.real, z.u.imag, z.v.real, z.v.imag, z.w.real, -z.w.imag])


def extract_equator(xi: SpherePoint6) -> EquatorPoint:
    """Invert embed_equator."""
    x = xi.coords
    if abs(x[1]) >= SUBSPACE_TOL:
        message = f"Point is not on the equator, x2 = {x[1]:.3e}"
        raise NotOnEquatorError(message, residual=abs(x[1]))
    return EquatorPoint(complex(x[2], x[3]), complex(x[4], x[5]), complex(x[6], -x[7]))


def m_z_array(z: np.ndarray) -> np.ndarray:
    """Return M_z for complex arrays of shape (..., 3)."""
    z = np.asarray(z, dtype=complex)
    u, v, w = z[..., 0], z[..., 1], z[..., 2]
    zero = np.zeros_like(u)
    rows = [
        np.stack([zero, w, -v], axis=-1),
        np.stack([-w, zero, u], axis=-1),
        np.stack([v, -u, zero], axis=-1),
    ]
    return np.stack(rows, axis=-2)


def theta_closed_array(z: np.ndarray) -> np.ndarray:
    """Return the closed-form transition for complex arrays of shape (..., 3)."""
    z = np.asarray(z, dtype=complex)
    u, v, w = z[..., 0], z[..., 1], z[..., 2]
    rows = [
        np.stack([u * u, v * u + w.conj(), w * u - v.conj()], axis=-1),
        np.stack([u * v - w.conj(), v * v, w * v + u.conj()], axis=-1),
        np.stack([u * w + v.conj(), v * w - u.conj(), w * w], axis=-1),
    ]
    return np.stack(rows, axis=-2)


def m_z(z: EquatorPoint) -> np.ndarray:
    """Return the antisymmetric matrix [[0, w, -v], [-w, 0, u], [v, -u, 0]]; z need not be a unit."""
    return m_z_array(z.vector)


def theta_closed_form(z: EquatorPoint) -> charts.SU3Matrix:
    """Return the transition function at z."""
    z.require_unit()
    return charts.SU3Matrix(theta_closed_array(z.vector))


def puttmann_form(z: EquatorPoint) -> charts.SU3Matrix:
    """Return z z^t + conj(M_z)."""
    z.require_unit()
    vector = z.vector
    return charts.SU3Matrix(np.outer(vector, vector) + m_z(z).conj())


def frobenius_inner(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Return Tr(conj(A)^t B)."""
    return np.einsum("...ab,...ab->...", np.asarray(a, dtype=complex).conj(), np.asarray(b, dtype=complex))


def theta_from_charts(z: EquatorPoint) -> charts.SU3Matrix:
    """Return the chart-computed transition in the closed form's convention, t12(embed(z))^t."""
    return charts.transition_t12(embed_equator(z)).transpose()


def _require_fiber_subspace(name: str, x: np.ndarray) -> None:
    offset = float(np.max(np.abs(x[..., :2])))
    if offset >= SUBSPACE_TOL:
        message = f"{name} is not in V_i, the span of j, k, e, f, g, h: offset {offset:.3e}"
        raise DomainViolationError(message, residual=offset)


def _require_unit_octonion(name: str, x: np.ndarray) -> None:
    deviation = float(np.max(np.abs(cd.norm(x) - 1.0)))
    if deviation >= SUBSPACE_TOL:
        message = f"{name} is not a unit octonion: |x| - 1 = {deviation:.3e}"
        raise DomainViolationError(message, residual=deviation)


def q_xi_array(xi: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Return Q_xi(v) = ((-1 + i + xi + i xi) v + <v, xi + i xi>(1 + i + xi + i xi)) / 2 for xi, v in V_i."""
    xi = np.asarray(xi, dtype=float)
    v = np.asarray(v, dtype=float)
    _require_fiber_subspace("xi", xi)
    _require_fiber_subspace("v", v)
    _require_unit_octonion("xi", xi)
    i_xi = cd.multiply(_I, xi)
    first = cd.multiply(-_ONE + _I + xi + i_xi, v)
    second = cd.inner(v, xi + i_xi)[..., None] * (_ONE + _I + xi + i_xi)
    return 0.5 * (first + second)


def q_composition_array(xi: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Return Q_{-xi}^-1 Q_xi(v) = v xi - <v xi, 1>(1 + xi) - <v xi, i>(1 + xi) i for xi, v in V_i."""
    xi = np.asarray(xi, dtype=float)
    v = np.asarray(v, dtype=float)
    _require_fiber_subspace("xi", xi)
    _require_fiber_subspace("v", v)
    _require_unit_octonion("xi", xi)
    v_xi = cd.multiply(v, xi)
    one_xi = _ONE + xi
    return (
        v_xi
        - v_xi[..., :1] * one_xi
        - cd.inner(v_xi, _I)[..., None] * cd.multiply(one_xi, _I)
    )


def q_xi_closed(xi_img: cd.Octonion, v: cd.Octonion) -> cd.Octonion:
    """Return Q_xi(v) from the closed formula, for xi and v in V_i."""
    return cd.Octonion(q_xi_array(xi_img.coords, v.coords))


def q_composition_closed(xi_img: cd.Octonion, v: cd.Octonion) -> cd.Octonion:
    """Return Q_{-xi}^-1 Q_xi(v) from the closed formula, for xi and v in V_i."""
    return cd.Octonion(q_composition_array(xi_img.coords, v.coords))


def q_xi_by_conjugation(xi: SpherePoint6, v: cd.Octonion) -> cd.Octonion:
    """Return Q_xi(v) by conjugating with r_xi."""
    return g2.apply(charts.translator_Q(xi), v)


def q_composition_by_conjugation(xi: SpherePoint6, v: cd.Octonion) -> cd.Octonion:
    """Return Q_{-xi}^-1 Q_xi(v) by conjugating with r_xi and r_{-xi}."""
    return g2.apply(g2.inverse(charts.translator_Q(-xi)), g2.apply(charts.translator_Q(xi), v))


def matrix_of_q_composition(z: EquatorPoint) -> charts.SU3Matrix:
    """
    Return the matrix of Q_{-xi}^-1 Q_xi at xi = embed(z), entries conjugated.

    The columns are the images of j, e, g in the complex coordinates of
    V_{-i}, where the complex structure is v -> -iv. Conjugating every entry
    turns it into the matrix of the same map on V_{-i}, which is theta(z).
    """
    xi = embed_equator(z).coords
    images = q_composition_array(np.broadcast_to(xi, _FIBER_UNITS.shape), _FIBER_UNITS)
    turned = cd.multiply(-_I, _FIBER_UNITS)
    coordinates = images @ _FIBER_UNITS.T + 1j * (images @ turned.T)
    return charts.SU3Matrix(coordinates.T).conj()


def first_column_reals(points: np.ndarray) -> np.ndarray:
    """Return the first column of theta as 6 reals for real arrays of shape (..., 6)."""
    points = np.asarray(points, dtype=float)
    z = points[..., 0::2] + 1j * points[..., 1::2]
    column = theta_closed_array(z)[..., :, 0]
    return np.stack([column.real, column.imag], axis=-1).reshape(*points.shape[:-1], 6)


def first_column_map(z: EquatorPoint) -> EquatorPoint:
    """Return the first column of theta(z), the composition of theta with projection onto S5."""
    return EquatorPoint.from_reals(first_column_reals(z.to_reals()))


def tangent_basis(p: np.ndarray) -> np.ndarray:
    """
    Return a 6x5 orthonormal basis of the tangent space of S5 at p.

    Gram-Schmidt runs on the standard basis without the axis where |p| is
    largest. The first vector is flipped when needed so that det[p, B] > 0,
    which orients every tangent space by the outward normal.
    """
    p = np.asarray(p, dtype=float)
    skipped = int(np.argmax(np.abs(p)))
    vectors = [p]
    for axis in range(6):
        if axis == skipped:
            continue
        candidate = np.eye(6)[axis]
        for vector in vectors:
            candidate = candidate - np.dot(candidate, vector) * vector
        vectors.append(candidate / np.linalg.norm(candidate))
    basis = np.column_stack(vectors[1:])
    if np.linalg.det(np.column_stack([p, basis])) < 0:
        basis[:, 0] = -basis[:, 0]
    return basis


def _retract(points: np.ndarray) -> np.ndarray:
    return points / np.linalg.norm(points, axis=-1, keepdims=True)


def tangent_jacobian(p: np.ndarray, fd_step: float = DEFAULT_FD_STEP) -> np.ndarray:
    """Return the 5x5 Jacobian of the first column map at p, by central differences in oriented tangent bases."""
    p = np.asarray(p, dtype=float)
    source = tangent_basis(p)
    target = tangent_basis(first_column_reals(p))
    forward = first_column_reals(_retract(p + fd_step * source.T))
    backward = first_column_reals(_retract(p - fd_step * source.T))
    derivative = (forward - backward).T / (2.0 * fd_step)
    return target.T @ derivative


def _polish_preimage(seed: np.ndarray, target: np.ndarray, fd_step: float) -> np.ndarray | None:
    """Solve first_column_reals(z) = target by damped Gauss-Newton on S5, starting at seed."""
    z = _retract(seed)
    residual = first_column_reals(z) - target
    for _ in range(ROOT_ITERATIONS):
        size = float(np.linalg.norm(residual))
        if size < ROOT_TOL:
            return z
        basis = tangent_basis(z)
        forward = first_column_reals(_retract(z + fd_step * basis.T))
        backward = first_column_reals(_retract(z - fd_step * basis.T))
        derivative = (forward - backward).T / (2.0 * fd_step)
        step, *_ = np.linalg.lstsq(derivative, -residual, rcond=None)
        damping = 1.0
        while damping > MIN_DAMPING:
            candidate = _retract(z + damping * (basis @ step))
            candidate_residual = first_column_reals(candidate) - target
            if np.linalg.norm(candidate_residual) < size:
                z, residual = candidate, candidate_residual
                break
            damping /= 2.0
        else:
            break
    logger.debug(f"Root polishing from {seed} stopped at residual {np.linalg.norm(residual):.3e}")
    return z if float(np.linalg.norm(residual)) < np.sqrt(ROOT_TOL) else None


def find_preimages(value: EquatorPoint, fd_step: float = DEFAULT_FD_STEP) -> list[EquatorPoint]:
    """Return the preimages of value under the first column map found from the seeds +-(1, 0, 0)."""
    value.require_unit()
    seeds = [np.eye(6)[0], -np.eye(6)[0]]
    target = value.to_reals()
    if np.allclose(target, seeds[0], rtol=0.0, atol=UNIT_TOL):
        return [EquatorPoint.from_reals(seed) for seed in seeds]

    preimages: list[np.ndarray] = []
    for seed in seeds:
        root = _polish_preimage(seed, target, fd_step)
        if root is None:
            continue
        if all(np.linalg.norm(root - known) > DISTINCT_ROOT_TOL for known in preimages):
            preimages.append(root)
    return [EquatorPoint.from_reals(root) for root in preimages]


@dataclass(frozen=True)
class DegreeReport:
    """The signed preimage count of a regular value of the first column map."""

    value: EquatorPoint
    preimages: tuple[EquatorPoint, ...]
    determinants: tuple[float, ...]
    fd_step: float

    @property
    def signs(self: "DegreeReport") -> tuple[int, ...]:
        """Return the sign of each Jacobian determinant."""
        return tuple(1 if determinant > 0 else -1 for determinant in self.determinants)

    @property
    def degree(self: "DegreeReport") -> int:
        """Return the sum of the signs."""
        return sum(self.signs)

    def format_lines(self: "DegreeReport") -> list[str]:
        """Return the text form of the report."""
        lines = [f"value = {_format_point(self.value)}"]
        for point, determinant, sign in zip(self.preimages, self.determinants, self.signs, strict=True):
            symbol = "+" if sign > 0 else "-"
            lines.append(f"preimage {_format_point(point)}  det = {determinant:+.6f}  sign = {symbol}")
        signs = ",".join("+" if sign > 0 else "-" for sign in self.signs)
        lines.append(f"signs = ({signs})")
        lines.append(f"degree = {self.degree}")
        return lines

    def to_dict(self: "DegreeReport") -> dict[str, Any]:
        """Return the JSON form of the report."""
        return {
            "value": self.value.to_json(),
            "fd_step": self.fd_step,
            "preimages": [
                {"point": point.to_json(), "determinant": determinant, "sign": sign}
                for point, determinant, sign in zip(self.preimages, self.determinants, self.signs, strict=True)
            ],
            "degree": self.degree,
        }


def _format_point(z: EquatorPoint) -> str:
    return "(" + ", ".join(f"{value:.6g}" for value in (z.u, z.v, z.w)) + ")"


def degree_report(value: EquatorPoint | None = None, fd_step: float = DEFAULT_FD_STEP) -> DegreeReport:
    """Find the preimages of a regular value and the signs of the Jacobian determinants there."""
    if fd_step <= 0:
        message = f"The finite difference step must be positive, got {fd_step}"
        raise PreconditionError(message)
    if value is None:
        value = EquatorPoint(1.0, 0.0, 0.0)
    preimages = find_preimages(value, fd_step)
    determinants = []
    for point in preimages:
        determinant = float(np.linalg.det(tangent_jacobian(point.to_reals(), fd_step)))
        logger.debug(f"Jacobian determinant {determinant:.6f} at {_format_point(point)}")
        if abs(determinant) < SINGULAR_DETERMINANT:
            message = f"Jacobian determinant {determinant:.3e} at {_format_point(point)} is too small to sign"
            raise SingularJacobianError(message, residual=abs(determinant))
        determinants.append(determinant)
    return DegreeReport(value, tuple(preimages), tuple(determinants), fd_step)


def degree_pi_theta(value: EquatorPoint | None = None, fd_step: float = DEFAULT_FD_STEP) -> int:
    """Return the degree of the first column of theta as a map S5 -> S5."""
    return degree_report(value, fd_step).degree


def random_equator_points(rng: np.random.Generator, count: int) -> np.ndarray:
    """Draw count points of S5 as complex arrays of shape (count, 3)."""
    reals = rng.standard_normal((count, 6))
    reals /= np.linalg.norm(reals, axis=-1, keepdims=True)
    return reals[:, 0::2] + 1j * reals[:, 1::2]


def embed_equator_array(z: np.ndarray) -> np.ndarray:
    """Embed complex arrays of shape (..., 3) as octonion arrays."""
    z = np.asarray(z, dtype=complex)
    zeros = np.zeros(z.shape[:-1])
    u, v, w = z[..., 0], z[..., 1], z[..., 2]
    columns = [zeros, zeros, u.real, u.imag, v.real, v.imag, w.real, -w.imag]
    return np.stack(columns, axis=-1)


def verify_transition(n_samples: int, seed: int, tol: float, fd_step: float = DEFAULT_FD_STEP) -> IdentityReport:
    """Check the closed form, its second form, the conjugation formulas and the degree on random equator points."""
    if n_samples < 1:
        message = f"The transition suite needs at least one sample, got {n_samples}"
        raise PreconditionError(message)
    rng = np.random.default_rng(seed)
    z = random_equator_points(rng, n_samples)
    theta = theta_closed_array(z)
    m = m_z_array(z)
    outer = z[..., :, None] * z[..., None, :]
    unitarity, determinant = charts.su3_residuals(theta)

    xi = embed_equator_array(z)
    v = embed_equator_array(random_equator_points(rng, n_samples))

    point_count = min(n_samples, 100)
    logger.debug(f"Comparing the closed form with the charts at {point_count} points")
    points = [EquatorPoint.from_vector(vector) for vector in z[:point_count]]
    chart_differences = [theta_from_charts(point).max_difference(theta[index]) for index, point in enumerate(points)]
    composition_differences = [
        matrix_of_q_composition(point).max_difference(theta[index]) for index, point in enumerate(points)
    ]
    closed_q = []
    closed_composition = []
    for index in range(point_count):
        base = SpherePoint6(xi[index])
        vector = cd.Octonion(v[index])
        translated = q_xi_by_conjugation(base, vector).coords
        closed_q.append(float(np.max(np.abs(q_xi_array(xi[index], v[index]) - translated))))
        oracle = q_composition_by_conjugation(base, vector).coords
        closed_composition.append(float(np.max(np.abs(q_composition_array(xi[index], v[index]) - oracle))))
    extracted = [extract_equator(embed_equator(point)).vector - point.vector for point in points]
    degree = degree_pi_theta(fd_step=fd_step)

    checks = (
        IdentityCheck(
            "special_unitary",
            "theta(z)^H theta(z) = I, det = 1",
            max(unitarity, determinant),
            tol,
            reference="closed-form transition function",
        ),
        IdentityCheck(
            "second_form",
            "theta(z) = z z^t + conj(M_z)",
            float(np.max(np.abs(theta - (outer + m.conj())))),
            tol,
            reference="z z^t + conj(M_z) form",
        ),
        IdentityCheck(
            "annihilation",
            "z z^t M_z = M_z z z^t = 0",
            float(max(np.max(np.abs(outer @ m)), np.max(np.abs(m @ outer)))),
            tol,
            reference="z z^t + conj(M_z) form",
        ),
        IdentityCheck(
            "frobenius_orthogonal",
            "<z z^t, conj(M_z)>_F = 0",
            float(np.max(np.abs(frobenius_inner(outer, m.conj())))),
            tol,
            reference="z z^t + conj(M_z) form",
        ),
        IdentityCheck(
            "antipodal",
            "theta(-z) = z z^t - conj(M_z)",
            float(np.max(np.abs(theta_closed_array(-z) - (outer - m.conj())))),
            tol,
            reference="z z^t + conj(M_z) form",
        ),
        IdentityCheck(
            "equator_round_trip",
            "extract(embed(z)) = z",
            float(np.max(np.abs(extracted))),
            tol,
            reference="equator coordinates",
        ),
        IdentityCheck(
            "translator_closed_form",
            "Q_xi(v) closed form = r v conj(r)",
            max(closed_q),
            tol,
            reference="Q_xi on the equator",
        ),
        IdentityCheck(
            "composition_closed_form",
            "Q_-xi^-1 Q_xi(v) closed form = conjugation",
            max(closed_composition),
            tol,
            reference="Q_-xi^-1 Q_xi on the equator",
        ),
        IdentityCheck(
            "composition_matrix",
            "conj(Mat(Q_-xi^-1 Q_xi)) = theta(z)",
            max(composition_differences),
            tol,
            reference="Q_-xi^-1 Q_xi on the equator",
        ),
        IdentityCheck(
            "matches_charts",
            "theta(z) = t12(embed(z))^t",
            max(chart_differences),
            tol,
            reference="closed-form transition function",
        ),
        IdentityCheck(
            "degree",
            "deg(first column of theta) = 2",
            float(abs(degree - 2)),
            tol,
            reference="first column has degree 2",
        ),
    )
    report = IdentityReport("transition", checks, n_samples, seed)
    logger.debug(f"Transition suite largest residual {report.max_residual:.3e}")
    return report
