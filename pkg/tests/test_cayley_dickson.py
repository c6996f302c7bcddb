"""Tests for the octonion algebra."""

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from g2_transition import cayley_dickson as cd
from g2_transition.cayley_dickson import Octonion
from g2_transition.exceptions import PreconditionError, ZeroDivisorError

unit_scale_floats = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)
octonion_coordinates = st.lists(unit_scale_floats, min_size=8, max_size=8)


def unit(coordinates: list[float]) -> np.ndarray:
    """Scale hypothesis coordinates to a unit octonion, skipping examples near zero."""
    values = np.array(coordinates)
    size = np.linalg.norm(values)
    assume(size > 1e-3)
    return values / size


def basis(name: str) -> Octonion:
    """Return a signed basis element such as '-h'."""
    sign = -1.0 if name.startswith("-") else 1.0
    return sign * Octonion.basis(name.lstrip("+-"))


@pytest.mark.parametrize(
    ("left", "right", "expected"),
    [
        ("i", "j", "k"),
        ("j", "i", "-k"),
        ("e", "e", "-1"),
        ("i", "e", "f"),
        ("j", "e", "g"),
        ("k", "e", "h"),
        ("f", "j", "-h"),
        ("i", "g", "-h"),
        ("i", "h", "g"),
        ("e", "j", "-g"),
    ],
)
def test_basis_products(left: str, right: str, expected: str) -> None:
    """Does it multiply basis elements by the doubling rule?"""
    assert cd.oct_mul(basis(left), basis(right)) == basis(expected)


def test_table_is_consistent() -> None:
    """Does the generated table have 1 as its unit and every imaginary unit squaring to -1?"""
    assert cd.MULTIPLICATION_TABLE.is_consistent()


def test_table_matches_doubling_exactly() -> None:
    """Does table multiplication reproduce the recursive doubling rule bit for bit on the basis?"""
    identity = np.eye(8)
    from_table = cd.multiply(identity[:, None, :], identity[None, :, :])
    from_doubling = cd.doubling_product(identity[:, None, :], identity[None, :, :])
    assert np.array_equal(from_table, from_doubling)
    assert cd.MultiplicationTable.from_doubling() == cd.MULTIPLICATION_TABLE


def test_table_dump() -> None:
    """Does the dump list signed products with the left factor as the row?"""
    lines = cd.MULTIPLICATION_TABLE.dump().splitlines()
    assert len(lines) == 8
    assert lines[0] == "+1 +i +j +k +e +f +g +h"
    assert lines[1] == "+i -1 +k -j +f -e -h +g"


@pytest.mark.parametrize(
    ("coordinates", "expected"),
    [
        ([1, 0, 0, 0, 0, 0, 0, 0], [1, 0, 0, 0, 0, 0, 0, 0]),
        ([0, 1, 0, 0, 0, 0, 0, 0], [0, -1, 0, 0, 0, 0, 0, 0]),
        ([1, 1, 1, 1, 1, 1, 1, 1], [1, -1, -1, -1, -1, -1, -1, -1]),
    ],
)
def test_conjugate(coordinates: list[float], expected: list[float]) -> None:
    """Does it keep the real coordinate and negate the rest?"""
    assert cd.oct_conj(Octonion(coordinates)) == Octonion(expected)


def test_inner_and_norm() -> None:
    """Does it use the Euclidean inner product of the coordinates?"""
    assert cd.oct_inner(basis("i"), basis("j")) == 0.0
    assert cd.oct_inner(basis("e"), basis("e")) == 1.0
    assert cd.oct_norm(Octonion.zero()) == 0.0
    assert cd.oct_norm(basis("i") + basis("j")) == pytest.approx(np.sqrt(2.0), abs=1e-15)


@pytest.mark.parametrize(
    ("value", "expected"),
    [
        (basis("i"), basis("-i")),
        (2.0 * Octonion.one(), 0.5 * Octonion.one()),
    ],
)
def test_inverse(value: Octonion, expected: Octonion) -> None:
    """Does it invert with conj(a) / |a|^2?"""
    assert cd.oct_inv(value).isclose(expected, tol=1e-15)


def test_inverse_of_random_units() -> None:
    """Does r times its inverse give 1 for random unit octonions?"""
    rng = np.random.default_rng(3)
    r = cd.random_octonions(rng, 1000)
    products = cd.multiply(r, cd.inverse(r))
    assert np.max(np.abs(products - np.eye(8)[0])) < 1e-12


def test_inverse_of_zero() -> None:
    """Does it refuse to invert zero?"""
    with pytest.raises(ZeroDivisorError):
        cd.oct_inv(Octonion.zero())


def test_not_associative() -> None:
    """Does (ij)e differ from i(je)?"""
    i, j, e = basis("i"), basis("j"), basis("e")
    assert (i * j) * e == basis("h")
    assert i * (j * e) == basis("-h")
    assert np.array_equal(cd.associator(i.coords, j.coords, e.coords), 2 * basis("h").coords)


def test_well_bracketed_conjugation() -> None:
    """Is (rx)r^-1 equal to r(xr^-1) for random r and x?"""
    rng = np.random.default_rng(11)
    r = cd.random_octonions(rng, 1000)
    x = cd.random_octonions(rng, 1000)
    inverse = cd.inverse(r)
    left = cd.multiply(cd.multiply(r, x), inverse)
    right = cd.multiply(r, cd.multiply(x, inverse))
    assert np.max(np.abs(left - right)) < 1e-12


def test_operators() -> None:
    """Do the arithmetic operators agree with the module functions?"""
    a = Octonion([1, 2, 3, 4, 5, 6, 7, 8])
    b = Octonion([0.5, -1, 0, 2, 0, 0, 1, -3])
    assert a * b == cd.oct_mul(a, b)
    assert (a - b) + b == a
    assert (a / b).isclose(cd.oct_mul(a, cd.oct_inv(b)))
    assert (a / 2.0).isclose(0.5 * a)
    assert -a == Octonion(-a.coords)
    assert a.real == 1.0
    assert np.array_equal(a.imaginary, np.arange(2, 9))


def test_octonion_is_immutable() -> None:
    """Does it refuse to change coordinates in place?"""
    value = Octonion.basis("i")
    with pytest.raises(ValueError, match="read-only"):
        value.coords[0] = 1.0


def test_octonion_needs_eight_coordinates() -> None:
    """Does it reject the wrong number of coordinates?"""
    with pytest.raises(PreconditionError):
        Octonion([1, 2, 3])


def test_algebra_identities() -> None:
    """Do all the algebra identities hold on seeded unit samples?"""
    report = cd.verify_algebra_identities(1000, 42, 1e-10)
    assert report.passed, report.format_lines()
    assert len(report.checks) == 11
    assert report.check("conjugate_from_real_part").residual == 0.0
    assert report.check("table_matches_doubling").residual < 1e-14


def test_algebra_identities_need_samples() -> None:
    """Does it reject a zero sample count?"""
    with pytest.raises(PreconditionError):
        cd.verify_algebra_identities(0, 42, 1e-10)


def test_flipped_sign_breaks_moufang() -> None:
    """Does one wrong sign in the table break the Moufang identity?"""
    corrupted = cd.MULTIPLICATION_TABLE.with_flipped_sign(1, 2)
    assert corrupted != cd.MULTIPLICATION_TABLE
    report = cd.verify_algebra_identities(100, 42, 1e-10, table=corrupted)
    assert not report.passed
    assert report.check("moufang").residual >= 1.0


def test_identities_are_reproducible() -> None:
    """Does the same seed give the same residuals?"""
    first = cd.verify_algebra_identities(200, 9, 1e-10)
    second = cd.verify_algebra_identities(200, 9, 1e-10)
    assert first.to_dict() == second.to_dict()


@given(octonion_coordinates, octonion_coordinates)
def test_alternative_property(a: list[float], b: list[float]) -> None:
    """Is the algebra alternative for arbitrary unit inputs?"""
    x, y = unit(a), unit(b)
    assert np.max(np.abs(cd.multiply(x, cd.multiply(x, y)) - cd.multiply(cd.multiply(x, x), y))) < 1e-12
    assert np.max(np.abs(cd.multiply(cd.multiply(x, y), y) - cd.multiply(x, cd.multiply(y, y)))) < 1e-12


@given(octonion_coordinates, octonion_coordinates, octonion_coordinates)
def test_moufang_property(a: list[float], b: list[float], c: list[float]) -> None:
    """Does the Moufang identity hold for arbitrary unit inputs?"""
    x, y, z = unit(a), unit(b), unit(c)
    left = cd.multiply(cd.multiply(x, cd.multiply(y, z)), x)
    right = cd.multiply(cd.multiply(x, y), cd.multiply(z, x))
    assert np.max(np.abs(left - right)) < 1e-12


@given(octonion_coordinates, octonion_coordinates)
def test_norm_is_multiplicative(a: list[float], b: list[float]) -> None:
    """Is |ab| = |a||b| for arbitrary inputs?"""
    x, y = np.array(a), np.array(b)
    expected = np.linalg.norm(x) * np.linalg.norm(y)
    assert cd.norm(cd.multiply(x, y)) == pytest.approx(expected, rel=1e-12, abs=1e-12)


@given(octonion_coordinates, octonion_coordinates)
def test_conjugation_reverses_products(a: list[float], b: list[float]) -> None:
    """Is conj(ab) = conj(b) conj(a)?"""
    x, y = unit(a), unit(b)
    left = cd.conjugate(cd.multiply(x, y))
    right = cd.multiply(cd.conjugate(y), cd.conjugate(x))
    assert np.max(np.abs(left - right)) < 1e-12
