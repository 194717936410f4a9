import pytest
from hypothesis import given, settings, strategies as st

from codepth3.exactlin import PrimeField
from codepth3.parsing import (
    BadCharacteristic,
    IdealSpec,
    IdealSyntaxError,
    UnknownVariable,
    format_ideal_file,
    parse_ideal,
    parse_ideal_file,
    parse_polynomials,
)
from codepth3.polyring import NotHomogeneous, PolynomialRing, monomials_of_degree

G1 = "x*y^2, x*y*z, y*z^2, x^4 - y^3*z, x*z^3 - y^4"


def test_g1_generator_list(ring):
    spec, polys = parse_ideal(G1)
    assert len(polys) == 5
    x, y, z = polys[0].ring.gens()
    assert polys[0] == x * y ** 2
    assert polys[3] == x ** 4 - y ** 3 * z
    assert polys[4] == x * z ** 3 - y ** 4
    assert spec.names == ("x", "y", "z") and spec.char == 32003


def test_parenthesized_list_and_double_star(ring):
    a = parse_polynomials("(x**2, y^2, z^2)", ring)
    b = parse_polynomials("x^2, y^2, z^2", ring)
    assert a == b


def test_not_homogeneous(ring):
    with pytest.raises(NotHomogeneous):
        parse_polynomials("x^2 + y", ring)
    (f,) = parse_polynomials("x^2 + y", ring, require_homogeneous=False)
    assert not f.is_homogeneous()


def test_juxtaposition(ring):
    x, y, z = ring.gens()
    assert parse_polynomials("x^3z", ring) == [x ** 3 * z]
    assert parse_polynomials("xyz", ring) == [x * y * z]
    assert parse_polynomials("3x^2y - y^2 x", ring) == [3 * x ** 2 * y - x * y ** 2]
    assert parse_polynomials("(x+y)(x-y)", ring) == [x ** 2 - y ** 2]


def test_juxtaposition_disabled(ring):
    with pytest.raises((IdealSyntaxError, UnknownVariable)):
        parse_polynomials("x^3z", ring, juxtaposition=False)
    assert parse_polynomials("x^3*z", ring, juxtaposition=False) == parse_polynomials("x^3z", ring)


def test_coefficients_reduced_mod_p(ring):
    (f,) = parse_polynomials("32004*x^2 - 32003*y^2", ring)
    assert f == ring.gen(0) ** 2


@pytest.mark.parametrize("text,pos", [("x^2 + ", 6), ("x^2, , y", 5), ("x^^2", 2), ("(x + y", 6), ("x $ y", 2)])
def test_syntax_errors_have_positions(ring, text, pos):
    with pytest.raises(IdealSyntaxError) as info:
        parse_polynomials(text, ring)
    assert info.value.position == pos
    assert "^" in str(info.value)


def test_empty_list(ring):
    with pytest.raises(IdealSyntaxError):
        parse_polynomials("  ", ring)


def test_unknown_variable(ring):
    with pytest.raises(UnknownVariable):
        parse_polynomials("x*w", ring)
    with pytest.raises(UnknownVariable):
        parse_polynomials("x3", ring)


@pytest.mark.parametrize("char", [0, 1, 4, 32002, -7])
def test_bad_characteristic(char):
    with pytest.raises(BadCharacteristic):
        parse_ideal("x^2", char=char)


def test_custom_variable_names():
    spec, polys = parse_ideal("a*b, bc, c^2", names=("a", "b", "c"))
    assert str(polys[1]) == "b*c"
    with pytest.raises(UnknownVariable):
        parse_ideal("x*y", names=("a", "b", "c"))


def test_ideal_file_format():
    text = """# a comment
name: demo
ring: x, y, z
char: 101   # small prime
order: deglex
max-degree: 9
ideal: x*y^2, x*y*z,
       y*z^2
"""
    spec, polys = parse_ideal_file(text)
    assert spec.name == "demo" and spec.char == 101 and spec.order == "deglex"
    assert spec.max_degree == 9 and len(polys) == 3
    assert polys[0].ring.field.p == 101


def test_ideal_file_overrides():
    spec, polys = parse_ideal_file("ideal: x^2, y^2, z^2\n", {"char": 65537, "order": "deglex", "max_degree": 4})
    assert (spec.char, spec.order, spec.max_degree) == (65537, "deglex", 4)
    spec, _ = parse_ideal_file("ideal: x^2, y^2, z^2\n", {"char": None})
    assert spec.char == 32003


@pytest.mark.parametrize("text", ["ring: x, y, z\n", "colour: red\nideal: x^2\n", "x^2\n", "char: abc\nideal: x^2\n"])
def test_ideal_file_errors(text):
    with pytest.raises((IdealSyntaxError, BadCharacteristic)):
        parse_ideal_file(text)


def test_file_round_trip():
    spec, polys = parse_ideal_file("name: g1\nchar: 101\nmax-degree: 7\nideal: " + G1 + "\n")
    text = format_ideal_file(spec)
    spec2, polys2 = parse_ideal_file(text)
    assert spec2 == spec
    assert polys2 == polys


def test_corpus_files_round_trip():
    from codepth3.cli import CORPUS_NAMES, load_corpus_text

    for name in CORPUS_NAMES:
        spec, polys = parse_ideal_file(load_corpus_text(name))
        assert spec.name == name
        spec2, polys2 = parse_ideal_file(format_ideal_file(spec))
        assert polys2 == polys


def test_spec_default_ring():
    R = IdealSpec().ring()
    assert R.names == ("x", "y", "z") and R.field.p == 32003


RING = PolynomialRing(PrimeField(32003), ("x", "y", "z"))
homogeneous = st.integers(0, 5).flatmap(
    lambda d: st.dictionaries(
        st.sampled_from(monomials_of_degree(3, d)), st.integers(-40000, 40000), min_size=1, max_size=6
    )
)


@settings(max_examples=100, deadline=None)
@given(st.lists(homogeneous, min_size=1, max_size=4))
def test_print_then_parse_round_trip(dicts):
    polys = [RING.from_dict(d) for d in dicts]
    polys = [f for f in polys if f] or [RING.gen(0)]
    text = ", ".join(str(f) for f in polys)
    assert parse_polynomials(text, RING) == polys
