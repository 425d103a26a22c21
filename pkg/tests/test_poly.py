"""Expression parser, Chebyshev polynomials and polynomial types."""
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from divides.poly import BivariatePoly, ExprError, ParamCurve, UnivariatePoly, chebyshev, chebyshev_poly

x, y, s = sympy.symbols("x y s")

FAMILY_MINI = "y^3 - x^5 + 75/4*s^2*x^4*y - (5*s + 159/4*s^3)*x^3*y"


def sympy_dict(expr):
    p = sympy.Poly(sympy.expand(expr), x, y)
    return {k: Fraction(int(v.p), int(v.q)) for k, v in p.as_dict().items()}


@pytest.mark.parametrize("text, expr", [
    ("x*y", x * y),
    ("(x-1)*(x^3+5*x^2-y^2)", (x - 1) * (x ** 3 + 5 * x ** 2 - y ** 2)),
    ("2x y + 3", 2 * x * y + 3),
    ("x**2 - -y", x ** 2 + y),
    ("1.5*x - 1/4", sympy.Rational(3, 2) * x - sympy.Rational(1, 4)),
    ("(x+y)^3/6", (x + y) ** 3 / 6),
    ("T(3, x) - y", 4 * x ** 3 - 3 * x - y),
])
def test_parse_matches_sympy(text, expr):
    assert BivariatePoly.parse(text).as_dict == sympy_dict(expr)


def test_parameters_substituted():
    for val in (1, -1, Fraction(1, 3)):
        got = BivariatePoly.parse(FAMILY_MINI, {"s": val}).as_dict
        want = sympy_dict(sympy.sympify(FAMILY_MINI.replace("^", "**")).subs(s, sympy.Rational(str(val))))
        assert got == want


@pytest.mark.parametrize("text, message", [
    ("x +", "unexpected"),
    ("x $ y", "unexpected character"),
    ("x / y", "division"),
    ("x / 0", "division"),
    ("x^y", "exponent"),
    ("x^(1/2)", "exponent"),
    ("(x + y", "expected"),
    ("T(-1, x)", "Chebyshev degree"),
    ("x*z", "unexpected variables"),
])
def test_parse_errors(text, message):
    with pytest.raises(ExprError, match=message):
        BivariatePoly.parse(text)


def test_error_position():
    with pytest.raises(ExprError) as info:
        BivariatePoly.parse("x + y )")
    assert info.value.pos == 6


@pytest.mark.parametrize("d", [0, 1, 2, 4, 7, 12])
def test_chebyshev_matches_sympy(d):
    want = sympy.Poly(sympy.chebyshevt(d, x), x).all_coeffs()[::-1]
    assert list(chebyshev(d)) == [int(c) for c in want]


@given(st.integers(0, 15), st.floats(-1, 1))
def test_chebyshev_is_cosine(d, c):
    import math
    assert abs(chebyshev_poly(d).eval_float(c) - math.cos(d * math.acos(c))) < 1e-9


def test_chebyshev_negative_degree():
    with pytest.raises(ValueError):
        chebyshev(-1)


def test_univariate():
    p = UnivariatePoly.parse("T(4,t)/8")
    assert p.degree == 4
    assert p(Fraction(1)) == Fraction(1, 8)
    assert p.deriv().coeffs == (0, -2, 0, 4)   # T4/8 = t^4 - t^2 + 1/8
    assert p.real_roots() == pytest.approx(sorted([-0.9238795, -0.3826834, 0.3826834, 0.9238795]))
    with pytest.raises(ExprError):
        UnivariatePoly.parse("t*x")


polys = st.dictionaries(st.tuples(st.integers(0, 4), st.integers(0, 4)),
                        st.fractions(max_denominator=20).filter(lambda q: q != 0), max_size=6)


@given(polys)
def test_bivariate_print_parse_round_trip(d):
    p = BivariatePoly.from_dict(d)
    assert BivariatePoly.parse(str(p)) == p


@given(polys, st.fractions(-3, 3, max_denominator=9), st.fractions(-3, 3, max_denominator=9))
def test_exact_and_float_evaluation_agree(d, a, b):
    p = BivariatePoly.from_dict(d)
    exact = p(a, b)
    assert float(p.eval_float(float(a), float(b))) == pytest.approx(float(exact), rel=1e-12, abs=1e-9)


def test_derivatives():
    p = BivariatePoly.parse("x^3*y^2 + 2*y")
    assert p.dx().as_dict == {(2, 2): 3}
    assert p.dy().as_dict == {(3, 1): 2, (0, 0): 2}


def test_param_curve():
    c = ParamCurve.parse("t^2 - 1", "t^3 - t")
    assert c.point(2.0) == (3.0, 6.0)
    assert c.velocity(1.0) == (2.0, 2.0)
    with pytest.raises(ValueError):
        ParamCurve.parse("1", "2")
