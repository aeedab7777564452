"""Expression parser, printer, evaluator and derivative tests"""
import math
import sys
import unittest

import numpy as np
from hypothesis import assume, given, settings, strategies as st

from apsums.errors import EvalError, ParseError, UsageError
from apsums.exprdsl import (
    Add, Canonical, Const, Div, Exp, Log, Monotonicity, Mul, Neg, Pow, PowBase, Sub, T,
    canonical_kind, check_domain, differentiate, evaluate, evaluate_signed_log, parse,
    profile_text, to_text,
)


class TestParse(unittest.TestCase):

    def test_examples(self):
        self.assertEqual(parse("log(t)"), Log(T))
        self.assertEqual(parse("t^2"), Pow(T, 2.0))
        self.assertEqual(parse("2^t"), PowBase(2.0, T))
        self.assertEqual(parse("1/t"), Div(Const(1.0), T))
        self.assertEqual(parse("ln(t)/t"), Div(Log(T), T))

    def test_precedence(self):
        self.assertEqual(parse("1 + 2*t"), Add(Const(1.0), Mul(Const(2.0), T)))
        self.assertEqual(parse("t - 1 - 2"), Sub(Sub(T, Const(1.0)), Const(2.0)))
        self.assertEqual(parse("-t^2"), Neg(Pow(T, 2.0)))
        self.assertEqual(parse("t^-1.5"), Pow(T, -1.5))

    def test_constant_base_with_expression_exponent(self):
        self.assertEqual(parse("3^(t/2)"), PowBase(3.0, Div(T, Const(2.0))))

    def test_unclosed_call(self):
        with self.assertRaises(ParseError) as ctx:
            parse("log(")
        self.assertEqual(ctx.exception.offset, 4)
        self.assertIn("'t'", ctx.exception.expected)
        self.assertIsInstance(ctx.exception, UsageError)

    def test_trailing_input(self):
        with self.assertRaises(ParseError) as ctx:
            parse("t t")
        self.assertEqual(ctx.exception.offset, 2)

    def test_unknown_name(self):
        with self.assertRaises(ParseError) as ctx:
            parse("sin(t)")
        self.assertEqual(ctx.exception.offset, 0)

    def test_overflowing_literal(self):
        with self.assertRaises(ParseError) as ctx:
            parse("t + 1e400")
        self.assertEqual(ctx.exception.offset, 4)
        self.assertEqual(ctx.exception.expected, {"finite number"})
        self.assertEqual(parse("1e300"), Const(1e300))

    def test_empty(self):
        with self.assertRaises(ParseError):
            parse("   ")

    def test_non_positive_constant_base(self):
        with self.assertRaises(ParseError):
            parse("0^t")

    def test_symbolic_exponent_needs_constant_base(self):
        with self.assertRaises(ParseError):
            parse("t^t")


class TestEvaluate(unittest.TestCase):

    def test_scalar_values(self):
        self.assertAlmostEqual(evaluate(parse("log(t)"), math.e), 1.0, places=15)
        self.assertEqual(evaluate(parse("2^t"), 10), 1024.0)
        self.assertEqual(evaluate(parse("t^2 + 1"), 3), 10.0)
        self.assertAlmostEqual(evaluate(parse("exp(log(t))"), 7.5), 7.5, places=12)

    def test_array_matches_scalar(self):
        e = parse("log(t)^2/t + t^0.5")
        ts = np.geomspace(2, 1e6, 17)
        values = evaluate(e, ts)
        for t, value in zip(ts, values):
            self.assertAlmostEqual(value, evaluate(e, float(t)), delta=1e-12 * abs(value))

    def test_log_of_non_positive(self):
        with self.assertRaises(EvalError):
            evaluate(parse("log(t - 3)"), 2.0)
        with self.assertRaises(EvalError):
            evaluate(parse("log(t - 3)"), np.array([2.0, 5.0]))

    def test_overflow(self):
        with self.assertRaises(EvalError):
            evaluate(parse("2^t"), 2000.0)

    def test_division_by_zero(self):
        with self.assertRaises(EvalError) as ctx:
            evaluate(parse("1/(t - 4)"), 4.0)
        self.assertEqual(ctx.exception.t, 4.0)

    def test_check_domain(self):
        check_domain(parse("log(t)"), 2, 1e6)
        with self.assertRaises(EvalError):
            check_domain(parse("2^t"), 2, 1e6)

    def test_signed_log_avoids_overflow(self):
        sign, logabs = evaluate_signed_log(parse("2^t"), 1e8)
        self.assertEqual(sign, 1)
        self.assertAlmostEqual(logabs, 1e8 * math.log(2), delta=1e-6)
        sign, logabs = evaluate_signed_log(parse("-t^3"), 10.0)
        self.assertEqual(sign, -1)
        self.assertAlmostEqual(logabs, 3 * math.log(10.0), places=12)

    def test_signed_log_of_cancelling_sum(self):
        sign, _ = evaluate_signed_log(parse("t - t"), 5.0)
        self.assertEqual(sign, 0)


class TestDifferentiate(unittest.TestCase):

    def test_closed_forms(self):
        self.assertEqual(differentiate(parse("t^2")), Mul(Const(2.0), T))
        self.assertEqual(differentiate(parse("log(t)")), Div(Const(1.0), T))
        self.assertEqual(differentiate(parse("7")), Const(0.0))
        self.assertEqual(differentiate(T), Const(1.0))

    def test_exponential_base(self):
        deriv = differentiate(parse("2^t"))
        self.assertAlmostEqual(evaluate(deriv, 3.0), 8 * math.log(2), places=12)

    def test_exp_and_quotient(self):
        deriv = differentiate(parse("exp(t/10)/t"))
        t = 4.0
        expected = math.exp(t / 10) * (1 / (10 * t) - 1 / t**2)
        self.assertAlmostEqual(evaluate(deriv, t), expected, places=12)


def _leaf():
    return st.sampled_from(["t/50", "log(t)", "1", "2", "0.5", "3.25"])


def _combine(children):
    return st.one_of(
        st.tuples(children, children).map(lambda ab: f"({ab[0]} + {ab[1]})"),
        st.tuples(children, children).map(lambda ab: f"({ab[0]} - {ab[1]})"),
        st.tuples(children, children).map(lambda ab: f"({ab[0]} * {ab[1]})"),
        st.tuples(children, children).map(lambda ab: f"({ab[0]} / (1 + ({ab[1]})^2))"),
        st.tuples(children, st.sampled_from(["2", "0.5", "-1"])).map(lambda ab: f"(1 + ({ab[0]})^2)^{ab[1]}"),
        st.tuples(st.sampled_from(["2", "0.5", "3.25"]), children).map(
            lambda ab: f"{ab[0]}^(({ab[1]})/(1 + ({ab[1]})^2))"
        ),
        children.map(lambda a: f"(-({a}))"),
        children.map(lambda a: f"log(2 + ({a})^2)"),
        children.map(lambda a: f"exp(({a})/(1 + ({a})^2))"),
    )


expressions = st.recursive(_leaf(), _combine, max_leaves=6)

DERIVATIVE_POINTS = (2.5, 10.0, 1e3, 1e5)


class TestDerivativeProperties(unittest.TestCase):

    @settings(max_examples=60, deadline=None)
    @given(text=expressions)
    def test_derivative_matches_central_differences(self, text):
        e = parse(text)
        deriv = differentiate(e)
        for t in DERIVATIVE_POINTS:
            h = 1e-5 * t
            try:
                upper, lower = evaluate(e, t + h), evaluate(e, t - h)
                exact = evaluate(deriv, t)
            except EvalError:
                assume(False)
            numeric = (upper - lower) / (2 * h)
            # central differences lose about eps * |f| / h to rounding
            rounding = 1e3 * sys.float_info.epsilon * max(abs(upper), abs(lower)) / h
            self.assertLessEqual(
                abs(numeric - exact), 1e-6 * max(1.0, abs(exact)) + rounding, f"{text} at t={t}"
            )

    def test_every_production_at_the_sample_points(self):
        for text in ("2^(t/1e4)", "-(t^2)", "0.5^(log(t))", "-(log(t)/t)", "exp(t/1e4)*t^0.5"):
            e = parse(text)
            deriv = differentiate(e)
            for t in DERIVATIVE_POINTS:
                with self.subTest(f=text, t=t):
                    h = 1e-5 * t
                    numeric = (evaluate(e, t + h) - evaluate(e, t - h)) / (2 * h)
                    exact = evaluate(deriv, t)
                    self.assertLessEqual(abs(numeric - exact), 1e-6 * max(1.0, abs(exact)))

    @settings(max_examples=50, deadline=None)
    @given(text=expressions)
    def test_printed_text_parses_back(self, text):
        e = parse(text)
        self.assertEqual(parse(to_text(e)), e)


class TestProfile(unittest.TestCase):

    def test_monotonicity(self):
        self.assertIs(profile_text("t^2").monotone, Monotonicity.INCREASING)
        self.assertIs(profile_text("1/t^2").monotone, Monotonicity.DECREASING)
        self.assertIs(profile_text("log(t)/t").monotone, Monotonicity.NON_MONOTONE)
        self.assertIs(profile_text("2^t", sample_hi=1e8).monotone, Monotonicity.INCREASING)

    def test_constant_flag(self):
        self.assertTrue(profile_text("1").constant)
        self.assertFalse(profile_text("log(t)").constant)

    def test_canonical_kinds(self):
        cases = {
            "1": Canonical("one"),
            "log(t)": Canonical("log"),
            "1/t": Canonical("inv"),
            "t^-1": Canonical("inv"),
            "log(t)/t": Canonical("log_over_t"),
            "t": Canonical("power", 1.0),
            "t^0.5": Canonical("power", 0.5),
            "2^t": Canonical("powbase", 2.0),
        }
        for text, kind in cases.items():
            self.assertEqual(canonical_kind(parse(text)), kind, text)
        self.assertIsNone(canonical_kind(parse("t + 1")))
        self.assertEqual(str(Canonical("power", 0.5)), "power(0.5)")

    def test_profile_keeps_source_text(self):
        f = profile_text("log( t )")
        self.assertEqual(f.text, "log( t )")
        self.assertEqual(f.value(math.e), 1.0)
        self.assertAlmostEqual(f.slope(4.0), 0.25, places=15)

    def test_exp_node(self):
        self.assertEqual(parse("exp(t)"), Exp(T))
