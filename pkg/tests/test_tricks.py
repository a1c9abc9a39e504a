import math
from fractions import Fraction

import numpy as np
import pytest

from fliptricks.so3 import IDENTITY, LandingConfig, REVERSED
from fliptricks.tricks import (
    Concat,
    DomainError,
    NotAFlip,
    OShift,
    Power,
    Primitive,
    Product,
    Reverse,
    TimeScale,
    TrickSyntaxError,
    UnknownPrimitive,
    UnknownTrick,
    catalog,
    concat,
    evaluate,
    format_expr,
    lookup,
    make_flip,
    parse,
    power,
    primitive,
    trick,
    validate_flip,
)

from helpers import random_expr


def rot(expr_src, t):
    return evaluate(parse(expr_src), t).m


class TestPrimitives:
    def test_shove_it_lands_reversed(self):
        assert np.abs(rot("S", 1.0) - REVERSED.m).max() < 1e-15

    def test_shove_it_closed_form(self):
        for t in (0.0, 0.2, 0.5, 0.77, 1.0):
            c, s = math.cos(math.pi * t), math.sin(math.pi * t)
            expected = np.array([[c, s, 0], [-s, c, 0], [0, 0, 1.0]])
            assert np.abs(rot("S", t) - expected).max() == 0.0

    def test_kickflip_round_trip(self):
        assert np.abs(rot("K", 1.0) - np.eye(3)).max() < 1e-15
        c, s = math.cos(0.6 * math.pi), math.sin(0.6 * math.pi)
        expected = np.array([[c, 0, -s], [0, 1.0, 0], [s, 0, c]])
        assert np.abs(rot("K", 0.3) - expected).max() == 0.0

    def test_x_half_turn_is_not_a_flip(self):
        assert np.abs(rot("U", 1.0) - np.diag([1.0, -1.0, -1.0])).max() < 1e-15
        with pytest.raises(NotAFlip):
            validate_flip(parse("U"))
        # but it is still constructible as a curve for use inside products
        u = primitive("U")
        assert u.landing is None

    def test_unknown_primitive(self):
        with pytest.raises(UnknownPrimitive):
            Primitive("X")

    def test_ollie_constant(self):
        assert np.array_equal(rot("O", 0.37), np.eye(3))


class TestEvaluate:
    def test_360_shove_it_entries(self):
        for t in np.linspace(0, 1, 17):
            m = rot("S^2", t)
            assert abs(m[0, 0] - math.cos(2 * math.pi * t)) < 1e-15
            assert abs(m[0, 1] - math.sin(2 * math.pi * t)) < 1e-15

    def test_hardflip_lands_reversed(self):
        # independent oracle: multiply the closed forms by hand
        u1 = np.array([[1.0, 0, 0], [0, math.cos(math.pi), -math.sin(math.pi)],
                       [0, math.sin(math.pi), math.cos(math.pi)]])
        k_half = np.array([[math.cos(math.pi), 0, -math.sin(math.pi)], [0, 1.0, 0],
                           [math.sin(math.pi), 0, math.cos(math.pi)]])
        expected = u1 @ k_half
        assert np.abs(rot("U * K@1/2", 1.0) - expected).max() == 0.0
        assert np.abs(expected - REVERSED.m).max() < 1e-15

    def test_domain_error(self):
        with pytest.raises(DomainError):
            evaluate(parse("S"), 1.5)
        with pytest.raises(DomainError):
            evaluate(parse("S"), -0.01)

    def test_power_matches_repeated_product(self):
        rng = np.random.default_rng(21)
        base = parse("S * K")
        for n in (-3, -2, -1, 1, 2, 3):
            expr = Power(base, n)
            for t in rng.uniform(0, 1, size=12):
                m = evaluate(base, t).m
                ref = np.eye(3)
                for _ in range(abs(n)):
                    ref = ref @ (m if n > 0 else m.T)
                assert np.abs(evaluate(expr, t).m - ref).max() < 1e-12

    def test_time_scale(self):
        for t in np.linspace(0, 1, 9):
            assert np.abs(rot("K@1/2", t) - rot("K", t / 2)).max() == 0.0

    def test_reverse_kickflip_is_heelflip(self):
        for t in np.linspace(0, 1, 33):
            assert np.abs(rot("rev(K)", t) - rot("K^-1", t)).max() < 1e-12

    def test_oshift(self):
        for t in (0.0, 0.3, 1.0):
            assert np.abs(rot("S!O", t) - rot("S", t) @ REVERSED.m).max() == 0.0

    def test_concat_node_is_raw(self):
        # concatenating S with its shifted copy reproduces the 360 shove-it
        expr = parse("S # S!O")
        for t in np.linspace(0, 1, 101):
            assert np.abs(evaluate(expr, t).m - rot("S^2", t)).max() < 1e-12


class TestParser:
    def test_360_flip_tree(self):
        assert parse("S^2 * K") == Product(Power(Primitive("S"), 2), Primitive("K"))

    def test_varial_heelflip_tree(self):
        assert parse("S^-1 * K^-1") == Product(
            Power(Primitive("S"), -1), Power(Primitive("K"), -1)
        )

    def test_shifted_concat_tree(self):
        assert parse("S # S!O") == Concat(Primitive("S"), OShift(Primitive("S")))

    def test_whitespace_insensitive(self):
        assert parse(" S ^ 2*K ") == parse("S^2 * K")

    def test_rational_forms_agree(self):
        assert parse("K@1/2") == parse("K@0.5")
        assert parse("K@0.5") == TimeScale(Primitive("K"), Fraction(1, 2))

    def test_precedence(self):
        # ^ binds tighter than @, then !O, then *, then #
        expr = parse("S^2@1/2!O * K # O")
        assert expr == Concat(
            Product(OShift(TimeScale(Power(Primitive("S"), 2), Fraction(1, 2))), Primitive("K")),
            Primitive("O"),
        )

    def test_left_associativity(self):
        assert parse("S * K * U") == Product(Product(Primitive("S"), Primitive("K")), Primitive("U"))
        assert parse("S # K # O") == Concat(Concat(Primitive("S"), Primitive("K")), Primitive("O"))

    def test_zero_power_simplifies(self):
        assert parse("S^0") == Primitive("O")
        assert power(Primitive("S"), 0) == Primitive("O")

    def test_error_offset_and_expected(self):
        with pytest.raises(TrickSyntaxError) as err:
            parse("S * + K")
        assert err.value.offset == 4
        assert "(" in err.value.expected

    def test_error_on_trailing_garbage(self):
        with pytest.raises(TrickSyntaxError) as err:
            parse("S K")
        assert err.value.offset == 2

    def test_error_on_empty(self):
        with pytest.raises(TrickSyntaxError):
            parse("   ")

    def test_bad_rational(self):
        with pytest.raises(DomainError):
            parse("K@3/2")

    def test_bad_exponent(self):
        with pytest.raises(TrickSyntaxError):
            parse("S^1.5")

    def test_round_trip_random(self):
        rng = np.random.default_rng(42)
        for _ in range(150):
            expr = random_expr(rng, depth=6)
            assert parse(format_expr(expr)) == expr

    def test_round_trip_nested_suffixes(self):
        for expr in (
            Power(Power(Primitive("S"), 2), 3),
            OShift(OShift(Primitive("S"))),
            TimeScale(TimeScale(Primitive("K"), Fraction(1, 2)), Fraction(1, 3)),
            Reverse(Concat(Primitive("S"), Primitive("K"))),
        ):
            assert parse(format_expr(expr)) == expr


class TestFlips:
    def test_catalog_contents(self):
        entries = catalog()
        assert [name for name, _ in entries] == [
            "ollie", "shoveit", "fs-shoveit", "360-shoveit", "fs-360-shoveit",
            "540-shoveit", "fs-540-shoveit", "kickflip", "double-kickflip",
            "heelflip", "varial-kickflip", "360-flip", "varial-heelflip", "hardflip",
        ]
        assert lookup("varial-kickflip") == Product(Primitive("S"), Primitive("K"))
        assert lookup("heelflip") == Power(Primitive("K"), -1)
        assert lookup("ollie") == Primitive("O")

    def test_catalog_entries_are_valid_flips(self):
        for name, expr in catalog():
            f = make_flip(expr)
            assert np.abs(f.sampler(0.0).m - IDENTITY.m).max() <= 1e-9
            end = f.sampler(1.0).m
            target = f.landing.rotation.m
            assert np.abs(end - target).max() <= 1e-9

    def test_unknown_trick(self):
        with pytest.raises(UnknownTrick):
            lookup("casper-flip")

    def test_concat_of_two_shove_its(self):
        f = concat(trick("shoveit"), trick("shoveit"))
        for t in np.linspace(0, 1, 257):
            assert np.abs(f.sampler(t).m - rot("S^2", t)).max() < 1e-12

    def test_concat_landings(self):
        assert concat(trick("shoveit"), trick("kickflip")).landing is LandingConfig.REVERSED
        assert concat(trick("ollie"), trick("kickflip")).landing is LandingConfig.IDENTITY
        assert concat(trick("shoveit"), trick("fs-shoveit")).landing is LandingConfig.IDENTITY

    def test_concat_rejects_non_landing_curve(self):
        with pytest.raises(NotAFlip):
            concat(primitive("U"), trick("ollie"))

    def test_non_commutativity_witness(self):
        dev = max(
            np.abs(rot("S * K", t) - rot("K * S", t)).max() for t in np.linspace(0, 1, 101)
        )
        assert dev > 0.1

    def test_flip_from_bad_curve(self):
        with pytest.raises(NotAFlip):
            make_flip(parse("rev(S)"))  # starts at the reversed landing
