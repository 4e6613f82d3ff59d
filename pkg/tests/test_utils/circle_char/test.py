import random
from fractions import Fraction
from math import gcd
from unittest import TestCase, main

import mpmath

from dualprobe.core.errors import (
    ParseError,
    PrecisionExceededError,
    PreconditionError,
)
from dualprobe.utils.circle_char import (
    FloatVerdict,
    Membership,
    RationalPoint,
    float_membership,
    measure_probe,
    rational_membership,
    _measure_kernel,
    required_bits,
)
from dualprobe.utils.sequences import (
    Explicit,
    Factorial,
    Geometric,
    Polynomial,
    Recurrence,
)


class FixedStream:
    """Hands out given integers in place of random ones"""

    def __init__(self, values):
        self.values = values

    def integers(self, rows, bits):
        return self.values[:rows]


def random_points(rng, count, max_q):
    out = []
    while len(out) < count:
        q = rng.randint(1, max_q)
        p = rng.randrange(q)
        if gcd(p, q) == 1:
            out.append(RationalPoint(p, q))
    return out


class TestRationalPoint(TestCase):

    def test_of(self):
        self.assertEqual(RationalPoint.of("5/8"), RationalPoint(5, 8))
        self.assertEqual(RationalPoint.of("3/2"), RationalPoint(1, 2))
        self.assertEqual(RationalPoint.of("-1/3"), RationalPoint(2, 3))
        self.assertEqual(RationalPoint.of(4), RationalPoint(0, 1))
        self.assertEqual(RationalPoint.of(Fraction(6, 4)).value, Fraction(1, 2))
        self.assertEqual(str(RationalPoint(1, 3)), "1/3")

    def test_invalid(self):
        with self.assertRaises(ParseError):
            RationalPoint.of("one third")
        with self.assertRaises(ParseError):
            RationalPoint.of("1/0")
        with self.assertRaises(PreconditionError):
            RationalPoint(2, 4)
        with self.assertRaises(PreconditionError):
            RationalPoint(3, 2)


class TestRationalMembership(TestCase):

    def test_geometric(self):
        res = rational_membership(RationalPoint(5, 8), Geometric(1, 2))
        self.assertIs(res.verdict, Membership.MEMBER)
        self.assertEqual(res.index, 3)
        self.assertEqual(res.cycle, (0,))

        res = rational_membership(RationalPoint(1, 3), Geometric(1, 2))
        self.assertIs(res.verdict, Membership.NON_MEMBER)
        self.assertIsNone(res.index)
        self.assertEqual(set(res.cycle), {1, 2})
        self.assertEqual(res.cycle_length, 2)

        res = rational_membership(RationalPoint(0, 1), Geometric(3, 5))
        self.assertEqual((res.verdict, res.index), (Membership.MEMBER, 0))

    def test_geometric_members_are_dyadic(self):
        rng = random.Random(11)
        for x in random_points(rng, 200, 64):
            res = rational_membership(x, Geometric(1, 2))
            dyadic = x.q & (x.q - 1) == 0
            self.assertEqual(res.verdict is Membership.MEMBER, dyadic, str(x))
            if dyadic:
                self.assertEqual(res.index, x.q.bit_length() - 1)

    def test_factorial(self):
        rng = random.Random(2)
        for x in random_points(rng, 100, 10_000):
            for offset in (0, 1, 3):
                res = rational_membership(x, Factorial(offset))
                self.assertIs(res.verdict, Membership.MEMBER)
                self.assertLessEqual(res.index, x.q)

    def test_recurrence(self):
        fib = Recurrence((1, 1), (1, 2))
        res = rational_membership(RationalPoint(1, 5), fib)
        self.assertIs(res.verdict, Membership.NON_MEMBER)
        with self.assertRaises(PreconditionError):
            rational_membership(RationalPoint(1, 5), Recurrence((1, 1), (1, 1)))

    def test_positive_terms(self):
        with self.assertRaises(PreconditionError):
            rational_membership(RationalPoint(1, 2), Recurrence((1, 1), (0, 1)))


class TestFloatMembership(TestCase):

    def test_agrees_with_rational_geometric(self):
        rng = random.Random(7)
        seq = Geometric(1, 2)
        for x in random_points(rng, 100, 40):
            exact = rational_membership(x, seq)
            eps = Fraction(1, 2 * x.q + 1)
            probe = float_membership(x.value, seq, 100, eps)
            expected = (
                FloatVerdict.APPEARS_MEMBER
                if exact.verdict is Membership.MEMBER
                else FloatVerdict.APPEARS_NON_MEMBER
            )
            self.assertIs(probe.verdict, expected, str(x))
            self.assertFalse(probe.conclusive)

    def test_agrees_with_rational_factorial(self):
        rng = random.Random(8)
        seq = Factorial(1)
        for x in random_points(rng, 50, 20):
            probe = float_membership(x.value, seq, 40, Fraction(1, 100))
            self.assertIs(probe.verdict, FloatVerdict.APPEARS_MEMBER, str(x))

    def test_report(self):
        probe = float_membership(Fraction(1, 3), Geometric(1, 2), 7, Fraction(1, 4))
        self.assertEqual(len(probe.distances), 8)
        self.assertEqual(probe.tail_from, 6)
        self.assertEqual(probe.excursions, 2)
        self.assertAlmostEqual(probe.max_distance, 1 / 3)
        self.assertAlmostEqual(probe.tail_max, 1 / 3)
        self.assertEqual(probe.required_bits, 8 + 32)
        self.assertIs(probe.verdict, FloatVerdict.APPEARS_NON_MEMBER)

    def test_single_excursion_is_inconclusive(self):
        # 1/2^7: distances 2^(k-7), then 0 from k = 7
        probe = float_membership(
            Fraction(1, 128), Geometric(1, 2), 7, Fraction(1, 5)
        )
        self.assertEqual(probe.excursions, 1)
        self.assertIs(probe.verdict, FloatVerdict.INCONCLUSIVE)

    def test_euler_number_and_factorials(self):
        # n! e is 1/(n+1) away from an integer, roughly
        probe = float_membership(mpmath.e, Factorial(0), 40, Fraction(1, 10))
        self.assertIs(probe.verdict, FloatVerdict.APPEARS_MEMBER)

    def test_string_point(self):
        probe = float_membership("0.625", Geometric(1, 2), 20, Fraction(1, 10))
        self.assertIs(probe.verdict, FloatVerdict.APPEARS_MEMBER)
        self.assertEqual(probe.distances[3:], (0.0,) * 18)

    def test_precision(self):
        self.assertEqual(required_bits(Geometric(1, 2), 100, 32), 133)
        with self.assertRaises(PrecisionExceededError) as ctx:
            float_membership(Fraction(1, 7), Factorial(1), 100, Fraction(1, 10))
        self.assertGreater(ctx.exception.required_bits, 256)
        probe = float_membership(
            Fraction(1, 7), Factorial(1), 100, Fraction(1, 10), precision=1024
        )
        self.assertIs(probe.verdict, FloatVerdict.APPEARS_MEMBER)

    def test_preconditions(self):
        seq = Geometric(1, 2)
        with self.assertRaises(PreconditionError):
            float_membership(Fraction(1, 3), seq, -1, Fraction(1, 10))
        with self.assertRaises(PreconditionError):
            float_membership(Fraction(1, 3), seq, 10, Fraction(1, 2))
        with self.assertRaises(PreconditionError):
            float_membership(Fraction(1, 3), seq, 10, Fraction(0))


class TestMeasureProbe(TestCase):

    def test_exact_values(self):
        seq = Geometric(1, 2)
        rep = measure_probe(seq, Fraction(1, 10), 0, 500, 1)
        self.assertEqual((rep.estimate, rep.exact), (1, 1))
        rep = measure_probe(seq, Fraction(1, 10), 1, 20_000, 1)
        self.assertEqual(rep.exact, Fraction(1, 5))
        self.assertTrue(rep.within(3.0))

    def test_monotone_in_constraints(self):
        seq = Geometric(1, 3)
        estimates = [
            measure_probe(seq, Fraction(1, 8), k, 3000, 99).estimate
            for k in range(6)
        ]
        self.assertEqual(estimates, sorted(estimates, reverse=True))
        self.assertIsNone(measure_probe(seq, Fraction(1, 8), 3, 10, 99).exact)

    def test_monotone_in_epsilon(self):
        seq = Factorial(1)
        low = measure_probe(seq, Fraction(1, 20), 4, 3000, 5)
        high = measure_probe(seq, Fraction(1, 5), 4, 3000, 5)
        self.assertLessEqual(low.estimate, high.estimate)

    def test_workers(self):
        seq = Geometric(1, 2)
        one = measure_probe(seq, Fraction(1, 6), 3, 4000, 3, block_size=500)
        two = measure_probe(
            seq, Fraction(1, 6), 3, 4000, 3, block_size=500, workers=2
        )
        self.assertEqual(one, two)

    def test_preconditions(self):
        seq = Geometric(1, 2)
        with self.assertRaises(PreconditionError):
            measure_probe(seq, Fraction(1, 10), -1, 10, 1)
        with self.assertRaises(PreconditionError):
            measure_probe(seq, Fraction(3, 4), 1, 10, 1)
        with self.assertRaises(PrecisionExceededError):
            measure_probe(Factorial(1), Fraction(1, 10), 101, 10, 1)

    def test_short_sequences(self):
        with self.assertRaises(PreconditionError) as ctx:
            measure_probe(Explicit((1, 2)), Fraction(1, 8), 5, 100, 1)
        self.assertEqual(ctx.exception.param, "constraints")
        with self.assertRaises(PreconditionError) as ctx:
            measure_probe(Explicit(()), Fraction(1, 8), 0, 100, 1)
        self.assertEqual(ctx.exception.param, "sequence")
        rep = measure_probe(Explicit((1, 2)), Fraction(1, 8), 2, 100, 1)
        self.assertEqual(rep.samples, 100)

    def test_boundary_points_are_inside(self):
        # 64/256 = 1/4 lies on the boundary of {‖x‖ <= 1/4}, 65/256 outside
        hits = _measure_kernel(FixedStream([64, 65, 192]), 3, ((1,), 1, 4, 8))
        self.assertEqual(hits, 2)
        hits = _measure_kernel(FixedStream([64, 96]), 2, ((1, 2), 1, 4, 8))
        self.assertEqual(hits, 0)


if __name__ == "__main__":
    main(verbosity=2)
