import random
from itertools import combinations
from unittest import TestCase, main

import numpy as np
from hypothesis import given, settings, strategies as st

from dualprobe.core.errors import CharOutsideWindowError, PreconditionError
from dualprobe.utils.annihilators import (
    CoordinateCharacters,
    Exactness,
    ListCharacters,
    ShiftedCharacters,
    Window,
    annihilator_of_characters,
    annihilator_of_elements,
    diagonal_image,
    gf2_rank,
    quotient_image_count,
    separating_check,
    stabilization_index,
)
from dualprobe.utils.gf2_core import (
    Character,
    EnumeratedSupport,
    ExplicitSupport,
    PeriodicSupport,
    Sign,
    element_mul,
    evaluate,
)
from dualprobe.utils.sequences import Geometric

P, M = Sign.PLUS, Sign.MINUS


def all_window_characters(width):
    for size in range(width + 1):
        for coords in combinations(range(width), size):
            yield Character(coords)


class TestAnnihilatorOfElements(TestCase):

    def test_two_coordinate_generator(self):
        basis = annihilator_of_elements(
            [ExplicitSupport((0, 1, 7))], Window(3)
        )
        self.assertEqual(basis.rank, 2)
        self.assertEqual(
            set(basis.span()),
            {
                Character(),
                Character((2,)),
                Character((0, 1)),
                Character((0, 1, 2)),
            },
        )

    def test_no_generators(self):
        basis = annihilator_of_elements([], Window(4))
        self.assertEqual(basis.rank, 4)
        self.assertEqual(len(set(basis.span())), 16)

    def test_singletons(self):
        for width in (1, 5, 9):
            gens = [ExplicitSupport((i,)) for i in range(width)]
            basis = annihilator_of_elements(gens, Window(width))
            self.assertEqual(basis.rank, 0)
            self.assertEqual(list(basis.span()), [Character()])

    def test_infinite_generators(self):
        # supp ∩ 8 = {1, 2, 4}
        basis = annihilator_of_elements(
            [EnumeratedSupport(Geometric(1, 2))], Window(8)
        )
        self.assertEqual(basis.rank, 7)
        for chi in basis.span():
            self.assertIs(evaluate(chi, EnumeratedSupport(Geometric(1, 2))), P)

    def test_window_invalid(self):
        with self.assertRaises(PreconditionError):
            Window(0)

    def test_brute_force_oracle(self):
        rng = random.Random(2024)
        for _ in range(50):
            width = rng.randint(1, 12)
            gens = [
                ExplicitSupport.of(
                    rng.sample(range(width + 3), rng.randint(0, width + 3))
                )
                for _ in range(rng.randint(0, 4))
            ]
            basis = annihilator_of_elements(gens, Window(width))
            expected = {
                chi
                for chi in all_window_characters(width)
                if all(evaluate(chi, x) is P for x in gens)
            }
            span = set(basis.span())
            self.assertEqual(span, expected)
            self.assertEqual(len(span), 2**basis.rank)


class TestAnnihilatorOfCharacters(TestCase):

    def test_examples(self):
        sol = annihilator_of_characters([Character((0, 1))], Window(2))
        self.assertEqual(sol.basis, ((1, 1),))
        self.assertEqual(sol.free_tail_from, 2)

        sol = annihilator_of_characters([], Window(3))
        self.assertEqual(sol.rank, 3)

        sol = annihilator_of_characters(
            [Character((0,)), Character((0, 1)), Character((1, 2))], Window(3)
        )
        self.assertEqual(sol.rank, 0)
        self.assertEqual(sol.supports(), [])

    def test_outside_window(self):
        with self.assertRaises(CharOutsideWindowError) as ctx:
            annihilator_of_characters(
                [Character((0,)), Character((1, 5))], Window(3)
            )
        self.assertEqual(ctx.exception.index, 1)

    def test_solutions_annihilated(self):
        chars = [Character((0, 2)), Character((1, 2, 3))]
        sol = annihilator_of_characters(chars, Window(5))
        self.assertEqual(sol.rank, 3)
        for x in sol.supports():
            for chi in chars:
                self.assertIs(evaluate(chi, x), P)

    def test_rank_duality(self):
        rng = random.Random(7)
        for _ in range(50):
            width = rng.randint(1, 12)
            chars = [
                Character.of(rng.sample(range(width), rng.randint(0, width)))
                for _ in range(rng.randint(0, 6))
            ]
            rows = np.array(
                [Window(width).char_row(chi) for chi in chars], dtype=np.uint8
            ).reshape(len(chars), width)
            sol = annihilator_of_characters(chars, Window(width))
            self.assertEqual(sol.rank, width - gf2_rank(rows))

    def test_double_annihilator(self):
        rng = random.Random(11)
        for _ in range(30):
            width = rng.randint(1, 10)
            window = Window(width)
            gens = [
                ExplicitSupport.of(rng.sample(range(width), rng.randint(0, width)))
                for _ in range(rng.randint(1, 4))
            ]
            chars = annihilator_of_elements(gens, window).basis
            sol = annihilator_of_characters(list(chars), window)
            sol_rows = np.array(sol.basis, dtype=np.uint8).reshape(-1, width)
            gen_rows = np.array([window.row(x) for x in gens], dtype=np.uint8)
            self.assertEqual(gf2_rank(sol_rows), gf2_rank(gen_rows))
            both = np.vstack([sol_rows, gen_rows])
            self.assertEqual(gf2_rank(both), gf2_rank(sol_rows))


class TestStabilization(TestCase):

    def test_coordinate_characters(self):
        res = stabilization_index(
            CoordinateCharacters(), ExplicitSupport((2, 5)), 10
        )
        self.assertEqual(res.index, 6)
        self.assertIs(res.exactness, Exactness.EXACT)
        self.assertEqual(res.horizon, 6)

        res = stabilization_index(CoordinateCharacters(), ExplicitSupport(), 10)
        self.assertEqual(res.index, 0)
        self.assertIs(res.exactness, Exactness.EXACT)

    def test_infinite_support(self):
        res = stabilization_index(
            CoordinateCharacters(), EnumeratedSupport(Geometric(1, 2)), 64
        )
        self.assertIs(res.exactness, Exactness.EMPIRICAL)
        self.assertEqual(res.index, 33)
        self.assertEqual(res.probed, 64)

    def test_certificate_beyond_budget(self):
        res = stabilization_index(
            CoordinateCharacters(), ExplicitSupport((3, 40)), 10
        )
        self.assertEqual(res.index, 41)
        self.assertIs(res.exactness, Exactness.EXACT)

    def test_finite_periodic(self):
        res = stabilization_index(
            CoordinateCharacters(), PeriodicSupport((0, 1, 1), (0,)), 4
        )
        self.assertEqual(res.index, 3)
        self.assertIs(res.exactness, Exactness.EXACT)

    def test_shifted_blocks(self):
        seq = ShiftedCharacters(3, (1, 0))
        self.assertEqual(seq.character(2), Character((6, 7)))
        res = stabilization_index(seq, ExplicitSupport((7,)), 2)
        self.assertEqual(res.index, 3)
        self.assertEqual(res.horizon, 3)
        self.assertIs(res.exactness, Exactness.EXACT)
        with self.assertRaises(PreconditionError):
            ShiftedCharacters(0, (1,))

    def test_finite_list(self):
        seq = ListCharacters((Character((0,)), Character((1,))))
        res = stabilization_index(seq, ExplicitSupport((1,)), 10)
        self.assertEqual(res.index, 2)
        self.assertEqual(res.probed, 2)
        self.assertIs(res.exactness, Exactness.EMPIRICAL)

    def test_budget(self):
        with self.assertRaises(PreconditionError):
            stabilization_index(CoordinateCharacters(), ExplicitSupport(), 0)

    def test_exact_for_random_supports(self):
        rng = random.Random(99)
        for _ in range(100):
            x = ExplicitSupport.of(rng.sample(range(500), rng.randint(1, 8)))
            res = stabilization_index(CoordinateCharacters(), x, 16)
            self.assertIs(res.exactness, Exactness.EXACT)
            self.assertEqual(res.index, x.max + 1)
            # the certificate covers all later characters
            for n in range(res.horizon, res.horizon + 50):
                self.assertIs(evaluate(Character((n,)), x), P)


class TestDiagonal(TestCase):

    def test_examples(self):
        chars = [Character((0,)), Character((1,)), Character((2,))]
        self.assertEqual(diagonal_image(chars, ExplicitSupport()).signs, (P, P, P))
        img = diagonal_image(chars, ExplicitSupport((1,)))
        self.assertEqual(img.signs, (P, M, P))
        self.assertEqual(img.stabilized_at, 2)
        img = diagonal_image(
            [Character((0, 1)), Character((1, 2))], ExplicitSupport((0, 1, 2))
        )
        self.assertEqual(img.signs, (P, P))
        self.assertEqual(img.stabilized_at, 0)

    @settings(max_examples=200, deadline=None)
    @given(
        st.lists(
            st.sets(st.integers(0, 30), max_size=5).map(Character.of), max_size=8
        ),
        st.sets(st.integers(0, 30)).map(ExplicitSupport.of),
        st.sets(st.integers(0, 30)).map(ExplicitSupport.of),
    )
    def test_homomorphism(self, chars, x, y):
        product = diagonal_image(chars, element_mul(x, y)).signs
        self.assertEqual(
            product,
            tuple(
                a * b
                for a, b in zip(
                    diagonal_image(chars, x).signs, diagonal_image(chars, y).signs
                )
            ),
        )

    def test_quotient_image_count(self):
        self.assertEqual(
            quotient_image_count(
                [Character((0,))],
                [ExplicitSupport(), ExplicitSupport((0,)), ExplicitSupport((1,))],
            ),
            2,
        )
        self.assertEqual(
            quotient_image_count([], [ExplicitSupport((0,)), ExplicitSupport()]),
            1,
        )
        four = [ExplicitSupport(c) for c in ((), (0,), (1,), (0, 1))]
        self.assertEqual(
            quotient_image_count([Character((0,)), Character((1,))], four), 4
        )

    def test_separating(self):
        chars = [Character((0,))]
        x = ExplicitSupport((0,))
        checks = separating_check(
            chars,
            [
                (x, ExplicitSupport()),
                (ExplicitSupport((1,)), ExplicitSupport((2,))),
                (x, x),
            ],
        )
        self.assertTrue(checks[0].separated)
        self.assertEqual(checks[0].character, Character((0,)))
        self.assertFalse(checks[1].separated)
        self.assertFalse(checks[2].separated)


if __name__ == "__main__":
    main(verbosity=2)
