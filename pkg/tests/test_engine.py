import math
from fractions import Fraction as F

import pytest

from zetaform.engine import (
    ClosedForm,
    SeriesSpec,
    apply_reductions,
    closed_form,
    default_reduction_table,
    harmonic_value,
    index_value,
    load_reduction_table,
    pair_family_value,
    power_family_value,
    telescope_value,
)
from zetaform.qsym import Polynomial, bell_polynomial
from zetaform.reducer import DivergentSeriesError

X1 = Polynomial.variable(1)


def H(n, m=1, z=F(0)):
    return sum(F(1, 1) / (j + z) ** m for j in range(1, n + 1))


def elementary_poly(k):
    args = [(-1) ** (i + 1) * Polynomial.variable(i) for i in range(1, k + 1)]
    return bell_polynomial(k, args)


def cf(constant, terms, z=F(0), m=1):
    return ClosedForm(F(constant), terms, F(z), m)


class TestHarmonicValue:
    def test_empty(self):
        assert harmonic_value(0, 1, 0) == 0

    def test_h2(self):
        assert harmonic_value(2, 1, 0) == F(3, 2)

    def test_shifted_square(self):
        assert harmonic_value(1, 2, F(-1, 2)) == 4

    def test_rejects_shift(self):
        with pytest.raises(ValueError):
            harmonic_value(2, 1, F(-5, 4))


class TestPairFamily:
    def test_adjacent_on_single_part(self):
        got = pair_family_value(0, (2,), 1, 0)
        assert got == cf(0, {((3,),): 1})

    def test_adjacent_on_two_parts(self):
        got = pair_family_value(0, (1, 2), 1, 0)
        assert got == cf(0, {((1, 3),): 1})

    def test_adjacent_order_two(self):
        got = pair_family_value(0, (1,), 2, 0)
        assert got == cf(0, {((3,),): 1}, m=2)

    def test_shifted_single_order_one(self):
        # constant 1: the classic telescoped value
        got = pair_family_value(1, (1,), 1, 0)
        assert got == cf(1, {})

    def test_shifted_single_order_two(self):
        got = pair_family_value(1, (1,), 2, 0)
        assert got == cf(-1, {((2,),): 1}, m=2)

    def test_shifted_single_half(self):
        got = pair_family_value(1, (1,), 1, F(-1, 2))
        assert got == cf(2, {}, z=F(-1, 2))

    def test_two_ones_any_shift(self):
        z = F(-2, 7)
        got = pair_family_value(1, (1, 1), 1, z)
        assert got == cf(F(1) / (1 + z), {}, z=z)

    def test_empty_composition(self):
        z = F(-1, 3)
        got = pair_family_value(2, (), 1, z)
        assert got == cf(F(1) / (3 + z), {}, z=z)


class TestPowerFamily:
    def test_no_shift(self):
        got = power_family_value(0, 3, (1,), 1, 0)
        assert got == cf(0, {((4,),): 1, ((1, 3),): 1})

    def test_one_shift(self):
        got = power_family_value(1, 2, (1,), 1, 0)
        assert got == cf(0, {((1, 2),): 1})

    def test_unit_composition(self):
        z = F(-1, 2)
        got = power_family_value(0, 2, (), 1, z)
        assert got == cf(0, {((2,),): 1}, z=z)
        got = power_family_value(1, 2, (), 1, z)
        assert got == cf(-F(1) / (1 + z) ** 2, {((2,),): 1}, z=z)

    def test_two_shift_single(self):
        # the shifted-by-two square denominator on a plain harmonic numerator
        got = power_family_value(2, 2, (1,), 1, 0)
        assert got == cf(-2, {((1, 2),): 1, ((2,),): 1})

    def test_two_shift_order_two(self):
        got = power_family_value(2, 2, (2,), 1, 0)
        assert got == cf(3, {((2, 2),): 1, ((2,),): -2})

    def test_fourth_power_no_shift(self):
        got = power_family_value(0, 4, (1,), 1, 0)
        assert got == cf(0, {((5,),): 1, ((1, 4),): 1})


class TestTelescope:
    def test_base_one(self):
        got = telescope_value(1, 2, (1,), 1, 0)
        assert got == cf(2, {((2,),): -1})

    def test_p_one_delegates(self):
        assert telescope_value(1, 1, (1, 1), 1, 0) == pair_family_value(1, (1, 1), 1, 0)

    def test_empty_composition(self):
        got = telescope_value(1, 2, (), 1, 0)
        assert got == cf(F(1, 4), {})

    def test_rejects_zero_shift(self):
        with pytest.raises(ValueError):
            telescope_value(0, 2, (1,), 1, 0)


class TestPipeline:
    def test_square_identity_any_shift(self):
        for z in (F(0), F(-1, 2), F(-1, 3)):
            got = closed_form(SeriesSpec(X1 * X1, 1, z, (0, 1, 1)))
            assert got == cf(F(1) / (1 + z), {((2,),): 1}, z=z)

    def test_order_two_adjacent(self):
        got = closed_form(SeriesSpec(X1, 2, 0, (1, 1)))
        assert got == cf(0, {((3,),): 1}, m=2)

    def test_euler_shift_square(self):
        got = closed_form(SeriesSpec(X1, 1, 0, (0, 2)))
        assert got == cf(0, {((1, 2),): 1})

    def test_constant_numerator(self):
        got = closed_form(SeriesSpec(Polynomial.constant(1), 1, 0, (2,)))
        assert got == cf(0, {((2,),): 1})

    def test_constant_numerator_shifted(self):
        got = closed_form(SeriesSpec(Polynomial.constant(2), 1, 0, (0, 0, 2)))
        assert got == cf(-2 - F(1, 2), {((2,),): 2})

    def test_square_shift_family(self):
        for b in range(1, 11):
            got = closed_form(SeriesSpec(X1 * X1, 1, 0, (0,) * b + (1, 1)))
            const = (b * H(b, 2) + b * H(b) ** 2 - H(b)) / F(b * b)
            assert got == cf(const, {((2,),): F(1, b)})

    def test_order_two_squares_family(self):
        # adjacent pair on signed power-sum input, order 2: pure zeta staircase
        for k in range(1, 4):
            got = closed_form(SeriesSpec(elementary_poly(k), 2, 0, (0, 1, 1)))
            want_terms = {((2,) * j,): F((-1) ** (k - j)) for j in range(1, k + 1)}
            assert got == cf(F((-1) ** k), want_terms, m=2)

    def test_shifted_square_staircase(self):
        # squared denominator two steps out, order 2
        for k in range(1, 4):
            got = closed_form(SeriesSpec(elementary_poly(k), 2, 0, (0, 0, 2)))
            want_terms = {((2,) * (k + 1),): F(1)}
            for j in range(1, k + 1):
                want_terms[((2,) * j,)] = F(2 * (-1) ** (k + 1 - j) * (k + 1 - j))
            assert got == cf(F((-1) ** (k + 1) * (2 * k + 1)), want_terms, m=2)

    def test_shifted_square_staircase_half(self):
        # same shape at z=-1/2 (coefficients in t-values after 2-power scaling)
        for k in range(1, 4):
            got = closed_form(SeriesSpec(elementary_poly(k), 2, F(-1, 2), (0, 0, 2)))
            assert got.constant == F((-1) ** (k + 1) * (4 * k + 4))
            assert got.zeta_coefficient((2,) * (k + 1)) == 1
            for j in range(1, k + 1):
                assert got.zeta_coefficient((2,) * j) == F(
                    2 * (-1) ** (k + 1 - j) * (k + 1 - j)
                )

    def test_divergent_rejected(self):
        with pytest.raises(DivergentSeriesError):
            SeriesSpec(X1, 1, 0, (1,))

    def test_vector_invariant(self):
        # every emitted vector has entries >= 1 and a final entry >= 2
        specs = [
            SeriesSpec(X1 * X1 * X1, 1, 0, (2, 3, 2)),
            SeriesSpec(X1 * Polynomial.variable(2), 2, F(-1, 3), (0, 1, 0, 1)),
            SeriesSpec(elementary_poly(3), 1, F(-1, 2), (1, 1, 1, 1)),
        ]
        for spec in specs:
            got = closed_form(spec)
            for mono in got.terms:
                for vec in mono:
                    assert all(e >= 1 for e in vec) and vec[-1] >= 2
                    assert sum(vec) <= spec.m * 3 + sum(spec.s)

    def test_index_value_general(self):
        # a non-canonical index routed through reduction
        got = index_value((1, 2), (1,), 1, 0)
        want = pair_family_value(0, (1,), 1, 0) - power_family_value(1, 2, (1,), 1, 0)
        assert got == want


class TestNestedSumIdentity:
    @pytest.mark.parametrize("k", range(0, 6))
    def test_alternating_binomial_harmonic(self, k):
        # H_c^(k+1) as an alternating binomial sum over weakly increasing
        # chains 1 <= r_k <= ... <= r_1 <= r_0 <= c of the product 1/(r_0...r_k)
        for c in range(1, 11):
            t = [F(1)] * (c + 1)  # t[r] = chain sum over the k inner layers
            for _ in range(k):
                acc = F(0)
                new = [F(0)] * (c + 1)
                for r in range(1, c + 1):
                    acc += t[r] / r
                    new[r] = acc
                t = new
            total = sum(
                F((-1) ** (r + 1) * math.comb(c, r), r) * t[r] for r in range(1, c + 1)
            )
            assert total == H(c, k + 1)


class TestReductionTable:
    def test_default_entries(self):
        table = default_reduction_table()
        assert len(table) == 3
        assert table.shift == 0

    def test_single_substitution(self):
        table = default_reduction_table()
        got = apply_reductions(cf(0, {((1, 2),): 1}), table)
        assert got == cf(0, {((3,),): 1})

    def test_quarter_rule(self):
        table = default_reduction_table()
        got = apply_reductions(cf(0, {((1, 3),): 2}), table)
        assert got == cf(0, {((4,),): F(1, 2)})

    def test_product_rule(self):
        table = default_reduction_table()
        got = apply_reductions(cf(0, {((1, 4),): 1}), table)
        assert got == cf(0, {((5,),): 2, ((2,), (3,)): -1})

    def test_missing_entries_pass_through(self):
        table = default_reduction_table()
        start = cf(F(1, 2), {((2, 2),): 1})
        assert apply_reductions(start, table) == start

    def test_shift_mismatch_is_noop(self):
        table = default_reduction_table()
        start = cf(0, {((1, 2),): 1}, z=F(-1, 2))
        assert apply_reductions(start, table) == start

    def test_substitutes_inside_products(self):
        table = default_reduction_table()
        got = apply_reductions(cf(0, {((1, 2), (2,)): 1}), table)
        assert got == cf(0, {((2,), (3,)): 1})

    def test_load_roundtrip(self, tmp_path):
        path = tmp_path / "table.json"
        path.write_text(
            '{"shift": "0", "rules": [{"source": [1, 2], "constant": "1/3",'
            ' "terms": [{"factors": [[3]], "coeff": "2"}]}]}'
        )
        table = load_reduction_table(path)
        got = apply_reductions(cf(0, {((1, 2),): F(3)}), table)
        assert got == cf(1, {((3,),): 6})

    def test_flagship_identity(self):
        spec = SeriesSpec(X1, 1, 0, (4, 1, 1, 1, 1, 1))
        total = closed_form(spec).scaled(math.factorial(5))
        got = apply_reductions(total, default_reduction_table())
        want = cf(
            F(131891, 172800),
            {
                ((5,),): 3,
                ((2,), (3,)): -1,
                ((4,),): F(-137, 48),
                ((3,),): F(12019, 1800),
                ((2,),): F(-874853, 216000),
            },
        )
        assert got == want


class TestClosedFormAlgebra:
    def test_mixing_shifts_is_an_error(self):
        a = cf(0, {((2,),): 1}, z=F(0))
        b = cf(0, {((2,),): 1}, z=F(-1, 2))
        with pytest.raises(ValueError):
            a + b

    def test_scaling(self):
        a = cf(F(1, 2), {((2,),): 3})
        assert a.scaled(F(2, 3)) == cf(F(1, 3), {((2,),): 2})

    def test_rejects_bad_vector(self):
        with pytest.raises(ValueError):
            cf(0, {((2, 1),): 1})
