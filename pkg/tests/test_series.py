"""Series evaluators: values, tail bounds, partial sums, and the J identity.

Expected decimal literals marked "frozen" were produced by the oracle module
at 40 significant digits and rounded to double precision.
"""

import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbp import (
    Family,
    Form,
    FunctionId,
    PartialSpec,
    PrecisionSpec,
    QParams,
    TruncationFailure,
    TruncationPolicy,
    ValidationError,
    Weight,
    coefficient_k,
    coefficient_t,
    coefficient_tail_sum,
    eval_h,
    eval_h_deriv,
    eval_j,
    eval_partial,
    eval_partial_deriv,
    eval_reduced,
    eval_reduced_deriv,
    evaluate,
    normalization_c,
    oracle_eval,
)

P051 = QParams(0.5, 1.0)
P0251 = QParams(0.25, 1.0)


class TestReduced:
    def test_origin_is_exactly_one(self):
        res = eval_reduced(Family.SECOND, P051, 0.0)
        assert res.value == 1.0 + 0.0j
        assert res.tail_bound == 0.0

    def test_frozen_value_second(self):
        res = eval_reduced(Family.SECOND, P051, 0.5)
        frozen = 0.9176563693725567  # oracle, 40 digits
        assert abs(res.value - frozen) <= res.tail_bound + 1e-15

    def test_third_family_vs_oracle(self):
        res = eval_reduced(Family.THIRD, P0251, -0.5)
        ref = oracle_eval(FunctionId(Family.THIRD, Form.REDUCED), P0251, -0.5)
        assert abs(res.value - ref.value) <= res.tail_bound + 1e-13 * abs(res.value)

    def test_rejects_outside_disk(self):
        with pytest.raises(ValidationError):
            eval_reduced(Family.SECOND, P051, 1.0 + 1e-6j)
        with pytest.raises(ValidationError):
            eval_reduced(Family.SECOND, P051, -1.0000001)


class TestH:
    def test_origin_is_exactly_zero(self):
        res = eval_h(Family.SECOND, P051, 0.0)
        assert res.value == 0.0j
        assert res.tail_bound == 0.0

    def test_frozen_value_second(self):
        res = eval_h(Family.SECOND, P051, 0.5)
        assert abs(res.value - 0.45882818468627834) <= res.tail_bound + 1e-15

    def test_hand_sum_four_terms(self):
        # 0.5 - (1/6)(0.25) + K_2 (0.125) + K_3 (0.0625)
        k2 = coefficient_k(P051, 2).value
        k3 = coefficient_k(P051, 3).value
        hand = 0.5 - 0.25 / 6.0 + k2 * 0.125 + k3 * 0.0625
        res = eval_h(Family.SECOND, P051, 0.5)
        assert abs(res.value - hand) <= 1e-9

    def test_third_family_frozen(self):
        res = eval_h(Family.THIRD, P0251, 0.5)
        ref = oracle_eval(FunctionId(Family.THIRD, Form.NORMALIZED), P0251, 0.5)
        assert abs(res.value - ref.value) <= res.tail_bound + 1e-13 * abs(res.value)

    def test_boundary_point_accepted(self):
        res = eval_h(Family.SECOND, P051, 1.0)
        assert res.tail_bound <= 1e-15


class TestHDeriv:
    def test_origin_is_exactly_one(self):
        assert eval_h_deriv(Family.SECOND, P051, 0.0).value == 1.0 + 0.0j
        assert eval_h_deriv(Family.THIRD, P0251, 0.0).value == 1.0 + 0.0j

    def test_matches_central_difference(self):
        delta = 1e-5
        z = 0.5
        hp = eval_h(Family.SECOND, P051, z + delta).value
        hm = eval_h(Family.SECOND, P051, z - delta).value
        fd = (hp - hm) / (2.0 * delta)
        got = eval_h_deriv(Family.SECOND, P051, z).value
        assert abs(fd - got) <= 1e-6 * abs(got)

    def test_third_family_complex_point_vs_oracle(self):
        res = eval_h_deriv(Family.THIRD, P0251, 0.9j)
        ref = oracle_eval(FunctionId(Family.THIRD, Form.DERIVATIVE), P0251, 0.9j)
        assert abs(res.value - ref.value) <= res.tail_bound + 1e-13 * abs(res.value)


class TestReducedDeriv:
    def test_origin_equals_first_coefficient(self):
        got = eval_reduced_deriv(Family.SECOND, P051, 0.0).value
        assert abs(got - (-1.0 / 6.0)) <= 1e-15

    @pytest.mark.parametrize("family,p", [(Family.SECOND, P051), (Family.THIRD, P0251)])
    def test_product_rule_identity(self, family, p):
        # h'(z) = g(z) + z g'(z)
        z = 0.3 - 0.4j
        lhs = eval_h_deriv(family, p, z).value
        rhs = eval_reduced(family, p, z).value + z * eval_reduced_deriv(family, p, z).value
        assert abs(lhs - rhs) <= 1e-13


class TestEvaluateDispatch:
    def test_forms_route_to_matching_evaluators(self):
        z = 0.25 + 0.1j
        assert evaluate(FunctionId(Family.SECOND, Form.NORMALIZED), P051, z).value == \
            eval_h(Family.SECOND, P051, z).value
        assert evaluate(FunctionId(Family.SECOND, Form.REDUCED), P051, z).value == \
            eval_reduced(Family.SECOND, P051, z).value
        assert evaluate(FunctionId(Family.SECOND, Form.DERIVATIVE), P051, z).value == \
            eval_h_deriv(Family.SECOND, P051, z).value


class TestPartialSums:
    def test_two_term_hand_value(self):
        got = eval_partial(FunctionId(Family.SECOND), P051, PartialSpec(1), 0.5)
        assert abs(got - (0.5 - 0.25 / 6.0)) <= 1e-16

    def test_zero_at_origin(self):
        assert eval_partial(FunctionId(Family.SECOND), P051, PartialSpec(3), 0.0) == 0.0j

    def test_third_family_three_terms_at_one(self):
        t1 = coefficient_t(P0251, 1).value
        t2 = coefficient_t(P0251, 2).value
        got = eval_partial(FunctionId(Family.THIRD), P0251, PartialSpec(2), 1.0)
        assert abs(got - (1.0 + t1 + t2)) <= 1e-15

    def test_reduced_partial_is_one_at_origin(self):
        got = eval_partial(FunctionId(Family.SECOND, Form.REDUCED), P051, PartialSpec(5), 0.0)
        assert got == 1.0 + 0.0j

    def test_normalized_equals_z_times_reduced(self):
        z = 0.4 + 0.3j
        spec = PartialSpec(4)
        h_m = eval_partial(FunctionId(Family.THIRD), P0251, spec, z)
        g_m = eval_partial(FunctionId(Family.THIRD, Form.REDUCED), P0251, spec, z)
        assert abs(h_m - z * g_m) <= 1e-15

    def test_deriv_partial_product_rule(self):
        z = 0.4 - 0.2j
        spec = PartialSpec(3)
        dh = eval_partial_deriv(Family.SECOND, P051, spec, z)
        g = eval_partial(FunctionId(Family.SECOND, Form.REDUCED), P051, spec, z)
        dg = eval_partial(FunctionId(Family.SECOND, Form.REDUCED_DERIVATIVE), P051, spec, z)
        assert abs(dh - (g + z * dg)) <= 1e-14

    def test_deriv_partial_at_origin(self):
        assert eval_partial_deriv(Family.SECOND, P051, PartialSpec(2), 0.0) == 1.0 + 0.0j

    def test_rejects_m_below_one(self):
        with pytest.raises(ValidationError):
            PartialSpec(0)

    def test_partial_converges_to_full(self):
        z = 0.7j
        full = eval_h(Family.SECOND, P051, z)
        part = eval_partial(FunctionId(Family.SECOND), P051, PartialSpec(30), z)
        assert abs(full.value - part) <= full.tail_bound + 1e-14

    def test_partial_error_dominated_by_coefficient_tail(self):
        # |h(z) - h_m(z)| <= sum_{n>m} |a_n| on the closed disk
        for z in (0.9, -0.9, 0.6 + 0.6j):
            for m in (1, 2, 5):
                full = eval_h(Family.THIRD, P0251, z)
                part = eval_partial(FunctionId(Family.THIRD), P0251, PartialSpec(m), z)
                tail = coefficient_tail_sum(Family.THIRD, P0251, m + 1, Weight.UNIT)
                assert abs(full.value - part) <= tail + full.tail_bound + 1e-14


class TestEvalJ:
    def test_second_family_normalization_identity(self):
        # h2(z) = 2^nu c_nu(q) z^(1 - nu/2) J2(sqrt z; q) on real z in (0,1)
        for z in (0.25, 0.5, 0.81):
            j = eval_j(Family.SECOND, P051, math.sqrt(z))
            c = normalization_c(P051, 1e-15)
            lhs = 2.0**P051.nu * c * z ** (1.0 - P051.nu / 2.0) * j.value
            rhs = eval_h(Family.SECOND, P051, z).value
            assert abs(lhs - rhs) <= 1e-12

    def test_third_family_normalization_identity(self):
        for z in (0.25, 0.5, 0.81):
            j = eval_j(Family.THIRD, P0251, math.sqrt(z))
            c = normalization_c(P0251, 1e-15)
            lhs = c * z ** (1.0 - P0251.nu / 2.0) * j.value
            rhs = eval_h(Family.THIRD, P0251, z).value
            assert abs(lhs - rhs) <= 1e-12

    def test_small_argument_nu_zero_limit(self):
        # at nu = 0 the prefactor is 1 and the series head dominates
        res = eval_j(Family.SECOND, QParams(0.5, 0.0), 1e-8)
        assert abs(res.value - 1.0) <= 1e-12

    def test_rejects_nonpositive_x(self):
        with pytest.raises(ValidationError):
            eval_j(Family.SECOND, P051, 0.0)
        with pytest.raises(ValidationError):
            eval_j(Family.SECOND, P051, -0.5)

    def test_argument_beyond_one_still_bounded(self):
        res = eval_j(Family.THIRD, P0251, 2.5)
        assert res.tail_bound <= 1e-15


class TestTailSums:
    def test_second_family_anchor(self):
        got = coefficient_tail_sum(Family.SECOND, QParams(0.1, 1.0), 1, Weight.UNIT)
        assert abs(got - 0.002805907064560556) <= 1e-12  # frozen oracle value
        assert got >= abs(coefficient_k(QParams(0.1, 1.0), 1).value)

    def test_weighted_third_family_anchor(self):
        got = coefficient_tail_sum(Family.THIRD, P0251, 1, Weight.N_PLUS_ONE)
        assert abs(got - 0.7848933916742938) <= 1e-12  # frozen oracle value

    def test_geometric_majorant_beyond_decay_point(self):
        p = QParams(0.1, 1.0)
        first = abs(coefficient_k(p, 4).value)
        got = coefficient_tail_sum(Family.SECOND, p, 4, Weight.UNIT)
        # measured first-step ratio is far below 1/2 here
        assert first <= got <= first / (1.0 - 0.5)

    def test_rejects_from_index_zero(self):
        with pytest.raises(ValidationError):
            coefficient_tail_sum(Family.SECOND, P051, 0, Weight.UNIT)


class TestTruncationPolicy:
    def test_cap_raises(self):
        with pytest.raises(TruncationFailure):
            eval_reduced(Family.SECOND, QParams(0.9, 0.5), 0.9,
                         TruncationPolicy(epsilon=1e-15, max_terms=2))

    def test_policy_validation(self):
        with pytest.raises(ValidationError):
            TruncationPolicy(epsilon=0.0)
        with pytest.raises(ValidationError):
            TruncationPolicy(max_terms=1)

    def test_tail_bound_meets_policy(self):
        res = eval_reduced(Family.THIRD, QParams(0.7, 0.2), 0.95, TruncationPolicy(1e-10, 200))
        assert res.tail_bound <= 1e-10


@given(
    p=st.builds(QParams,
                q=st.floats(min_value=0.05, max_value=0.9),
                nu=st.floats(min_value=-0.5, max_value=4.0)),
    r=st.floats(min_value=0.0, max_value=0.99),
    theta=st.floats(min_value=0.0, max_value=2.0 * math.pi),
    family=st.sampled_from(list(Family)),
    form=st.sampled_from([Form.NORMALIZED, Form.DERIVATIVE, Form.REDUCED]),
)
@settings(max_examples=60, deadline=None)
def test_soundness_against_oracle(p, r, theta, family, form):
    z = cmath.rect(r, theta)
    fid = FunctionId(family, form)
    fast = evaluate(fid, p, z)
    ref = oracle_eval(fid, p, z, PrecisionSpec(30))
    assert abs(fast.value - ref.value) <= fast.tail_bound + 1e-13 * abs(fast.value) + ref.certified_error


class TestEvalJDirectDefinition:
    @pytest.mark.parametrize("family,q,nu,x", [
        (Family.SECOND, 0.5, 1.0, 0.5),
        (Family.SECOND, 0.25, 2.5, 1.3),
        (Family.THIRD, 0.25, 1.0, 0.5),
        (Family.THIRD, 0.1, 0.5, 1.7),
    ])
    def test_matches_raw_series_in_extended_precision(self, family, q, nu, x):
        # the defining series, assembled from scratch: prefactor
        # (q^(nu+1);q)inf/(q;q)inf times sum of direct per-term products
        import mpmath as mp
        with mp.workdps(40):
            qm, num, xm = mp.mpf(q), mp.mpf(nu), mp.mpf(x)

            def poch_inf(a):
                prod = mp.mpf(1)
                aq = mp.mpf(a)
                for _ in range(500):
                    prod *= 1 - aq
                    aq *= qm
                return prod

            pref = poch_inf(qm ** (num + 1)) / poch_inf(qm)
            total = mp.mpf(0)
            for n in range(200):
                if family is Family.SECOND:
                    t = (-1) ** n * (xm / 2) ** (2 * n + num) * mp.power(qm, n * (n + num))
                else:
                    t = (-1) ** n * xm ** (2 * n + num) * mp.power(qm, mp.mpf(n) * (n + 1) / 2)
                den = mp.mpf(1)
                for k in range(1, n + 1):
                    den *= (1 - qm**k) * (1 - qm ** (num + k))
                total += t / den
            want = float(pref * total)
        got = eval_j(family, QParams(q, nu), x)
        assert abs(got.value - want) <= got.tail_bound + 1e-13 * abs(want)


class TestTailSumConsistency:
    @pytest.mark.parametrize("family,p", [(Family.SECOND, P051), (Family.THIRD, P0251)])
    @pytest.mark.parametrize("weight", [Weight.UNIT, Weight.N_PLUS_ONE])
    @pytest.mark.parametrize("m", [1, 2, 4])
    def test_head_plus_tail_is_full(self, family, p, weight, m):
        full = coefficient_tail_sum(family, p, 1, weight)
        tail = coefficient_tail_sum(family, p, m + 1, weight)
        head = 0.0
        for n in range(1, m + 1):
            a = coefficient_k(p, n).value if family is Family.SECOND else coefficient_t(p, n).value
            w = (n + 1) if weight is Weight.N_PLUS_ONE else 1
            head += w * abs(a)
        assert abs(full - (head + tail)) <= 1e-13 * max(1.0, full)
