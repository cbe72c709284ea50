import numpy as np
import pytest

import oracles
from leximax import finite_approx as fa
from leximax.errors import DimensionError, RangeError, ValidationError
from leximax.model import FiniteInstance

EPS = 0.05
EX1 = FiniteInstance.from_utilities([[0, 1], [0.01, 0.01]])
SIG_REC = FiniteInstance.from_utilities([[EPS, 0.5], [0, 1]])
SIG_TRADE = FiniteInstance.from_utilities([[0, 0.62], [0.01, 0.58], [0.02, 0.54], [0.03, 0.5]])
REC_NOT_TRADE = FiniteInstance.from_utilities([[0.1, 0.2], [0.1005, 0.8], [0.15, 0.2]])


def instances(seed, count, max_solutions=8, max_groups=4):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield fa.random_finite_instance(rng, int(rng.integers(1, max_solutions + 1)),
                                        int(rng.integers(1, max_groups + 1)))


class TestExactSet:
    def test_example_1(self):
        assert fa.exact_leximax_set(EX1) == {1}

    def test_singleton(self):
        assert fa.exact_leximax_set(FiniteInstance.from_utilities([[0.3, 0.1]])) == {0}

    def test_sig_rec(self):
        assert fa.exact_leximax_set(SIG_REC) == {0}

    def test_matches_oracle(self):
        for inst in instances(1, 200):
            assert fa.exact_leximax_set(inst) == oracles.leximax_set(inst.utilities)


class TestTradeoff:
    def test_example_1(self):
        assert fa.is_tradeoff_approx(EX1, 0, 0.01)

    def test_rec_not_trade(self):
        assert not fa.is_tradeoff_approx(REC_NOT_TRADE, 0, EPS)

    def test_zero_eps_is_exact(self):
        for inst in instances(2, 200):
            exact = fa.exact_leximax_set(inst)
            got = {s for s in range(inst.num_solutions) if fa.is_tradeoff_approx(inst, s, 0.0)}
            assert got == exact

    def test_monotone_in_eps(self):
        for inst in instances(3, 150):
            for s in range(inst.num_solutions):
                flags = [fa.is_tradeoff_approx(inst, s, e) for e in (0.0, 0.05, 0.1, 0.3, 1.0)]
                assert flags == sorted(flags)

    def test_negative_eps(self):
        with pytest.raises(RangeError):
            fa.is_tradeoff_approx(EX1, 0, -0.1)


class TestSigTradeoff:
    def test_sig_trade_example(self):
        assert not any(fa.is_sig_tradeoff(SIG_TRADE, s, 0.02, 0.02) for s in range(4))

    def test_example_1(self):
        assert fa.is_sig_tradeoff(EX1, 0, 0.01, 0.5)

    def test_zero_eps2_reduces_to_tradeoff(self):
        for inst in instances(4, 200):
            for eps in (0.0, 0.05, 0.2):
                for s in range(inst.num_solutions):
                    assert fa.is_sig_tradeoff(inst, s, eps, 0.0) == fa.is_tradeoff_approx(inst, s, eps)


class TestRecursive:
    def test_sig_rec_chain(self):
        chain = fa.recursive_chain(SIG_REC, (EPS, 0))
        assert chain.sets[1] == {0, 1}
        assert chain.sets[2] == {1}
        assert chain.level_maxima == (0.05, 1.0)

    def test_small_first_slack(self):
        assert fa.recursive_chain(SIG_REC, (EPS / 2, 0)).sets[1] == {0}

    def test_zero_slack_is_exact(self):
        for inst in instances(5, 200):
            assert fa.recursive_chain(inst, (0.0,) * inst.m).final == fa.exact_leximax_set(inst)

    def test_chain_invariants(self):
        rng = np.random.default_rng(6)
        for inst in instances(6, 200):
            alpha = rng.integers(0, 5, size=inst.m) * 0.05
            chain = fa.recursive_chain(inst, alpha)
            u = fa.sorted_matrix(inst)
            assert chain.sets[0] == set(range(inst.num_solutions))
            for i in range(inst.m):
                assert chain.sets[i + 1] and chain.sets[i + 1] <= chain.sets[i]
                assert chain.level_maxima[i] == max(u[t, i] for t in chain.sets[i])

    def test_sig_rec_membership(self):
        assert fa.is_recursive_approx(SIG_REC, 0, EPS) and fa.is_recursive_approx(SIG_REC, 1, EPS)

    def test_example_1(self):
        assert fa.is_recursive_approx(EX1, 0, 0.01)

    def test_greedy_matches_alpha_search(self):
        for inst in instances(7, 300):
            for eps in (0.0, 0.05, 0.1, 0.3):
                for s in range(inst.num_solutions):
                    want = oracles.recursive_by_search(inst.utilities, s, eps)
                    assert fa.is_recursive_approx(inst, s, eps) == want

    def test_greedy_certificate_is_sound(self):
        for inst in instances(8, 300):
            for s in range(inst.num_solutions):
                alpha = fa.greedy_slack(inst, s)
                assert s in fa.recursive_chain(inst, alpha).final

    def test_slack_length(self):
        with pytest.raises(DimensionError):
            fa.recursive_chain(SIG_REC, (0.1,))
        with pytest.raises(RangeError):
            fa.SlackVector((-0.1, 0.0))


class TestSignificant:
    def test_sig_rec(self):
        assert fa.significant_set(SIG_REC, EPS) == {1}

    def test_sig_trade(self):
        assert 1 in fa.significant_set(SIG_TRADE, 0.02)

    def test_large_eps_keeps_everything(self):
        for inst in instances(9, 50):
            assert fa.significant_set(inst, 1.0) == set(range(inst.num_solutions))

    def test_matches_oracle(self):
        for inst in instances(10, 200):
            for eps in (0.05, 0.1):
                want = oracles.chain_final(inst.utilities, (eps,) * inst.m)
                assert fa.significant_set(inst, eps) == want


class TestFunctionSlack:
    def test_degenerate_interval(self):
        for inst in instances(11, 200):
            for eps in (0.0, 0.05, 0.1):
                sig = fa.significant_set(inst, eps)
                for s in range(inst.num_solutions):
                    assert fa.is_function_slack_significant(inst, s, eps, eps) == (s in sig)

    def test_sig_rec(self):
        assert fa.is_function_slack_significant(SIG_REC, 0, 0.0, EPS)

    def test_exact_members_always_pass(self):
        for inst in instances(12, 100):
            for s in fa.exact_leximax_set(inst):
                assert fa.is_function_slack_significant(inst, s, 0.0, 0.2)

    def test_keeping_a_rival_can_help(self):
        # dropping H at level 1 lets S survive, and S then pushes s out at level 3
        inst = FiniteInstance.from_utilities(
            [[0.6, 0.6, 0.6], [0.55, 0.9, 0.9], [0.52, 0.8, 0.8], [0.6, 0.85, 1.0]])
        assert fa.is_function_slack_significant(inst, 2, 0.0, 0.1)
        assert oracles.function_slack_by_beta(inst.utilities, 2, 0.0, 0.1)

    def test_matches_beta_enumeration(self):
        rng = np.random.default_rng(13)
        for inst in instances(13, 120, max_solutions=4, max_groups=3):
            a1 = 0.05 * int(rng.integers(0, 3))
            a2 = a1 + 0.05 * int(rng.integers(0, 4))
            for s in range(inst.num_solutions):
                want = oracles.function_slack_by_beta(inst.utilities, s, a1, a2)
                assert fa.is_function_slack_significant(inst, s, a1, a2) == want

    def test_bad_interval(self):
        with pytest.raises(ValidationError):
            fa.is_function_slack_significant(SIG_REC, 0, 0.2, 0.1)


class TestElementwise:
    def test_exact_member(self):
        assert fa.is_elementwise_approx(EX1, 1, 0.0)

    def test_example_1(self):
        assert fa.is_elementwise_approx(EX1, 0, 0.01)
        assert not fa.is_elementwise_approx(EX1, 0, 0.005)


class TestPerturb:
    def test_zero_noise(self):
        out = fa.perturb(EX1, fa.NoiseMatrix(0.0, np.zeros((2, 2))))
        assert np.array_equal(out.utilities, EX1.utilities)

    def test_rec_not_trade_flip(self):
        noise = np.zeros((3, 2))
        noise[1, 0] = -0.001
        out = fa.perturb(REC_NOT_TRADE, fa.NoiseMatrix(0.001, noise))
        assert fa.is_tradeoff_approx(out, 0, EPS)

    def test_not_clamped(self):
        out = fa.perturb(EX1, fa.NoiseMatrix(0.1, [[-0.1, 0.1], [0, 0]]))
        assert out.utilities.min() < 0 and out.utilities.max() > 1

    def test_bound_violation(self):
        with pytest.raises(RangeError):
            fa.NoiseMatrix(0.01, [[0.02, 0.0]])

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            fa.perturb(EX1, fa.NoiseMatrix(0.1, np.zeros((1, 2))))
