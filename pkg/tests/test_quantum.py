import math

import numpy as np
import pytest
from conftest import poly_space, statevector_pmf, unit_space

from korobox import fourier
from korobox.errors import DimensionMismatchError, DomainError
from korobox.fourier import FourierPolynomial
from korobox.lattice import LatticeRule, search_generator
from korobox.prng import philox
from korobox.quantum import (
    QSUM_ERROR_CONSTANT,
    QuantumPipeline,
    QuantumSumConfig,
    amplitude_estimation_pmf,
    choose_repetitions,
    complex_lattice_sum,
    cost_model_quantum,
    qsum,
    qsum_boosted,
    quantum_approximate,
    validate_output,
    validate_resource_report,
)


class TestPmf:
    @pytest.mark.parametrize("m", [4, 8, 16, 32, 64])
    def test_matches_statevector_simulation(self, m):
        for a in np.arange(0.0, 1.0001, 0.05):
            a = min(float(a), 1.0)
            got = amplitude_estimation_pmf(a, m)
            want = statevector_pmf(a, m)
            assert np.max(np.abs(got - want)) < 1e-10

    def test_normalization(self):
        for m in (4, 64, 1024):
            for a in (0.0, 0.123, 0.5, 0.87, 1.0):
                assert abs(float(np.sum(amplitude_estimation_pmf(a, m))) - 1.0) < 1e-12

    def test_zero_amplitude_concentrates(self):
        pmf = amplitude_estimation_pmf(0.0, 32)
        assert pmf[0] == pytest.approx(1.0, abs=1e-14)

    def test_on_grid_amplitude_two_spikes(self):
        m, k = 32, 5
        a = math.sin(math.pi * k / m) ** 2
        pmf = amplitude_estimation_pmf(a, m)
        assert pmf[k] + pmf[m - k] == pytest.approx(1.0, abs=1e-9)

    def test_standard_accuracy_guarantee(self):
        # mass within the first grid step of the true phase is at least 8/pi^2
        m = 32
        for a in (0.07, 0.31, 0.5, 0.642, 0.9):
            pmf = amplitude_estimation_pmf(a, m)
            est = np.sin(np.pi * np.arange(m) / m) ** 2
            close = np.abs(est - a) <= math.pi / m + (math.pi / m) ** 2
            assert float(np.sum(pmf[close])) >= 0.8

    def test_domain_checks(self):
        with pytest.raises(DomainError):
            amplitude_estimation_pmf(1.5, 16)
        with pytest.raises(DomainError):
            amplitude_estimation_pmf(0.5, 24)  # not a power of two
        with pytest.raises(DomainError):
            amplitude_estimation_pmf(0.5, 2**21)  # past the grid cap


class TestQsum:
    def test_full_scale_exact(self):
        cfg = QuantumSumConfig(n_queries=16, repetitions=1, seed=0)
        assert qsum(np.full(100, 2.5), 2.5, cfg) == pytest.approx(2.5, abs=1e-12)

    def test_zero_sequence_exact(self):
        cfg = QuantumSumConfig(n_queries=8, repetitions=3, seed=5)
        assert qsum(np.zeros(50), 1.0, cfg) == pytest.approx(0.0, abs=1e-12)

    def test_bound_violation(self):
        cfg = QuantumSumConfig(n_queries=8, repetitions=1, seed=0)
        with pytest.raises(DomainError, match="out of bound"):
            qsum(np.asarray([0.5, 1.5]), 1.0, cfg)

    def test_config_validation(self):
        with pytest.raises(DomainError):
            QuantumSumConfig(n_queries=2)
        with pytest.raises(DomainError):
            QuantumSumConfig(n_queries=8, repetitions=2)

    def test_grid_size_is_power_of_two_below_queries(self):
        assert QuantumSumConfig(n_queries=500).grid_size == 256
        assert QuantumSumConfig(n_queries=256).grid_size == 256

    def test_error_contract_sampled(self):
        n = 256
        hits = 0
        trials = 400
        for seed in range(trials):
            rng = philox(seed, 77)
            mu = rng.uniform(-0.9, 0.9)
            g = mu + rng.uniform(-(1 - abs(mu)), 1 - abs(mu), size=300)
            est = qsum(g, 1.0, QuantumSumConfig(n_queries=n, repetitions=1, seed=seed))
            hits += abs(est - float(np.mean(g))) <= QSUM_ERROR_CONSTANT / n
        assert hits / trials >= 0.75

    def test_determinism(self):
        g = np.linspace(-0.5, 0.5, 64)
        cfg = QuantumSumConfig(n_queries=64, repetitions=5, seed=9)
        assert qsum(g, 1.0, cfg) == qsum(g, 1.0, cfg)


class TestBoosting:
    def test_repetition_rule(self):
        assert choose_repetitions(0.25) == 13
        assert choose_repetitions(1.0 / 400.0) == 49

    def test_repetition_rule_domain(self):
        with pytest.raises(DomainError):
            choose_repetitions(0.0)
        with pytest.raises(DomainError):
            choose_repetitions(1.0)

    def test_empirical_failure_below_target(self):
        target, n = 0.1, 64
        fails = 0
        trials = 1500
        for seed in range(trials):
            rng = philox(seed, 78)
            mu = rng.uniform(-0.9, 0.9)
            g = mu + rng.uniform(-(1 - abs(mu)), 1 - abs(mu), size=200)
            est = qsum_boosted(g, 1.0, n_queries=n, target_failure=target, seed=seed)
            fails += abs(est - float(np.mean(g))) > QSUM_ERROR_CONSTANT / n
        assert fails / trials <= target

    def test_failure_rate_monotone_in_repetitions(self):
        n = 64
        rates = []
        for reps in (1, 5, 13):
            fails = 0
            for seed in range(800):
                rng = philox(seed, 79)
                mu = rng.uniform(-0.9, 0.9)
                g = mu + rng.uniform(-(1 - abs(mu)), 1 - abs(mu), size=100)
                cfg = QuantumSumConfig(n_queries=n, repetitions=reps, seed=seed)
                est = qsum(g, 1.0, cfg)
                fails += abs(est - float(np.mean(g))) > QSUM_ERROR_CONSTANT / n
            rates.append(fails / 800)
        assert rates[0] >= rates[1] >= rates[2]


class TestComplexLatticeSum:
    def setup_method(self):
        self.space = poly_space(d=2, alpha=2.0, kappa=1.0)
        self.rule = search_generator(self.space, 257, mode="cbc").rule

    def test_constant_function(self):
        f = FourierPolynomial(2, {(0, 0): 0.8})
        est, report = complex_lattice_sum(
            self.space, self.rule, f, (0, 0), per_part_error=0.02, seed=3
        )
        assert abs(est - 0.8) <= 0.02 * math.sqrt(2.0)
        assert report.queries > 0

    def test_off_alias_term_estimates_zero(self):
        f = FourierPolynomial(2, {(1, 1): 0.5})
        est, _ = complex_lattice_sum(
            self.space, self.rule, f, (3, 0), per_part_error=0.01, seed=4
        )
        assert abs(est) <= 0.01 * math.sqrt(2.0)

    def test_report_accounting(self):
        f = FourierPolynomial(2, {(0, 0): 0.5})
        _, report = complex_lattice_sum(
            self.space, self.rule, f, (0, 0), per_part_error=0.05, seed=5
        )
        assert report.qubits == math.ceil(math.log2(257)) + 4
        assert report.combinatory_ops == report.queries * (2 * 2 + 2)
        assert validate_resource_report(report, d=2, r_size=0)

    def test_encoding_scale_violation(self):
        big = FourierPolynomial(2, {(0, 0): 100.0})
        with pytest.raises(DomainError):
            complex_lattice_sum(self.space, self.rule, big, (0, 0), 0.05, seed=6)


class TestPipeline:
    def setup_method(self):
        self.space = poly_space(d=2, alpha=2.0, kappa=1.0)
        self.pipe = QuantumPipeline(self.space, 0.25)
        self.f = fourier.random_unit(self.space, 10, 3, seed=12)

    def test_requires_polynomial_weights(self):
        s = unit_space(d=2, gammas=[1.0, 0.5])
        with pytest.raises(DomainError, match="polynomial weights"):
            QuantumPipeline(s, 0.25)
        with pytest.raises(DomainError, match="polynomial weights"):
            QuantumPipeline(poly_space(d=2, alpha=2.0, kappa=0.0), 0.25)

    def test_output_support_in_index_set(self):
        out = self.pipe.run(self.f, seed=1)
        assert set(out.coefficients) <= self.pipe.index_set.member_set()
        assert out.r_size == self.pipe.index_set.cardinality

    def test_error_within_target_mostly(self):
        outs = self.pipe.run_batch(self.f, list(range(40)))
        errs = np.asarray([o.achieved_error for o in outs])
        assert float(np.mean(errs <= 0.25)) >= 0.75

    def test_achieved_error_is_exact_parseval(self):
        from conftest import grid_sq_l2_distance

        out = self.pipe.run(self.f, seed=3)
        approx = out.as_polynomial
        assert out.achieved_error**2 == pytest.approx(
            grid_sq_l2_distance(self.f, approx), abs=1e-8
        )

    def test_end_to_end_determinism(self):
        a = self.pipe.run(self.f, seed=7)
        b = self.pipe.run(self.f, seed=7)
        assert a.coefficients == b.coefficients
        assert a.achieved_error == b.achieved_error

    def test_batch_matches_single(self):
        outs = self.pipe.run_batch(self.f, [4, 9])
        assert outs[0].coefficients == self.pipe.run(self.f, 4).coefficients
        assert outs[1].coefficients == self.pipe.run(self.f, 9).coefficients

    def test_qubit_count(self):
        out = self.pipe.run(self.f, seed=1)
        target = self.space.d + math.log2(1.0 / 0.25)
        assert abs(out.report.qubits - target) <= 16

    def test_report_validates(self):
        out = self.pipe.run(self.f, seed=2)
        assert validate_output(out, self.space)
        assert out.report.failure_prob_bound == pytest.approx(0.25)

    def test_report_dict_schema(self):
        out = self.pipe.run(self.f, seed=2)
        assert set(out.report_dict()) == {
            "epsilon", "R_size", "N", "queries", "qubits",
            "combinatory_ops", "total_cost", "failure_prob_bound", "achieved_error",
        }

    def test_quantum_approximate_wrapper(self):
        out = quantum_approximate(self.space, 0.25, self.f, seed=5)
        assert out.coefficients == self.pipe.run(self.f, 5).coefficients

    def test_input_scale_check(self):
        big = FourierPolynomial(2, {(0, 0): 1000.0})
        with pytest.raises(DomainError):
            self.pipe.run(big, seed=1)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            self.pipe.run(FourierPolynomial(3, {(0, 0, 0): 1.0}), seed=1)

    def test_exactly_supported_input_sees_only_quantum_noise(self):
        # input inside the estimated set with a huge modulus: the per-sum
        # truths equal the coefficients exactly, so the achieved error is
        # bounded by the quantum budget alone
        member = tuple(int(v) for v in self.pipe.index_set.members[1])
        from korobox.space import weight_product

        f = FourierPolynomial(
            2, {member: 0.5 * weight_product(self.space, member) ** -0.5, (0, 0): 0.5}
        )
        from korobox.lattice import exact_modulated_sum

        for h in self.pipe.index_set.members:
            truth = exact_modulated_sum(self.pipe.rule, f, h)
            assert truth == pytest.approx(f.coefficient(tuple(int(v) for v in h)), abs=1e-15)
        out = self.pipe.run(f, seed=11)
        assert out.achieved_error <= 0.25 / 3.0


class TestCostModel:
    def test_validator_identity(self):
        s = poly_space(d=3, alpha=2.0, kappa=1.0)
        report = cost_model_quantum(s, 0.25)
        from korobox.index_set import count_index_set

        r = count_index_set(s, 0.25 / 3.0)
        assert validate_resource_report(report, d=3, r_size=r)

    def test_p2_path_is_costlier(self):
        s = poly_space(d=3, alpha=2.0, kappa=1.0)
        assert (
            cost_model_quantum(s, 0.25, p=2).queries
            > cost_model_quantum(s, 0.25, p=math.inf).queries
        )

    def test_queries_grow_with_accuracy(self):
        s = poly_space(d=3, alpha=2.0, kappa=1.0)
        q = [cost_model_quantum(s, e).queries for e in (0.5, 0.25, 0.125)]
        assert q[0] < q[1] < q[2]

    def test_large_dimension_closed_form(self):
        # the predicted report must not materialize any modulus for huge d
        s = poly_space(d=50_000, alpha=2.0, kappa=1.0)
        report = cost_model_quantum(s, 0.5, cap=10_000_000)
        assert report.qubits >= 50_000
        assert math.isfinite(report.total_cost)
