import json

import pytest

from barronlab import rates
from barronlab.numerics import RateFit


class TestGridValidation:
    def test_too_few_points(self):
        with pytest.raises(ValueError, match="4 points"):
            rates.run_experiment(rates.GREEDY_FOURIER, None, [2, 4, 8])

    def test_not_increasing(self):
        with pytest.raises(ValueError, match="increasing"):
            rates.run_experiment(rates.GREEDY_FOURIER, None, [2, 4, 4, 8, 64])

    def test_too_narrow(self):
        with pytest.raises(ValueError, match="decades"):
            rates.run_experiment(rates.GREEDY_FOURIER, None, [2, 4, 8, 16])

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="kind"):
            rates.run_experiment("nope", None, [2, 4, 8, 64])


class TestGreedyFourierExperiment:
    GRID = [2, 4, 8, 16, 32, 64, 128, 256]

    def test_bound_satisfied_with_monotone_errors(self):
        report = rates.run_experiment(
            rates.GREEDY_FOURIER, {"d": 1, "ks": 2.0, "m": 0}, self.GRID, seed=7
        )
        assert report.verdict == rates.BOUND_SATISFIED
        errors = [e for _, e in report.samples]
        assert all(b <= a for a, b in zip(errors, errors[1:]))
        assert report.predicted_exponent == pytest.approx(2.5)

    def test_reproducible_bitwise(self):
        a = rates.run_experiment(rates.GREEDY_FOURIER, None, self.GRID, seed=3)
        b = rates.run_experiment(rates.GREEDY_FOURIER, None, self.GRID, seed=3)
        assert a.samples == b.samples
        assert a.fit == b.fit


class TestOtherKinds:
    def test_sobolev_compile(self):
        report = rates.run_experiment(
            rates.SOBOLEV_COMPILE, {"ell": 2}, [2, 4, 8, 16, 32, 64], seed=0
        )
        assert report.verdict == rates.BOUND_SATISFIED
        assert report.predicted_exponent == pytest.approx(2.0)

    def test_sphere_cover(self):
        report = rates.run_experiment(
            rates.SPHERE_COVER, {"d": 2}, [4, 8, 16, 32, 64, 128], seed=1
        )
        assert report.verdict == rates.BOUND_SATISFIED

    def test_subsample_concentration(self):
        report = rates.run_experiment(
            rates.SUBSAMPLE_CONCENTRATION, {"N": 256, "M": 10},
            [4, 8, 16, 32, 64, 128], seed=2,
        )
        assert report.verdict in (rates.BOUND_SATISFIED, rates.BOUND_VIOLATED)
        assert len(report.samples) == 6

    def test_dyadic_residual(self):
        report = rates.run_experiment(
            rates.DYADIC_RESIDUAL, None, [2, 4, 8, 16, 32, 64], seed=0
        )
        assert report.verdict == rates.BOUND_SATISFIED
        errors = [e for _, e in report.samples]
        assert all(b <= a for a, b in zip(errors, errors[1:]))

    def test_packing_separation_is_informational(self):
        report = rates.run_experiment(
            rates.PACKING_SEPARATION,
            {"family": "fourier", "d": 2, "k_or_s": 1.0},
            [8, 16, 32, 64, 128, 256], seed=3,
        )
        assert report.verdict == rates.INFORMATIONAL

    def test_failing_subruns_downgrade_verdict(self):
        # Direction counts blow past the desk-scale cap at large n, so the
        # harness records failures and stays informational.
        report = rates.run_experiment(
            rates.PACKING_SEPARATION,
            {"family": "fourier", "d": 2, "k_or_s": 1.0},
            [64, 256, 1024, 100_000], seed=3,
        )
        assert report.failures
        assert report.verdict == rates.INFORMATIONAL


class TestVerdictRule:
    def test_pure_function_of_fit_and_prediction(self):
        fit = RateFit(slope=-2.0, intercept=0.0, r_squared=1.0, points_used=5)
        assert rates._verdict(fit, 1.8, 0.15, False) == rates.BOUND_SATISFIED
        assert rates._verdict(fit, 2.5, 0.15, False) == rates.BOUND_VIOLATED
        assert rates._verdict(fit, 2.5, 0.15, True) == rates.INFORMATIONAL
        assert rates._verdict(None, 2.5, 0.15, False) == rates.INFORMATIONAL


class TestSerialization:
    def test_json_schema_and_determinism(self):
        report = rates.run_experiment(
            rates.DYADIC_RESIDUAL, None, [2, 4, 8, 16, 32, 64], seed=0
        )
        payload = json.loads(rates.report_to_json(report))
        assert set(payload) == {
            "kind", "config", "samples", "fit", "predicted", "verdict", "seconds",
        }
        assert payload["seconds"] is None
        assert payload["samples"][0].keys() == {"n", "error"}
        assert {"slope", "intercept", "r2"} == set(payload["fit"])
        timed = json.loads(rates.report_to_json(report, deterministic=False))
        assert timed["seconds"] >= 0.0

    def test_csv_rows(self):
        report = rates.run_experiment(
            rates.DYADIC_RESIDUAL, None, [2, 4, 8, 16, 32, 64], seed=0
        )
        lines = rates.report_to_csv(report).strip().splitlines()
        assert lines[0] == "n,error"
        assert len(lines) == 1 + len(report.samples)
