from itertools import combinations

import numpy as np
import pytest

from bmmpy.core.bench import wilson_half_width
from bmmpy.core.linalg import OrthoBasis
from bmmpy.core.model import ProblemInstance, SensingModel, SignalPrior
from bmmpy.core.solvers import (
    CandidateTrace,
    Selector,
    SolverConfig,
    SolverType,
    bmmp,
    cosamp,
    get_solver_names,
    gomp,
    gomp_cap,
    omp,
    reconstruct_signal,
    run_solver,
    sp,
)
from bmmpy.core.utils.exceptions import (
    InfeasibleSizeError,
    InvalidInputError,
    UnknownSolverError,
)


def _instance_from(phi: np.ndarray, x_true: np.ndarray) -> ProblemInstance:
    m, n = phi.shape
    return ProblemInstance(
        phi=phi,
        y=phi @ x_true,
        x_true=x_true,
        support_true=np.flatnonzero(x_true).astype(np.int64),
        model=SensingModel(m=m, n=n, sigma=1 / np.sqrt(m)),
        prior=SignalPrior.uniform(),
    )


def _check_output_contract(problem, result, k):
    assert len(result.support_hat) <= k
    off_support = np.ones(problem.n, dtype=bool)
    off_support[result.support_hat] = False
    assert np.all(result.x_hat[off_support] == 0)

    basis = OrthoBasis.from_columns(problem.phi, result.support_hat)
    residual_norm = basis.residual(problem.y)[1]
    assert result.residual_norm == pytest.approx(residual_norm, abs=1e-10)


def test_bmmp_recovers_one_sparse_signal():
    rng = np.random.default_rng(3)
    phi = rng.standard_normal((4, 8)) / 2
    x_true = np.zeros(8)
    x_true[5] = 0.8
    problem = _instance_from(phi, x_true)

    result = bmmp(problem, SolverConfig.for_problem(problem))

    assert result.support_hat.tolist() == [5]
    assert np.linalg.norm(result.x_hat - x_true) <= 1e-8
    _check_output_contract(problem, result, k=1)


def test_bmmp_stops_when_threshold_dominates(small_instance):
    config = SolverConfig.for_problem(
        small_instance, epsilon=2 * np.linalg.norm(small_instance.y)
    )

    result = bmmp(small_instance, config)

    assert len(result.traces) == 1
    assert result.chosen_candidate == 1
    assert result.support_hat.size == 0
    assert np.all(result.x_hat == 0)
    assert len(result.traces[0].extended_sets) == 1


def test_bmmp_output_contract(noisy_instance):
    config = SolverConfig.for_problem(noisy_instance, g=3)
    result = bmmp(noisy_instance, config)

    _check_output_contract(noisy_instance, result, k=noisy_instance.k)
    assert 1 <= result.chosen_candidate <= len(result.traces) <= 3
    assert result.solver == "bmmp"

    for trace in result.traces:
        assert trace.is_monotone()
        assert all(len(delta) <= noisy_instance.m for delta in trace.extended_sets)


def test_bmmp_is_deterministic(noisy_instance):
    config = SolverConfig.for_problem(noisy_instance)

    first = bmmp(noisy_instance, config)
    second = bmmp(noisy_instance, config)

    np.testing.assert_array_equal(first.x_hat, second.x_hat)
    np.testing.assert_array_equal(first.support_hat, second.support_hat)
    assert first.residual_norm == second.residual_norm
    assert first.chosen_candidate == second.chosen_candidate


def test_bmmp_without_early_exit_computes_all_candidates(small_instance):
    config = SolverConfig.for_problem(small_instance, g=3, early_exit=False)

    result = bmmp(small_instance, config)

    assert [trace.t for trace in result.traces] == [1, 2, 3]


def test_bmmp_recovers_noiseless_instances(small_instance):
    result = bmmp(small_instance, SolverConfig.for_problem(small_instance))

    assert result.exact_support_recovery(small_instance.support_true)
    np.testing.assert_allclose(result.x_hat, small_instance.x_true, atol=1e-8)


def test_omp_recovers_one_sparse_signal():
    problem = ProblemInstance.generate(m=16, n=32, k=1, seed=8)

    result = omp(problem, 1)

    assert result.exact_support_recovery(problem.support_true)
    assert result.solver == "omp"


def test_gomp_with_single_index_matches_omp(small_instance):
    for k in (2, 4, 6):
        config = SolverConfig.for_problem(small_instance, k=k)

        omp_result = omp(small_instance, k, config=config)
        gomp_result = gomp(small_instance, k, t=1, config=config)

        np.testing.assert_array_equal(omp_result.support_hat, gomp_result.support_hat)
        np.testing.assert_array_equal(
            omp_result.traces[0].extended_sets[0],
            gomp_result.traces[0].extended_sets[0],
        )


def test_gomp_recovers_easy_instance():
    problem = ProblemInstance.generate(
        m=60, n=80, k=4, seed=2, prior=SignalPrior.uniform(0.5, 1)
    )

    for selector in Selector:
        result = gomp(problem, 4, t=2, selector=selector)
        assert result.exact_support_recovery(problem.support_true)


def test_gomp_cap():
    assert gomp_cap(128, 60, 2) == 120
    assert gomp_cap(9, 6, 2) == 8
    assert gomp_cap(10, 3, 3) == 9


def test_size_constraints(small_instance):
    with pytest.raises(InfeasibleSizeError):
        gomp(small_instance, 2, t=2)
    with pytest.raises(InfeasibleSizeError):
        sp(small_instance, 17)
    with pytest.raises(InfeasibleSizeError):
        cosamp(small_instance, 11)
    with pytest.raises(InfeasibleSizeError):
        omp(small_instance, 32)


@pytest.mark.parametrize("pursuit", [sp, cosamp])
def test_pursuits_have_decreasing_residuals(noisy_instance, pursuit):
    for selector in (Selector.RAW, Selector.MAP_H):
        result = pursuit(noisy_instance, noisy_instance.k, selector=selector)

        assert result.traces[0].is_monotone()
        _check_output_contract(noisy_instance, result, k=noisy_instance.k)


def test_reconstruct_signal(small_instance):
    assert np.all(reconstruct_signal(small_instance, []) == 0)

    np.testing.assert_allclose(
        reconstruct_signal(small_instance, small_instance.support_true),
        small_instance.x_true,
        atol=1e-8,
    )

    superset = np.union1d(small_instance.support_true, [0, 1, 2, 3, 60, 61, 62, 63])
    np.testing.assert_allclose(
        reconstruct_signal(small_instance, superset), small_instance.x_true, atol=1e-8
    )


def test_solver_registry(small_instance):
    names = get_solver_names()

    assert names[0] == "bmmp"
    assert {"omp", "gomp", "sp", "cosamp", "map-omp", "map-gomp-g"} <= set(names)
    assert len(set(names)) == len(names)
    assert SolverType.from_name("nope") is None

    with pytest.raises(UnknownSolverError):
        SolverType.get("nope")
    with pytest.raises(UnknownSolverError):
        run_solver("nope", small_instance, SolverConfig.for_problem(small_instance))


def test_ablations_adjust_config(small_instance):
    config = SolverConfig.for_problem(small_instance, g=4)

    no_u = SolverType.get("bmmp-no-u").resolve_config(config)
    no_um = SolverType.get("bmmp-no-um").resolve_config(config)
    no_ume = SolverType.get("bmmp-no-ume").resolve_config(config)

    assert (no_u.replace_count(), no_u.g) == (0, 4)
    assert (no_um.replace_count(), no_um.g) == (0, 1)
    assert no_ume.extended_cap(small_instance.m) == small_instance.k
    assert config.replace_count() == small_instance.k // 2
    assert config.extended_cap(small_instance.m) == small_instance.m

    result = run_solver("bmmp-no-ume", small_instance, config)
    assert result.solver == "bmmp-no-ume"
    assert all(len(d) <= small_instance.k for d in result.traces[0].extended_sets)


def test_feasibility(small_instance):
    config = SolverConfig.for_problem(small_instance, k=12)

    assert SolverType.get("sp").infeasibility(32, config) is None
    assert SolverType.get("cosamp").infeasibility(32, config) is not None
    assert "3k <= m" in SolverType.get("map-cosamp").infeasibility(32, config)
    gomp_config = config.with_overrides(k=2)
    assert SolverType.get("gomp").infeasibility(32, gomp_config) is not None

    with pytest.raises(InfeasibleSizeError):
        run_solver("cosamp", small_instance, config)


def test_config_validation(small_instance):
    with pytest.raises(InvalidInputError):
        SolverConfig(k=4, g=0)
    with pytest.raises(InvalidInputError):
        SolverConfig(k=4, replace_size=5)
    with pytest.raises(InvalidInputError):
        SolverConfig(k=4, epsilon=-1.0)
    with pytest.raises(InvalidInputError):
        SolverConfig(k=4, gomp_t=0)

    config = SolverConfig.for_problem(small_instance)
    assert config.k == small_instance.k
    assert config.epsilon == pytest.approx(1e-7 * np.linalg.norm(small_instance.y))
    assert config.lambda_ == pytest.approx(config.epsilon**2 / small_instance.m)
    assert config.as_dict()["correlation"] == "ra-ormp"


def test_candidate_trace():
    trace = CandidateTrace(t=2)
    trace.accept(np.array([1, 4]), 3.0)
    trace.accept(np.array([1, 5]), 1.0)

    assert trace.is_monotone()
    assert trace.as_dict()["final_support"] == [1, 5]

    trace.accept(np.array([2, 5]), 1.0)
    assert not trace.is_monotone()


def test_stopping_criterion_detects_supersets():
    rng = np.random.default_rng(17)
    violations = 0

    for seed in range(500):
        problem = ProblemInstance.generate(m=64, n=128, k=20, seed=seed)
        norm_y = np.linalg.norm(problem.y)
        others = np.setdiff1d(np.arange(128), problem.support_true)

        extra = rng.choice(others, size=rng.integers(0, 44), replace=False)
        superset = np.concatenate([problem.support_true, extra])
        residual = OrthoBasis.from_columns(problem.phi, superset).residual(problem.y)[1]
        assert residual <= 1e-8 * norm_y

        size = rng.integers(1, 64)
        delta = rng.choice(128, size=size, replace=False)
        if np.isin(problem.support_true, delta).all():
            continue
        residual = OrthoBasis.from_columns(problem.phi, delta).residual(problem.y)[1]
        violations += residual <= 1e-6 * norm_y

    assert violations == 0


def _exhaustive_support(problem: ProblemInstance) -> np.ndarray | None:
    tolerance = 1e-8 * np.linalg.norm(problem.y)
    consistent = [
        subset
        for subset in combinations(range(problem.n), problem.k)
        if OrthoBasis.from_columns(problem.phi, subset).residual(problem.y)[1]
        <= tolerance
    ]
    return np.asarray(consistent[0]) if len(consistent) == 1 else None


def test_bmmp_matches_exhaustive_search():
    rng = np.random.default_rng(29)
    matches, instances = 0, 0

    while instances < 200:
        k = int(rng.integers(1, 4))
        m = 2 * k + 2
        n = int(rng.integers(m + 1, 15))
        problem = ProblemInstance.generate(
            m=m, n=n, k=k, seed=int(rng.integers(0, 2**31))
        )

        oracle = _exhaustive_support(problem)
        if oracle is None:
            continue

        instances += 1
        result = bmmp(problem, SolverConfig.for_problem(problem, g=4))
        matches += np.array_equal(result.support_hat, oracle)

    assert matches >= 190




def _trials(solver: str, trials: int, **generate) -> tuple[int, np.ndarray]:
    successes, errors = 0, []
    for seed in range(trials):
        problem = ProblemInstance.generate(seed=seed, **generate)
        result = run_solver(solver, problem, SolverConfig.for_problem(problem))
        successes += result.exact_support_recovery(problem.support_true)
        errors.append(result.squared_error(problem.x_true))
    return successes, np.asarray(errors)


def _rates(solvers: tuple[str, ...], trials: int, **generate) -> dict[str, int]:
    return {solver: _trials(solver, trials, **generate)[0] for solver in solvers}


def _not_worse(successes: int, other: int, trials: int) -> bool:
    tolerance = max(
        wilson_half_width(successes, trials), wilson_half_width(other, trials)
    )
    return successes / trials + tolerance >= other / trials


@pytest.mark.slow
@pytest.mark.parametrize("k", [16, 20, 24, 28])
def test_bmmp_outperforms_greedy_baselines(k):
    rates = _rates(("bmmp", "map-gomp", "omp"), 100, m=64, n=128, k=k)

    assert _not_worse(rates["bmmp"], rates["map-gomp"], 100)
    assert _not_worse(rates["map-gomp"], rates["omp"], 100)
    if k == 24:
        assert rates["bmmp"] >= 90


@pytest.mark.slow
@pytest.mark.parametrize("m", [32, 64, 96])
def test_rank_aware_detection_outperforms_normalized_correlation(m):
    rates = _rates(("map-gomp-g", "map-gomp"), 100, m=m, n=2 * m, k=int(m // 1.8))

    assert _not_worse(rates["map-gomp-g"], rates["map-gomp"], 100)


@pytest.mark.slow
def test_each_bmmp_component_improves_recovery():
    rates = _rates(
        ("bmmp", "bmmp-no-u", "bmmp-no-um", "bmmp-no-ume"), 100, m=64, n=128, k=30
    )

    assert _not_worse(rates["bmmp"], rates["bmmp-no-u"], 100)
    assert _not_worse(rates["bmmp-no-u"], rates["bmmp-no-um"], 100)
    assert rates["bmmp-no-um"] > rates["bmmp-no-ume"]


@pytest.mark.slow
def test_bmmp_squared_error_on_noisy_signals():
    sizes = dict(m=64, n=128, k=24, prior=SignalPrior.uniform(0.1, 1))
    mse = {}

    for snr_db in (25.0, 35.0):
        _, bmmp_errors = _trials("bmmp", 100, snr_db=snr_db, **sizes)
        _, omp_errors = _trials("map-omp", 100, snr_db=snr_db, **sizes)

        assert np.median(bmmp_errors) <= np.median(omp_errors)
        mse[snr_db] = bmmp_errors.mean()

    assert mse[35.0] < mse[25.0]
