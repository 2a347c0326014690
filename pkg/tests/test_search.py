import pytest

from permcheck.matrices import SquareMatrix
from permcheck.matrixlab import CorrelationMatrix, sample_correlation
from permcheck.search import SearchConfig, SearchResult, hill_climb, ratio


def test_ratio_identity():
    assert ratio(CorrelationMatrix(SquareMatrix.identity(4))) == pytest.approx(1.0)


def test_ratio_all_ones():
    assert ratio(CorrelationMatrix(SquareMatrix.ones(4))) == pytest.approx(1 / 24)


def test_ratio_bounded_on_samples():
    for seed in range(30):
        assert ratio(sample_correlation(4, seed)) <= 1 + 1e-9


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(n=1)
    with pytest.raises(ValueError):
        SearchConfig(n=4, iterations=0)
    with pytest.raises(ValueError):
        SearchConfig(n=4, shrink=1.5)


def test_hill_climb_deterministic():
    config = SearchConfig(n=3, iterations=300, restarts=2, seed=9)
    a, b = hill_climb(config), hill_climb(config)
    assert a.best_ratio == b.best_ratio
    assert a.history == b.history
    assert a.evaluations == b.evaluations
    assert a.best_matrix.matrix.entries == b.best_matrix.matrix.entries
    assert a.to_dict() == b.to_dict()


def test_hill_climb_result_consistency():
    result = hill_climb(SearchConfig(n=4, iterations=500, seed=3))
    assert isinstance(result, SearchResult)
    # the reported ratio is reproducible from the reported matrix
    assert ratio(result.best_matrix) == pytest.approx(result.best_ratio, abs=1e-9)
    assert result.best_ratio <= 1 + 1e-9
    assert len(result.history) == 1


def test_hill_climb_n2_approaches_identity():
    result = hill_climb(SearchConfig(n=2, iterations=5000, restarts=2, seed=0))
    assert result.best_ratio >= 0.999


def test_history_is_per_restart_and_best_is_max():
    result = hill_climb(SearchConfig(n=3, iterations=400, restarts=4, seed=5))
    assert len(result.history) == 4
    assert result.best_ratio == max(result.history)


def test_candidates_stay_correlation():
    result = hill_climb(SearchConfig(n=4, iterations=200, seed=8))
    CorrelationMatrix.validate(result.best_matrix.matrix, tol=1e-10)
