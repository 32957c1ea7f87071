from fractions import Fraction as F

import pytest

from graevnorm import (
    EmbeddingInstance,
    NotEmbedded,
    NotQuasiUniform,
    discrete_topology,
    embedding_suite,
    extend_qpm,
    fine_quniformity,
    indiscrete_topology,
    is_quasi_uniform_wrt,
    min_plus_closure,
    non_extendability_witness,
    series_metric,
    subspace_topology,
    validate_qpm,
)
from graevnorm.generate import (
    failing_embedding_fixtures,
    random_quasi_uniform_qpm,
    random_topology,
)


def test_extend_discrete_example():
    y = discrete_topology(["a", "b", "c"])
    d = validate_qpm(["a", "b"], [[0, F(1, 4)], [F(1, 2), 0]])
    result = extend_qpm(EmbeddingInstance(y, [0, 1], d))
    assert result.extended.value(0, 1) == F(1, 4)
    assert result.extended.value(1, 0) == F(1, 2)
    assert result.extended.value(0, 2) > 0 and result.extended.value(2, 0) > 0
    assert result.depth == 2


def test_extend_zero_metric():
    y = discrete_topology(["a", "b", "c"])
    d = validate_qpm(["a", "b"], [[0, 0], [0, 0]])
    result = extend_qpm(EmbeddingInstance(y, [0, 1], d))
    assert result.extended.value(0, 1) == 0 and result.extended.value(1, 0) == 0
    assert result.depth == 1


def test_extend_whole_space():
    y = discrete_topology(["a", "b", "c"])
    rows = min_plus_closure(
        [[F(0), F(1, 4), F(1, 2)], [F(1, 2), F(0), F(1, 8)], [F(1, 4), F(1, 2), F(0)]]
    )
    d = validate_qpm(["a", "b", "c"], rows)
    result = extend_qpm(EmbeddingInstance(y, [0, 1, 2], d))
    assert result.extended.rows == d.rows


def test_extend_rescales_large_bounds():
    y = discrete_topology(["a", "b", "c"])
    d = validate_qpm(["a", "b"], [[0, 2], [3, 0]])
    result = extend_qpm(EmbeddingInstance(y, [0, 1], d))
    assert result.extended.value(0, 1) == 2
    assert result.extended.value(1, 0) == 3
    validate_qpm(result.extended.labels, result.extended.rows)


def test_extension_postconditions_random(rng):
    for _ in range(40):
        y = random_topology(rng, rng.randint(2, 5))
        size = rng.randint(1, y.size)
        subset = sorted(rng.sample(range(y.size), size))
        sub = subspace_topology(y, subset)
        d = random_quasi_uniform_qpm(
            rng, sub, grid=(F(0), F(1, 8), F(1, 4), F(1, 2))
        )
        inst = EmbeddingInstance(y, subset, d)
        result = extend_qpm(inst)
        validate_qpm(result.extended.labels, result.extended.rows)
        for i, x in enumerate(subset):
            for j, z in enumerate(subset):
                assert result.extended.value(x, z) == d.value(i, j)
                assert d.value(i, j) <= result.series.value(x, z)
        assert is_quasi_uniform_wrt(result.extended, fine_quniformity(y))
        assert is_quasi_uniform_wrt(result.series, fine_quniformity(y))


def test_series_metric_discrete_closed_form():
    y = discrete_topology(["a", "b", "c"])
    d = validate_qpm(["a", "b"], [[0, F(1, 8)], [F(1, 4), 0]])
    inst = EmbeddingInstance(y, [0, 1], d)
    rho = series_metric(inst, depth=3)
    expected = 8 * (1 - F(1, 8))
    for x in range(3):
        for z in range(3):
            assert rho.value(x, z) == (0 if x == z else expected)


def test_not_quasi_uniform_rejected():
    y = indiscrete_topology(["a", "b"])
    d = validate_qpm(["a", "b"], [[0, F(1, 4)], [F(1, 4), 0]])
    with pytest.raises(NotQuasiUniform):
        EmbeddingInstance(y, [0, 1], d)


def test_extend_rejects_finer_subspace_topology():
    y = indiscrete_topology(["a", "b"])
    sub = discrete_topology(["a", "b"])
    d = validate_qpm(["a", "b"], [[0, F(1, 4)], [F(1, 4), 0]])
    inst = EmbeddingInstance(y, [0, 1], d, subset_space=sub)
    with pytest.raises(NotEmbedded) as err:
        extend_qpm(inst)
    assert set(err.value.pair) <= {"a", "b"}


def test_witness_none_on_trace_topology(rng):
    for _ in range(30):
        y = random_topology(rng, rng.randint(2, 5))
        subset = sorted(rng.sample(range(y.size), rng.randint(1, y.size)))
        assert non_extendability_witness(y, subset) is None


def test_witness_on_failing_fixture():
    y = indiscrete_topology(["p", "q"])
    sub = discrete_topology(["p", "q"])
    witness = non_extendability_witness(y, [0, 1], sub)
    assert witness is not None
    assert witness.value(0, 1) == 1 or witness.value(1, 0) == 1
    assert is_quasi_uniform_wrt(witness, fine_quniformity(sub))
    with pytest.raises(NotEmbedded):
        extend_qpm(EmbeddingInstance(y, [0, 1], witness, subset_space=sub))


def test_all_failing_fixtures_have_witnesses():
    fixtures = failing_embedding_fixtures()
    assert fixtures
    for space, subset, sub in fixtures:
        witness = non_extendability_witness(space, subset, sub)
        assert witness is not None
        assert is_quasi_uniform_wrt(witness, fine_quniformity(sub))


def test_embedding_suite_reports():
    y = discrete_topology(["a", "b", "c"])
    report = embedding_suite(y, [0, 1], trials=10, seed=3)
    assert report["subspace_check"] is True
    assert len(report["trials"]) == 10
    assert all(t["status"] == "extended" for t in report["trials"])
    assert all(t["max_restriction_error"] == "0" for t in report["trials"])
    empty = embedding_suite(y, [0, 1], trials=0, seed=3)
    assert empty["trials"] == []
    failing = embedding_suite(
        indiscrete_topology(["p", "q"]),
        [0, 1],
        trials=5,
        seed=3,
        subset_space=discrete_topology(["p", "q"]),
    )
    assert failing["subspace_check"] is False
    assert "witness" in failing and failing["witness"]["pair"]


def test_embedding_suite_deterministic():
    y = discrete_topology(["a", "b", "c"])
    first = embedding_suite(y, [0, 1], trials=7, seed=11)
    second = embedding_suite(y, [0, 1], trials=7, seed=11)
    assert first == second
