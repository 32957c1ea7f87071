from fractions import Fraction as F

import pytest

from graevnorm import (
    NEUTRAL,
    Entourage,
    EntourageChain,
    InvalidChain,
    NegativeEntry,
    NonpositiveRadius,
    NonzeroDiagonal,
    TriangleViolation,
    UnboundedInput,
    ball_relation,
    diagonal,
    extend_metric,
    frink_metrize,
    full_relation,
    min_plus_closure,
    sandwich_holds,
    scale_clip,
    validate_qpm,
)
from graevnorm.generate import random_chain, random_qpm


def test_validate_accepts_instance_a(instance_a):
    assert instance_a.value(0, 1) == F(1, 4)
    assert instance_a.value(1, 0) == 1


def test_validate_nonzero_diagonal():
    with pytest.raises(NonzeroDiagonal) as err:
        validate_qpm(["a", "b"], [[0, 1], [1, 1]])
    assert err.value.point == "b"


def test_validate_triangle_violation():
    with pytest.raises(TriangleViolation) as err:
        validate_qpm(["a", "b", "c"], [[0, 7, 1], [1, 0, 1], [1, 5, 0]])
    assert err.value.triple == ("a", "c", "b")


def test_validate_negative_entry():
    with pytest.raises(NegativeEntry):
        validate_qpm(["a", "b"], [[0, -1], [1, 0]])


def test_neutral_extension_cases(instance_a):
    ext = extend_metric(instance_a)
    a, b = 1, 2
    assert ext.neutral_value(a, NEUTRAL) == 1
    assert ext.neutral_value(NEUTRAL, NEUTRAL) == 0
    assert ext.neutral_value(a, b) == F(1, 4)
    ext.materialize_neutral()


def test_letter_extension_cases(instance_a):
    ext = extend_metric(instance_a)
    a, b = 1, 2
    assert ext.value(-b, -a) == F(1, 4)
    assert ext.value(a, -b) == 2
    assert ext.value(-a, -a) == 0
    assert ext.value(NEUTRAL, -a) == 1


def test_letter_extension_restriction_and_transpose(rng):
    rho = random_qpm(rng, 3)
    ext = extend_metric(rho)
    for x in range(3):
        for y in range(3):
            assert ext.value(x + 1, y + 1) == rho.value(x, y)
            assert ext.value(-(x + 1), -(y + 1)) == ext.neutral_value(y + 1, x + 1)


def test_letter_extension_conjugate_symmetry(rng):
    rho = random_qpm(rng, 3)
    ext = extend_metric(rho)
    letters = [0, 1, 2, 3, -1, -2, -3]
    for u in letters:
        for v in letters:
            assert ext.value(u, v) == ext.value(-v, -u)


def test_letter_extension_is_qpm(rng):
    for _ in range(20):
        rho = random_qpm(rng, 3)
        star = extend_metric(rho).materialize()
        assert star.size == 7


def test_extension_requires_bound():
    rho = validate_qpm(["a", "b"], [[0, 2], [2, 0]])
    with pytest.raises(UnboundedInput):
        extend_metric(rho)


def test_frink_worked_example():
    v0 = full_relation(3)
    v1 = Entourage(3, diagonal(3).pairs | {(0, 1)})
    v2 = diagonal(3)
    chain = EntourageChain([v0, v1, v2])
    rho = frink_metrize(chain)
    assert rho.value(0, 1) == F(1, 2)
    assert rho.value(1, 0) == 1
    assert all(rho.value(x, x) == 0 for x in range(3))
    assert rho.value(0, 2) == rho.value(2, 0) == rho.value(1, 2) == rho.value(2, 1) == 1
    assert sandwich_holds(chain, rho)


def test_frink_depth_one():
    chain = EntourageChain([full_relation(3), diagonal(3)])
    rho = frink_metrize(chain)
    assert rho.value(0, 0) == 0 and rho.value(0, 1) == 1
    assert sandwich_holds(chain, rho)


def test_frink_trivial_chain():
    chain = EntourageChain([full_relation(2), full_relation(2)])
    assert frink_metrize(chain).max_entry() == 0


def test_invalid_chain_reports_index():
    v1 = Entourage(3, diagonal(3).pairs | {(0, 1), (1, 2)})  # cube adds (0, 2)
    with pytest.raises(InvalidChain) as err:
        EntourageChain([full_relation(3), v1, v1])
    assert err.value.index == 2


def test_chain_requires_full_start():
    with pytest.raises(InvalidChain):
        EntourageChain([diagonal(2), diagonal(2)])


def test_frink_sandwich_random(rng):
    for _ in range(50):
        chain = random_chain(rng, rng.randint(2, 5), rng.randint(1, 4))
        rho = frink_metrize(chain)
        assert sandwich_holds(chain, rho)


def test_scale_clip_values(instance_a):
    rho = validate_qpm(["a", "b"], [[0, F(1, 8)], [3, 0]])
    out = scale_clip(rho)
    assert out.value(0, 1) == F(1, 2)
    assert out.value(1, 0) == 1
    zero = scale_clip(validate_qpm(["a"], [[0]]))
    assert zero.max_entry() == 0


def test_scale_clip_is_qpm_with_threshold(rng):
    for _ in range(30):
        rho = random_qpm(rng, 4)
        out = scale_clip(rho)
        validate_qpm(out.labels, out.rows)
        assert out.max_entry() <= 1
        for x in range(4):
            for y in range(4):
                assert (out.value(x, y) < 1) == (rho.value(x, y) < F(1, 4))


def test_ball_relation(instance_a):
    ball = ball_relation(instance_a, F(1, 2))
    assert ball.pairs == frozenset({(0, 0), (1, 1), (0, 1)})
    assert ball_relation(instance_a, 100).pairs == full_relation(2).pairs
    zero = validate_qpm(["a", "b"], [[0, 0], [0, 0]])
    assert ball_relation(zero, F(1, 8)).pairs == full_relation(2).pairs
    weak = ball_relation(instance_a, F(1, 4), strict=False)
    assert (0, 1) in weak
    strict = ball_relation(instance_a, F(1, 4), strict=True)
    assert (0, 1) not in strict
    with pytest.raises(NonpositiveRadius):
        ball_relation(instance_a, 0)


def test_min_plus_closure_triangle(rng):
    rows = [[F(0), F(3, 4), F(1)], [F(1), F(0), F(1, 8)], [F(1), F(1), F(0)]]
    closed = min_plus_closure(rows)
    validate_qpm(["a", "b", "c"], closed)
    assert closed[0][2] == F(3, 4) + F(1, 8)
