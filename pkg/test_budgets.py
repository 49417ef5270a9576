import math

import pytest

from budgets.sampling_cost import FIXED_SHOTS, BudgetInput, fixed_budget_is_feasible, m_e_bound, m_s_bound, trotter_budget
from experiments.studies import budget_table


def literal_m_s(p, d, n, R, eps, p_qsp):
    return math.log(2 / (1 - p_qsp)) / ((1 - p) ** d * 4 * math.log(2) * n * (R + 1) * eps**2)


def test_exponential_bound_in_log10():
    assert m_e_bound(1e-3, 11) == pytest.approx(66)
    assert m_e_bound(1e-3, 1981) == pytest.approx(11886)
    assert m_e_bound(0.1, 1) == pytest.approx(2)
    with pytest.raises(ValueError):
        m_e_bound(0.0, 5)


def test_exponential_bound_is_linear_in_depth():
    slope = 2 * math.log10(1 / 1e-2)
    assert m_e_bound(1e-2, 40) - m_e_bound(1e-2, 30) == pytest.approx(10 * slope)


@pytest.mark.parametrize("args", [
    (1e-3, 11, 5, 2, 1e-2, 0.5),
    (1e-4, 63, 31, 15, 1e-2, 0.45),
    (1e-2, 25, 12, 5, 1e-4, 0.6),
])
def test_statistical_bound_matches_formula(args):
    assert m_s_bound(BudgetInput(*args)) == pytest.approx(literal_m_s(*args), rel=1e-9)


def test_statistical_bound_example_value():
    assert m_s_bound(BudgetInput(1e-3, 11, 5, 2, 1e-2, 0.5)) == pytest.approx(337, rel=1e-2)


def test_statistical_bound_grows_with_depth():
    values = [m_s_bound(BudgetInput(1e-3, d, 5, 2, 1e-2, 0.5)) for d in (5, 11, 50, 200)]
    assert values == sorted(values) and len(set(values)) == 4


def test_noise_free_limit():
    b = m_s_bound(BudgetInput(0.0, 11, 5, 2, 1e-2, 0.5))
    assert b == pytest.approx(math.log(4) / (4 * math.log(2) * 15 * 1e-4))
    assert b < m_s_bound(BudgetInput(1e-3, 11, 5, 2, 1e-2, 0.5))


def test_invalid_budget_input():
    with pytest.raises(ValueError):
        BudgetInput(1e-3, 11, 5, 2, 1.5, 0.5)
    with pytest.raises(ValueError):
        BudgetInput(1e-3, 11, 5, 2, 1e-2, 1.0)


def test_trotter_budget():
    shallow = trotter_budget(1.0, 1e-2, 30, 1e-3)
    assert math.isfinite(shallow) and shallow > 0
    assert trotter_budget(1.0, 1e-2, 60, 1e-3) > shallow
    assert trotter_budget(1.0, 1e-2, 30, 0.0) < shallow


def test_fixed_budget_between_bounds_for_qsp():
    assert fixed_budget_is_feasible(m_s_bound(BudgetInput(1e-3, 11, 5, 2, 1e-2, 0.5)), 1e-3, 11)
    assert fixed_budget_is_feasible(337.0, 0.0, 11)
    assert not fixed_budget_is_feasible(FIXED_SHOTS * 2.0, 1e-3, 11)
    assert not fixed_budget_is_feasible(337.0, 0.5, 3)
    rows = budget_table([1e-4, 1e-3, 1e-2], [0.5, 5.0, 20.0], 1e-2)
    qsp = [r for r in rows if r.method == "qsp"]
    assert len(qsp) == 9
    assert all(r.within for r in qsp)
    assert all(r.shots_fixed == FIXED_SHOTS for r in rows)
    trotter = [r for r in rows if r.method == "trotter"]
    assert all(r.depth == r.degree * 10 for r in trotter)
