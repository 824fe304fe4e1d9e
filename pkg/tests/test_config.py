import pytest

from boxperfect.config import DEFAULT, Budgets, budgets_from_mapping, load_budgets
from boxperfect.errors import BudgetExceeded, PreconditionError


def test_defaults():
    assert load_budgets(None) is DEFAULT
    d = DEFAULT.to_dict()
    assert d["falsify_denoms"] == [1, 2, 3]
    assert Budgets(**{**d, "falsify_denoms": (1, 2, 3)}) == DEFAULT


def test_toml_table_and_top_level(tmp_path):
    p = tmp_path / "a.toml"
    p.write_text("[budgets]\nmax_cliques = 7\nfalsify_denoms = [1, 2]\n")
    b = load_budgets(p)
    assert b.max_cliques == 7 and b.falsify_denoms == (1, 2)
    assert b.chi_max_n == DEFAULT.chi_max_n
    p.write_text("esp_max_cliques = 3\n")
    assert load_budgets(p).esp_max_cliques == 3


@pytest.mark.parametrize("data", [
    {"bogus": 1}, {"max_cliques": -1}, {"max_cliques": True}, {"max_cliques": "7"},
    {"falsify_denoms": []}, {"falsify_denoms": [0]},
])
def test_bad_values(data):
    with pytest.raises(PreconditionError):
        budgets_from_mapping(data)


def test_budget_exceeded_message():
    exc = BudgetExceeded("max_cliques", 5, "too many")
    assert exc.budget == "max_cliques" and exc.limit == 5
    assert str(exc) == "budget max_cliques=5 exceeded: too many"
