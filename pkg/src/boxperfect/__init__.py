"""Box-perfect graphs: recognition, ESP search, TU tests and exact certificates."""

__version__ = "0.1.0"

from .config import Budgets, DEFAULT, load_budgets
from .errors import BoxPerfectError, BudgetExceeded, InternalCheckError, ParseError, PreconditionError
from .graph import Graph, Multigraph, Digraph

__all__ = ["Budgets", "DEFAULT", "load_budgets", "BoxPerfectError", "BudgetExceeded",
           "InternalCheckError", "ParseError", "PreconditionError", "Graph", "Multigraph",
           "Digraph", "__version__"]
