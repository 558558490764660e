"""Importing some core classes"""

from chebyrank.graph.core import UndirectedGraph, transition_apply, validate
from chebyrank.solvers.cpaa import CPAASolver, SolverConfig, run_cpaa
from chebyrank.solvers.power import PowerConfig, PowerSolver, reference_pagerank, run_power
from chebyrank.utils import Algorithm
