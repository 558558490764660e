"""PageRank solvers and the Chebyshev coefficient toolkit"""

from chebyrank.solvers.cpaa import CPAASolver, SolverConfig, run_cpaa
from chebyrank.solvers.power import (
    PowerConfig,
    PowerSolver,
    reference_pagerank,
    run_power,
)
from chebyrank.solvers.solver import (
    ComparisonRow,
    PageRankResult,
    PageRankSolver,
    compare_solvers,
    normalize,
)
