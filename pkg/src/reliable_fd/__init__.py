"""Discovery of reliable approximate functional dependencies.

Scores attribute sets by the fraction of information they carry about a
target, corrected for the bias expected under independence, and finds the
top-k sets with an admissible best-first branch-and-bound search.
"""

__version__ = "0.1.0"

from .correction import (
    CorrectionValue,
    ScoredPattern,
    adjusted_fraction,
    expected_mi_bruteforce,
    expected_mi_permutation,
    hypergeometric_cell_sum,
    reliable_fraction,
)
from .data import ContingencyTable, Dataset, DataError, build_table, encode_dataset, equal_frequency_bins, read_csv
from .infotheory import (
    DegenerateTargetError,
    conditional_entropy,
    entropy,
    fraction_of_information,
    mutual_information,
)
from .search import (
    SearchStats,
    TopKResult,
    best_first_search,
    bound,
    branch,
    cardinality_baseline_nodes,
    exhaustive_search,
)
