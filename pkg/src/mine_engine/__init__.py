"""Low-memory MINE statistics: MIC, MAS, MEV, MCN, Pearson r and non-linearity."""
from .analysis import (
    AllPairs,
    AnalysisTask,
    Dataset,
    MasterVsAll,
    ResultRecord,
    SinglePair,
    expand_pairs,
    filter_low_variance,
    iter_analysis,
    run_analysis,
)
from .charmatrix import CharacteristicMatrix, Parameters, compute_score, grid_bound
from .io import DatasetError, read_dataset, read_results, write_results
from .statistics import (
    MineStatistics,
    mas,
    mcn,
    mev,
    mic,
    mine_statistics,
    nonlinearity,
    pearson,
)

__version__ = "0.1.0"
