"""Pareto neighborhood search for the bi-objective winner determination
problem of combinatorial procurement auctions with set-covering constraints."""

__version__ = "0.1.0"

from .construction import DrcParams, RatingVector, drc_run, gen_cand_list, rate_p, rate_q, sel_cand_sector
from .errors import (
    ConstructionStallError,
    IndicatorError,
    InfeasibleSolutionError,
    InstanceError,
    InstanceFormatError,
    OracleLimitError,
    RepairStallError,
    WdpError,
)
from .formats import load_instance, parse_instance, persist_run, save_instance, write_instance
from .generator import GeneratorConfig, generate_instance
from .improvement import PlnsParams, destroy, plns_run, repair, select_destroy_rate
from .indicators import (
    NormalizationBounds,
    coverage,
    epsilon_binary,
    epsilon_unary,
    hypervolume,
    normalize,
    reference_union,
)
from .model import Archive, Bid, Instance, Solution, dominates, evaluate_f1, evaluate_f2, is_feasible
from .oracle import ExactFront, enumerate_front
from .pns import RunResult, run_pns

