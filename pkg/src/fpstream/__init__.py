"""Sliding-window frequent and high-utility pattern mining over sensor event streams."""

from .engine import WindowMiner
from .errors import (
    BatchOrderError,
    BatchSizeError,
    BoundsExceededError,
    EmptyLSDSError,
    EmptyPatternError,
    EmptyTransactionError,
    FPStreamError,
    MissingUtilityError,
    ModeError,
    RecordError,
    UtilityTableError,
)
from .fpstree import FPSNode, FPSTree, FPSTreeView, build_tree
from .lsds import LSDS, LSDSView, build_lsds
from .miner import (
    MiningRequest,
    MiningResult,
    hup_candidates,
    mine_frequent,
    mine_frequent_lsds,
    mine_hup,
    remine,
)
from .model import (
    Batch,
    EventTransaction,
    PatternResult,
    UtilityTable,
    WindowConfig,
    load_utility_table,
    parse_transaction_line,
    pattern_unit_utility,
    transaction_utility,
)
from .synth import generate_stream

__version__ = "0.1.0"
