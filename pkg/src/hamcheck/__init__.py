"""Parse sign-language notation labels, encode them as multilabels and
check their consistency against pose-landmark time series."""

from .analytics import (
    ConsistencyReport,
    Dimension,
    DistributionReport,
    RunningStats,
    class_distribution,
    location_consistency,
)
from .codec import (
    ABSENT,
    EtaResult,
    GlossGroups,
    MultiLabel,
    build_index,
    decode,
    decoding_efficiency,
    decoding_efficiency_by_language,
    encode,
)
from .corpus import Corpus, GlossRecord, ParseStatus, ingest_corpus
from .errors import HamcheckError
from .inventory import Block, MovementKind, SymbolEntry, SymbolInventory, load_inventory, lookup
from .kinematics import (
    Hand,
    LandmarkSeries,
    Norm,
    TopologyConfig,
    detect_initial_frame,
    first_local_extremum,
    load_landmark_series,
    pairwise_distance,
)
from .parser import ParsedSign, parse_label, read_sign, serialize, tokenize
from .reports import emit_report, load_report

__version__ = "0.1.0"

__all__ = [
    "ABSENT", "Block", "ConsistencyReport", "Corpus", "Dimension", "DistributionReport",
    "EtaResult", "GlossGroups", "GlossRecord", "Hand", "HamcheckError", "LandmarkSeries",
    "MovementKind", "MultiLabel", "Norm", "ParseStatus", "ParsedSign", "RunningStats",
    "SymbolEntry", "SymbolInventory", "TopologyConfig", "build_index", "class_distribution",
    "decode", "decoding_efficiency", "decoding_efficiency_by_language", "detect_initial_frame",
    "emit_report", "encode", "first_local_extremum", "ingest_corpus", "load_inventory",
    "load_landmark_series", "load_report", "location_consistency", "lookup",
    "pairwise_distance", "parse_label", "read_sign", "serialize", "tokenize",
]
