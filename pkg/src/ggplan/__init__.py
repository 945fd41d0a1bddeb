"""Human-aware coverage planning with language-model relevancy grounding."""

from .activity import ActivityProgram, AtomicAction, OccupancyTrace, bind_items, parse_program, simulate_human
from .narrator import Narration, ObservationHistory, narrate
from .oracle import OracleResult, offline_oracle
from .policy import PolicyContext, PolicyKind, select_next_partition
from .reasoner import PromptSpec, RelevancyScores, aggregate_partitions, build_completion_set, compute_relevancy
from .scoring import CompletionScore, make_backend
from .semantic_map import BoundingBox, Item, Partition, SemanticMap, assign_items_to_partitions, label_multiplicities, load_map, overlap_volume
from .sim import RunMetrics, SimConfig, run_batch, run_once

__version__ = "0.1.0"
