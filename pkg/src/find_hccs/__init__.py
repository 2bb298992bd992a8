"""Detection of highly coordinating communities in social media corpora.

The pipeline parses posts, extracts interactions, finds windowed
co-activity evidence, builds latent coordination networks, and mines them
for communities whose mean edge weight stands out from the graph at large.
"""

from .errors import (
    ConfigError,
    ContractError,
    EmptyCorpusError,
    MalformedInputError,
    PipelineError,
)
from .evidence import (
    CriterionSpec,
    EvidenceDetail,
    EvidencePair,
    WindowConfig,
    assign_window,
    filter_interactions,
    find_coordination,
)
from .extract import (
    HCC,
    ExtractionParams,
    extract_fsa_v,
    extract_knn,
    extract_threshold,
    louvain_communities,
    modularity,
    run_extraction,
)
from .ingest import (
    Interaction,
    ParseResult,
    Post,
    extract_interactions,
    parse_posts,
    resolve_conversations,
)
from .lcn import (
    LCN,
    CollapsedGraph,
    aggregate_lcns,
    build_lcn,
    build_windowed_lcns,
    collapse_edges,
    decayed_weight,
    sliding_frame_lcns,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "ContractError",
    "EmptyCorpusError",
    "MalformedInputError",
    "PipelineError",
    "CriterionSpec",
    "EvidenceDetail",
    "EvidencePair",
    "WindowConfig",
    "assign_window",
    "filter_interactions",
    "find_coordination",
    "HCC",
    "ExtractionParams",
    "extract_fsa_v",
    "extract_knn",
    "extract_threshold",
    "louvain_communities",
    "modularity",
    "run_extraction",
    "Interaction",
    "ParseResult",
    "Post",
    "extract_interactions",
    "parse_posts",
    "resolve_conversations",
    "LCN",
    "CollapsedGraph",
    "aggregate_lcns",
    "build_lcn",
    "build_windowed_lcns",
    "collapse_edges",
    "decayed_weight",
    "sliding_frame_lcns",
    "__version__",
]
