"""rc2nli: reading-comprehension to two-class NLI conversion and analysis."""

__version__ = "0.1.0"

from .converter import (  # noqa: F401
    ConversionResult,
    NLIExample,
    QAExample,
    QuestionKind,
    classify_question,
    convert,
    convert_example,
    finalize,
)
from .analysis import (  # noqa: F401
    DeltaReport,
    EvalReport,
    PredictionRecord,
    accuracy,
    delta,
    distribution,
    per_category_report,
)
from .categorize import (  # noqa: F401
    AnnotationRecord,
    HeuristicFlags,
    ReasoningCategory,
    heuristic_categorize,
    load_annotations,
    quote_count,
)
from .corpus import (  # noqa: F401
    DatasetStats,
    RCExample,
    compute_stats,
    filter_subset,
    is_cloze,
    load_race,
)
from .parsetree import ParseBundle, SentenceParse, find_wh, parse_conllu, subtree_span  # noqa: F401
