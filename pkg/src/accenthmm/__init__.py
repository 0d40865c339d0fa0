"""Word recognition over discrete IPA feature vectors, with one-shot
adaptation of fault-tolerant word HMMs to foreign-accented speech."""

from .harness import (
    AnovaResult,
    EvalReport,
    GroupStats,
    MalformedTranscript,
    SpeakerTranscript,
    TransformationReport,
    UnbalancedDesign,
    anova_table,
    evaluate_speaker,
    feature_labels,
    group_of,
    group_report,
    load_reference_table,
    load_transcript,
    model_transformations,
    score,
    split_transcript,
    transformation_table,
    two_way_anova,
)
from .hmm import (
    Alignment,
    Delete,
    Insert,
    ModelParams,
    Produce,
    RecognitionResult,
    TransformCounts,
    WordHmm,
    adapt,
    align_and_count,
    batch_forward,
    build_word_hmm,
    forward_likelihood,
    init_naive_params,
    load_params,
    phoneme_emission,
    recognize,
    save_params,
    update_params,
    viterbi_align,
)
from .lexicon import (
    Lexicon,
    WordForm,
    lexicon_from_pairs,
    load_lexicon,
    merge_lexicons,
    overlay_lexicons,
)
from .phonology import (
    FeatureSpace,
    Phone,
    PhoneFeatures,
    PhonologyError,
    SymbolTable,
    UnknownSymbol,
    merge_diphthongs,
)
from .resources import (
    evaluation_lexicon,
    load_paragraph_lexicon,
    load_reference_transformations,
    load_speaker,
    load_symbols,
    speaker_names,
    subject_names,
)

__version__ = "0.1.0"

__all__ = [
    "Alignment",
    "AnovaResult",
    "Delete",
    "EvalReport",
    "FeatureSpace",
    "GroupStats",
    "Insert",
    "Lexicon",
    "MalformedTranscript",
    "ModelParams",
    "Phone",
    "PhoneFeatures",
    "PhonologyError",
    "Produce",
    "RecognitionResult",
    "SpeakerTranscript",
    "SymbolTable",
    "TransformCounts",
    "TransformationReport",
    "UnbalancedDesign",
    "UnknownSymbol",
    "WordForm",
    "WordHmm",
    "adapt",
    "align_and_count",
    "anova_table",
    "batch_forward",
    "build_word_hmm",
    "evaluate_speaker",
    "evaluation_lexicon",
    "feature_labels",
    "forward_likelihood",
    "group_of",
    "group_report",
    "init_naive_params",
    "lexicon_from_pairs",
    "load_lexicon",
    "load_paragraph_lexicon",
    "load_params",
    "load_reference_table",
    "load_reference_transformations",
    "load_speaker",
    "load_symbols",
    "load_transcript",
    "merge_diphthongs",
    "merge_lexicons",
    "model_transformations",
    "overlay_lexicons",
    "phoneme_emission",
    "recognize",
    "save_params",
    "score",
    "speaker_names",
    "split_transcript",
    "subject_names",
    "transformation_table",
    "two_way_anova",
    "update_params",
    "viterbi_align",
]
