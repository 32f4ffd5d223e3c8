"""Offline pipeline: configuration, wire files, cohort runner, report emitter."""

from .config import ConfigError, RunConfig, load_config
from .files import ExpressionRow, read_embeddings, read_expressions, read_surveys
from .report import IoFailure, emit_report, load_report, report_from_dict, report_json_bytes, report_to_dict
from .runner import (
    CohortReport,
    IneligibleError,
    MissingSurveyError,
    ParticipantInputs,
    PipelineError,
    SimilarityAggregate,
    TooFewParticipantsError,
    aggregate_similarities,
    run_cohort,
    run_participant,
)

__all__ = [
    "CohortReport",
    "ConfigError",
    "ExpressionRow",
    "IneligibleError",
    "IoFailure",
    "MissingSurveyError",
    "ParticipantInputs",
    "PipelineError",
    "RunConfig",
    "SimilarityAggregate",
    "TooFewParticipantsError",
    "aggregate_similarities",
    "emit_report",
    "load_config",
    "load_report",
    "read_embeddings",
    "read_expressions",
    "read_surveys",
    "report_from_dict",
    "report_json_bytes",
    "report_to_dict",
    "run_cohort",
    "run_participant",
]
