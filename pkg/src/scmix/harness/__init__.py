"""Evaluation harness: manifests, endpoint client, scoring, sweeps."""

from .client import AuthError, EndpointConfig, QueryError, build_request, query_model
from .manifest import (
    TASK_EXACT_MATCH,
    TASK_MME_PAIR,
    DatasetManifest,
    ManifestEntry,
    ManifestError,
    QaPair,
    load_manifest,
)
from .scoring import parse_yes_no, score_exact_match, score_mme
from .sweep import ResultRow, aggregate, read_results, run_sweep, write_aggregate_csv

__all__ = [
    "AuthError",
    "DatasetManifest",
    "EndpointConfig",
    "ManifestEntry",
    "ManifestError",
    "QaPair",
    "QueryError",
    "ResultRow",
    "TASK_EXACT_MATCH",
    "TASK_MME_PAIR",
    "aggregate",
    "build_request",
    "load_manifest",
    "parse_yes_no",
    "query_model",
    "read_results",
    "run_sweep",
    "score_exact_match",
    "score_mme",
    "write_aggregate_csv",
]
