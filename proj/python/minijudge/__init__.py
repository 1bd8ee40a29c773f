"""Reference-based grading of small programs.

The heavy lifting lives in the compiled extension: concrete execution,
symbolic-execution-based equivalence checking, corpus synthesis, classifier
training, and the two judging pipelines. This package adds thin conveniences
(JSON reports parsed into dicts).
"""

import json as _json

from minijudge._core import (
    CorpusFormatError,
    InsufficientDataError,
    ProfileInfeasibleError,
    SeedTooSmallError,
    SourceParseError,
    build_vocab,
    check_equivalence,
    encode,
    generate_corpus,
    oracle_label,
    predict,
    run_program,
    train_classifier,
)
from minijudge import _core

__all__ = [
    "CorpusFormatError",
    "InsufficientDataError",
    "ProfileInfeasibleError",
    "SeedTooSmallError",
    "SourceParseError",
    "build_vocab",
    "check_equivalence",
    "compare",
    "encode",
    "generate_corpus",
    "judge",
    "oracle_label",
    "predict",
    "run_program",
    "train_classifier",
]


def judge(spec_text, reference, submissions, **kwargs):
    """Runs one pipeline over an ordered stream; returns the report as a dict."""
    return _json.loads(_core.judge(spec_text, reference, submissions, **kwargs))


def compare(spec_text, reference, submissions, **kwargs):
    """Runs both pipelines on the same stream; returns the joint report as a dict."""
    return _json.loads(_core.compare(spec_text, reference, submissions, **kwargs))
