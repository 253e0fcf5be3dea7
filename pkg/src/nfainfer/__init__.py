"""Minimal NFA inference from positive and negative words through SAT."""
from .nfa import Nfa
from .sample import Sample, parse_sample
from .search import InferenceReport, Strategy, infer_min_k

__all__ = ["Nfa", "Sample", "parse_sample", "InferenceReport", "Strategy", "infer_min_k"]
__version__ = "0.1.0"
