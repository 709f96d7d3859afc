"""Enumerate compact linear field theories and validate them against dipole radiation data."""

from .discovery import RunConfig, run_discovery, write_report
from .theory_lang import ALPHABET, Candidate, candidate, render
from .validator import derive_c, fit

__all__ = ["ALPHABET", "Candidate", "RunConfig", "candidate", "derive_c", "fit", "render", "run_discovery", "write_report"]
