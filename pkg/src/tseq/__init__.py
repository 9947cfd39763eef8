"""Exact finite certificates for group topologies determined by sequences."""
from .finvec import FinVec, e, parse_finvec
from .reports import WitnessReport
from .seqs import IntSeq, parse_fraction

__all__ = ["FinVec", "IntSeq", "WitnessReport", "e", "parse_finvec", "parse_fraction"]
__version__ = "0.1.0"
