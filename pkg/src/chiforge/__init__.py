"""Constructive procedures behind polynomial chi-boundedness of P5-free graphs.

Graphs are bitset-adjacency objects over vertices 0..n-1, vertex sets are int
bitmasks, and every quantity is an exact integer or Fraction.  Each procedure
returns a certificate that :func:`verify_certificate` re-checks with exact
oracles.
"""
from __future__ import annotations

from .certificate import Certificate
from .chi_oracles import Oracle, oracle_for
from .graph_core import Graph, decode_graph6, encode_graph6, find_induced_p5
from .ledger import LEDGER, ledger
from .verifier import verify_certificate

__version__ = "0.1.0"

__all__ = [
    "Certificate", "Graph", "LEDGER", "Oracle", "decode_graph6", "encode_graph6", "find_induced_p5", "ledger",
    "oracle_for", "verify_certificate",
]
