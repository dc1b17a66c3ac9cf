"""Finite computations in the random graph, using its BIT model on the naturals."""

from __future__ import annotations

from .btypes import BinaryType, BinaryTypeSpec
from .core import (
    FiniteGraph,
    PartialIso,
    RadoError,
    bit_adjacent,
    extend_iso,
    find_copy,
    find_witness,
    induced_subgraph,
)
from .naturals import BigNat, Nat, NatCodec
from .operations import FunctionSample

__all__ = [
    "BigNat",
    "BinaryType",
    "BinaryTypeSpec",
    "FiniteGraph",
    "FunctionSample",
    "Nat",
    "NatCodec",
    "PartialIso",
    "RadoError",
    "bit_adjacent",
    "extend_iso",
    "find_copy",
    "find_witness",
    "induced_subgraph",
]

__version__ = "0.1.0"
