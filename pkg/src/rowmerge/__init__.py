"""Row-merging pre-transformed polar-like codes built on Reed-Muller information sets."""

from rowmerge.binmath import BitWord, dominates, index_set
from rowmerge.codebuilder import CodeSpec, build, rm_info_set, validate
from rowmerge.codec import decode_scl, encode, ml_oracle
from rowmerge.mergerules import MergeTriple, check_triple, canonicalize, ensemble, enumerate_triples
from rowmerge.weightcalc import WeightReport, weight_formula, weight_xor

__all__ = [
    "BitWord",
    "CodeSpec",
    "MergeTriple",
    "WeightReport",
    "build",
    "canonicalize",
    "check_triple",
    "decode_scl",
    "dominates",
    "encode",
    "ensemble",
    "enumerate_triples",
    "index_set",
    "ml_oracle",
    "rm_info_set",
    "validate",
    "weight_formula",
    "weight_xor",
]

__version__ = "0.1.0"
