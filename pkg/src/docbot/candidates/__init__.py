from .assemble import (
    KIND_RETRIEVED,
    KIND_TRIPLE,
    Candidate,
    CandidateSet,
    candidate_to_json,
    generate_candidates,
    triple_to_sentence,
    write_jsonl,
)
from .triples import SvoTriple, extract_triples

__all__ = [
    "KIND_RETRIEVED",
    "KIND_TRIPLE",
    "Candidate",
    "CandidateSet",
    "SvoTriple",
    "candidate_to_json",
    "extract_triples",
    "generate_candidates",
    "triple_to_sentence",
    "write_jsonl",
]
