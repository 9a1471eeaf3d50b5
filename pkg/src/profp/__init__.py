"""Probabilistic frequent itemset mining over uncertain transaction databases."""

from .conditional import build_conditional, extract_itemset
from .data import (GenParams, UncertainDatabase, UncertainTransaction, generate_synthetic,
                   load_database, parse_database, serialize_database, world_probability)
from .extraction import ExtractionResult, calculate_probabilities, extract
from .miner import MiningConfig, PFIResult, mine, pro_apriori, profp_growth, singleton_prescan
from .oracle import OracleRefusal, brute_force_pfi, brute_force_support_pdf
from .spdf import (FrequentnessQuery, SupportPDF, expected_support, frequentness_probability,
                   pbr_frequentness, support_pdf, update_pdf)
from .tree import ProFPNode, ProFPTree, build_tree, insert_transaction, tree_stats

__all__ = [
    "GenParams", "UncertainDatabase", "UncertainTransaction", "generate_synthetic",
    "load_database", "parse_database", "serialize_database", "world_probability",
    "ProFPNode", "ProFPTree", "build_tree", "insert_transaction", "tree_stats",
    "ExtractionResult", "calculate_probabilities", "extract",
    "FrequentnessQuery", "SupportPDF", "expected_support", "frequentness_probability",
    "pbr_frequentness", "support_pdf", "update_pdf",
    "build_conditional", "extract_itemset",
    "MiningConfig", "PFIResult", "mine", "pro_apriori", "profp_growth", "singleton_prescan",
    "OracleRefusal", "brute_force_pfi", "brute_force_support_pdf",
]
