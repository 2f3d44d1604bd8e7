"""Evaluation-function genomes: Linear, BinaryTree and Tree."""

from .features import (
    ALL_FEATURES, CARD_FEATURES, STATE_FEATURES, extract_card_features, extract_state_features,
)
from .genome import (
    LOSS_VALUE, REPRESENTATIONS, WIN_VALUE, BinaryTreeGenome, EvaluationError, Genome,
    GenomeParams, LinearGenome, TreeGenome, check_genome, eval_card, eval_state_only, evaluate,
)
from .operators import crossover, mutate, random_genome, translate_linear
from .text import ParseError, parse_genome, parse_tree, serialize_genome
from .trees import Const, Feat, Op, node_count

__all__ = [
    "ALL_FEATURES", "CARD_FEATURES", "LOSS_VALUE", "REPRESENTATIONS", "STATE_FEATURES",
    "WIN_VALUE", "BinaryTreeGenome", "Const", "EvaluationError", "Feat", "Genome",
    "GenomeParams", "LinearGenome", "Op", "ParseError", "TreeGenome", "check_genome",
    "crossover", "eval_card", "eval_state_only", "evaluate", "extract_card_features",
    "extract_state_features", "mutate", "node_count", "parse_genome", "parse_tree",
    "random_genome", "serialize_genome", "translate_linear",
]
