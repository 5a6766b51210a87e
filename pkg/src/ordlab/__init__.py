"""Left- and bi-orderability tests for finitely presented groups via Cayley balls."""

from .ball import Ball, BallElement, build_ball, conjugation_table, product_table
from .certificates import RefutationCertificate, check_certificate, extract_certificate
from .cones import ConeOracle, klein_cone, lex_cone, restrict_to_ball, slope_cone
from .presentation import Presentation, Word, free_reduce, invert, parse_presentation
from .solver import (
    SearchOutcome,
    SignAssignment,
    enumerate_preorders,
    find_prebiorder,
    find_preorder,
    is_prebiorder,
    is_preorder,
)
from .space import LevelDiagram, build_diagram, extension_report, neighborhood_query
from .wordproblem import WordBackend, equal, get_backend, knuth_bendix, normal_form, todd_coxeter

__version__ = "0.1.0"
