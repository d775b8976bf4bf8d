"""Exact reflection matrices, matrix classes and tightness for multiclass queueing networks."""

from reflecto.matrix_classes import classify, is_completely_s, is_p_matrix, thm1_classify, thm2_applicable
from reflecto.network import NetworkSpec, derive, reentrant_spec, reflection_matrix, traffic
from reflecto.rational import RatMatrix, format_rat, rat_parse
from reflecto.tightness import check_tight_system, decide_tight_matrix, verify_assignment

__version__ = "0.1.0"
