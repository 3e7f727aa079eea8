"""Randomized Hermitian-unital line graphs for Erdős–Rogers upper bounds.

Build the unital over GF(q^2), sample its points, form the line intersection
graph with its pencil-coloring and edge-sampling filters, verify the
structural properties by exact clique search, and check the probabilistic
inequality chains in log space.
"""
from .bounds import (LogReal, appendix_ratio, chernoff_tail_bound, final_bound_check,
                     janson_delta, janson_ksfree_bound, janson_mu, lll_check, mainlemma_bound)
from .cliques import (build_ax_instance, contains_clique, event_ax_occurs, iter_cliques,
                      max_ksfree_induced, verify_property_A, verify_property_B)
from .errors import (BudgetExceeded, DivisionByZero, EpsilonOutOfRange, LinesDisjoint, MissingColor,
                     NotLinear, NotPrimePower, RetriesExhausted, RhoExceedsOne, TooLarge,
                     UnknownLineId, UnsupportedFieldSize, VertexMismatch)
from .field import FieldSpec, field_create
from .graphs import (LineGraph, PencilColoring, apply_pencil_filter, build_intersection_graph,
                     intersect_graphs, random_pencil_coloring, sample_edges)
from .oracle import TinyGraph, brute_delta, brute_expected_ks, brute_force_f
from .sampler import SampleParams, sample_points, sample_until_good, verify_b_bound, verify_lemma5
from .unital import (PartialLinearSpace, build_hermitian_unital, classify_crossing,
                     count_fans_on_pair, find_onan, verify_design)

__all__ = [name for name in dir() if not name.startswith("_")]
