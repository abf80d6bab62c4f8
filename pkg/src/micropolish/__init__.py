"""Micro-clustering by graph polishing and maximal clique enumeration."""
from .cliques import (CliqueCapExceeded, brute_force_maximal_cliques, enumerate_maximal_cliques,
                      max_clique)
from .evaluate import AccuracyReport, StatsReport, accuracy, cluster_stats
from .graph import (Graph, GraphFormatError, closed_neighborhood, density, graph_equal,
                    load_edge_list, save_edge_list)
from .instances import (PlantedInstance, ZipfParams, gen_planted, gen_theorem3_graph,
                        gen_theorem5_graph, gen_theorem6_graph, gen_zipf_graph)
from .polishing import PolishReport, is_polished, polish, polish_step, verify_property1_instance
from .similarity import (PMI, Jaccard, KCommon, PairCounts, TransactionDatabase,
                         build_similarity_graph_from_db, evaluate_measure, neighbor_intersections,
                         pair_frequency_equivalence_check, record_intersections)

__version__ = "0.1.0"
