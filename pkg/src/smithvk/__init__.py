"""Exact Smith classes, embedding obstructions and join certificates for simplicial complexes."""

__version__ = "0.1.0"

from .chains import CellComplex, Chain, Cochain
from .simplicial import (OrientedSimplex, SimplicialComplex, canonicalize_simplex, complete_bipartite, complete_graph,
                         generate_corpus, join_complex, join_three, load_complex, simplex_boundary, skeleton)
from .deleted import (DeletedProduct, QuotientComplex, SphereComplex, Z2CellComplex, build_deleted_product,
                      build_quotient, involution_on_chains, product_cell_boundary, project_chain, pullback_cochain,
                      pullback_inverse, sphere_z2_complex, transfer_chain, transfer_cochain)
from .linalg import (HomologyDecomposition, SmithForm, SparseIntMatrix, homology_with_torsion_lifts, image_membership,
                     mod2_rank, mod2_solve, smith_normal_form, solve_integer)
from .smith import (ResolutionSequence, SmithReport, class_vanishes, mod2_classes, mu_step, reduced_classes,
                    resolution_of_one, smith_classes_and_index, special_subcomplex_basis)
from .embedding import (DegeneracyError, EmbeddingMap, ObstructionReport, embedding_class_report, embedding_cocycle,
                        moment_curve_map, simplex_pair_intersection)
from .certificates import (JoinCertificate, TorsionCertificate, build_join_certificate, cone_chain_v,
                           ext_certificate_search, ext_certificate_verify, mod2_cycle_certificate, prism_chain_vw,
                           verify_join_theorem)
