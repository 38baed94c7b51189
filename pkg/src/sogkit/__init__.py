"""Finitely generated abelian groups, subgroup lattices, refinement monoids and Cuntz-limit bookkeeping."""

from .errors import *  # noqa: F401,F403
from .intmat import IntMatrix, smith_normal_form, invariant_factors
from .fgab import (FgAbGroup, GroupElement, Subgroup, TorsionSplit, CyclicDecomposition,
                   group_from_relations, subgroup_membership, subgroup_sum,
                   subgroup_intersection, is_pure, direct_complement, torsion_split)
from .dlat import (FinPoset, FinDistLattice, FinSemilattice, IdealLattice, Sublattice,
                   lattice_from_poset, join_irreducible_data, ideal_lattice,
                   sublattice_generated)
from .lathom import (SubgroupHom, DistrFamily, EnvelopeTrace, validate_hom,
                     check_purity_condition, purity_violations, is_distributive_element,
                     chardistr_extract, chardistr_reconstruct, distributive_envelope)
from .pureapprox import (ApproxResult, hom_m_torsion, hom_torsion_parts, approx_torsion,
                         pure_approximation, pure_witness, two_chain)
from .sogmon import (FinMonoid, SogPresentation, SogElement, Block, sog_add, check_axioms,
                     decompose_regular, presentation_from_monoid, presentation_from_hom,
                     block_monoid, direct_sum, fg_submonoid_cover, retract_witness)
from .oracle import (OracleBudget, brute_purity, brute_refinement, brute_distributive,
                     enumerate_subgroup, all_subgroups)
from .cuntz import (MatCuntz, MatOInf, CornerOInf, DirectSum, MonoidMap, Blueprint,
                    v_of_descriptor, realize_block, emit_blueprint, special_rerealization,
                    descriptor_name)
from .serialize import parse_input, Workspace
from .cli import run_command

__version__ = "0.1.0"
