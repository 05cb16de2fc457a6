"""Moufang loops over finite rings, built two ways and cross-verified.

The package constructs the loops M_{a,b} on tuples (r, x, y, z) over a
finite commutative unital ring with a chosen cyclic unit subgroup R_0,
both by the closed-form multiplication and through a group with an S_3
symmetry action, and verifies loop axioms, the Moufang identity,
structural invariants, a Cayley-algebra (Zorn matrix) embedding, and an
isomorphy-separating invariant.
"""
from .loops import (FiniteLoop, Report, TableLoop, associator, isotope, loop_from_table,
                    normal_structure, nucleus, table_csv, verify_loop_axioms,
                    verify_moufang, verify_translation_identities)
from .mab import MabElem, MabLoop, MabParams, MabParamsError, build_mab
from .rings import (NoElementOfOrder, NotAUnit, Ring, RingElement, RingError,
                    UnitSubgroup, cyclic_subgroup, element_of_order, make_ring,
                    multiplicative_order)
from .sampling import EXHAUSTIVE, CheckStrategy, SplitMix64, random_strategy
from .triality import (GElement, QhatGroup, SWord, TrialityGroup, W_ID, W_RHO, W_RHO2,
                       W_SIGMA, WORDS, oracle_compare, qhat_group)
from .zorn import (ZornMatrix, embed_m10, find_nonassociative_triple, verify_alternative,
                   verify_embedding, verify_norm_criterion, zorn, zorn_identity)

__version__ = "0.1.0"
