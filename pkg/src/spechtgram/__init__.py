"""Exact Gram matrices of Specht modules for Hecke algebras of symmetric
groups: elementary divisors over Q[q,q^-1], F_p[q,q^-1] and Z at q = 1,
divisible-diagonalizability certificates for hook shapes, and
non-diagonalizability obstruction searches."""

from .coxeter import Perm, block_swap, column_reading_permutation, distinguished_reps
from .gram import (
    GramMatrix,
    PermutationModule,
    SignedPermutationModule,
    gram_matrix,
    gram_rank_at,
    gram_scaling_constant,
    hook_elementary_divisors,
    mixed_gram_matrix,
    signed_dual_vector,
    signed_specht_vector,
    specht_vectors,
)
from .hecke import HeckeElt, antisymmetrizer, specht_generator_elt, symmetrizer
from .pipeline import (
    CertificationError,
    conjugate_duality,
    gram_det_q,
    gram_divisors,
    gram_divisors_fp,
    gram_divisors_q,
    gram_divisors_z1,
    hook_certificate,
)
from .qlaurent import (
    GF,
    QQ,
    ZZ,
    CoeffRing,
    LaurentPoly,
    canonical,
    cyclo_display,
    cyclotomic,
    hook_polynomial,
    quantum_factorial,
    quantum_integer,
)
from .snf import (
    ElementaryDivisors,
    JumpChain,
    ObstructionReport,
    divisible_diag_certificate,
    jump_format,
    minor_ideal_check,
    modp_obstruction,
    q1_obstruction,
    smith_field_laurent,
    smith_integer,
    verify_witness,
)
from .tableaux import Partition, Tableau, PairTableau, standard_tableaux

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
