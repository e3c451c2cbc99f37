"""Generic eigenstructures of Hermitian matrix pencils under congruence."""
from .bundles import (BundleDescriptor, codim_closed_form, count_formula, enumerate_bounded,
                      enumerate_regular, leading_inertia, realize, weyr_dominates, weyr_of)
from .canonical import (HKCF, ConjPair, InfJordan, RealJordan, Singular, build_block,
                        build_hkcf, random_congruence_sample)
from .codim import CodimResult, orbit_codim_bruteforce, realify
from .errors import HermikronError
from .infer import (StructureReport, classify_real, eigs_regular, eigs_singular, full_report,
                    match_descriptor, minimal_index_profile, sign_characteristic_simple)
from .pencil import (HermitianPencil, Inertia, MatrixPencil, congruence, determinant,
                     direct_sum, inertia_of, normal_rank)

__version__ = "0.1.0"
