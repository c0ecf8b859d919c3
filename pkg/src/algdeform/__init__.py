"""Exact deformation complexes and rigidity certificates for algebra laws."""

from .exactlin import (QuotientSpace, Rat, RatMatrix, Subspace, image, kernel,
                       quotient, rank, solve)
from .laws import (Law, LawSpace, OperadType, Symmetry, act, delta_matrix,
                   derivations, identity_value, inf_act)
from .presentations import (QdualMode, QuadraticPresentation,
                            custom_presentation, presentation)
from .incidence import (CohomologyReport, FiberComplex, NotOnLocus,
                        build_complex, ce_truncation, cohomology, rank_profile)
from .obstruction import (AnisotropyVerdict, LiftResult, QuadraticObstruction,
                          anisotropy, check_well_defined, kappa2,
                          second_order_lift)
from .gram import GramForm, gram_orbit_constancy, radical_containment
from .binaryforms import (BinForm, build_richardson, jacobiator_ratio_test,
                          phi_cocycle, richardson_anisotropy, transvectant)
from .charcalc import (TorusAction, ch_identity_check, graded_cohomology,
                       induced_character)

__version__ = "0.1.0"
