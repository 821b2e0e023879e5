"""Universal localisations of path algebras of finite acyclic quivers.

Exact linear algebra over F_p and Q, quiver representations with their
exact-category constructions, Hom/Ext calculus, torsion theories and
localisation chains, and the monoid of finitely generated projectives
over the localised algebra.
"""

from .errors import (
    BudgetExceededError,
    HomPerpRejection,
    InconclusiveError,
    NonStabilizingError,
    ParseError,
    QuiverlocError,
    UnsupportedFieldError,
)
from .exactlin import FieldSpec, Mat, kernel_basis, rref, solve
from .quiverrep import (
    Quiver,
    Rep,
    RepMorphism,
    ShortExactSeq,
    cokernel,
    decompose,
    dimension_vector,
    direct_sum,
    enumerate_reps,
    euler_form,
    image,
    is_isomorphic,
    iso_witness,
    kernel,
    make_rep,
    projective_cover,
    projective_rep,
    pushout,
    simple_rep,
    submodule_enumerate,
    zero_rep,
)
from .homcalc import (
    ExtCocycle,
    ExtSpace,
    HomSpace,
    ext_space,
    extension_from_class,
    hom_space,
    is_bound,
    is_projective,
    sigma_to_generators,
    split_projective_map,
    universal_extension,
)
from .localise import (
    LocalizationChain,
    LocalizedAlgebra,
    WellPlacedGen,
    check_hom_perp_set,
    filt_membership,
    homperp_membership,
    induced_iso_test,
    is_perp,
    localize,
    localized_algebra,
    reduce_to_homperp,
    trace_torsion_submodule,
    verify_well_placed,
)
from .projmon import (
    K0Presentation,
    MonoidPresentation,
    fac_membership,
    generators_enumerate,
    is_early,
    is_late,
    k0_presentation,
    monoid_presentation,
    relproj_membership,
    s_related,
    smith_normal_form,
    strip_top,
    tor1,
    tor_iso_test,
)
from .cli import ProblemFile, parse_problem, run_command, serialize_problem

__version__ = "0.1.0"
