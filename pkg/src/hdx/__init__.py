"""High-dimensional expander toolkit: complexes, expansion constants, models."""

from .complexes import (SimplicialComplex, from_mfl_json, maximal_faces,
                        read_complex, to_mfl_json, write_complex)
from .errors import (AbortedGreedy, DegenerateSimplexError, DimensionError,
                     DivisibilityError, ExactnessUnavailable, HdxError,
                     MissingFaceError, NotInL200Error, PurityError,
                     RangeError, RegularityError, SizeCapError,
                     UnknownTypeError)
from .f2 import CohomologyReport, F2Cochain, F2Complex
from .models import (DEFAULT_SEED, ModelSpec, SweepResult, SweepSpec,
                     derive_rng, derive_seed, gen_erdos_renyi,
                     gen_linial_meshulam, gen_partition_Y, gen_steiner_W,
                     generate, steiner_greedy, threshold_sweep,
                     wilson_interval)
from .overlap import (OverlapEstimate, affine_overlap,
                      geometric_expansion_estimate, point_in_simplex,
                      uniform_placement)
from .reports import analyze_complex, sweep_to_csv, sweep_to_json, to_json
from .spectral import (CheegerBuserReport, GarlandReport, LiftDecayProfile,
                       OperatorBundle, RamanujanReport, cheeger_constant,
                       check_cheeger_buser, fano_heawood_report,
                       garland_check, heawood_graph, is_spectral_expander,
                       lift_decay_profile, ramanujan_certify, solve_p,
                       weyl_p)

__version__ = "0.1.0"
