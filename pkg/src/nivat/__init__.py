"""Pattern complexity, generating sets and periodicity of two-dimensional configurations."""
from .complexity import (ComplexityTable, PatternLanguage, Shape, collect_patterns, complexity,
                         discrepancy, entropy_bound_check, is_generated, rect_complexity_table)
from .config import (Alphabet, GeneratorSpec, Rect, WindowConfiguration, load_grid, materialize,
                     parse_grid, save_grid)
from .deduction import (PartialColoring, deduce_fixpoint, detect_periods_2d, fine_wilf_reconstruct,
                        fine_wilf_sharpness, morse_hedlund_check, row_fill, unique_extension_check)
from .errors import NivatError
from .expansiveness import (classify_trichotomy, candidate_directions, determining_set,
                            expansive_certificate, scan_nonexpansive)
from .generating import (find_balanced_set, find_generating_set, find_minimal_low_discrepancy,
                         find_strong_generating_set, thin_generating_set, verify_generating,
                         weak_generating_set)
from .geometry import (ConvexLatticeSet, DirectedEdge, DirectedRationalLine, Point, UnimodularMap,
                       border, convex_lattice_set, ext_w, rectangle, unimodular_to_vertical)

__version__ = "0.1.0"
