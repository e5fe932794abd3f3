"""Exact dynamics of overlapping two-map iterated function systems on [0, 1]."""

from .errors import (DepthError, DimensionError, DomainError, IFSError, InsufficientData,
                     LengthMismatch, MaskRangeError, NoRootFound, NotCertified, RangeError,
                     SingularError, VariantMismatch)
from .kneading import (EntropyResult, KneadingSeries, ReplayReport, RootEnclosure,
                       conjugate_uniform, entropy, kneading_series, pi_uniform,
                       replay_critical, smallest_root, uniform_from_result)
from .maps import (MaskedSystem, MonotoneMap, OverlappingIFS, UniformSystem, ValidationReport,
                   Variant, contraction_factor, evaluate, invert, validate)
from .picture import read_pnm, warp_1d, warp_image, write_pnm
from .symbolic import (CriticalPair, Itinerary, Ordering, Verdict, brute_force_words,
                       count_words, critical_itineraries, entropy_estimate, enumerate_words,
                       is_admissible, itinerary, lex_compare)
from .transform import (HomeoVerdict, Outcome, PointEnclosure, address_space_nested,
                        check_homeomorphism, coding_point, fractal_transform, round_trip)

__version__ = "0.1.0"
