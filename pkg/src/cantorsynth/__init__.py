"""Exact synthesis and verification of stage-certified homeomorphisms of
Cantor space, with the ordered variant and split-space lifting."""

from .points import (
    EpPoint,
    SetPresentation,
    TailClass,
    classify_q,
    compare,
    deinterleave,
    enumerate_tail_class,
    ep,
    interleave,
    parse_point,
    format_point,
    saturate,
    silver_embed,
    tail_equiv,
)
from .clopen import ClopenSet, combine, interval_decompose, radial_partition
from .conemaps import (
    ConePiece,
    PiecewiseConeHomeo,
    SingularAssignment,
    compose,
    monotone_at,
    star_order_iso,
)
from .krcover import KRCover, build_kr_cover, combination_map, verify_kr_cover
from .engine import (
    CdhInstance,
    OrderedInstance,
    SynthesisRun,
    certify,
    choose_envelopes,
    gdelta_witness,
)
from .arrow import (
    ArrowFamily,
    ArrowInstance,
    ArrowPoint,
    ArrowPresentation,
    arrow_cdh_synthesize,
    arrow_compare,
    arrow_project,
    lift,
    standard_arrow_instance,
)
from .instances import standard_ep_instance, standard_ordered_instance

__all__ = [
    "ArrowFamily",
    "ArrowInstance",
    "ArrowPoint",
    "ArrowPresentation",
    "CdhInstance",
    "ClopenSet",
    "ConePiece",
    "EpPoint",
    "KRCover",
    "OrderedInstance",
    "PiecewiseConeHomeo",
    "SetPresentation",
    "SingularAssignment",
    "SynthesisRun",
    "TailClass",
    "arrow_cdh_synthesize",
    "arrow_compare",
    "arrow_project",
    "build_kr_cover",
    "certify",
    "choose_envelopes",
    "classify_q",
    "combination_map",
    "combine",
    "compare",
    "compose",
    "deinterleave",
    "enumerate_tail_class",
    "ep",
    "format_point",
    "gdelta_witness",
    "interleave",
    "interval_decompose",
    "lift",
    "monotone_at",
    "parse_point",
    "radial_partition",
    "saturate",
    "silver_embed",
    "standard_arrow_instance",
    "standard_ep_instance",
    "standard_ordered_instance",
    "star_order_iso",
    "tail_equiv",
    "verify_kr_cover",
]
