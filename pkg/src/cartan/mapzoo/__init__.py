from .core import (
    BranchError,
    ComposedMap,
    HoloMap,
    MapComponent,
    PoleError,
    compose,
    degree,
    leading_components,
    lincomb,
    pad_zero,
    rotate,
)
from .families import (
    ball_proper_generators,
    build_canonical,
    build_HG,
    build_I,
    build_I_family4,
    build_MNk,
    build_polynomial_isometry,
    build_R,
    build_WG,
    homogeneous_map,
    identity_map,
    linear_embedding_2n,
    monomial_map,
    whitney_map,
)
from .gaps import GapIntervals, gap_intervals

__all__ = [
    "BranchError", "ComposedMap", "GapIntervals", "HoloMap", "MapComponent", "PoleError",
    "ball_proper_generators", "build_HG", "build_I", "build_I_family4", "build_MNk",
    "build_R", "build_WG", "build_canonical", "build_polynomial_isometry", "compose",
    "degree", "gap_intervals", "homogeneous_map", "identity_map", "leading_components",
    "lincomb", "linear_embedding_2n", "monomial_map", "pad_zero", "rotate", "whitney_map",
]
