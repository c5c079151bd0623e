from .rings import parse_ring, spectrum, find_hom
from .hopf import (
    GroupScheme,
    GroupSchemeHom,
    cartier_dual,
    convolution_power,
    points,
)

__all__ = [
    "parse_ring",
    "spectrum",
    "find_hom",
    "GroupScheme",
    "GroupSchemeHom",
    "cartier_dual",
    "convolution_power",
    "points",
]
