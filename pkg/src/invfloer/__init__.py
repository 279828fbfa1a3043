"""Exact algebra for involutive Floer complexes over F2[U], F2[u,v] and F2[U,Q]/Q^2."""

from .complex import ChainMap, ComplexError, FreeComplex, Generator
from .homology import GradedHomology, homology
from .hypercube import Hyperbox, compress, stack, validate_hyperbox
from .involutive import EnhancedMorphism, IotaComplex, build_cfi, validate_iota_complex
from .io import ParseError, load, loads, save, serialize
from .knots import IotaKComplex, validate_iota_k
from .ring import Coefficient, Ring, RingError
from .surgery import build_cone, build_involutive_cone, cobordism_map_J

__version__ = "0.1.0"

__all__ = [
    "ChainMap", "Coefficient", "ComplexError", "EnhancedMorphism", "FreeComplex", "Generator",
    "GradedHomology", "Hyperbox", "IotaComplex", "IotaKComplex", "ParseError", "Ring", "RingError",
    "build_cfi", "build_cone", "build_involutive_cone", "cobordism_map_J", "compress", "homology",
    "load", "loads", "save", "serialize", "stack", "validate_hyperbox", "validate_iota_complex",
    "validate_iota_k",
]
