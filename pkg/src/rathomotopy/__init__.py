"""Rational homotopy groups of generalised symmetric spaces."""
from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source tree without an install
    __version__ = "0.0.0"

from .cgda import FreeCGDA, MinimalModelSignature, RankTable, build_cartan_algebra, sullivan_reduce
from .embedding import SpaceDescriptor, SummandSpec, catalog, find_family
from .homotopy import MethodReport, cross_check, ranks_via_cartan, ranks_via_theorem, symmetric_table
from .liedata import SimpleType, exponents, kac_basis_matrix

__all__ = [
    "FreeCGDA", "MinimalModelSignature", "RankTable", "build_cartan_algebra", "sullivan_reduce",
    "SpaceDescriptor", "SummandSpec", "catalog", "find_family", "MethodReport", "cross_check",
    "ranks_via_cartan", "ranks_via_theorem", "symmetric_table", "SimpleType", "exponents",
    "kac_basis_matrix", "__version__",
]
