"""Lie algebroids, their enveloping algebras and star products, and finite
groupoid convolution algebras, computed exactly over the rationals."""

from .algebroid import (Algebroid, AxiomReport, Section, UniverseError, adiabatic, bracket,
                        check_axioms, poisson)
from .groupoid import (EquivariantBundle, FiniteGroupoid, InvarianceError, InvariantFamily,
                       ReducedKernel, check_groupoid, compose_families, convolve,
                       family_from_kernel, kernel_from_family, represent,
                       transformation_groupoid)
from .poly import Poly, parse_poly
from .uea import (EnvelopingAlgebra, FreeWord, UEAElement, enveloping, inject_function,
                  inject_section, normal_form, principal_symbol, quantize, star, symbol)

__version__ = "0.1.0"
