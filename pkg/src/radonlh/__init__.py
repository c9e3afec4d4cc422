"""Radon transforms on lines and hyperplanes: forward maps, duals and inversions."""

from . import errors
from .dual_transform import dual_apply, dual_function, dual_invert_even, dual_invert_pointwise
from .fracint import FractionalOrder, RadialSamples, ek_derivative, ek_integral, kappa, marchaud_limit, marchaud_value
from .geometry import AffinePlane, Hyperplane, Line, LineCluster, nu_map
from .kelvin_route import KelvinInverter, WeightedClassParams, build_phi, kelvin_invert, kelvin_invert_marchaud, rj_forward, rj_meanvalue
from .radon_line import HyperplaneFunction, QuasiRadialFunction, radon_forward, radon_forward_quasiradial, radon_invert
from .spherical import build_grid, funk_forward, funk_inverse_abel, funk_inverse_spectral

__version__ = "0.1.0"
