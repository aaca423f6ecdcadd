from .quadrature import (
    QuadratureError,
    QuadResult,
    integrate_adaptive,
    integrate_oscillatory,
    integrate_pv_regulated,
    integrate_segments,
    iterated_average,
    richardson_to_zero,
)
from .linalg import jacobi_eigh
from .specfun import (
    EULER_GAMMA,
    bessel_j0,
    bessel_j01,
    bessel_j0_zeros,
    bessel_j1,
    cos_integral,
    sin_integral,
)
from .linalg import jacobi_eigh
