"""Exact pathwise solutions of stochastic KdV-Burgers equations with
time-dependent coefficients, verified against closed-form Gaussian laws and
an independent Euler-Maruyama oracle."""

from .coeffs import CoeffFn, Const, Exp, Power, Scale, Sum, parse
from .config import RunSpec, parse_runspec, runspec_to_text
from .det_solutions import (ConstantProfile, LogisticFront, Profile,
                            SampledProfile, TravelingWave, WaveParams,
                            logistic_burgers, mol_solve, pde_residual,
                            traveling_wave)
from .fields import FieldTrajectory, field_from_csv, field_to_csv
from .grids import SpatialGrid, TimeGrid
from .ito import (IntegralPath, ito_integral, ito_integral_ibp,
                  kernel_integral, kernel_integral_path, time_integral_W)
from .paths import (BrownianPath, path_from_csv, path_to_csv, refine,
                    sample_brownian)
from .processes import GaussianLaw, LangevinProcess, LinearSDEProcess
from .spde_exact import (Scenario, r_factor, solve, solve_additive,
                         solve_advection, solve_multiplicative)
from .spde_numeric import OracleConfig, compare, em_solve

__version__ = "0.1.0"
