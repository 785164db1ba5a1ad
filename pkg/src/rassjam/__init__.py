"""Random antenna subset selection (RASS) jamming against eigenprojection
suppression in a multistatic radar system."""

__version__ = "0.1.0"

from .scenario import (ArrayGeometry, GeometrySolution, Scenario, load_scenario, default_scenario,  # noqa: E402
                       read_scenario, solve_geometry)
from .waveform import (BasebandSignal, WaveformSpec, derive_power_levels, gen_lfm,  # noqa: E402
                       gen_noise_jamming, steering_vector)
from .jammer import JammingGains, SwitchRealization, rass_gains, sample_switch, traditional_gains  # noqa: E402
from .receiver import SnapshotMatrix, synthesize  # noqa: E402
from .suppression import (EigenSystem, RangeProfile, SubspaceSplit, eig_hermitian, eigenproject,  # noqa: E402
                          output_jsnr_empirical, range_profile, sample_covariance, split_subspaces)
from .analysis import (JsnrReport, PerturbationResult, jsnr_monte_carlo, perturb_eigs,  # noqa: E402
                       prop1_covariance, prop2_jsnr, sweep, traditional_jamming_covariance)
