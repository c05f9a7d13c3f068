"""beamsim: link-level simulator and power model for doubly-massive mmWave
MIMO downlinks, comparing analog, hybrid, and fully digital beamforming."""

__version__ = "0.1.0"

from .arrays import ArrayGeometry, Direction, beam_gain, upa_steering
from .beamform import (ArchitectureConfig, BeamformerSet, RankDeficiencyError,
                       allocate_power, build_beamformers, effective_channels,
                       hybrid_factorize, precoder_cm, precoder_zf, rx_combiners)
from .channel import (ChannelMatrix, ClusterModel, PathSet, ScenarioConfig,
                      drop_channels, drop_users, free_space_path_loss,
                      synthesize_channel)
from .experiment import (ExperimentConfig, FrontierPoint, FrontierResult,
                         PowerSweepConfig, energy_efficiency, run_frontier,
                         run_power_sweep)
from .link import (LinkBudget, RateReport, noise_power, stream_sinr,
                   sum_throughput)
from .power import (ComponentCatalog, DevicePowerSpec, PowerBreakdown,
                    converter_power, effective_bits, pa_power,
                    rx_tx_crossover, transceiver_power)

__all__ = [
    "ArrayGeometry", "Direction", "beam_gain", "upa_steering",
    "ArchitectureConfig", "BeamformerSet", "RankDeficiencyError",
    "allocate_power", "build_beamformers", "effective_channels",
    "hybrid_factorize", "precoder_cm", "precoder_zf", "rx_combiners",
    "ChannelMatrix", "ClusterModel", "PathSet", "ScenarioConfig",
    "drop_channels", "drop_users", "free_space_path_loss", "synthesize_channel",
    "ExperimentConfig", "FrontierPoint", "FrontierResult", "PowerSweepConfig",
    "energy_efficiency", "run_frontier", "run_power_sweep",
    "LinkBudget", "RateReport", "noise_power", "stream_sinr", "sum_throughput",
    "ComponentCatalog", "DevicePowerSpec", "PowerBreakdown", "converter_power",
    "effective_bits", "pa_power", "rx_tx_crossover", "transceiver_power",
]
