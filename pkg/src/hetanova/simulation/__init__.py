"""
Monte Carlo size, power and robustness studies for hetanova
"""

from hetanova.simulation.families import ErrorFamily, FamilyName
from hetanova.simulation.generate import SimulationConfig, config_from_dict, generate_dataset
from hetanova.simulation.presets import list_presets, load_config, load_preset
from hetanova.simulation.study import SimulationResult, TestTally, run_study, size_power_grid

__all__ = [
    "ErrorFamily",
    "FamilyName",
    "SimulationConfig",
    "SimulationResult",
    "TestTally",
    "config_from_dict",
    "generate_dataset",
    "list_presets",
    "load_config",
    "load_preset",
    "run_study",
    "size_power_grid",
]
