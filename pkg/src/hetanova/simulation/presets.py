"""
Built-in and user simulation presets for hetanova

A preset expands to a list of configuration documents; overrides for the
replication counts and the seed are applied to every document before it is
parsed.
"""

import logging
from pathlib import Path

from hetanova.simulation.generate import SimulationConfig, config_from_dict
from hetanova.utils.config import get_config_path
from hetanova.utils.errors import InvalidConfig, UnknownPreset
from hetanova.utils.fs import read_json

# Configure logging
logger = logging.getLogger("hetanova")

# Cell sizes and variances, row-major over (i, j)
SIZES = {
    "N1": [5] * 6,
    "N2": [10] * 6,
    "N3": [3, 3, 4, 5, 6, 6],
    "N4": [4, 6, 8, 12, 16, 20],
    "N5": [25] * 6,
    "N6": [30, 20, 25, 35, 40, 30],
    "N7": [20, 25, 30, 35, 40, 45],
    "N8": [45, 40, 35, 30, 25, 20],
    "N9": [5] * 18,
    "N10": [10] * 18,
    "N11": [3] * 5 + [4] * 4 + [5] * 4 + [6] * 5,
    "N12": [4, 4, 4, 6, 6, 6, 8, 8, 8, 12, 12, 12, 16, 16, 16, 20, 20, 20],
    "N15": [10, 12, 14, 10, 12, 14],
    "N16": [6, 7, 8, 9, 10, 11],
    "N17": [10, 12, 14, 16] * 4,
    "N18": [8, 6, 7, 9, 10, 12, 14, 16, 10, 11, 12, 13, 8, 6, 7, 9],
    "N21": [10] * 6,
    "N22": [10, 10, 5, 5, 15, 15],
    "N23": [15] * 6 + [20] * 6 + [25] * 6,
    "N24": list(range(15, 33)),
    "N25": [25] * 6,
}

VARIANCES = {
    "rho1": [1] * 6,
    "rho2": [0.1] * 3 + [0.5] * 3,
    "rho3": [1] * 3 + [0.5] * 3,
    "rho4": [0.1, 0.2, 0.3, 0.4, 0.5, 1],
    "rho5": [0.3, 0.9, 0.4, 0.7, 0.5, 1],
    "rho6": [1] * 18,
    "rho7": [v / 10 for v in range(1, 10) for _ in range(2)],
    "rho8": [0.1, 0.2, 0.3, 0.4, 0.5] * 3 + [0.2, 0.3, 2],
    "rho9": [v for v in (0.1, 0.2, 0.3, 0.4, 0.5, 1) for _ in range(3)],
    "rho11": [0.01] * 3 + [0.05] * 3 + [0.1] * 3 + [0.5] * 3 + [0.6] * 3 + [0.8, 0.8, 1],
    "rho12": [1, 2, 3, 1, 2, 3],
    "rho13": [2] * 6,
    "rho14": [1, 2, 3, 4] * 4,
    "rho15": [1] * 16,
    "rho16": [0.1] * 3 + [0.5] * 3,
    "rho17": [0.3, 0.9, 0.4, 0.7, 0.5, 1],
    "rho18": [v / 10 for v in range(1, 9) for _ in range(2)] + [0.9, 1],
}

BOOTSTRAP_PAIR = [("treatmentA", "lrt"), ("treatmentA", "mct")]
WITH_ASYMPTOTIC = [
    ("treatmentA", "lrt"),
    ("treatmentA", "alrt"),
    ("treatmentA", "mct"),
    ("treatmentA", "amct"),
]

# Alternatives for the last two treatment effects in the fixed-effect power tables
ALTERNATIVES = [(0, 0), (-0.1, 0.1), (0, 0.4), (0, 0.6), (0, 0.8), (0, 1)]

ROBUSTNESS_FAMILIES = {
    "mixture": {"name": "normal_mixture"},
    "t3": {"name": "student_t", "params": {"df": 3}},
    "weibull": {"name": "weibull", "params": {"shape": 5, "scale": 1}},
    "laplace": {"name": "laplace", "params": {"location": 0, "scale": 5}},
}


def _doc(id, a, b, sizes, variances, tests, **extra) -> dict:
    doc = {
        "id": id,
        "a": a,
        "b": b,
        "n": SIZES[sizes],
        "sigma2": VARIANCES[variances],
        "tests": [{"target": t, "method": m} for t, m in tests],
    }
    doc.update(extra)
    return doc


def _size_grid(name, a, b, sizes, variances, tests) -> list[dict]:
    return [
        _doc(f"{name}/{n}-{rho}", a, b, n, rho, tests)
        for n in sizes
        for rho in variances
    ]


def _power_curve(name, a, b, sizes, variances, alpha, beta, scales) -> list[dict]:
    return [
        _doc(
            f"{name}/{n}-{rho}/c={c:g}",
            a,
            b,
            n,
            rho,
            BOOTSTRAP_PAIR,
            alpha=alpha,
            beta=beta,
            c=c,
        )
        for n in sizes
        for rho in variances
        for c in scales
    ]


def _power_table(name, a, b, pairs) -> list[dict]:
    docs = []
    for rho, n in pairs:
        for last in ALTERNATIVES:
            alpha = [0.0] * (a - 2) + list(last)
            docs.append(
                _doc(
                    f"{name}/{rho}-{n}/alpha=({last[0]:g},{last[1]:g})",
                    a,
                    b,
                    n,
                    rho,
                    BOOTSTRAP_PAIR,
                    alpha=alpha,
                    c=1.0,
                )
            )
    return docs


def _config1():
    return _size_grid(
        "table1/config1", 2, 3, ["N1", "N2", "N3", "N4"],
        ["rho1", "rho2", "rho3", "rho4", "rho5"], BOOTSTRAP_PAIR,
    )


def _config2():
    return _size_grid(
        "table1/config2", 2, 3, ["N5", "N6", "N7", "N8"],
        ["rho1", "rho2", "rho3", "rho4", "rho5"], WITH_ASYMPTOTIC,
    )


def _config3():
    return _size_grid(
        "table1/config3", 6, 3, ["N9", "N10", "N11", "N12"],
        ["rho6", "rho7", "rho8", "rho9", "rho11"], BOOTSTRAP_PAIR,
    )


def _config4():
    scales = [k / 2 for k in range(9)]
    return _power_curve(
        "table2/config4", 3, 2, ["N15", "N16"], ["rho12", "rho13"],
        [0.0, -0.2, 0.2], [0.0, 0.0], scales,
    )


def _config5():
    return _power_curve(
        "table2/config5", 4, 4, ["N17", "N18"], ["rho14", "rho15"],
        [1.0, 1.1, 1.2, 1.3], [-0.1, 0.1, 0.2, 0.2], [float(c) for c in range(7)],
    )


def _table5():
    pairs = [("rho16", "N21"), ("rho17", "N21"), ("rho16", "N22"), ("rho17", "N22")]
    return _power_table("table5", 2, 3, pairs)


def _table6():
    return _power_table("table6", 6, 3, [("rho18", "N23"), ("rho18", "N24")])


def _robustness(family):
    def build():
        return [
            _doc(
                f"robustness/{family}",
                3,
                2,
                "N25",
                "rho12",
                BOOTSTRAP_PAIR,
                error_family=ROBUSTNESS_FAMILIES[family],
            )
        ]

    return build


BUILTIN_PRESETS = {
    "table1/config1": _config1,
    "table1/config2": _config2,
    "table1/config3": _config3,
    "table2/config4": _config4,
    "table2/config5": _config5,
    "table3": _config1,
    "table4": _config2,
    "table5": _table5,
    "table6": _table6,
    **{f"robustness/{family}": _robustness(family) for family in ROBUSTNESS_FAMILIES},
}


def _user_presets() -> dict[str, Path]:
    preset_dir = get_config_path("presets")
    if not preset_dir.is_dir():
        return {}
    return {path.stem: path for path in sorted(preset_dir.glob("*.json"))}


def list_presets() -> list[str]:
    """Names of the built-in presets followed by user presets."""
    user = [name for name in _user_presets() if name not in BUILTIN_PRESETS]
    return list(BUILTIN_PRESETS) + user


def _documents(data) -> list[dict]:
    if isinstance(data, dict) and "configs" in data:
        data = data["configs"]
    if isinstance(data, dict):
        return [data]
    if isinstance(data, list):
        return data
    raise InvalidConfig("a config file must hold an object, a list, or {\"configs\": [...]}")


def _parse(docs, outer_reps=None, inner_reps=None, seed=None) -> list[SimulationConfig]:
    overrides = {
        key: value
        for key, value in (("outer_reps", outer_reps), ("inner_reps", inner_reps), ("seed", seed))
        if value is not None
    }
    return [config_from_dict({**doc, **overrides}) for doc in docs]


def load_config(path, outer_reps=None, inner_reps=None, seed=None) -> list[SimulationConfig]:
    """
    Read simulation configs from a JSON file.

    Args:
        path: file holding one config, a list of configs, or {"configs": [...]}
        outer_reps: override for every config
        inner_reps: override for every config
        seed: override for every config

    Returns:
        list[SimulationConfig]: parsed configs
    """
    path = Path(path)
    if not path.is_file():
        raise InvalidConfig(f"config file not found: {path}")
    try:
        data = read_json(path)
    except ValueError as e:
        raise InvalidConfig(f"{path} is not valid JSON: {e}") from e
    logger.debug(f"Loading simulation config {path}")
    return _parse(_documents(data), outer_reps, inner_reps, seed)


def load_preset(name: str, outer_reps=None, inner_reps=None, seed=None) -> list[SimulationConfig]:
    """Expand a built-in or user preset into its configs."""
    if name in BUILTIN_PRESETS:
        return _parse(BUILTIN_PRESETS[name](), outer_reps, inner_reps, seed)
    user = _user_presets()
    if name in user:
        return load_config(user[name], outer_reps, inner_reps, seed)
    raise UnknownPreset(f"unknown preset {name!r}; available: {', '.join(list_presets())}")
