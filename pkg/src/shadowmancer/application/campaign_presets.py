"""Ready-made campaigns: chain strings, honeycomb plaquettes, multipoint bond correlators."""

import math
from typing import Callable, Dict, Tuple

from ..domain.model.campaign_config import CampaignConfig
from ..domain.model.errors import ConfigError


def string_1d() -> CampaignConfig:
    """Even-length Z strings on a 12-site chain, two staggered Bell dimer coverings."""
    return CampaignConfig.from_dict(
        {
            "name": "string-1d",
            "state": {"preset": "cluster-1d", "num_qubits": 12},
            "protocols": [
                {"covering": {"kind": "dimers", "parity": "even"}, "family": "bell", "label": "bell-even"},
                {"covering": {"kind": "dimers", "parity": "odd"}, "family": "bell", "label": "bell-odd"},
            ],
            "operators": {"generator": "contiguous", "lengths": [2, 4, 6], "letters": "Z"},
            "shots": 20000,
        }
    )


def honeycomb() -> CampaignConfig:
    """All Z plaquettes of the 3x3 honeycomb torus with two Kekule dimer coverings."""
    return CampaignConfig.from_dict(
        {
            "name": "honeycomb",
            "state": {"preset": "computational-zero", "num_qubits": 18},
            "protocols": [
                {"covering": {"kind": "honeycomb", "size": 3, "orientation": 0}, "family": "bell", "label": "kekule-0"},
                {"covering": {"kind": "honeycomb", "size": 3, "orientation": 1}, "family": "bell", "label": "kekule-1"},
            ],
            "operators": {"generator": "plaquettes", "size": 3, "letters": "Z"},
            "shots": 20000,
        }
    )


def multipoint() -> CampaignConfig:
    """Two-point products of dimer terms on a 12-site chain."""
    return CampaignConfig.from_dict(
        {
            "name": "multipoint",
            "state": {"preset": "ghz", "num_qubits": 12},
            "protocols": [{"covering": {"kind": "dimers", "parity": "even"}, "family": "bell", "label": "bell-even"}],
            "operators": {"generator": "bonds", "points": 2},
            "shots": 20000,
        }
    )


def tunable_1d() -> CampaignConfig:
    """Short strings of every length under a partially entangled dimer basis."""
    return CampaignConfig.from_dict(
        {
            "name": "tunable-1d",
            "state": {"preset": "random-dense", "num_qubits": 8, "seed": 7},
            "protocols": [
                {
                    "covering": {"kind": "dimers", "parity": "even"},
                    "family": "tunable",
                    "delta": math.log(11.0 / 8.0),
                    "label": "tunable",
                }
            ],
            "operators": {"generator": "contiguous", "lengths": [1, 2, 3], "letters": "Z"},
            "shots": 20000,
        }
    )


def ghz_chain() -> CampaignConfig:
    """Block-aligned strings measured in the GHZ basis of three-qubit blocks."""
    return CampaignConfig.from_dict(
        {
            "name": "ghz-chain",
            "state": {"preset": "ghz", "num_qubits": 6},
            "protocols": [{"covering": {"kind": "n-mer", "block_size": 3}, "family": "ghz", "label": "ghz3"}],
            "operators": {"labels": ["XXXIII", "ZZIIII", "IZZIII", "ZZZZZZ", "XXXXXX"]},
            "shots": 20000,
        }
    )


CAMPAIGN_PRESETS: Dict[str, Tuple[str, Callable[[], CampaignConfig]]] = {
    "string-1d": ("even-k contiguous Z strings, two dimer coverings of an open chain", string_1d),
    "honeycomb": ("all Z plaquettes of the L=3 honeycomb torus, two Kekule coverings", honeycomb),
    "multipoint": ("p=2 bond correlators on an even dimer covering", multipoint),
    "tunable-1d": ("strings of length 1..3 under the tunable basis at delta=ln(11/8)", tunable_1d),
    "ghz-chain": ("GHZ-3 block measurements of a six-qubit GHZ state", ghz_chain),
}


def campaign_preset(name: str) -> CampaignConfig:
    try:
        return CAMPAIGN_PRESETS[name][1]()
    except KeyError as exc:
        known = ", ".join(sorted(CAMPAIGN_PRESETS))
        raise ConfigError("Unknown campaign preset", {"preset": name, "known": known}) from exc
