"""Named presets: every lattice form and jet presentation the CLI ships."""

from __future__ import annotations

import re

from . import jets, nahm

_NAHM_FIXED = {
    "b2-char": nahm.build_b2_char_form,
    "b2-quintuple": nahm.build_b2_quintuple_form,
    "d4": nahm.build_d4_form,
    "d4-prime": lambda: nahm.build_d4_form(primed=True),
    "cartan-d4": lambda: nahm.build_cartan_side("D", 4),
}


def nahm_preset(name: str) -> nahm.NahmSumSpec:
    """Resolve cartan-a{n}, B-a{n}, Bprime-a{n}, b2-char, b2-quintuple,
    d4, d4-prime, cartan-d4."""
    if name in _NAHM_FIXED:
        return _NAHM_FIXED[name]()
    m = re.fullmatch(r"cartan-a(\d+)", name)
    if m:
        return nahm.build_cartan_side("A", int(m.group(1)))
    m = re.fullmatch(r"B-a(\d+)", name)
    if m:
        return nahm.build_B_form(int(m.group(1)))
    m = re.fullmatch(r"Bprime-a(\d+)", name)
    if m:
        return nahm.build_Bprime_form(int(m.group(1)))
    raise KeyError(f"unknown form preset {name!r}")


def jet_preset(name: str, d4_reading="printed") -> jets.JetPreset:
    """Resolve sln-a{n}, sln-b{n}, sln-h{n}, b2-a, b2-b, d4-d, power-{p}."""
    if name == "b2-a":
        return jets.b2_A()
    if name == "b2-b":
        return jets.b2_B()
    if name == "d4-d":
        return jets.d4_D(d4_reading)
    m = re.fullmatch(r"sln-([abh])(\d+)", name)
    if m:
        builder = {"a": jets.sln_A, "b": jets.sln_B, "h": jets.sln_H}[m.group(1)]
        return builder(int(m.group(2)))
    m = re.fullmatch(r"power-(\d+)", name)
    if m:
        return jets.power_preset(int(m.group(1)))
    raise KeyError(f"unknown jet preset {name!r}")


def nahm_preset_names():
    return ["cartan-a{n}", "cartan-d4", "B-a{n}", "Bprime-a{n}",
            "b2-char", "b2-quintuple", "d4", "d4-prime"]


def jet_preset_names():
    return ["sln-a{n}", "sln-b{n}", "sln-h{n}", "b2-a", "b2-b", "d4-d", "power-{p}"]
