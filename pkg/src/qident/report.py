"""Verification reports: one schema for every CLI command.

Reports are deterministic byte-for-byte for fixed inputs: wall time and
backend diagnostics only appear behind the --timings flag.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

ENGINE_VERSION = "qident 0.1.0"

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2


@dataclass
class VerificationReport:
    command: str
    parameters: dict
    verdict: str = "equal"          # equal | mismatch | holds | violation | info
    detail: dict = field(default_factory=dict)
    lines: list = field(default_factory=list)   # extra report body lines
    notes: list = field(default_factory=list)
    wall_time: float = None

    @property
    def passed(self):
        return self.verdict in ("equal", "holds", "info")

    @property
    def exit_code(self):
        return EXIT_OK if self.passed else EXIT_MISMATCH

    def add_mismatch(self, mism, kind="mismatch"):
        """Record a series/NC mismatch with its exact location."""
        self.verdict = kind
        self.detail = {
            "q_exponent": str(mism.qexp),
            "charges": list(getattr(mism, "charges", ()) or
                            getattr(mism, "exps", ())),
            "lhs_coefficient": mism.coeff_a,
            "rhs_coefficient": mism.coeff_b,
        }

    def to_text(self, timings=False) -> str:
        out = [f"command: {self.command}", f"engine: {ENGINE_VERSION}"]
        for key, val in self.parameters.items():
            out.append(f"{key}: {val}")
        out.append(f"verdict: {self.verdict}")
        if self.detail:
            loc = ", ".join(f"{k}={v}" for k, v in sorted(self.detail.items()))
            out.append(f"location: {loc}")
        out.extend(self.lines)
        if self.notes:
            out.append("notes:")
            for n in self.notes:
                out.append(f"  - {n}")
        if timings and self.wall_time is not None:
            out.append(f"wall time: {self.wall_time:.3f}s")
        return "\n".join(out) + "\n"

    def to_json(self, timings=False) -> str:
        payload = {
            "command": self.command,
            "engine": ENGINE_VERSION,
            "parameters": {k: str(v) for k, v in self.parameters.items()},
            "verdict": self.verdict,
            "detail": self.detail,
            "report": self.lines,
            "notes": self.notes,
            "exit_code": self.exit_code,
        }
        if timings and self.wall_time is not None:
            payload["wall_time_seconds"] = round(self.wall_time, 3)
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
