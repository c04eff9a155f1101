"""Technology parameters: interconnect parasitics and linear buffer model.

Representative 45nm-class defaults. Resistances in ohms, capacitances in fF,
times in ps, lengths in um. Buffers are linear drivers: output resistance
scales down with drive strength, output/input capacitance scale up.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict, replace


@dataclass(frozen=True)
class TechParams:
    wire_res_per_um: float = 0.12
    wire_cap_per_um: float = 0.2
    buf_out_res: float = 60.0       # ohm, at unit drive
    buf_out_cap: float = 2.0        # fF, at unit drive
    buf_in_cap: float = 1.5         # fF, at unit drive
    buf_intrinsic_delay: float = 15.0   # ps added to the input arrival
    buf_slew_gain: float = 1.0      # output ramp ps per ps of input slew
    drive_strengths: tuple[float, ...] = (1.0, 2.0, 4.0, 8.0)

    def __post_init__(self):
        for name in ("wire_res_per_um", "wire_cap_per_um", "buf_out_res",
                     "buf_out_cap", "buf_in_cap"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")
        if not self.drive_strengths:
            raise ValueError("drive_strengths must be non-empty")
        if list(self.drive_strengths) != sorted(self.drive_strengths):
            raise ValueError("drive_strengths must be sorted ascending")
        if self.drive_strengths[0] <= 0:
            raise ValueError("drive_strengths must be strictly positive")

    def buffer_out_res(self, drive: float) -> float:
        return self.buf_out_res / drive

    def buffer_out_cap(self, drive: float) -> float:
        return self.buf_out_cap * drive

    def buffer_in_cap(self, drive: float) -> float:
        return self.buf_in_cap * drive

    def to_dict(self) -> dict:
        d = asdict(self)
        d["drive_strengths"] = list(self.drive_strengths)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "TechParams":
        d = dict(d)
        d["drive_strengths"] = tuple(d["drive_strengths"])
        return cls(**d)

    def scaled(self, **overrides) -> "TechParams":
        return replace(self, **overrides)


DEFAULT_TECH = TechParams()
