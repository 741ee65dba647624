"""Initial-data families used by the experiments."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import ComplexGrid1D

FAMILIES = ("sech", "gaussian", "zero")


@dataclass(frozen=True)
class InitialData:
    family: str
    amplitude: float = 0.5
    center: float = 0.0
    phase_slope: float = 0.0

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        s = x - self.center
        if self.family == "sech":
            env = 1.0 / np.cosh(s)
        elif self.family == "gaussian":
            env = np.exp(-s * s)
        else:
            env = np.zeros_like(s)
        return self.amplitude * env * np.exp(1j * self.phase_slope * x)

    def default_half_width(self, rel: float = 1e-10) -> float:
        """Smallest L with |q(+-L)| < rel * max|q| (plus the center offset)."""
        if self.family == "sech":
            half = np.arccosh(1.0 / rel)
        elif self.family == "gaussian":
            half = np.sqrt(-np.log(rel))
        else:
            half = 1.0
        return float(np.ceil(half + abs(self.center)))

    def sample(self, half_width: float | None = None, dx: float = 0.005) -> ComplexGrid1D:
        L = self.default_half_width() if half_width is None else float(half_width)
        n = int(round(2 * L / dx)) + 1
        return ComplexGrid1D.from_function(self, -L, L, n)

    def sample_periodic(self, half_width: float, n: int) -> ComplexGrid1D:
        return ComplexGrid1D.periodic(self, half_width, n)

    def to_dict(self) -> dict:
        return {"family": self.family, "amplitude": self.amplitude, "center": self.center,
                "phase_slope": self.phase_slope}

    @classmethod
    def from_dict(cls, d: dict) -> "InitialData":
        return cls(d["family"], float(d.get("amplitude", 0.5)), float(d.get("center", 0.0)),
                   float(d.get("phase_slope", 0.0)))


def sech_reflection_modulus(amplitude: float, z):
    """|r(z)| for q0 = A sech(x) in the defocusing problem (closed form).

    |r|^2 = sinh^2(pi A) / (cosh(pi (z - A)) cosh(pi (z + A))), which follows from
    a(z) = Gamma(1/2 - iz)^2 / (Gamma(1/2 - iz + iA) Gamma(1/2 - iz - iA)).
    """
    z = np.asarray(z, dtype=float)
    A = float(amplitude)
    return np.sqrt(np.sinh(np.pi * A) ** 2 / (np.cosh(np.pi * (z - A)) * np.cosh(np.pi * (z + A))))
