"""Julia set sampling for rational maps by backward iteration.

A rational map is stored as ascending complex coefficient lists.  Points
are generated by walking preimages backwards from a repelling fixed point:
every step solves f(w) = z for w, picks one root at random, and emits the
point once a burn-in prefix has been discarded.  Backward orbits
accumulate on the Julia set regardless of escape behaviour, which suits
maps with no polynomial escape structure.

This is the only module that uses floating-point arithmetic; chains are
generated sequentially from a single seeded generator, so equal seeds give
bit-identical output.
"""

from __future__ import annotations

import cmath
import random
from dataclasses import dataclass

import numpy as np


def _polyval(coeffs, z: complex) -> complex:
    out = 0j
    for c in reversed(coeffs):
        out = out * z + c
    return out


def _polyderiv(coeffs) -> tuple[complex, ...]:
    return tuple(k * c for k, c in enumerate(coeffs))[1:] or (0j,)


class RationalMap:
    """Quotient of two polynomials with complex coefficients, ascending."""

    def __init__(self, numerator, denominator):
        self.num = tuple(complex(c) for c in numerator)
        self.den = tuple(complex(c) for c in denominator)
        if all(abs(c) == 0 for c in self.den):
            raise ValueError("denominator is identically zero")
        self._dnum = _polyderiv(self.num)
        self._dden = _polyderiv(self.den)

    @property
    def degree(self) -> int:
        return max(len(self.num), len(self.den)) - 1

    def __call__(self, z: complex) -> complex:
        den = _polyval(self.den, z)
        if den == 0:
            return complex("inf")
        return _polyval(self.num, z) / den

    def derivative(self, z: complex) -> complex:
        n, d = _polyval(self.num, z), _polyval(self.den, z)
        dn, dd = _polyval(self._dnum, z), _polyval(self._dden, z)
        if d == 0:
            return complex("inf")
        return (dn * d - n * dd) / (d * d)

    def _roots(self, coeffs) -> list[complex]:
        # descending order for numpy, leading near-zeros trimmed
        desc = list(reversed(coeffs))
        scale = max(abs(c) for c in desc) or 1.0
        while desc and abs(desc[0]) < 1e-14 * scale:
            desc.pop(0)
        if len(desc) < 2:
            return []
        if len(desc) == 2:
            b, c = desc
            return [-c / b]
        if len(desc) == 3:
            a, b, c = desc
            disc = cmath.sqrt(b * b - 4 * a * c)
            if abs(b - disc) > abs(b + disc):
                disc = -disc
            top = -(b + disc) / 2
            first = top / a
            second = c / top if top != 0 else -b / a - first
            return [first, second]
        return [complex(r) for r in np.roots(desc)]

    def preimages(self, z: complex, tol: float = 1e-9) -> list[complex]:
        """All w with f(w) = z, Newton-polished to the tolerance."""
        coeffs = list(self.num) + [0j] * max(0, len(self.den) - len(self.num))
        for k, c in enumerate(self.den):
            coeffs[k] -= z * c
        roots = self._roots(coeffs)
        polished = []
        for w in roots:
            for _ in range(12):
                val = self(w) - z
                if abs(val) < tol:
                    break
                dv = self.derivative(w)
                if dv == 0 or not np.isfinite(dv):
                    break
                w = w - val / dv
            if abs(self(w) - z) < tol:
                polished.append(w)
        return polished

    def fixed_points(self) -> list[complex]:
        coeffs = list(self.num) + [0j] * (len(self.den) + 1 - len(self.num))
        for k, c in enumerate(self.den):
            coeffs[k + 1] -= c
        return self._roots(coeffs)

    def repelling_fixed_point(self) -> complex:
        fixed = self.fixed_points()
        if not fixed:
            raise ValueError("map has no finite fixed point")
        repelling = [w for w in fixed if abs(self.derivative(w)) > 1]
        if repelling:
            return max(repelling, key=lambda w: abs(self.derivative(w)))
        return max(fixed, key=lambda w: abs(self.derivative(w)))


@dataclass(frozen=True)
class RenderConfig:
    center: complex = 0j
    width: float = 4.0
    pixels_x: int = 400
    pixels_y: int = 400
    points: int = 100_000
    seed: int = 0
    burn_in: int = 100

    def __post_init__(self):
        if self.pixels_x <= 0 or self.pixels_y <= 0:
            raise ValueError("pixel dimensions must be positive")
        if self.points < 0 or self.burn_in < 0:
            raise ValueError("point and burn-in budgets must be nonnegative")
        if self.width <= 0:
            raise ValueError("viewport width must be positive")


def julia_points(f: RationalMap, cfg: RenderConfig) -> list[complex]:
    """Backward-iteration point cloud; deterministic for a fixed seed."""
    if f.degree < 2:
        raise ValueError("backward iteration needs degree at least 2")
    if cfg.points == 0:
        return []
    rng = random.Random(cfg.seed)
    z = f.repelling_fixed_point()
    out: list[complex] = []
    skips = 0
    steps = cfg.points + cfg.burn_in
    allowed_skips = max(100, steps // 5)
    done = 0
    while done < steps:
        roots = f.preimages(z)
        if not roots:
            skips += 1
            if skips > allowed_skips:
                raise RuntimeError(
                    f"root finding failed {skips} times after {done} steps")
            z = f.repelling_fixed_point()
            continue
        z = roots[rng.randrange(len(roots))]
        done += 1
        if done > cfg.burn_in:
            out.append(z)
    return out


def render(points, cfg: RenderConfig) -> list[bytearray]:
    """Bin points into a grayscale grid; more hits darken a pixel."""
    half = cfg.width / 2
    height = cfg.width * cfg.pixels_y / cfg.pixels_x
    x0 = cfg.center.real - half
    y0 = cfg.center.imag - height / 2
    counts = [[0] * cfg.pixels_x for _ in range(cfg.pixels_y)]
    for p in points:
        px = int((p.real - x0) / cfg.width * cfg.pixels_x)
        py = int((p.imag - y0) / height * cfg.pixels_y)
        if 0 <= px < cfg.pixels_x and 0 <= py < cfg.pixels_y:
            counts[cfg.pixels_y - 1 - py][px] += 1
    return [bytearray(max(0, 255 - 96 * c) for c in row) for row in counts]


def write_pgm(path: str, grid: list[bytearray]) -> None:
    """Binary portable graymap, one byte per pixel."""
    height = len(grid)
    width = len(grid[0]) if height else 0
    with open(path, "wb") as handle:
        handle.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        for row in grid:
            handle.write(bytes(row))


PRESETS: dict[str, RationalMap] = {
    "z2": RationalMap([0, 0, 1], [1]),
    "f2": RationalMap([1], [0, 1, -0.5]),
    "f3": RationalMap(
        [0.128775 + 0.0942072j],
        [0, 1, -1.74702 + 0.285702j, 0.831347 - 0.190468j]),
    "f4": RationalMap(
        [0.0232438 + 0.0757918j],
        [0, 1, -2.67804 + 1.10938j, 2.37852 - 1.93187j, -0.694865 + 0.89421j]),
    "f5": RationalMap(
        [-0.00877156 + 0.0526634j],
        [0, 1, -3.22614 + 2.0417j, 3.13076 - 5.12089j, -0.677772 + 4.35662j,
         -0.245783 - 1.22944j]),
}
