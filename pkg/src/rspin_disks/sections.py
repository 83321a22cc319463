"""Explicit meromorphic sections on the upper half-plane model of a marked disk.

Boundary points are real and increasing, internal points lie in the upper half-plane.  The
r-th power of each basis section is a rational form; its real r-th root is taken only on the
boundary, with the sign fixed by the arc convention.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np


class ConfigurationError(ValueError):
    pass


class PoleError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class DiskConfiguration:
    r: int
    x: Tuple[float, ...]
    z: Tuple[complex, ...]
    a: Tuple[int, ...]
    min_separation: float = 1e-8

    def __post_init__(self):
        if self.r < 2:
            raise ConfigurationError("r must be at least 2")
        if len(self.z) != len(self.a):
            raise ConfigurationError("one twist per internal point")
        if any(not (self.x[i] < self.x[i + 1]) for i in range(len(self.x) - 1)):
            raise ConfigurationError("boundary points must be strictly increasing")
        if any(w.imag <= 0 for w in self.z):
            raise ConfigurationError("internal points need positive imaginary part")
        if any(not 0 <= t <= self.r - 1 for t in self.a):
            raise ConfigurationError(f"twists must lie in 0..{self.r - 1}")
        pts = [complex(t) for t in self.x] + list(self.z)
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if abs(pts[i] - pts[j]) < self.min_separation:
                    raise ConfigurationError(f"points {i + 1} and {j + 1} collide")

    @classmethod
    def from_json(cls, doc: dict) -> "DiskConfiguration":
        try:
            z = tuple(complex(p[0], p[1]) for p in doc.get("z", []))
            return cls(int(doc["r"]), tuple(float(t) for t in doc["x"]), z, tuple(int(t) for t in doc.get("a", [])))
        except (KeyError, TypeError, IndexError) as exc:
            raise ConfigurationError(f"malformed configuration: {exc}") from exc

    def to_json(self) -> dict:
        return {"r": self.r, "x": list(self.x), "z": [[w.real, w.imag] for w in self.z], "a": list(self.a)}

    @property
    def k(self) -> int:
        return len(self.x)

    @property
    def l(self) -> int:
        return len(self.z)

    @property
    def in_basis_regime(self) -> bool:
        return sum(self.a) == self.k - 1

    @property
    def parity_ok(self) -> bool:
        """Boundary parity for the graded smooth disk: all k boundary points are legal."""
        s = 2 * sum(self.a) + self.k * (self.r - 2)
        if (s - (self.r - 2)) % self.r:
            return False
        return ((s + 2) // self.r - self.k) % 2 == 0

    def map(self, phi) -> "DiskConfiguration":
        """Push the configuration forward along an order-preserving real Moebius map."""
        return DiskConfiguration(self.r, tuple(float(phi(t).real) for t in self.x), tuple(complex(phi(w)) for w in self.z), self.a)


def _check_regime(c: DiskConfiguration, j: int) -> None:
    if not c.in_basis_regime:
        raise ConfigurationError(f"twist sum {sum(c.a)} differs from k-1 = {c.k - 1}")
    if not 1 <= j <= c.k - 1:
        raise ConfigurationError(f"j must lie in 1..{c.k - 1}")


def _cyc(c: DiskConfiguration, i: int) -> int:
    return (i - 1) % c.k + 1


def xi_boundary(c: DiskConfiguration, i: int, j: int, w: complex) -> complex:
    xi, xj = c.x[_cyc(c, i) - 1], c.x[_cyc(c, j) - 1]
    den = (w - xi) * (w - xj)
    if den == 0:
        raise PoleError(f"evaluation at a pole of the ({i}, {j}) form")
    return (xj - xi) / den


def xi_internal(c: DiskConfiguration, i: int, w: complex) -> complex:
    zi = c.z[i - 1]
    den = (w - zi) * (w - zi.conjugate())
    if den == 0:
        raise PoleError(f"evaluation at a pole of the internal form {i}")
    return 1j * (zi.conjugate() - zi) / den


def _common(c: DiskConfiguration, w: complex) -> complex:
    """The j-independent factor: internal forms to their twists over the boundary cycle."""
    val: complex = 1
    for i, t in enumerate(c.a, start=1):
        val *= xi_internal(c, i, w) ** t
    for i in range(1, c.k + 1):
        val /= xi_boundary(c, i, i + 1, w)
    return val


def sigma_power(c: DiskConfiguration, j: int, w: complex, start: int = 1) -> complex:
    """Coefficient of (dw)^(r-1) in the r-th power of the j-th basis section; `start` is the
    boundary point playing the role of the first one (a cyclic relabelling)."""
    _check_regime(c, j)
    sign = -1 if (c.r + 1) % 2 else 1
    return sign * _common(c, w) * xi_boundary(c, start, start + j, w) ** c.r


def _on_arc(c: DiskConfiguration, lo: int, hi: int, w: float) -> bool:
    """Is w on the boundary arc running in increasing direction from x_lo to x_hi (through infinity if lo > hi)?"""
    a, b = c.x[_cyc(c, lo) - 1], c.x[_cyc(c, hi) - 1]
    if a < b:
        return a < w < b
    return w > a or w < b


def sigma_boundary_root(c: DiskConfiguration, j: int, samples: Sequence[float], start: int = 1) -> List[float]:
    """Real r-th roots of sigma_power on the boundary: positive on the arc from the first point to
    point start+j, negative elsewhere (the sign flips exactly at the two poles)."""
    _check_regime(c, j)
    out = []
    for w in samples:
        if any(abs(w - t) < c.min_separation for t in c.x):
            raise PoleError(f"sample {w} sits on a boundary marking")
        g = sigma_power(c, j, complex(w), start)
        mag = abs(g) ** (1.0 / c.r)
        s = 1.0 if _on_arc(c, start, start + j, w) else -1.0
        if c.r % 2 and g.real * s < 0:
            raise ConvergenceError(f"sign propagation inconsistent at {w}: odd root of {g.real} against arc sign {s}")
        out.append(s * mag)
    return out


def boundary_root_closed_form(c: DiskConfiguration, j: int, w: float, start: int = 1) -> float:
    """Independent route: minus the (start, start+j) boundary form times |common factor|^(1/r)."""
    return float((-xi_boundary(c, start, start + j, w) * abs(_common(c, w)) ** (1.0 / c.r)).real)


def arc_samples(c: DiskConfiguration, per_arc: int, rng: Optional[random.Random] = None) -> List[float]:
    """Sample points on every boundary arc, staying away from the markings."""
    rng = rng or random.Random(0)
    xs = list(c.x)
    out: List[float] = []
    for i in range(len(xs) - 1):
        a, b = xs[i], xs[i + 1]
        for _ in range(per_arc):
            out.append(a + (b - a) * rng.uniform(0.1, 0.9))
    span = xs[-1] - xs[0] if len(xs) > 1 else 1.0
    for _ in range(per_arc):
        d = span * rng.uniform(0.1, 2.0)
        out.append(xs[-1] + d if rng.random() < 0.5 else xs[0] - d)
    return sorted(out)


def _sample_matrix(c: DiskConfiguration, samples: Sequence[float], start: int = 1) -> np.ndarray:
    return np.array([sigma_boundary_root(c, j, samples, start) for j in range(1, c.k)], dtype=float)


def basis_rank(c: DiskConfiguration, n_samples: Optional[int] = None, seed: int = 0) -> Tuple[int, float]:
    """Numerical rank of the boundary values of the k-1 sections, and the ratio of the smallest
    to the largest singular value after normalizing each sample column."""
    if c.k <= 1:
        return 0, 1.0
    if not c.in_basis_regime:
        raise ConfigurationError(f"twist sum {sum(c.a)} differs from k-1 = {c.k - 1}")
    n = n_samples if n_samples is not None else 3 * (c.k - 1)
    if n < 3 * (c.k - 1):
        raise ConfigurationError(f"need at least {3 * (c.k - 1)} samples")
    per_arc = max(1, math.ceil(n / c.k))
    m = _sample_matrix(c, arc_samples(c, per_arc, random.Random(seed)))
    m = m / np.linalg.norm(m, axis=0, keepdims=True)
    s = np.linalg.svd(m, compute_uv=False)
    rank = int(np.sum(s > s[0] * 1e-10))
    return rank, float(s[-1] / s[0])


def residue_profile(c: DiskConfiguration, j: int, start: int = 1,
                    ladder: Sequence[float] = (1e-2, 1e-3, 1e-4)) -> Tuple[int, int]:
    """Signs of the leading coefficients of the j-th section at its two poles, each approached
    from inside the positive arc.  The section behaves like c (w-p)^(-1) |w-p|^(2/r)."""
    _check_regime(c, j)
    poles = [(start, +1), (start + j, -1)]
    gaps = [c.x[i + 1] - c.x[i] for i in range(c.k - 1)] or [1.0]
    scale = min(gaps)
    signs = []
    for idx, direction in poles:
        p = c.x[_cyc(c, idx) - 1]
        vals = []
        for eps in ladder:
            d = direction * eps * scale
            w = p + d
            h = sigma_boundary_root(c, j, [w], start)[0]
            vals.append(d * h * abs(d) ** (-2.0 / c.r))
        e1, e2 = ladder[-2], ladder[-1]
        extrap = vals[-1] + (vals[-1] - vals[-2]) * e2 / (e1 - e2)
        sg = {int(np.sign(v)) for v in vals + [extrap]}
        if len(sg) != 1 or 0 in sg:
            raise ConvergenceError(f"leading coefficient sign unstable at point {idx}: {vals}")
        signs.append(sg.pop())
    return signs[0], signs[1]


def rotation_determinant_sign(c: DiskConfiguration, h: int = 1, seed: int = 0) -> int:
    """Sign of the change of basis between the sections for the standard labelling and for the
    labelling cyclically shifted by h."""
    if c.k < 2:
        raise ConfigurationError("needs at least two boundary points")
    samples = arc_samples(c, max(2, c.k), random.Random(seed))
    e = _sample_matrix(c, samples, 1)
    e2 = _sample_matrix(c, samples, 1 + (h % c.k))
    scale = np.linalg.norm(e, axis=0, keepdims=True)
    e, e2 = e / scale, e2 / scale
    # solve m @ e = e2 in the least-squares sense
    mt, *_ = np.linalg.lstsq(e.T, e2.T, rcond=None)
    m = mt.T
    resid = np.linalg.norm(m @ e - e2) / max(np.linalg.norm(e2), 1e-300)
    if resid > 1e-6:
        raise ConvergenceError(f"shifted sections are not in the span (residual {resid:.2e})")
    det = np.linalg.det(m)
    if abs(det) < 1e-10:
        raise ConvergenceError("change of basis is ill-conditioned")
    return 1 if det > 0 else -1


# --------------------------------------------------------------------------
# Configurations and maps


def normalize(c: DiskConfiguration) -> DiskConfiguration:
    """Affine rescaling putting the first boundary point at -1 and the last at 1."""
    if c.k < 2:
        return c
    a, b = c.x[0], c.x[-1]
    s = 2.0 / (b - a)
    return c.map(lambda w: s * (w - a) - 1.0)


def mobius(a: float, b: float, cc: float, d: float):
    if a * d - b * cc <= 0:
        raise ValueError("determinant must be positive")
    f = lambda w: (a * w + b) / (cc * w + d)
    df = lambda w: (a * d - b * cc) / (cc * w + d) ** 2
    return f, df


def random_configuration(rng: random.Random, r: int, k: int, max_extra_l: int = 2) -> DiskConfiguration:
    """A random configuration in the basis regime (twists summing to k-1), normalized."""
    need = k - 1
    lmin = max(math.ceil(need / (r - 1)) if need else 0, 1 if k < 3 else 0)
    l = rng.randint(lmin, lmin + max_extra_l)
    a = [0] * l
    for _ in range(need):
        a[rng.choice([i for i in range(l) if a[i] < r - 1])] += 1
    xs = sorted(rng.uniform(-1, 1) for _ in range(max(k - 2, 0)))
    x = ([-1.0] + xs + [1.0]) if k >= 2 else ([0.0] if k == 1 else [])
    z = [complex(rng.uniform(-2, 2), rng.uniform(0.2, 2.0)) for _ in range(l)]
    try:
        return DiskConfiguration(r, tuple(x), tuple(z), tuple(a))
    except ConfigurationError:
        return random_configuration(rng, r, k, max_extra_l)
