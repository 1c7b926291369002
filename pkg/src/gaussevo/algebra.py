"""Minkowski 3-vector algebra with signature (-, +, +) and the coefficient record.

Vectors are anything with three components along the leading axis: a
:class:`MinkVec3`, a tuple, or a numpy array of shape ``(3, ...)``. The
trailing axes broadcast, which lets time-dependent vectors such as g(t) be
evaluated on a whole time grid at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Literal

import numpy as np

from .errors import DomainViolation

@dataclass(frozen=True)
class MinkVec3:
    """Three-vector on the basis (e0, e1, e2) with e0.e0 = -1.

    Components may be real or complex. Real vectors are the special case with
    zero imaginary parts; :meth:`real_view` builds one from real input.
    """

    v0: complex = 0.0
    v1: complex = 0.0
    v2: complex = 0.0

    @classmethod
    def real_view(cls, values) -> "MinkVec3":
        a = np.asarray(values, dtype=float)
        if a.shape != (3,):
            raise ValueError(f"expected 3 components, got shape {a.shape}")
        return cls(float(a[0]), float(a[1]), float(a[2]))

    @classmethod
    def from_array(cls, values) -> "MinkVec3":
        a = np.asarray(values)
        if a.shape != (3,):
            raise ValueError(f"expected 3 components, got shape {a.shape}")
        return cls(*(x.item() for x in a))

    def __iter__(self) -> Iterator[complex]:
        return iter((self.v0, self.v1, self.v2))

    def __array__(self, dtype=None, copy=None):
        return np.array([self.v0, self.v1, self.v2], dtype=dtype)

    def __getitem__(self, i: int) -> complex:
        return (self.v0, self.v1, self.v2)[i]

    def __add__(self, other) -> "MinkVec3":
        return MinkVec3.from_array(np.asarray(self) + np.asarray(other))

    def __sub__(self, other) -> "MinkVec3":
        return MinkVec3.from_array(np.asarray(self) - np.asarray(other))

    def __mul__(self, s) -> "MinkVec3":
        return MinkVec3.from_array(np.asarray(self) * s)

    __rmul__ = __mul__

    def __truediv__(self, s) -> "MinkVec3":
        return MinkVec3.from_array(np.asarray(self) / s)

    def __neg__(self) -> "MinkVec3":
        return MinkVec3(-self.v0, -self.v1, -self.v2)

    @property
    def is_real(self) -> bool:
        return all(np.imag(x) == 0 for x in self)

    @property
    def real(self) -> "MinkVec3":
        return MinkVec3(*(float(np.real(x)) for x in self))


def _arr(v) -> np.ndarray:
    a = np.asarray(v)
    if a.shape[:1] != (3,):
        raise ValueError(f"expected 3 components on axis 0, got shape {a.shape}")
    return a


def _wrap(result: np.ndarray, *inputs):
    if all(isinstance(x, MinkVec3) for x in inputs) and result.shape == (3,):
        return MinkVec3.from_array(result)
    return result


def dot(a, b):
    """Bilinear Minkowski product -a0 b0 + a1 b1 + a2 b2 (no conjugation)."""
    a, b = _arr(a), _arr(b)
    return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def wedge(a, b):
    """Antisymmetric product with e0^e1 = -e2, e1^e2 = e0, e2^e0 = -e1."""
    x, y = _arr(a), _arr(b)
    out = np.stack(
        np.broadcast_arrays(
            x[1] * y[2] - x[2] * y[1],
            x[0] * y[2] - x[2] * y[0],
            x[1] * y[0] - x[0] * y[1],
        )
    )
    return _wrap(out, a, b)


@dataclass(frozen=True)
class PhiContext:
    """Initial-state data entering the linear functional Phi."""

    delta0_sq: float
    kappa0: float

    @classmethod
    def from_initial(cls, mu0: float, kappa0: float, nu0: float) -> "PhiContext":
        return cls(4.0 * mu0 * (mu0 + nu0) + kappa0**2, kappa0)


def phi(v, ctx: PhiContext):
    """Phi(v) = (v0 + v1)/2 + delta0_sq (v0 - v1)/2 + kappa0 v2."""
    a = _arr(v)
    return 0.5 * (a[0] + a[1]) + 0.5 * ctx.delta0_sq * (a[0] - a[1]) + ctx.kappa0 * a[2]


ValidationMode = Literal["physical", "raw"]


@dataclass(frozen=True)
class MasterEqCoefficients:
    """The seven real constants (gamma, theta, eta) of a bilinear master equation.

    Construction never validates; call :meth:`validate` for the domain checks
    so that scans can probe unphysical regions.
    """

    gamma: float
    theta: MinkVec3 = field(default_factory=MinkVec3)
    eta: MinkVec3 = field(default_factory=MinkVec3)

    @classmethod
    def from_values(
        cls,
        gamma: float,
        theta0: float,
        theta1: float,
        theta2: float,
        eta0: float,
        eta1: float,
        eta2: float,
    ) -> "MasterEqCoefficients":
        return cls(
            float(gamma),
            MinkVec3.real_view((theta0, theta1, theta2)),
            MinkVec3.real_view((eta0, eta1, eta2)),
        )

    @property
    def theta_arr(self) -> np.ndarray:
        return np.array([float(np.real(x)) for x in self.theta])

    @property
    def eta_arr(self) -> np.ndarray:
        return np.array([float(np.real(x)) for x in self.eta])

    def as_tuple(self) -> tuple[float, ...]:
        return (self.gamma, *self.theta_arr, *self.eta_arr)

    def as_dict(self) -> dict[str, float]:
        keys = ("gamma", "theta0", "theta1", "theta2", "eta0", "eta1", "eta2")
        return dict(zip(keys, (float(x) for x in self.as_tuple())))

    def scale(self) -> float:
        """Largest coefficient magnitude (at least 1e-300)."""
        return max(max(abs(x) for x in self.as_tuple()), 1e-300)

    def replace(self, **values: float) -> "MasterEqCoefficients":
        d = self.as_dict()
        unknown = set(values) - set(d)
        if unknown:
            raise KeyError(f"unknown coefficient(s): {sorted(unknown)}")
        d.update(values)
        return MasterEqCoefficients.from_values(**d)

    def validate(self, mode: ValidationMode = "physical") -> "MasterEqCoefficients":
        """Check domain constraints and return ``self``.

        ``"raw"`` only requires finite values. ``"physical"`` enforces
        theta0 > 0, |theta1| < theta0, eta0 <= 0, eta1 - eta0 >= 0 and
        eta0 + eta1 <= 0.
        """
        vals = self.as_tuple()
        if not all(np.isfinite(vals)):
            raise DomainViolation(f"non-finite coefficient in {vals}")
        if mode not in ("physical", "raw"):
            raise ValueError(f"unknown validation mode {mode!r}")
        if mode == "raw":
            return self
        t0, t1, _ = self.theta_arr
        e0, e1, _ = self.eta_arr
        problems = []
        if not t0 > 0:
            problems.append("theta0 > 0")
        if not abs(t1) < t0:
            problems.append("|theta1| < theta0")
        if not e0 <= 0:
            problems.append("eta0 <= 0")
        if not e1 - e0 >= 0:
            problems.append("eta1 - eta0 >= 0")
        if not e0 + e1 <= 0:
            problems.append("eta0 + eta1 <= 0")
        if problems:
            raise DomainViolation("physical validation failed: " + ", ".join(problems))
        return self
