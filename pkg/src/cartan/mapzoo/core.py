"""Map components in the normal form r(z) + s(z) sqrt(S(z)) and the HoloMap
container, plus the structural operations (padding, rotation, composition,
degree)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..domains import (
    AutBall,
    AutIV,
    DomainSpec,
    TypeIV,
    apply_aut_ball,
    apply_aut_IV,
    from_coords,
)
from ..polytable import PolyTable

POLE_TOL = 1e-14
DEGREE_TOL = 1e-9


class BranchError(ValueError):
    """The radicand left the half plane Re S > 0 where the principal root is used."""


class PoleError(ArithmeticError):
    """A denominator came within POLE_TOL of zero."""


def _canon(den: PolyTable) -> tuple[PolyTable, complex]:
    """Split den = scale * canonical, canonical having leading coefficient 1."""
    e = max(den.terms, key=lambda x: (sum(x), x))
    lc = den.coeff(e)
    return den * (1 / lc), lc


def _sum_rationals(parts: Sequence[tuple[PolyTable, PolyTable]], nvars: int) -> tuple[PolyTable, PolyTable]:
    """Sum of num/den fractions over the product of the distinct denominators."""
    canon: list[PolyTable] = []
    items = []
    for num, den in parts:
        if num.is_zero():
            continue
        if den.degree == 0:
            items.append((num * (1 / den.constant_term()), None))
            continue
        cd, scale = _canon(den)
        for k, c in enumerate(canon):
            if c.allclose(cd, 1e-13):
                break
        else:
            canon.append(cd)
            k = len(canon) - 1
        items.append((num * (1 / scale), k))
    common = PolyTable.constant(nvars, 1.0)
    for c in canon:
        common = common * c
    total = PolyTable.zero(nvars)
    for num, k in items:
        mult = PolyTable.constant(nvars, 1.0)
        for j, c in enumerate(canon):
            if j != k:
                mult = mult * c
        total = total + num * mult
    return total, common


@dataclass(frozen=True)
class MapComponent:
    """num/den + (rad_num/rad_den) * sqrt(radicand), principal branch."""

    num: PolyTable
    den: PolyTable
    rad_num: PolyTable | None = None
    rad_den: PolyTable | None = None
    radicand: PolyTable | None = None

    def __post_init__(self):
        if self.den.is_zero():
            raise ValueError("zero denominator")
        if (self.radicand is None) != (self.rad_num is None):
            raise ValueError("radical coefficient and radicand must be given together")
        if self.radicand is not None and self.rad_den is None:
            object.__setattr__(self, "rad_den", PolyTable.constant(self.nvars, 1.0))

    @classmethod
    def poly(cls, p: PolyTable) -> MapComponent:
        return cls(p, PolyTable.constant(p.nvars, 1.0))

    @classmethod
    def rational(cls, num: PolyTable, den: PolyTable) -> MapComponent:
        return cls(num, den)

    @classmethod
    def radical(cls, r: PolyTable, s: PolyTable, S: PolyTable) -> MapComponent:
        one = PolyTable.constant(r.nvars, 1.0)
        return cls(r, one, s, one, S)

    @classmethod
    def zero(cls, nvars: int) -> MapComponent:
        return cls.poly(PolyTable.zero(nvars))

    @property
    def nvars(self) -> int:
        return self.num.nvars

    @property
    def is_rational(self) -> bool:
        return self.radicand is None or self.rad_num.is_zero()

    @property
    def is_polynomial(self) -> bool:
        return self.is_rational and self.den.degree == 0

    def evaluate(self, Z: np.ndarray) -> np.ndarray:
        """Values at a batch Z of shape (N, n)."""
        den = self.den(Z)
        if np.any(np.abs(den) < POLE_TOL):
            raise PoleError("denominator vanishes at a sample point")
        out = self.num(Z) / den
        if not self.is_rational:
            S = self.radicand(Z)
            if np.any(S.real <= 0):
                raise BranchError("radicand left the right half plane (Re S <= 0)")
            rd = self.rad_den(Z)
            if np.any(np.abs(rd) < POLE_TOL):
                raise PoleError("radical coefficient denominator vanishes")
            out = out + self.rad_num(Z) / rd * np.sqrt(S)
        return out

    def to_json(self) -> dict:
        d = {"num": self.num.to_json(), "den": self.den.to_json()}
        if self.radicand is not None:
            d["rad_num"] = self.rad_num.to_json()
            d["rad_den"] = self.rad_den.to_json()
            d["radicand"] = self.radicand.to_json()
        return d


def lincomb(components: Sequence[MapComponent], coeffs: Sequence[complex]) -> MapComponent:
    """sum_i coeffs[i] * components[i], staying in normal form.

    All radical parts involved must share one radicand.
    """
    nvars = components[0].nvars
    rat = []
    rad = []
    radicand = None
    for c, a in zip(components, coeffs):
        if a == 0:
            continue
        rat.append((c.num * a, c.den))
        if not c.is_rational:
            if radicand is None:
                radicand = c.radicand
            elif not radicand.allclose(c.radicand, 1e-13):
                raise ValueError("cannot combine components with different radicands")
            rad.append((c.rad_num * a, c.rad_den))
    num, den = _sum_rationals(rat, nvars)
    if radicand is None:
        return MapComponent(num, den)
    rnum, rden = _sum_rationals(rad, nvars)
    if rnum.is_zero():
        return MapComponent(num, den)
    return MapComponent(num, den, rnum, rden, radicand)


@dataclass(frozen=True)
class HoloMap:
    """A holomorphic map from B^n into ``target``.

    ``components`` follow the target's coordinate chart (row-major over the
    stored entries for matrix targets).  ``exponent`` is the power e in
    defect(F(z)) = (1 - |z|^2)^e for isometries; when ``base`` is set, the
    identity instead reads defect(F(z)) = (1 - sum |g_i(z)|^2)^e with g = base.
    """

    family: str
    n: int
    target: DomainSpec
    components: tuple[MapComponent, ...]
    params: dict = field(default_factory=dict)
    exponent: int = 1
    base: HoloMap | None = None
    isometric: bool = True

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if len(self.components) != self.target.coord_dim:
            raise ValueError(
                f"{self.family}: {len(self.components)} components, target {self.target} "
                f"needs {self.target.coord_dim}"
            )
        if any(c.nvars != self.n for c in self.components):
            raise ValueError(f"{self.family}: component variable count differs from n = {self.n}")

    @property
    def is_rational(self) -> bool:
        return all(c.is_rational for c in self.components)

    @property
    def is_polynomial(self) -> bool:
        return all(c.is_polynomial for c in self.components)

    @property
    def radicands(self) -> list[PolyTable]:
        return [c.radicand for c in self.components if not c.is_rational]

    def evaluate_coords(self, Z) -> np.ndarray:
        """Component values at a batch Z (N, n); shape (N, coord_dim)."""
        Z = np.asarray(Z, dtype=complex)
        if Z.ndim != 2 or Z.shape[1] != self.n:
            raise ValueError(f"expected a batch of shape (N, {self.n}), got {Z.shape}")
        if np.any(np.sum(np.abs(Z) ** 2, axis=1) >= 1):
            raise ValueError("sample point outside the unit ball")
        return np.column_stack([c.evaluate(Z) for c in self.components])

    def __call__(self, z) -> np.ndarray:
        """Target-shaped image of one point or a batch of points."""
        z = np.asarray(z, dtype=complex)
        single = z.ndim == 1
        W = self.evaluate_coords(z[None] if single else z)
        P = from_coords(self.target, W)
        return P[0] if single else P

    def origin_value(self) -> np.ndarray:
        return self.evaluate_coords(np.zeros((1, self.n)))[0]

    def with_exponent(self, e: int) -> HoloMap:
        return HoloMap(self.family, self.n, self.target, self.components, dict(self.params), e,
                       self.base, self.isometric)

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "n": self.n,
            "target": self.target.to_json(),
            "params": self.params,
            "exponent": self.exponent,
            "components": [c.to_json() for c in self.components],
        }


class ComposedMap:
    """z -> T(F(phi(z))) evaluated pointwise; no symbolic form."""

    is_rational = False
    is_polynomial = False

    def __init__(self, F, phi: AutBall | None = None, T: AutIV | None = None):
        if phi is not None and phi.n != F.n:
            raise ValueError(f"ball automorphism acts on B^{phi.n}, map source is B^{F.n}")
        if T is not None:
            if F.target.kind != "IV" or T.m != F.target.dims[0]:
                raise ValueError(f"target automorphism does not act on {F.target}")
        self.inner = F
        self.phi = phi
        self.T = T
        self.n = F.n
        self.target = F.target
        self.exponent = F.exponent
        self.base = None
        self.isometric = F.isometric
        self.family = f"compose({F.family})"
        self.params = dict(F.params)

    def evaluate_coords(self, Z) -> np.ndarray:
        Z = np.asarray(Z, dtype=complex)
        if self.phi is not None:
            Z = apply_aut_ball(self.phi, Z)
        W = self.inner.evaluate_coords(Z)
        if self.T is not None:
            W = apply_aut_IV(self.T, W, check=False)
        return W

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        single = z.ndim == 1
        W = self.evaluate_coords(z[None] if single else z)
        P = from_coords(self.target, W)
        return P[0] if single else P

    def origin_value(self) -> np.ndarray:
        return self.evaluate_coords(np.zeros((1, self.n)))[0]


def compose(F, phi: AutBall | None = None, T: AutIV | None = None) -> ComposedMap:
    return ComposedMap(F, phi, T)


def pad_zero(F: HoloMap, extra: int) -> HoloMap:
    """(F, 0, ..., 0) into D^IV_{m + extra}."""
    if F.target.kind != "IV":
        raise ValueError("zero padding is defined for type IV targets")
    if extra < 1:
        raise ValueError("extra must be >= 1")
    comps = F.components + tuple(MapComponent.zero(F.n) for _ in range(extra))
    params = dict(F.params, padded=extra + F.params.get("padded", 0))
    return HoloMap(f"{F.family}", F.n, TypeIV(F.target.dims[0] + extra), comps, params,
                   F.exponent, F.base, F.isometric)


def rotate(F: HoloMap, C) -> HoloMap:
    """F . C for a real m x m matrix C (orthogonal C is an automorphism)."""
    if F.target.kind != "IV":
        raise ValueError("rotation is defined for type IV targets")
    C = np.asarray(C, dtype=float)
    m = F.target.dims[0]
    if C.shape != (m, m):
        raise ValueError(f"need an {m}x{m} matrix")
    comps = tuple(lincomb(F.components, C[:, j]) for j in range(m))
    return HoloMap(F.family, F.n, F.target, comps, dict(F.params), F.exponent, F.base, F.isometric)


def leading_components(F: HoloMap, k: int) -> HoloMap:
    """The first k components, as a map into D^IV_k."""
    if F.target.kind != "IV":
        raise ValueError("truncation is defined for type IV targets")
    return HoloMap(F.family, F.n, TypeIV(k), F.components[:k], dict(F.params), F.exponent,
                   F.base, F.isometric)


def degree(F: HoloMap) -> int:
    """Degree max(deg P_j, deg R) of F = (P_1, ..., P_m)/R in lowest terms.

    The common denominator is the product of the distinct (up to scale)
    component denominators; a factor shared by every numerator and R is
    cancelled.  Coefficients below DEGREE_TOL relative are ignored.
    """
    if not F.is_rational:
        raise ValueError(f"{F.family} has a radical component; degree is defined for rational maps")
    n = F.n
    nums, common = [], None
    canon = []
    for c in F.components:
        if c.den.degree > 0:
            cd, _ = _canon(c.den)
            if not any(x.allclose(cd, 1e-13) for x in canon):
                canon.append(cd)
    common = PolyTable.constant(n, 1.0)
    for c in canon:
        common = common * c
    for c in F.components:
        if c.den.degree == 0:
            nums.append(c.num * (1 / c.den.constant_term()) * common)
            continue
        cd, scale = _canon(c.den)
        mult = PolyTable.constant(n, 1.0)
        for x in canon:
            if not x.allclose(cd, 1e-13):
                mult = mult * x
        nums.append(c.num * (1 / scale) * mult)
    remaining = list(canon)
    for x in list(canon):
        quotients = [p.exact_div(x) for p in nums]
        if all(q is not None for q in quotients):
            nums = quotients
            remaining.remove(x)
    R = PolyTable.constant(n, 1.0)
    for x in remaining:
        R = R * x
    scale = max([p.max_abs_coeff() for p in nums] + [R.max_abs_coeff()])
    deg = R.degree
    for p in nums:
        kept = [sum(e) for e, v in p.items() if abs(v) > DEGREE_TOL * scale]
        if kept:
            deg = max(deg, max(kept))
    return deg
