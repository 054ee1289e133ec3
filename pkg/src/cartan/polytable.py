"""Sparse multivariate polynomials with complex coefficients."""

from __future__ import annotations

from math import comb
from typing import Iterable, Mapping

import numpy as np

CLEAN_TOL = 1e-15

Exponent = tuple[int, ...]


class PolyTable:
    """Polynomial in ``nvars`` variables stored as {exponent tuple: coefficient}.

    Coefficients of modulus below ``CLEAN_TOL`` are dropped on construction.
    Instances are treated as immutable.
    """

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, complex] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        self.nvars = int(nvars)
        clean: dict[Exponent, complex] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.nvars or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent {exp} for {self.nvars} variables")
            c = complex(c)
            if not np.isfinite(c.real) or not np.isfinite(c.imag):
                raise ValueError("non-finite coefficient")
            c = clean.get(exp, 0j) + c
            clean[exp] = c
        self._terms = {e: c for e, c in sorted(clean.items()) if abs(c) >= CLEAN_TOL}

    # construction helpers

    @classmethod
    def constant(cls, nvars: int, c: complex) -> PolyTable:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int, c: complex = 1.0) -> PolyTable:
        exp = [0] * nvars
        exp[i] = 1
        return cls(nvars, {tuple(exp): c})

    @classmethod
    def monomial(cls, exp: Iterable[int], c: complex = 1.0) -> PolyTable:
        exp = tuple(exp)
        return cls(len(exp), {exp: c})

    @classmethod
    def zero(cls, nvars: int) -> PolyTable:
        return cls(nvars)

    # access

    @property
    def terms(self) -> dict[Exponent, complex]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def coeff(self, exp: Exponent) -> complex:
        return self._terms.get(tuple(exp), 0j)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def degree_above(self, rel_tol: float) -> int:
        """Total degree ignoring coefficients below rel_tol * max |coeff|."""
        if not self._terms:
            return -1
        cmax = max(abs(c) for c in self._terms.values())
        return max(sum(e) for e, c in self._terms.items() if abs(c) > rel_tol * cmax)

    def homogeneous_part(self, d: int) -> PolyTable:
        return PolyTable(self.nvars, {e: c for e, c in self._terms.items() if sum(e) == d})

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def constant_term(self) -> complex:
        return self.coeff((0,) * self.nvars)

    def is_real(self, tol: float = 0.0) -> bool:
        return all(abs(c.imag) <= tol for c in self._terms.values())

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    # arithmetic

    def _coerce(self, other) -> PolyTable:
        if isinstance(other, PolyTable):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        return PolyTable.constant(self.nvars, other)

    def __add__(self, other) -> PolyTable:
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0j) + c
        return PolyTable(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> PolyTable:
        return PolyTable(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> PolyTable:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> PolyTable:
        return self._coerce(other) - self

    def __mul__(self, other) -> PolyTable:
        if not isinstance(other, PolyTable):
            c = complex(other)
            return PolyTable(self.nvars, {e: c * v for e, v in self._terms.items()})
        other = self._coerce(other)
        out: dict[Exponent, complex] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0j) + c1 * c2
        return PolyTable(self.nvars, out)

    __rmul__ = __mul__

    def __truediv__(self, c) -> PolyTable:
        if isinstance(c, PolyTable):
            raise TypeError("use exact_div for polynomial division")
        return self * (1 / complex(c))

    def __pow__(self, k: int) -> PolyTable:
        if k < 0:
            raise ValueError("negative power")
        out = PolyTable.constant(self.nvars, 1.0)
        for _ in range(k):
            out = out * self
        return out

    def truncate(self, d: int) -> PolyTable:
        """Drop all terms of total degree above d."""
        return PolyTable(self.nvars, {e: c for e, c in self._terms.items() if sum(e) <= d})

    def conj(self) -> PolyTable:
        return PolyTable(self.nvars, {e: c.conjugate() for e, c in self._terms.items()})

    def shift(self, point) -> PolyTable:
        """The polynomial x -> P(x + point)."""
        point = np.asarray(point, dtype=complex).ravel()
        if point.size != self.nvars:
            raise ValueError("shift point has wrong length")
        out: dict[Exponent, complex] = {}
        for e, c in self._terms.items():
            partial = {(): c}
            for i, k in enumerate(e):
                nxt: dict[tuple, complex] = {}
                for prefix, v in partial.items():
                    for j in range(k + 1):
                        key = prefix + (j,)
                        nxt[key] = nxt.get(key, 0j) + v * comb(k, j) * point[i] ** (k - j)
                partial = nxt
            for key, v in partial.items():
                out[key] = out.get(key, 0j) + v
        return PolyTable(self.nvars, out)

    def extend_vars(self, nvars: int, positions: Iterable[int] | None = None) -> PolyTable:
        """Re-embed into ``nvars`` variables, old variable i going to positions[i]."""
        positions = list(range(self.nvars)) if positions is None else list(positions)
        out = {}
        for e, c in self._terms.items():
            new = [0] * nvars
            for i, k in enumerate(e):
                new[positions[i]] += k
            out[tuple(new)] = c
        return PolyTable(nvars, out)

    def compose(self, polys: list[PolyTable]) -> PolyTable:
        """Substitute polys[i] for variable i."""
        if len(polys) != self.nvars:
            raise ValueError("need one polynomial per variable")
        if not polys:
            return self
        nv = polys[0].nvars
        out = PolyTable.zero(nv)
        cache: dict[tuple[int, int], PolyTable] = {}

        def power(i: int, k: int) -> PolyTable:
            if (i, k) not in cache:
                cache[(i, k)] = polys[i] ** k
            return cache[(i, k)]

        for e, c in self._terms.items():
            term = PolyTable.constant(nv, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def _leading(self) -> tuple[Exponent, complex]:
        # graded lexicographic order
        e = max(self._terms, key=lambda x: (sum(x), x))
        return e, self._terms[e]

    def exact_div(self, divisor: PolyTable, tol: float = 1e-10) -> PolyTable | None:
        """Quotient self / divisor if the division is exact (remainder below
        tol relative to the largest coefficient), else None."""
        divisor = self._coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        scale = max(self.max_abs_coeff(), 1.0)
        rem = self
        quot = PolyTable.zero(self.nvars)
        le, lc = divisor._leading()
        for _ in range(10_000):
            if rem.is_zero() or rem.max_abs_coeff() <= tol * scale:
                return quot
            e, c = rem._leading()
            if abs(c) <= tol * scale:
                rem = PolyTable(self.nvars, {k: v for k, v in rem._terms.items() if k != e})
                continue
            diff = tuple(a - b for a, b in zip(e, le))
            if any(d < 0 for d in diff):
                return None
            t = PolyTable(self.nvars, {diff: c / lc})
            quot = quot + t
            rem = rem - t * divisor
            rem = PolyTable(self.nvars, {k: v for k, v in rem._terms.items() if k != e})
        raise RuntimeError("polynomial division did not terminate")

    def proportional_to(self, other: PolyTable, tol: float = 1e-12) -> complex | None:
        """Scalar c with self == c * other (coefficientwise within tol), else None."""
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return None
        if set(self._terms) != set(other._terms):
            return None
        e, v = other._leading()
        c = self._terms[e] / v
        scale = self.max_abs_coeff()
        for k, w in other._terms.items():
            if abs(self._terms[k] - c * w) > tol * scale:
                return None
        return c

    def allclose(self, other: PolyTable, tol: float = 1e-12) -> bool:
        return (self - other).max_abs_coeff() <= tol

    # evaluation

    def __call__(self, z) -> np.ndarray:
        """Evaluate at one point (shape (nvars,)) or a batch (shape (N, nvars))."""
        Z = np.asarray(z, dtype=complex)
        single = Z.ndim == 1
        if single:
            Z = Z[None, :]
        if Z.shape[1] != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {Z.shape[1]}")
        out = np.zeros(Z.shape[0], dtype=complex)
        if self._terms:
            dmax = max(max(e) if e else 0 for e in self._terms)
            powers = np.ones((dmax + 1,) + Z.shape, dtype=complex)
            for k in range(1, dmax + 1):
                powers[k] = powers[k - 1] * Z
            cols = np.arange(self.nvars)
            for e, c in self._terms.items():
                out += c * np.prod(powers[list(e), :, cols].T, axis=1) if self.nvars else c
        return out[0] if single else out

    # representation

    def to_json(self) -> list:
        return [[list(e), [c.real, c.imag]] for e, c in self._terms.items()]

    @classmethod
    def from_json(cls, nvars: int, data: list) -> PolyTable:
        return cls(nvars, {tuple(e): complex(c[0], c[1]) for e, c in data})

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyTable):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        return hash((self.nvars, tuple(self._terms.items())))

    def __repr__(self) -> str:
        if not self._terms:
            return f"PolyTable({self.nvars}, 0)"
        parts = []
        for e, c in self._terms.items():
            mono = "*".join(f"z{i + 1}^{k}" if k > 1 else f"z{i + 1}" for i, k in enumerate(e) if k)
            parts.append(f"({c:.6g})" + (f"*{mono}" if mono else ""))
        return f"PolyTable({self.nvars}, " + " + ".join(parts) + ")"


def variables(n: int) -> list[PolyTable]:
    return [PolyTable.var(n, i) for i in range(n)]


def sqrt_series(P: PolyTable, degree: int) -> PolyTable:
    """Power-series square root of P (with P(0) = 1) truncated at ``degree``.

    Degree by degree: Q_0 = 1 and Q_k = (P_k - sum_{0<i<k} Q_i Q_{k-i}) / 2,
    the graded form of the Newton iteration for Q^2 = P.
    """
    if abs(P.constant_term() - 1) > 1e-12:
        raise ValueError("series square root needs constant term 1")
    parts = [PolyTable.constant(P.nvars, 1.0)]
    for k in range(1, degree + 1):
        acc = P.homogeneous_part(k)
        for i in range(1, k):
            acc = acc - parts[i] * parts[k - i]
        parts.append(acc * 0.5)
    out = PolyTable.zero(P.nvars)
    for q in parts:
        out = out + q
    return out
