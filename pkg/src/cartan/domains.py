"""Classical bounded symmetric domains: membership, kernel factors, metrics,
and automorphisms of the ball and of the type IV domain.

Points are numpy arrays: vectors for the ball and type IV, matrices for
types I-III.  Every domain also has a flat complex coordinate chart
(``to_coords`` / ``from_coords``): all entries for type I, the strict upper
triangle for type II, the upper triangle with diagonal for type III.  Maps
into a domain store their components in this chart.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

SYM_TOL = 1e-12
METRIC_STEP = 1e-4

KINDS = ("ball", "I", "II", "III", "IV")


@dataclass(frozen=True)
class DomainSpec:
    kind: str
    dims: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown domain kind {self.kind!r}")
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        want = 2 if self.kind == "I" else 1
        if len(dims) != want:
            raise ValueError(f"{self.kind} needs {want} dimension(s), got {dims}")
        if self.kind == "ball" and dims[0] < 1:
            raise ValueError("ball dimension must be >= 1")
        if self.kind == "I" and not (dims[1] >= dims[0] >= 1):
            raise ValueError(f"type I needs q >= p >= 1, got {dims}")
        if self.kind == "II" and dims[0] < 2:
            raise ValueError("type II needs n >= 2")
        if self.kind == "III" and dims[0] < 1:
            raise ValueError("type III needs n >= 1")
        if self.kind == "IV" and dims[0] < 2:
            raise ValueError("type IV needs m >= 2")

    @property
    def genus(self) -> int:
        """Exponent of the boundary defect in the Bergman kernel."""
        k, d = self.kind, self.dims
        if k == "ball":
            return d[0] + 1
        if k == "I":
            return d[0] + d[1]
        if k == "II":
            return d[0] - 1
        if k == "III":
            return d[0] + 1
        return d[0]

    @property
    def shape(self) -> tuple[int, ...]:
        if self.kind in ("ball", "IV"):
            return (self.dims[0],)
        if self.kind == "I":
            return self.dims
        return (self.dims[0], self.dims[0])

    @property
    def is_matrix(self) -> bool:
        return self.kind in ("I", "II", "III")

    @property
    def coord_dim(self) -> int:
        k, d = self.kind, self.dims
        if k in ("ball", "IV"):
            return d[0]
        if k == "I":
            return d[0] * d[1]
        if k == "II":
            return d[0] * (d[0] - 1) // 2
        return d[0] * (d[0] + 1) // 2

    def to_json(self) -> dict:
        return {"kind": self.kind, "dims": list(self.dims)}

    @classmethod
    def from_json(cls, data: dict) -> DomainSpec:
        return cls(data["kind"], tuple(data["dims"]))

    def __str__(self) -> str:
        if self.kind == "ball":
            return f"B^{self.dims[0]}"
        return f"D^{self.kind}_{','.join(map(str, self.dims))}"


def Ball(n: int) -> DomainSpec:
    return DomainSpec("ball", (n,))


def TypeI(p: int, q: int) -> DomainSpec:
    return DomainSpec("I", (p, q))


def TypeII(n: int) -> DomainSpec:
    return DomainSpec("II", (n,))


def TypeIII(n: int) -> DomainSpec:
    return DomainSpec("III", (n,))


def TypeIV(m: int) -> DomainSpec:
    return DomainSpec("IV", (m,))


def _tri_indices(D: DomainSpec):
    n = D.dims[0]
    return np.triu_indices(n, 1 if D.kind == "II" else 0)


def to_coords(D: DomainSpec, Z) -> np.ndarray:
    """Flat coordinate vector(s) of a point or a batch of points."""
    Z = np.asarray(Z, dtype=complex)
    if D.kind in ("ball", "IV"):
        return Z
    lead = Z.shape[: Z.ndim - 2]
    if D.kind == "I":
        return Z.reshape(lead + (-1,))
    iu = _tri_indices(D)
    return Z[..., iu[0], iu[1]]


def from_coords(D: DomainSpec, w) -> np.ndarray:
    """Inverse of to_coords; materializes skew / symmetric matrices."""
    w = np.asarray(w, dtype=complex)
    if w.shape[-1] != D.coord_dim:
        raise ValueError(f"{D} has {D.coord_dim} coordinates, got {w.shape[-1]}")
    if D.kind in ("ball", "IV"):
        return w
    lead = w.shape[:-1]
    if D.kind == "I":
        return w.reshape(lead + D.shape)
    n = D.dims[0]
    Z = np.zeros(lead + (n, n), dtype=complex)
    iu = _tri_indices(D)
    Z[..., iu[0], iu[1]] = w
    if D.kind == "II":
        Z[..., iu[1], iu[0]] = -w
    else:
        Z[..., iu[1], iu[0]] = w
    return Z


def check_point(D: DomainSpec, Z) -> np.ndarray:
    """Validate a single point's shape and symmetry; repair tiny asymmetry."""
    Z = np.asarray(Z, dtype=complex)
    if Z.shape != D.shape:
        raise ValueError(f"point of shape {Z.shape} does not fit {D} (shape {D.shape})")
    if D.kind == "II":
        asym = float(np.max(np.abs(Z + Z.T)))
        if asym > SYM_TOL:
            raise ValueError(f"type II point is not skew-symmetric (defect {asym:.2e})")
        Z = (Z - Z.T) / 2
    elif D.kind == "III":
        asym = float(np.max(np.abs(Z - Z.T)))
        if asym > SYM_TOL:
            raise ValueError(f"type III point is not symmetric (defect {asym:.2e})")
        Z = (Z + Z.T) / 2
    return Z


def _batch(D: DomainSpec, Z) -> tuple[np.ndarray, bool]:
    Z = np.asarray(Z, dtype=complex)
    nd = len(D.shape)
    if Z.shape[Z.ndim - nd:] != D.shape:
        raise ValueError(f"point of shape {Z.shape} does not fit {D} (shape {D.shape})")
    single = Z.ndim == nd
    if single:
        Z = check_point(D, Z)[None]
    return Z, single


def boundary_defect(D: DomainSpec, Z) -> np.ndarray | float:
    """The defining factor of the kernel: positive inside, zero on the boundary.

    Accepts a single point or a batch with leading axes.
    """
    Zb, single = _batch(D, Z)
    if D.kind == "ball":
        out = 1 - np.sum(np.abs(Zb) ** 2, axis=-1)
    elif D.kind == "IV":
        out = 1 - np.sum(np.abs(Zb) ** 2, axis=-1) + 0.25 * np.abs(np.sum(Zb * Zb, axis=-1)) ** 2
    else:
        p = D.shape[0]
        M = np.eye(p) - Zb @ np.conj(np.swapaxes(Zb, -1, -2))
        out = np.linalg.det(M).real
    return float(out[0]) if single else out


def contains(D: DomainSpec, Z) -> bool:
    Z = check_point(D, Z)
    if D.kind == "ball":
        return bool(np.sum(np.abs(Z) ** 2) < 1)
    if D.kind == "IV":
        return bool(np.sum(np.abs(Z) ** 2) < 2 and boundary_defect(D, Z) > 0)
    M = np.eye(D.shape[0]) - Z @ Z.conj().T
    try:
        np.linalg.cholesky((M + M.conj().T) / 2)
    except np.linalg.LinAlgError:
        return False
    return True


def kernel_factor(D: DomainSpec, Z) -> float:
    """Bergman kernel on the diagonal with the normalizing constant set to 1."""
    if not contains(D, Z):
        raise ValueError(f"point lies outside {D}")
    return boundary_defect(D, Z) ** (-D.genus)


def log_kernel_coords(D: DomainSpec, w) -> np.ndarray:
    """log K at coordinate vectors w (batch along leading axes)."""
    return -D.genus * np.log(boundary_defect(D, from_coords(D, w)))


def complex_hessian(f, w0: np.ndarray, h: float) -> np.ndarray:
    """d^2 f / dz_i dzbar_j of a real function of complex coordinates by
    central differences in the underlying real coordinates.

    ``f`` takes a batch (N, d) of complex coordinate vectors.
    """
    w0 = np.asarray(w0, dtype=complex)
    d = w0.size
    x0 = np.concatenate([w0.real, w0.imag])
    r = 2 * d
    E = np.eye(r) * h
    pts = [x0]
    for a in range(r):
        pts += [x0 + E[a], x0 - E[a]]
    pairs = [(a, b) for a in range(r) for b in range(a + 1, r)]
    for a, b in pairs:
        pts += [x0 + E[a] + E[b], x0 + E[a] - E[b], x0 - E[a] + E[b], x0 - E[a] - E[b]]
    X = np.array(pts)
    vals = f(X[:, :d] + 1j * X[:, d:])
    f0 = vals[0]
    H = np.zeros((r, r))
    for a in range(r):
        H[a, a] = (vals[1 + 2 * a] - 2 * f0 + vals[2 + 2 * a]) / h**2
    off = 1 + 2 * r
    for k, (a, b) in enumerate(pairs):
        pp, pm, mp, mm = vals[off + 4 * k: off + 4 * k + 4]
        H[a, b] = H[b, a] = (pp - pm - mp + mm) / (4 * h * h)
    Hxx, Hxy = H[:d, :d], H[:d, d:]
    Hyx, Hyy = H[d:, :d], H[d:, d:]
    return 0.25 * (Hxx + Hyy + 1j * (Hxy - Hyx))


def metric(D: DomainSpec, Z, h: float = METRIC_STEP) -> np.ndarray:
    """Bergman metric g_{i jbar} = d^2 log K / dz_i dzbar_j in the coordinate
    chart of D, by finite differences with step h."""
    Z = check_point(D, Z)
    if not contains(D, Z) or boundary_defect(D, Z) <= 10 * h:
        raise ValueError(f"point too close to the boundary of {D} for step {h}")
    w0 = to_coords(D, Z)
    return complex_hessian(lambda w: log_kernel_coords(D, w), w0, h)


def ball_metric_exact(n: int, z) -> np.ndarray:
    """Closed-form Bergman metric of B^n (normalizing constant 1)."""
    z = np.asarray(z, dtype=complex).ravel()
    if z.size != n:
        raise ValueError(f"expected {n} coordinates")
    s = 1 - np.sum(np.abs(z) ** 2)
    if s <= 0:
        raise ValueError("point outside the ball")
    return (n + 1) * (s * np.eye(n) + np.outer(z.conj(), z)) / s**2


# ---- type IV: Borel embedding and automorphisms

SQRT2 = np.sqrt(2.0)
SQRT_M2 = 1j * np.sqrt(2.0)  # principal sqrt(-1) * sqrt(2)


def J2(m: int) -> np.ndarray:
    return np.diag(np.r_[np.ones(m), -1.0, -1.0])


def homogeneous_lift_IV(Z) -> np.ndarray:
    """(z, (1 + ZZ^t/2)/sqrt 2, (1 - ZZ^t/2)/sqrt(-2)); batch along leading axes."""
    Z = np.asarray(Z, dtype=complex)
    s = np.sum(Z * Z, axis=-1, keepdims=True)
    return np.concatenate([Z, (1 + s / 2) / SQRT2, (1 - s / 2) / SQRT_M2], axis=-1)


@dataclass(frozen=True)
class AutIV:
    """Automorphism of D^IV_m given by a real (m+2)x(m+2) matrix in O(m, 2)
    with det(D) > 0, acting on row vectors from the right."""

    T: np.ndarray = field(repr=False)

    def __post_init__(self):
        T = np.asarray(self.T, dtype=float)
        if T.ndim != 2 or T.shape[0] != T.shape[1] or T.shape[0] < 4:
            raise ValueError(f"AutIV needs a square matrix of size >= 4, got {T.shape}")
        m = T.shape[0] - 2
        err = float(np.max(np.abs(T @ J2(m) @ T.T - J2(m))))
        if err > 1e-10:
            raise ValueError(f"matrix is not in O(m, 2) (defect {err:.2e})")
        if np.linalg.det(T[m:, m:]) <= 0:
            raise ValueError("the 2x2 block D must have positive determinant")
        T.setflags(write=False)
        object.__setattr__(self, "T", T)

    @property
    def m(self) -> int:
        return self.T.shape[0] - 2

    @property
    def blocks(self):
        m = self.m
        T = self.T
        return T[:m, :m], T[:m, m:], T[m:, :m], T[m:, m:]

    @classmethod
    def identity(cls, m: int) -> AutIV:
        return cls(np.eye(m + 2))

    @classmethod
    def rotation(cls, A) -> AutIV:
        """Z -> Z A for A in O(m); an element of the isotropy group at 0."""
        A = np.asarray(A, dtype=float)
        m = A.shape[0]
        T = np.eye(m + 2)
        T[:m, :m] = A
        return cls(T)

    @classmethod
    def random(cls, m: int, rng: np.random.Generator, t: float = 0.5) -> AutIV:
        """exp(t S) for a random S with S J2 + J2 S^t = 0 (identity component)."""
        if not 0 < t <= 0.5:
            raise ValueError("t must lie in (0, 0.5]")
        K = rng.standard_normal((m + 2, m + 2))
        K = (K - K.T) / 2
        S = K @ J2(m)
        S /= max(1.0, np.linalg.norm(S, 2))
        return cls(expm(t * S))


class SingularActionError(ArithmeticError):
    pass


def apply_aut_IV(T: AutIV, Z, *, check: bool = True, return_scale: bool = False):
    """T(Z) = (Z A + Z' C) / ((Z B + Z' D) (1/sqrt 2, sqrt(-1/2))^t).

    Works on a single point or a batch (N, m).  With ``return_scale`` also
    returns mu, the factor with xi(T(Z)) = mu * xi(Z) T.
    """
    Z = np.asarray(Z, dtype=complex)
    single = Z.ndim == 1
    Zb = Z[None] if single else Z
    if Zb.shape[-1] != T.m:
        raise ValueError(f"point has {Zb.shape[-1]} coordinates, automorphism acts on {T.m}")
    if check:
        D = TypeIV(T.m)
        bad = boundary_defect(D, Zb) <= 0
        if np.any(bad) or np.any(np.sum(np.abs(Zb) ** 2, axis=-1) >= 2):
            raise ValueError("point lies outside D^IV")
    xi = homogeneous_lift_IV(Zb) @ T.T
    m = T.m
    den = xi[:, m] / SQRT2 + xi[:, m + 1] * (1j / SQRT2)
    if np.any(np.abs(den) < 1e-14):
        raise SingularActionError("vanishing denominator in the type IV action")
    W = xi[:, :m] / den[:, None]
    mu = 1 / den
    if single:
        W, mu = W[0], mu[0]
    return (W, mu) if return_scale else W


@dataclass(frozen=True)
class AutBall:
    """Automorphism z -> phi_a(z) U of B^n, phi_a the involution swapping a
    and 0.  A zero center gives the unitary map z -> z U."""

    center: np.ndarray
    unitary: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.center, dtype=complex).ravel()
        U = np.asarray(self.unitary, dtype=complex)
        if U.shape != (a.size, a.size):
            raise ValueError("unitary must be n x n with n = len(center)")
        if np.sum(np.abs(a) ** 2) >= 1:
            raise ValueError("center must lie in the ball")
        if np.max(np.abs(U @ U.conj().T - np.eye(a.size))) > 1e-12:
            raise ValueError("matrix is not unitary")
        a.setflags(write=False)
        U.setflags(write=False)
        object.__setattr__(self, "center", a)
        object.__setattr__(self, "unitary", U)

    @property
    def n(self) -> int:
        return self.center.size

    @classmethod
    def identity(cls, n: int) -> AutBall:
        return cls(np.zeros(n), np.eye(n))


def apply_aut_ball(phi: AutBall, z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    single = z.ndim == 1
    Z = z[None] if single else z
    a = phi.center
    aa = float(np.sum(np.abs(a) ** 2))
    if aa == 0:
        W = Z  # center 0 means a pure unitary map
    else:
        za = Z @ a.conj()  # <z, a>
        Pz = za[:, None] * a[None, :] / aa
        Qz = Z - Pz
        W = (a[None, :] - Pz - np.sqrt(1 - aa) * Qz) / (1 - za)[:, None]
    W = W @ phi.unitary
    return W[0] if single else W


def max_ball_dimension(D: DomainSpec) -> int:
    """Largest n such that B^n admits a holomorphic isometry into D."""
    k, d = D.kind, D.dims
    if k == "ball":
        raise ValueError("not defined for a ball")
    if k == "I":
        return d[0] + d[1] - 1
    if k == "II":
        return 2 * d[0] - 3
    if k == "III":
        return d[0]
    return d[0] - 1
