"""Builders for the explicit isometries and proper maps into the classical domains."""

from __future__ import annotations

import logging
from math import cos, pi, sin, sqrt

from ..domains import Ball, TypeI, TypeII, TypeIII, TypeIV
from ..polytable import PolyTable, variables
from .core import HoloMap, MapComponent

log = logging.getLogger(__name__)

QUARTER = pi / 4
ANGLE_SLACK = 1e-12


def _angle(x: float, name: str, *, lo=0.0, hi=QUARTER, hi_open=False) -> float:
    x = float(x)
    upper_ok = x < hi - ANGLE_SLACK if hi_open else x <= hi + ANGLE_SLACK
    if not (x > lo and upper_ok):
        rng = f"({lo:g}, {hi:.6g}{')' if hi_open else ']'}"
        raise ValueError(f"{name} = {x!r} outside {rng}")
    return x


def _angles(thetas, count: int, what: str) -> list[float]:
    if isinstance(thetas, (int, float)):
        thetas = [thetas] * count
    thetas = [float(t) for t in thetas]
    if len(thetas) != count:
        raise ValueError(f"{what} needs {count} angle(s), got {len(thetas)}")
    return [_angle(t, f"theta_{j + 1}") for j, t in enumerate(thetas)]


def _pair(z: PolyTable, theta: float) -> list[MapComponent]:
    return [MapComponent.poly(z * cos(theta)), MapComponent.poly(z * (1j * sin(theta)))]


def _all_quarter(thetas) -> bool:
    return all(abs(t - QUARTER) <= ANGLE_SLACK for t in thetas)


def _one(n: int) -> PolyTable:
    return PolyTable.constant(n, 1.0)


def _finish(F: HoloMap) -> HoloMap:
    if F.base is None and F.n > 0:
        w = F.origin_value()
        if abs(w).max() > 1e-14:
            raise AssertionError(f"{F.family} does not fix the origin")
    return F


def _sum_sq(polys, weights=None, n: int | None = None) -> PolyTable:
    if n is None:
        n = polys[0].nvars
    out = PolyTable.zero(n)
    for i, p in enumerate(polys):
        out = out + (p * p) * (1.0 if weights is None else weights[i])
    return out


def _void(name: str, lo: int, hi: int):
    if lo > hi:
        log.debug("%s: index range %d..%d is void", name, lo, hi)


def _rational_tail(n: int, Q: PolyTable, zn: PolyTable) -> list[MapComponent]:
    """The two rational components with denominator 1 - z_n."""
    a = Q - 2 * zn * zn + 2 * zn
    b = Q + 2 * zn * zn - 2 * zn
    d = _one(n) - zn
    return [
        MapComponent.rational(a, d * (2 * sqrt(2))),
        MapComponent.rational(b, d * (2j * sqrt(2))),
    ]


def build_R(n: int, k: int, thetas) -> HoloMap:
    """Rational isometries R_{n+k}: B^n -> D^IV_{n+k}, 2 <= k <= n+2."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 2 <= k <= n + 2:
        raise ValueError(f"k = {k} outside [2, {n + 2}]")
    z = variables(n)
    comps: list[MapComponent] = []
    if k <= n:
        th = _angles(thetas, k - 1, f"R_{{n+{k}}}")
        _void("R", k, n - 1)
        for j in range(k - 1):
            comps += _pair(z[j], th[j])
        comps += [MapComponent.poly(z[j]) for j in range(k - 1, n - 1)]
        Q = _sum_sq(z[: k - 1], [cos(2 * t) for t in th], n=n) + _sum_sq(z[k - 1 : n - 1], n=n)
        comps += _rational_tail(n, Q, z[n - 1])
    elif k == n + 1:
        th = _angles(thetas, n - 1, "R_{2n+1}")
        for j in range(n - 1):
            comps += _pair(z[j], th[j])
        comps.append(MapComponent.poly(z[n - 1]))
        S = _sum_sq(z[: n - 1], [cos(2 * t) for t in th], n=n) + z[n - 1] * z[n - 1]
        comps += [MapComponent.poly(S / (2 * sqrt(2))), MapComponent.poly(S * (-1j / (2 * sqrt(2))))]
    else:
        th = _angles(thetas, n, "R_{2n+2}")
        if _all_quarter(th):
            raise ValueError("R_{2n+2} needs some theta_j < pi/4")
        for j in range(n):
            comps += _pair(z[j], th[j])
        S = _sum_sq(z, [cos(2 * t) for t in th])
        comps += [MapComponent.poly(S / (2 * sqrt(2))), MapComponent.poly(S * (-1j / (2 * sqrt(2))))]
    return _finish(HoloMap("R_n+k", n, TypeIV(n + k), comps, {"k": k, "thetas": th}))


def build_I(n: int, k: int, thetas, alpha: float | None = None) -> HoloMap:
    """Radical isometries I_{n+k}: B^n -> D^IV_{n+k}, 2 <= k <= n+2.

    k = n+2 needs the extra angle ``alpha`` in (0, pi/4).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 2 <= k <= n + 2:
        raise ValueError(f"k = {k} outside [2, {n + 2}]")
    z = variables(n)
    one = _one(n)
    comps: list[MapComponent] = []
    params: dict = {"k": k}
    if k <= n + 1:
        th = _angles(thetas, k - 1, f"I_{{n+{k}}}")
        if k == n + 1 and _all_quarter(th):
            raise ValueError("I_{2n+1} needs some theta_j < pi/4")
        for j in range(k - 1):
            comps += _pair(z[j], th[j])
        comps += [MapComponent.poly(z[j]) for j in range(k - 1, n)]
        S = one - _sum_sq(z[: k - 1], [cos(2 * t) for t in th], n=n) - _sum_sq(z[k - 1 :], n=n)
        comps.append(MapComponent.radical(one, -one, S))
    else:
        th = _angles(thetas, n, "I_{2n+2}")
        if _all_quarter(th):
            raise ValueError("I_{2n+2} needs some theta_j < pi/4")
        if alpha is None:
            raise ValueError("I_{2n+2} needs the extra angle alpha")
        a = _angle(alpha, "alpha", hi_open=True)
        params["alpha"] = a
        for j in range(n):
            comps += _pair(z[j], th[j])
        S = one - _sum_sq(z, [cos(2 * t) for t in th]) * cos(2 * a)
        c1 = cos(a) / cos(2 * a)
        c2 = 1j * sin(a) / cos(2 * a)
        comps += [MapComponent.radical(one * c1, one * -c1, S), MapComponent.radical(one * c2, one * -c2, S)]
    params["thetas"] = th
    return _finish(HoloMap("I_n+k", n, TypeIV(n + k), comps, params))


def build_I_family4(n: int, k: int, theta: float, beta: float | None = None,
                    alpha: float | None = None) -> HoloMap:
    """One-parameter families I_{n+k, theta}: angle theta on z_1, a fixed
    beta on z_2..z_{k-1}, and for k = n+2 a fixed alpha in the last pair."""
    if n < 2:
        raise ValueError("these families need n >= 2")
    if not 2 <= k <= n + 2:
        raise ValueError(f"k = {k} outside [2, {n + 2}]")
    theta = _angle(theta, "theta")
    params: dict = {"k": k, "theta": theta}
    z = variables(n)
    one = _one(n)
    if k == 2:
        comps = _pair(z[0], theta) + [MapComponent.poly(x) for x in z[1:]]
        S = one - z[0] * z[0] * cos(2 * theta) - _sum_sq(z[1:], n=n)
        comps.append(MapComponent.radical(one, -one, S))
        return _finish(HoloMap("I_family4", n, TypeIV(n + 2), comps, params))
    if beta is None:
        raise ValueError("k >= 3 needs the fixed angle beta")
    beta = _angle(beta, "beta", hi_open=True)
    if beta > theta + ANGLE_SLACK:
        raise ValueError(f"need beta <= theta, got beta = {beta!r} > theta = {theta!r}")
    params["beta"] = beta
    last = min(k - 1, n)  # number of paired variables
    comps = _pair(z[0], theta)
    for j in range(1, last):
        comps += _pair(z[j], beta)
    quad = z[0] * z[0] * cos(2 * theta) + _sum_sq(z[1:last], n=n) * cos(2 * beta)
    if k <= n + 1:
        _void("I_family4", k, n)
        comps += [MapComponent.poly(x) for x in z[k - 1 :]]
        S = one - quad - _sum_sq(z[k - 1 :], n=n)
        comps.append(MapComponent.radical(one, -one, S))
    else:
        if alpha is None:
            raise ValueError("k = n+2 needs the fixed angle alpha")
        a = _angle(alpha, "alpha", hi_open=True)
        params["alpha"] = a
        S = one - quad * cos(2 * a)
        c1 = cos(a) / cos(2 * a)
        c2 = 1j * sin(a) / cos(2 * a)
        # second entry written as c2 * (sqrt(S) - 1)
        comps += [MapComponent.radical(one * c1, one * -c1, S), MapComponent.radical(one * -c2, one * c2, S)]
    return _finish(HoloMap("I_family4", n, TypeIV(n + k), comps, params))


# ball -> ball generators


def identity_map(n: int) -> HoloMap:
    return HoloMap("identity", n, Ball(n), [MapComponent.poly(x) for x in variables(n)], {"n": n})


def whitney_map(n: int) -> HoloMap:
    """(z_1, ..., z_{n-1}, z_n z_1, ..., z_n z_n): B^n -> B^{2n-1}."""
    if n < 1:
        raise ValueError("n must be >= 1")
    z = variables(n)
    comps = [MapComponent.poly(x) for x in z[:-1]] + [MapComponent.poly(z[-1] * x) for x in z]
    return HoloMap("whitney", n, Ball(2 * n - 1), comps, {"n": n}, isometric=False)


def _compositions(n: int, d: int):
    if n == 1:
        yield (d,)
        return
    for a in range(d, -1, -1):
        for rest in _compositions(n - 1, d - a):
            yield (a,) + rest


def homogeneous_map(n: int, d: int) -> HoloMap:
    """All degree-d monomials with coefficients sqrt(multinomial): sum |.|^2 = |z|^{2d}."""
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    from math import factorial

    comps = []
    for e in _compositions(n, d):
        c = factorial(d)
        for a in e:
            c //= factorial(a)
        comps.append(MapComponent.poly(PolyTable.monomial(e, sqrt(c))))
    return HoloMap("homogeneous", n, Ball(len(comps)), comps, {"n": n, "d": d},
                   isometric=(d == 1))


def monomial_map(n: int, exponents, coeffs) -> HoloMap:
    """Monomial map z -> (c_i z^{alpha_i}); coefficients must be real."""
    exponents = [tuple(int(a) for a in e) for e in exponents]
    coeffs = list(coeffs)
    if not exponents or len(exponents) != len(coeffs):
        raise ValueError("need matching, non-empty exponent and coefficient lists")
    for e in exponents:
        if len(e) != n or any(a < 0 for a in e):
            raise ValueError(f"bad exponent {e} for n = {n}")
        if sum(e) == 0:
            raise ValueError("constant monomials are not allowed (G(0) = 0)")
    if len(set(exponents)) != len(exponents):
        raise ValueError("monomials must be distinct")
    for c in coeffs:
        if isinstance(c, complex) and c.imag != 0:
            raise ValueError("monomial coefficients must be real")
    comps = [MapComponent.poly(PolyTable.monomial(e, float(c))) for e, c in zip(exponents, coeffs)]
    params = {"n": n, "exponents": [list(e) for e in exponents], "coeffs": [float(c) for c in coeffs]}
    return HoloMap("monomial", n, Ball(len(comps)), comps, params, isometric=False)


def ball_proper_generators(kind: str, n: int, d: int | None = None, exponents=None,
                           coeffs=None) -> HoloMap:
    if kind == "identity":
        return identity_map(n)
    if kind == "whitney":
        return whitney_map(n)
    if kind == "homogeneous":
        if d is None:
            raise ValueError("homogeneous generator needs a degree d")
        return homogeneous_map(n, d)
    if kind == "monomial":
        return monomial_map(n, exponents, coeffs)
    raise ValueError(f"unknown generator kind {kind!r}")


# constructions from a ball map G


def _polys_of(G: HoloMap) -> list[PolyTable]:
    if G.target.kind != "ball":
        raise ValueError("G must be a map into a ball")
    if not G.is_polynomial:
        raise ValueError("G must be polynomial")
    polys = [c.num * (1 / c.den.constant_term()) for c in G.components]
    if any(abs(p.constant_term()) > 1e-14 for p in polys):
        raise ValueError("G(0) must be 0")
    return polys


def _base_tag(G: HoloMap) -> dict:
    return {"G": G.family, "G_params": dict(G.params)}


def build_HG(kind: str, dims, G: HoloMap) -> HoloMap:
    """H_G into D^I_{p,q}, D^II_m, D^III_m or D^IV_{m+1} from a polynomial ball map G."""
    g = _polys_of(G)
    n = G.n
    N = len(g)
    dims = (dims,) if isinstance(dims, int) else tuple(dims)
    one = _one(n)
    comps: list[MapComponent] = []
    exponent = 1
    if kind == "I":
        p, q = dims
        if not q >= p >= 2:
            raise ValueError(f"type I needs q >= p >= 2, got {(p, q)}")
        if N != p + q - 1:
            raise ValueError(f"type I ({p},{q}) needs G with {p + q - 1} components, got {N}")
        target = TypeI(p, q)
        den = g[0] - one
        comps += [MapComponent.poly(x) for x in g[:q]]
        for i in range(1, p):
            h = g[q + i - 1]
            comps.append(MapComponent.poly(h))
            comps += [MapComponent.rational(h * g[j], den) for j in range(1, q)]
    elif kind == "II":
        (m,) = dims
        if m < 3:
            raise ValueError("type II needs m >= 3")
        if N != 2 * m - 3:
            raise ValueError(f"type II m = {m} needs G with {2 * m - 3} components, got {N}")
        target = TypeII(m)
        exponent = 2
        gg = {j: g[j - 2] for j in range(2, m + 1)}
        hh = {j: g[m - 1 + j - 3] for j in range(3, m + 1)}
        den = gg[2] - one
        for i in range(1, m + 1):
            for j in range(i + 1, m + 1):
                if i == 1:
                    comps.append(MapComponent.poly(gg[j]))
                elif i == 2:
                    comps.append(MapComponent.poly(hh[j]))
                else:
                    comps.append(MapComponent.rational(gg[i] * hh[j] - gg[j] * hh[i], den))
    elif kind == "III":
        (m,) = dims
        if m < max(n, 2):
            raise ValueError(f"type III needs m >= max(n, 2) = {max(n, 2)}, got {m}")
        if N != m:
            raise ValueError(f"type III m = {m} needs G with {m} components, got {N}")
        target = TypeIII(m)
        den = (g[0] - one) * 2
        for i in range(m):
            for j in range(i, m):
                if i == 0:
                    comps.append(MapComponent.poly(g[0] if j == 0 else g[j] / sqrt(2)))
                else:
                    comps.append(MapComponent.rational(g[i] * g[j], den))
    elif kind == "IV":
        (m,) = dims
        if N != m or m < max(n, 2):
            raise ValueError(f"type IV H_G needs G into B^m with m = {m} >= n; G has {N} components")
        target = TypeIV(m + 1)
        s = _sum_sq(g[: m - 1], n=n) * 0.5
        gm = g[m - 1]
        Q = (one - gm) * sqrt(2)
        comps += [MapComponent.poly(x) for x in g[: m - 1]]
        comps.append(MapComponent.rational(s - gm * gm + gm, Q))
        comps.append(MapComponent.rational((s + gm * gm - gm) * 1j, Q))
    else:
        raise ValueError(f"unknown domain type {kind!r}")
    iso = G.family == "identity"
    params = {"type": kind, "dims": list(dims), **_base_tag(G)}
    F = HoloMap("H_G", n, target, comps, params, exponent, base=G, isometric=iso)
    return _finish(F)


def build_WG(m: int, G: HoloMap) -> HoloMap:
    """W_G = (g, 1 - sqrt(1 - sum g_j^2)) into D^IV_{m+1}."""
    g = _polys_of(G)
    n = G.n
    if len(g) != m or m < max(n, 2):
        raise ValueError(f"W_G needs G into B^m with m = {m} >= n; G has {len(g)} components")
    one = _one(n)
    comps = [MapComponent.poly(x) for x in g]
    comps.append(MapComponent.radical(one, -one, one - _sum_sq(g)))
    params = {"type": "IV", "dims": [m], **_base_tag(G)}
    return _finish(HoloMap("W_G", n, TypeIV(m + 1), comps, params, 1, base=G,
                           isometric=G.family == "identity"))


def build_canonical(kind: str, dims) -> HoloMap:
    """R^I_{p,q}, R^II_m, R^III_m, R^IV_m (kind 'IV') and I^IV_m (kind 'IV_I')."""
    dims = (dims,) if isinstance(dims, int) else tuple(dims)
    if kind == "I":
        p, q = dims
        if not q >= p >= 2:
            raise ValueError(f"R^I needs q >= p >= 2, got {(p, q)}")
        F = build_HG("I", (p, q), identity_map(p + q - 1))
    elif kind == "II":
        (m,) = dims
        if m < 3:
            raise ValueError("R^II needs m >= 3")
        F = build_HG("II", m, identity_map(2 * m - 3))
    elif kind == "III":
        (m,) = dims
        if m < 2:
            raise ValueError("R^III needs m >= 2")
        F = build_HG("III", m, identity_map(m))
    elif kind in ("IV", "IV_I"):
        (m,) = dims
        if m < 2:
            raise ValueError("R^IV and I^IV need m >= 2")
        F = build_HG("IV", m, identity_map(m)) if kind == "IV" else build_WG(m, identity_map(m))
    else:
        raise ValueError(f"unknown canonical map kind {kind!r}")
    family = {"I": "R_I_canonical", "II": "R_II_canonical", "III": "R_III_canonical",
              "IV": "R_IV_canonical", "IV_I": "I_IV_canonical"}[kind]
    return HoloMap(family, F.n, F.target, F.components, {"dims": list(dims)}, F.exponent,
                   None, True)


def build_MNk(F: HoloMap, k: int, theta: float | None = None) -> HoloMap:
    """M^{N+k}_F into D^IV_{N+k} from a real monomial ball map F."""
    f = _polys_of(F)
    for p in f:
        if len(p) != 1:
            raise ValueError("F must be a monomial map")
        if not p.is_real():
            raise ValueError("F must have real coefficients")
    N = len(f)
    n = F.n
    if not 1 <= k <= N + 1:
        raise ValueError(f"k = {k} outside [1, {N + 1}]")
    one = _one(n)
    params: dict = {"k": k, **_base_tag(F)}
    if k == 1:
        comps = [MapComponent.poly(x) for x in f]
        S = one - _sum_sq(f)
    else:
        if theta is None:
            raise ValueError("k >= 2 needs theta")
        theta = _angle(theta, "theta", hi_open=True)
        params["theta"] = theta
        comps = []
        for j in range(k - 1):
            comps += _pair(f[j], theta)
        comps += [MapComponent.poly(x) for x in f[k - 1 :]]
        S = one - _sum_sq(f[: k - 1]) * cos(2 * theta) - _sum_sq(f[k - 1 :], n=n)
    comps.append(MapComponent.radical(one, -one, S))
    return _finish(HoloMap("M_NkF", n, TypeIV(N + k), comps, params, 1, base=F,
                           isometric=F.family == "identity"))


def build_polynomial_isometry(kind: str, dims) -> HoloMap:
    """Polynomial isometries from B^{n_Omega - 1}: canonical maps sliced by one hyperplane.

    dims: (p, q) for type I, n for D^II_n, D^III_n, and n for D^IV_{n+1}.
    """
    dims = (dims,) if isinstance(dims, int) else tuple(dims)
    if kind == "I":
        p, q = dims
        if not q >= p >= 2:
            raise ValueError(f"need q >= p >= 2, got {(p, q)}")
        n = p + q - 2
        v = variables(n)
        zs = {j: v[j - 2] for j in range(2, q + 1)}
        ws = {i: v[q - 1 + i - 2] for i in range(2, p + 1)}
        comps = [MapComponent.zero(n)] + [MapComponent.poly(zs[j]) for j in range(2, q + 1)]
        for i in range(2, p + 1):
            comps.append(MapComponent.poly(ws[i]))
            comps += [MapComponent.poly(-ws[i] * zs[j]) for j in range(2, q + 1)]
        target, e = TypeI(p, q), 1
    elif kind == "II":
        (N,) = dims
        if N < 4:
            raise ValueError("type II polynomial isometry needs n >= 4")
        n = 2 * N - 4
        v = variables(n)
        zs = {j: v[j - 3] for j in range(3, N + 1)}
        ws = {j: v[N - 2 + j - 3] for j in range(3, N + 1)}
        comps = []
        for i in range(1, N + 1):
            for j in range(i + 1, N + 1):
                if i == 1:
                    comps.append(MapComponent.zero(n) if j == 2 else MapComponent.poly(zs[j]))
                elif i == 2:
                    comps.append(MapComponent.poly(ws[j]))
                else:
                    comps.append(MapComponent.poly(zs[j] * ws[i] - zs[i] * ws[j]))
        target, e = TypeII(N), 2
    elif kind == "III":
        (N,) = dims
        if N < 2:
            raise ValueError("type III polynomial isometry needs n >= 2")
        n = N - 1
        v = variables(n)
        comps = []
        for i in range(N):
            for j in range(i, N):
                if i == 0:
                    comps.append(MapComponent.zero(n) if j == 0 else MapComponent.poly(v[j - 1] / sqrt(2)))
                else:
                    comps.append(MapComponent.poly(v[i - 1] * v[j - 1] * -0.5))
        target, e = TypeIII(N), 1
    elif kind == "IV":
        (N,) = dims
        if N < 2:
            raise ValueError("type IV polynomial isometry needs n >= 2")
        n = N - 1
        v = variables(n)
        S = _sum_sq(v)
        comps = [MapComponent.poly(x) for x in v]
        comps += [MapComponent.poly(S * (-sqrt(2) / 4)), MapComponent.poly(S * (1j * sqrt(2) / 4))]
        target, e = TypeIV(N + 1), 1
    else:
        raise ValueError(f"unknown domain type {kind!r}")
    return _finish(HoloMap("poly_isometry", n, target, comps, {"type": kind, "dims": list(dims)}, e))


def linear_embedding_2n(n: int) -> HoloMap:
    """(z_1/sqrt2, sqrt(-2)/2 z_1, ..., z_n/sqrt2, sqrt(-2)/2 z_n) into D^IV_{2n}."""
    if n < 1:
        raise ValueError("n must be >= 1")
    comps = []
    for x in variables(n):
        comps += [MapComponent.poly(x * (sqrt(2) / 2)), MapComponent.poly(x * (1j * sqrt(2) / 2))]
    return _finish(HoloMap("linear_2n", n, TypeIV(2 * n), comps, {"n": n}))
