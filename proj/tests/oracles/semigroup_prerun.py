#!/usr/bin/env python3
"""Contour-quadrature study for the semigroup, plus FD-oracle feasibility.

Compares trapezoid against composite Gauss-Legendre panels on the truncated
sector boundary mu = lam0 + r e^{+-i phi} (phi = 0.55pi, lam0 = 1, tail
e^{t Re mu} < 1e-12), then measures the semigroup-law defect at t = s = 0.5
and the t -> 0+ trend with the exact per-mode resolvent.

Iterated application hits lambda values at which state exponents are resonant
(P(s) = 0 exactly, same contour twice): particular solutions then need the
x^l e^{sx} lift.  Mode states are (s, l, a) term lists, all integrals closed
form on the half-line.
"""
import cmath
import math

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.linalg import solve_banded

PHI = 0.55 * math.pi
LAM0 = 1.0
RES_TOL = 1e-6


def panels_to_rule(edges, order):
    x, wx = leggauss(order)
    r = np.concatenate([(e0 + e1) / 2 + (e1 - e0) / 2 * x
                        for e0, e1 in zip(edges[:-1], edges[1:])])
    w = np.concatenate([(e1 - e0) / 2 * wx for e0, e1 in zip(edges[:-1], edges[1:])])
    return r, w


def ray_rule(R, nodes, rule, t=1.0):
    if rule == "trap":
        r = np.linspace(0.0, R, nodes)
        w = np.full(nodes, r[1] - r[0])
        w[0] = w[-1] = w[0] / 2
        return r, w
    if rule == "gl8":
        panels = max(1, round(nodes / 8))
        return panels_to_rule(np.linspace(0.0, R, panels + 1), 8)
    if rule.startswith("graded"):
        # dyadic panels from the corner out to the oscillation half-period
        # W = pi/(t sin phi), then uniform panels of width <= W/d out to R
        d = float(rule[6:]) if len(rule) > 6 else 1.0
        W = math.pi / (t * math.sin(PHI)) / d
        down = [min(W, R)]
        while down[-1] > 1.0 / d:
            down.append(down[-1] / 2)
        edges = [0.0] + down[::-1]
        if R > W:
            nu = math.ceil((R - W) / W)
            edges += list(np.linspace(W, R, nu + 1)[1:])
        return panels_to_rule(np.array(edges), 8)
    raise ValueError(rule)


def contour(t, nodes, rule="gl8"):
    R = (27.631 + t) / (t * abs(math.cos(PHI)))
    r, tw = ray_rule(R, nodes, rule, t)
    mu_up = LAM0 + r * cmath.exp(1j * PHI)
    mu_dn = LAM0 + r * cmath.exp(-1j * PHI)
    w_up = tw * cmath.exp(1j * PHI) / (2j * math.pi)
    w_dn = -tw * cmath.exp(-1j * PHI) / (2j * math.pi)
    return np.concatenate([mu_dn, mu_up]), np.concatenate([w_dn, w_up])


def tau_pair(k2, lam):
    if isinstance(lam, np.ndarray):
        sq = np.sqrt(lam.astype(complex))
        return np.sqrt(k2 + 1j * sq), np.sqrt(k2 - 1j * sq)
    sq = cmath.sqrt(lam)
    return cmath.sqrt(k2 + 1j * sq), cmath.sqrt(k2 - 1j * sq)


def S_sym(k2, lam):
    t1, t2 = tau_pair(k2, lam)
    return (t1 + t2) / ((t1 + t2) * (lam + k2) + 2 * t1 * t2)


# --- (s, l, a) term states ---------------------------------------------------
class Mode:
    """u1 = sum_i a[i] x^l[i] e^{s[i] x} on the half-line, plus scalar u2."""

    def __init__(self, s, l, a, u2):
        self.s = np.asarray(s, dtype=complex)
        self.l = np.asarray(l, dtype=int)
        self.a = np.asarray(a, dtype=complex)
        self.u2 = complex(u2)


def merge(s, l, a):
    out = {}
    for si, li, ai in zip(s, l, a):
        key = (round(si.real, 9), round(si.imag, 9), int(li))
        if key in out:
            out[key][1] += ai
        else:
            out[key] = [si, ai]
    ss = np.array([v[0] for v in out.values()], dtype=complex)
    ll = np.array([k[2] for k in out], dtype=int)
    aa = np.array([v[1] for v in out.values()], dtype=complex)
    keep = np.abs(aa) > 1e-300
    return ss[keep], ll[keep], aa[keep]


def dn(s, l, a):
    ss = [s]
    ll = [l]
    aa = [a * s]
    pos = l > 0
    if pos.any():
        ss.append(s[pos])
        ll.append(l[pos] - 1)
        aa.append(a[pos] * l[pos])
    return np.concatenate(ss), np.concatenate(ll), np.concatenate(aa)


def eval0(s, l, a):
    return a[l == 0].sum() if len(a) else 0.0


def particular(k2, lam, s, bl):
    """Solve (lam + (k2 - d^2)^2) u = (sum_l bl[l] x^l) e^{s x} exactly.
    Returns coefficient list c (index = degree).  If P(s) = 0 the ansatz is
    lifted by the root multiplicity r: c_j for j in [r, L+r], with
    sum_{j>=l+r} C(j, j-l) P^{(j-l)}(s) c_j = bl[l], solved descending."""
    # P and derivatives: P(z) = lam + k2^2 - 2 k2 z^2 + z^4
    pc = [lam + k2 * k2, 0.0, -2 * k2, 0.0, 1.0]

    def pderiv(q, z):  # P^{(q)}(z)
        tot = 0.0
        for j in range(q, 5):
            tot += pc[j] * math.perm(j, q) * z ** (j - q)
        return tot

    P = pderiv(0, s)
    scale = abs(lam) + abs(k2 - s * s) ** 2 + 1.0
    r = 0
    if abs(P) < RES_TOL * scale:
        r = 1
        assert abs(pderiv(1, s)) > 1e-8 * scale, "double resonance unexpected off lam=0"
    L = len(bl) - 1
    c = [0.0] * (L + r + 1)
    for l in range(L, -1, -1):
        acc = bl[l]
        for j in range(l + r + 1, L + r + 1):
            acc -= math.comb(j, j - l) * pderiv(j - l, s) * c[j]
        c[l + r] = acc / (math.comb(l + r, r) * pderiv(r, s))
    return c


def resolvent_mode(k2, mode, lam):
    t1, t2 = tau_pair(k2, lam)
    s, l, a = mode.s, mode.l, mode.a
    P = lam + (k2 - s * s) ** 2
    scale = abs(lam) + np.abs(k2 - s * s) ** 2 + 1.0
    easy = (l == 0) & (np.abs(P) >= RES_TOL * scale)
    parts = [(s[easy], l[easy], a[easy] / P[easy])]
    if (~easy).any():
        # group the rest by exponent and run the triangular/resonant solve
        by_exp = {}
        for si, li, ai in zip(s[~easy], l[~easy], a[~easy]):
            key = (round(si.real, 9), round(si.imag, 9))
            ent = by_exp.setdefault(key, [si, {}])
            ent[1][li] = ent[1].get(li, 0.0) + ai
        ps, pl, pa = [], [], []
        for si, degs in by_exp.values():
            L = max(degs)
            bl = [degs.get(q, 0.0) for q in range(L + 1)]
            c = particular(k2, lam, si, bl)
            for j, cj in enumerate(c):
                if cj != 0.0:
                    ps.append(si); pl.append(j); pa.append(cj)
        parts.append((np.array(ps, dtype=complex), np.array(pl, dtype=int),
                      np.array(pa, dtype=complex)))
    up_s = np.concatenate([p[0] for p in parts])
    up_l = np.concatenate([p[1] for p in parts]).astype(int)
    up_a = np.concatenate([p[2] for p in parts])
    # traces of the particular part
    tr0 = eval0(up_s, up_l, up_a)
    ds, dl, da = dn(*dn(up_s, up_l, up_a))
    ls_ = np.concatenate([ds, up_s]); ll_ = np.concatenate([dl, up_l])
    la_ = np.concatenate([da, -k2 * up_a])
    ns, nl, na = dn(ls_, ll_, la_)
    tr3 = -eval0(ns, nl, na)                          # dnu Lap, dnu = -d_n
    sq = cmath.sqrt(lam)
    A = np.array([[1.0, 1.0], [1j * sq * t1, -1j * sq * t2]], dtype=complex)
    c0 = np.linalg.solve(A, np.array([-tr0, -tr3]))
    d1 = dn(up_s, up_l, up_a)
    dnu = -eval0(*d1) + t1 * c0[0] + t2 * c0[1]
    gp = mode.u2 - dnu
    S = (t1 + t2) / ((t1 + t2) * (lam + k2) + 2 * t1 * t2)
    u2 = S * gp
    c1 = t2 * u2 / (t1 + t2) + c0[0]
    c2 = t1 * u2 / (t1 + t2) + c0[1]
    os = np.concatenate([up_s, [-t1, -t2]])
    ol = np.concatenate([up_l, [0, 0]])
    oa = np.concatenate([up_a, [c1, c2]])
    return Mode(os, ol, oa, u2)


def semigroup_apply(k2, mode, t, nodes, rule="gl8"):
    mu, w = contour(t, nodes, rule)
    assert len(mu) < 3000
    wt = w * np.exp(t * mu)
    ss, ll, aa = [], [], []
    u2 = 0.0
    for m, ww in zip(mu, wt):
        out = resolvent_mode(k2, mode, m + LAM0)
        ss.append(out.s); ll.append(out.l); aa.append(ww * out.a)
        u2 += ww * out.u2
    s, l, a = merge(np.concatenate(ss), np.concatenate(ll), np.concatenate(aa))
    return Mode(s, l, a, u2)


def halfline_norm2(modes, signs):
    s = np.concatenate([m.s for m in modes])
    l = np.concatenate([m.l for m in modes])
    a = np.concatenate([sg * m.a for m, sg in zip(modes, signs)])
    s, l, a = merge(s, l, a)
    u1 = 0.0
    B = 768
    for i0 in range(0, len(s), B):
        w = s[i0:i0 + B, None] + np.conj(s)[None, :]
        p = l[i0:i0 + B, None] + l[None, :]
        I = np.zeros_like(w)
        for pv in np.unique(p):
            mask = p == pv
            I[mask] = math.factorial(int(pv)) / (-w[mask]) ** (pv + 1)
        u1 += np.einsum("a,ab,b->", a[i0:i0 + B], I, np.conj(a)).real
    u2 = abs(sum(sg * m.u2 for m, sg in zip(modes, signs))) ** 2
    return u1 + u2


def domain_probe(k2, lam_star=2.0):
    """u0 = R(lam*) applied to (f = 0, g = 1): lies in D(A)."""
    return resolvent_mode(k2, Mode([], [], [], 1.0), lam_star)


def scalar_exp_probe():
    print("orientation probe f(mu)=1/(mu-a), a=-1 (expect e^{-t}):")
    for rule in ("trap", "gl8"):
        for nodes in (101, 201, 401):
            mu, w = contour(0.5, nodes, rule)
            val = (w * np.exp(0.5 * mu) / (mu + 1.0)).sum()
            print(f"  {rule} nodes={nodes}: err {abs(val - math.exp(-0.5)):.3e}")


def scalar_u2_study():
    print("scalar u2 quadrature error vs dense reference (51201 GL nodes/ray):")
    for rule in ("trap", "gl8", "graded1", "graded2"):
        worst = {n: 0.0 for n in (101, 201, 401, 801)}
        npts = 0
        for k in (0.0, 1.0, 5.0):
            for t in (0.01, 0.1, 0.25, 0.5, 1.0):
                mu_ref, w_ref = contour(t, 51201, "graded8")
                ref = (w_ref * np.exp(t * mu_ref) * S_sym(k * k, mu_ref + LAM0)).sum()
                for nodes in worst:
                    mu, w = contour(t, nodes, rule)
                    val = (w * np.exp(t * mu) * S_sym(k * k, mu + LAM0)).sum()
                    worst[nodes] = max(worst[nodes], abs(val - ref))
                    if rule.startswith("graded"):
                        npts = max(npts, len(mu) // 2)
        note = f" (graded actual pts/ray {npts})" if npts else ""
        print(f"  {rule}: worst abs err " + ", ".join(f"{n}:{e:.2e}" for n, e in worst.items()) + note)


def law_defect_study():
    print("semigroup law defect, D(A) probe (k'=1), t=s=0.5:")
    k2 = 1.0
    u0 = domain_probe(k2)
    for rule in ("graded1", "graded2"):
        whole = semigroup_apply(k2, u0, 1.0, 0, rule)
        half = semigroup_apply(k2, u0, 0.5, 0, rule)
        twice = semigroup_apply(k2, half, 0.5, 0, rule)
        d = math.sqrt(max(halfline_norm2([whole, twice], [1.0, -1.0]), 0.0))
        nrm = math.sqrt(halfline_norm2([whole], [1.0]))
        print(f"  {rule}: defect {d:.3e}   (terms {len(twice.a)}, ||T(1)u0|| = {nrm:.5f})")


def t_to_zero_study():
    print("t->0 strong convergence ||T(t)u0-u0||, graded1, t in {1,0.1,0.01}:")
    k2 = 1.0
    u0 = domain_probe(k2)
    prev = None
    for t in (1.0, 0.1, 0.01):
        ut = semigroup_apply(k2, u0, t, 0, "graded1")
        d = math.sqrt(max(halfline_norm2([ut, u0], [1.0, -1.0]), 0.0))
        mono = "" if prev is None else ("  decreasing" if d < prev else "  NOT MONOTONE")
        print(f"  t={t:5.2f}: {d:.6e}{mono}")
        prev = d


# --- FD oracle for the mode ODE ----------------------------------------------
def fd_solve(k2, lam, g1, g2, M):
    t1, t2 = tau_pair(k2, lam)
    re_min = min(t1.real, t2.real)
    X = 14.0 / re_min
    h = X / M
    n = M + 1
    rows, cols, vals = [], [], []

    def add(i, j, v):
        rows.append(i); cols.append(j); vals.append(v)

    add(0, 0, 1.0)
    c3 = np.array([-2.5, 9.0, -12.0, 7.0, -1.5]) / h ** 3
    c1 = np.array([-1.5, 2.0, -0.5]) / h
    for j in range(5):
        add(1, j, -c3[j])
    for j in range(3):
        add(1, j, k2 * c1[j])
    d4 = np.array([1.0, -4.0, 6.0, -4.0, 1.0]) / h ** 4
    d2 = np.array([1.0, -2.0, 1.0]) / h ** 2
    for i in range(2, M - 1):
        for j in range(5):
            add(i, i - 2 + j, d4[j])
        for j in range(3):
            add(i, i - 1 + j, -2 * k2 * d2[j])
        add(i, i, k2 * k2 + lam)
    add(M - 1, M - 1, 1.0)
    add(M, M, 1.0)
    l, u = 2, 4
    ab = np.zeros((l + u + 1, n), dtype=complex)
    for i, j, v in zip(rows, cols, vals):
        ab[u + i - j, j] += v
    b = np.zeros(n, dtype=complex)
    b[0] = g1
    b[1] = g2
    return solve_banded((l, u), ab, b), h


def fd_feasibility():
    print("FD oracle feasibility (second order, X = 14/min Re tau):")
    rng = np.random.default_rng(7)
    cases = [(0.0, 1.0), (1.0, 1.0), (3.0, 10.0 * cmath.exp(0.3j * math.pi)),
             (5.0, 100.0 * cmath.exp(-0.55j * math.pi)), (2.0, cmath.exp(0.55j * math.pi))]
    for M in (4096, 8192):
        worst = 0.0
        for k, lam in cases:
            k2 = k * k
            g1 = complex(rng.normal(), rng.normal())
            g2 = complex(rng.normal(), rng.normal())
            t1, t2 = tau_pair(k2, lam)
            A = np.array([[1.0, 1.0],
                          [t1 ** 3 - k2 * t1, t2 ** 3 - k2 * t2]], dtype=complex)
            c = np.linalg.solve(A, np.array([g1, g2]))
            sol, h = fd_solve(k2, lam, g1, g2, M)
            x = np.arange(len(sol)) * h
            exact = c[0] * np.exp(-t1 * x) + c[1] * np.exp(-t2 * x)
            err = np.abs(sol - exact).max() / np.abs(exact).max()
            worst = max(worst, err)
        print(f"  M={M}: worst rel err {worst:.3e}")


if __name__ == "__main__":
    scalar_exp_probe()
    scalar_u2_study()
    law_defect_study()
    t_to_zero_study()
    fd_feasibility()
