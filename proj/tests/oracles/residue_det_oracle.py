#!/usr/bin/env python3
"""Independent check of the residue-form boundary determinant.

M[j,l] = (1/2pi i) oint B_j(xi', zeta) zeta^l / a+(zeta) dzeta over a circle
enclosing the stable roots (Im zeta > 0) of P(zeta) = lambda - A0(xi', zeta).

Pins, before the C++ build:
  * trapezoid contour (256 nodes, radius 1.5x max stable-root modulus) reaches
    <= 1e-10 relative error against residue sums,
  * for distinct roots det M = (-1)^(m(m-1)/2) det[B_j(zeta_k)] / Vandermonde(zeta),
  * the confluent lambda = 0 family of the clamped-plate style problem gives
    |det| proportional to 2|xi'|^2,
  * second-order operator with Dirichlet data gives det = 1 on 20 sphere samples.
"""
import cmath
import math

import numpy as np


def stable_roots(coeffs):
    # coeffs: [c0, c1, ...] of P(zeta) = sum c_k zeta^k
    r = np.roots(coeffs[::-1])
    return [z for z in r if z.imag > 0]


def residue_matrix(bfuns, roots_with_mult, nodes=256):
    m = sum(mu for _, mu in roots_with_mult)
    zs = [z for z, _ in roots_with_mult]
    rad = 1.5 * max(abs(z) for z in zs)
    center = 0.0
    thetas = 2 * math.pi * np.arange(nodes) / nodes
    zeta = center + rad * np.exp(1j * thetas)
    dzeta = 1j * rad * np.exp(1j * thetas)  # d zeta / d theta
    aplus = np.ones_like(zeta)
    for z, mu in roots_with_mult:
        aplus *= (zeta - z) ** mu
    M = np.zeros((len(bfuns), m), dtype=complex)
    for j, b in enumerate(bfuns):
        bv = b(zeta)
        for l in range(m):
            M[j, l] = np.mean(bv * zeta ** l / aplus * dzeta) / (2j * math.pi) * 2 * math.pi
    return M


def biharmonic_case():
    rng = np.random.default_rng(7)
    worst_quad = 0.0
    worst_vand = 0.0
    for _ in range(50):
        q = rng.uniform(0.2, 1.0)
        arg = rng.uniform(-0.75 * math.pi, 0.75 * math.pi)
        t = rng.uniform(0.05, 0.95)
        lam = (t ** 2) * cmath.exp(1j * arg)
        xi = math.sqrt(1 - t) * q / q  # |xi'| from sphere constraint
        # P = lambda + (xi^2 + zeta^2)^2
        coeffs = [lam + xi ** 4, 0, 2 * xi ** 2, 0, 1]
        roots = stable_roots(coeffs)
        assert len(roots) == 2
        rw = [(z, 1) for z in roots]
        b1 = lambda z: np.ones_like(z)                      # gamma_0
        b2 = lambda z, xi=xi: 1j * z * (xi ** 2 + z ** 2)   # outward normal of Laplacian
        M = residue_matrix([b1, b2], rw)
        # exact residue sum for distinct roots
        z1, z2 = roots
        Mex = np.zeros((2, 2), dtype=complex)
        for j, b in enumerate([b1, b2]):
            for l in range(2):
                Mex[j, l] = b(np.array([z1]))[0] * z1 ** l / (z1 - z2) \
                          + b(np.array([z2]))[0] * z2 ** l / (z2 - z1)
        worst_quad = max(worst_quad, np.abs(M - Mex).max() / np.abs(Mex).max())
        detM = np.linalg.det(M)
        # Vandermonde relation, m = 2: det M = (-1)^1 det[B(zeta_k)] / (z2 - z1)
        B = np.array([[b1(np.array([z1]))[0], b1(np.array([z2]))[0]],
                      [b2(np.array([z1]))[0], b2(np.array([z2]))[0]]])
        detV = z2 - z1
        pred = -np.linalg.det(B) / detV
        worst_vand = max(worst_vand, abs(detM - pred) / abs(pred))
    print(f"biharmonic 50 samples: quad err {worst_quad:.2e}, vandermonde err {worst_vand:.2e}")
    assert worst_quad < 1e-10 and worst_vand < 1e-10


def lambda0_family():
    # lambda = 0: P = (xi^2+zeta^2)^2, single stable root i|xi| with multiplicity 2.
    vals = []
    for xi in (0.3, 0.7, 1.0, 1.9):
        rw = [(1j * xi, 2)]
        b1 = lambda z: np.ones_like(z)
        b2 = lambda z, xi=xi: 1j * z * (xi ** 2 + z ** 2)
        M = residue_matrix([b1, b2], rw)
        detM = np.linalg.det(M)
        vals.append(abs(detM) / (2 * xi ** 2))
        # cross-check: explicit solution basis (c1 + c2 x) e^{-xi x}; row2 = [0, -2 xi^2]
        # in that basis det = -2 xi^2; proportionality constant between bases:
    spread = max(vals) / min(vals)
    print(f"lambda=0 family |det|/(2 xi^2): {vals} spread {spread - 1:.2e}")
    assert spread - 1 < 1e-9


def explicit_cross_check():
    # lambda = 1, xi' = 0: compare residue det with the explicit e^{-tau x} system
    lam = 1.0
    tau1, tau2 = cmath.sqrt(1j * cmath.sqrt(lam)), cmath.sqrt(-1j * cmath.sqrt(lam))
    z1, z2 = 1j * tau1, 1j * tau2
    b1 = lambda z: np.ones_like(z)
    b2 = lambda z: 1j * z * z ** 2  # xi' = 0
    M = residue_matrix([b1, b2], [(z1, 1), (z2, 1)])
    detM = np.linalg.det(M)
    det_explicit = 1 * (-1j * cmath.sqrt(lam) * tau2) - 1 * (1j * cmath.sqrt(lam) * tau1)
    pred = -det_explicit / (z2 - z1)
    print(f"explicit 2x2 vs residue: {abs(detM - pred):.2e} (det_res = {detM:.6f})")
    assert abs(detM - pred) < 1e-12


def heat_dirichlet():
    for k in range(20):
        t = (k + 0.5) / 20
        lam = t * cmath.exp(1j * 0.75 * math.pi * (2 * (k % 5) / 4 - 1))
        xi = math.sqrt(max(1 - t, 0.0))
        root = 1j * cmath.sqrt(lam + xi ** 2)
        M = residue_matrix([lambda z: np.ones_like(z)], [(root, 1)])
        assert abs(M[0, 0] - 1) < 1e-12, M
    print("heat + Dirichlet: det = 1 at 20 sphere samples")


if __name__ == "__main__":
    biharmonic_case()
    lambda0_family()
    explicit_cross_check()
    heat_dirichlet()
    print("residue determinant oracles OK")
