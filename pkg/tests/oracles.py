"""Brute-force reference computations, independent of the package code paths.

The beamsplitter oracle multiplies out ``(t x + r y)^n (r x + t y)^m`` as a
dictionary polynomial term by term and normalises with exact integer
factorials. Nothing here imports photonmix.
"""

import math
from collections import defaultdict


def _poly_mul(p, q):
    out = defaultdict(complex)
    for (a, b), u in p.items():
        for (c, d), v in q.items():
            out[(a + c, b + d)] += u * v
    return out


def bs_output_amplitudes(n, m, t, r):
    """{(p, q): amplitude} for |n>_a|m>_b through a -> t c + r d, b -> r c + t d."""
    poly = {(0, 0): 1.0 + 0j}
    for _ in range(n):
        poly = _poly_mul(poly, {(1, 0): t, (0, 1): r})
    for _ in range(m):
        poly = _poly_mul(poly, {(1, 0): r, (0, 1): t})
    norm = math.sqrt(math.factorial(n) * math.factorial(m))
    return {(p, q): c * math.sqrt(math.factorial(p) * math.factorial(q)) / norm
            for (p, q), c in poly.items()}


def default_coeffs(r_sq):
    return math.sqrt(1 - r_sq), 1j * math.sqrt(r_sq)


def coherent_single_photon_distribution(alpha_sq, r_sq, nmax):
    """{(p, q): probability} for |alpha>|1> through the beamsplitter, n <= nmax.

    Different coherent components end in different total photon numbers, so
    their probabilities add without cross terms.
    """
    t, r = default_coeffs(r_sq)
    out = defaultdict(float)
    for n in range(nmax + 1):
        weight = math.exp(-alpha_sq) * alpha_sq**n / math.factorial(n)
        for key, amp in bs_output_amplitudes(n, 1, t, r).items():
            out[key] += weight * abs(amp) ** 2
    return out


def clicks_from_distribution(dist, eta1, eta2):
    """(p00, p01, p10, p11) by direct summation of the loss model."""
    p = [0.0, 0.0, 0.0, 0.0]
    for (n, m), prob in dist.items():
        mc = (1 - eta1) ** n
        md = (1 - eta2) ** m
        p[0] += prob * mc * md
        p[1] += prob * mc * (1 - md)
        p[2] += prob * (1 - mc) * md
        p[3] += prob * (1 - mc) * (1 - md)
    return tuple(p)


def visibility_oracle(alpha_sq, eta1=1.0, eta2=1.0, r_sq=0.5, nmax=None):
    if nmax is None:
        nmax = int(alpha_sq + 12 * math.sqrt(alpha_sq + 1) + 12)
    p00, p01, p10, p11 = clicks_from_distribution(
        coherent_single_photon_distribution(alpha_sq, r_sq, nmax), eta1, eta2)
    return 1 - p11 / ((p10 + p11) * (p01 + p11))


def classical_coincidence_quadrature(Ia, Ib, r_sq, n=20000):
    """<Ic Id> by midpoint quadrature over a uniform phase."""
    t2, r2 = 1 - r_sq, r_sq
    cross = 2 * math.sqrt(t2 * r2 * Ia * Ib)
    acc = 0.0
    for k in range(n):
        s = math.sin(2 * math.pi * (k + 0.5) / n)
        ic = t2 * Ia + r2 * Ib - cross * s
        id_ = r2 * Ia + t2 * Ib + cross * s
        acc += ic * id_
    return acc / n


def classical_click_p11_quadrature(Ia, Ib, r_sq, eta1, eta2, n=20000):
    """Exact threshold-click coincidence for Poisson photons, phase-averaged."""
    t2, r2 = 1 - r_sq, r_sq
    cross = 2 * math.sqrt(t2 * r2 * Ia * Ib)
    acc = 0.0
    for k in range(n):
        s = math.sin(2 * math.pi * (k + 0.5) / n)
        ic = t2 * Ia + r2 * Ib - cross * s
        id_ = r2 * Ia + t2 * Ib + cross * s
        acc += (1 - math.exp(-eta1 * ic)) * (1 - math.exp(-eta2 * id_))
    return acc / n
