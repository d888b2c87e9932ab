"""Independent oracle for Hilbert class polynomials of small class number.

Enumerates reduced forms by brute force, evaluates j with mpmath's kleinj
at high precision and rounds the expanded product. Output is frozen into
hcp_small.tsv, which the Rust tests compare against.
"""
from math import gcd, isqrt
import mpmath

mpmath.mp.prec = 2000


def reduced_forms(d):
    out = []
    for a in range(1, isqrt(-d // 3) + 2):
        for b in range(-a + 1, a + 1):
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (a == c and b < 0):
                continue
            if gcd(gcd(a, abs(b)), c) != 1:
                continue
            out.append((a, b, c))
    return out


def hcp(d):
    coeffs = [mpmath.mpc(1)]
    for a, b, c in reduced_forms(d):
        tau = (b + mpmath.sqrt(mpmath.mpf(d))) / (2 * a)
        x = 1728 * mpmath.kleinj(tau)
        new = [mpmath.mpc(0)] * (len(coeffs) + 1)
        for i, co in enumerate(coeffs):
            new[i] += co
            new[i + 1] -= co * x
        coeffs = new
    ints = []
    for co in coeffs:
        n = int(mpmath.nint(co.real))
        assert abs(co - n) < mpmath.mpf(10) ** -50, (d, co)
        ints.append(n)
    return ints


rows = []
for n in range(3, 10000):
    d = -n
    if d % 4 not in (0, 1):
        continue
    h = len(reduced_forms(d))
    if h <= 3:
        rows.append((d, h, hcp(d)))

counts = {h: sum(1 for r in rows if r[1] == h) for h in (1, 2, 3)}
assert counts == {1: 13, 2: 29, 3: 25}, counts
for d, h, co in rows:
    print(f"{d}\t{h}\t" + " ".join(str(c) for c in co))
