"""Independent reference values for the regression constants frozen in the Rust tests.

Uses numpy/scipy only; shares no code with the Rust implementation.
Run: python3 scripts/oracle_values.py
"""
import math

import numpy as np
from scipy import integrate, optimize, stats

SYNTHETIC_ARMS = [((0.6, 0.45), 0.2)] + [((0.5, 0.5), x) for x in (0.3, 0.4, 0.4, 0.6, 0.6, 0.6, 0.6, 0.6, 0.6)]
SIGMA = 0.1


def cov(x, sigma):
    off = 2 * x * math.sqrt(1 - x * x)
    return sigma * np.array([[1.0, off], [off, 1.0]])


def trunc_moment(mean, x, tau, f=lambda r, c: r):
    rv = stats.multivariate_normal(mean=mean, cov=cov(x, SIGMA))
    z, _ = integrate.dblquad(lambda c, r: rv.pdf([r, c]), 0, 1, 0, 1, epsabs=1e-13, epsrel=1e-12)
    num, _ = integrate.dblquad(lambda c, r: f(r, c) * rv.pdf([r, c]), 0, 1, 0, tau, epsabs=1e-13, epsrel=1e-12)
    return num / z


def trunc_samples(mean, x, n, rng):
    out = []
    got = 0
    while got < n:
        s = rng.multivariate_normal(mean, cov(x, SIGMA), size=2 * n)
        s = s[(s[:, 0] >= 0) & (s[:, 0] <= 1) & (s[:, 1] >= 0) & (s[:, 1] <= 1)]
        out.append(s)
        got += len(s)
    return np.concatenate(out)[:n]


def main():
    print("make_cov off-diagonal x=0.2 sigma=0.1:", 0.1 * 2 * 0.2 * math.sqrt(0.96))

    a = 0.75 * (0.9 + math.sqrt(2 * 2 * math.log(10) / 4))
    b = 0.5 * (0.9 + math.sqrt(2 * 2 * math.log(10) / 4))
    print("rcucb index A, B:", a, b)
    print("ucb index:", 0.75 * (0.9 + math.sqrt(2 * math.log(10) / 8)))

    def kl(p, q):
        t1 = 0.0 if p == 0 else p * math.log(p / q)
        t2 = 0.0 if p == 1 else (1 - p) * math.log((1 - p) / (1 - q))
        return t1 + t2

    print("kl(0.5,0.75):", kl(0.5, 0.75), "kl(0,0.5):", kl(0.0, 0.5))
    q = optimize.brentq(lambda q: 10 * kl(0.5, q) - math.log(100), 0.5 + 1e-12, 1 - 1e-15, xtol=1e-15)
    print("klucb q(0.5, n=10, t=100, c=0):", q)

    alpha = 2.0
    const = 1 + 4 / math.log((alpha + 1) / 2) * ((alpha + 1) / (alpha - 1)) ** 2
    print("regret bound delta=0.1 T=1000:", 4 * alpha * math.log(1000) / 0.1 + 0.1 * const)
    t = 1000
    print("concentration bound t=1000:", (1 + math.log(t) / math.log(1.5)) * t ** (-2 * alpha / (alpha + 1)))

    # Degenerate 2-arm instance: gaps under linear discount on {0.25,0.5,0.75,1}.
    grid = [0.25, 0.5, 0.75, 1.0]
    nus = [(1 - g) * (0.9 if 0.2 <= g else 0.0) for g in grid] + [(1 - g) * (1.0 if 0.9 <= g else 0.0) for g in grid]
    star = max(nus)
    gaps = [star - v for v in nus]
    print("degenerate gaps:", gaps, "mean:", sum(gaps) / len(gaps))

    print("arm1 mu(0.5) quadrature:", trunc_moment((0.6, 0.45), 0.2, 0.5))
    rng = np.random.default_rng(20211)
    s = trunc_samples((0.6, 0.45), 0.2, 10_000_000, rng)
    v = s[:, 0] * (s[:, 1] <= 0.5)
    print("arm1 mu(0.5) MC 1e7:", v.mean(), "se:", v.std(ddof=1) / math.sqrt(len(v)))

    for x in (0.0, 0.6):
        e_r = trunc_moment((0.5, 0.5), x, 1.0)
        e_c = trunc_moment((0.5, 0.5), x, 1.0, lambda r, c: c)
        e_rr = trunc_moment((0.5, 0.5), x, 1.0, lambda r, c: r * r)
        e_cc = trunc_moment((0.5, 0.5), x, 1.0, lambda r, c: c * c)
        e_rc = trunc_moment((0.5, 0.5), x, 1.0, lambda r, c: r * c)
        corr = (e_rc - e_r * e_c) / math.sqrt((e_rr - e_r**2) * (e_cc - e_c**2))
        print(f"truncated correlation x={x}:", corr)

    for m in (10, 50, 100):
        best = None
        for i, (mean, x) in enumerate(SYNTHETIC_ARMS):
            for j in range(1, m + 1):
                tau = j / m
                if i > 0 and m > 10:
                    continue
                nu = (1 - tau) * trunc_moment(mean, x, tau)
                if best is None or nu > best[0] + 1e-15:
                    best = (nu, i + 1, tau)
        print(f"m={m} optimum (arm 1 only for m>10):", best)


if __name__ == "__main__":
    main()
