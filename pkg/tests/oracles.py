"""Reference computations that share no code path with the package.

Plain Python lists and mpmath only.
"""
import math

import mpmath


def convolve(a, b, n):
    """First n coefficients of the Cauchy product, double loop."""
    out = [0j] * n
    for i, x in enumerate(a[:n]):
        for j, y in enumerate(b[: n - i]):
            out[i + j] += x * y
    return out


def power_of_series(a, k, n):
    out = [1] + [0] * (n - 1)
    for _ in range(k):
        out = convolve(out, a, n)
    return out


def taylor_mp(func, n, dps=30):
    """Taylor coefficients at 0 of func via mpmath numerical differentiation."""
    with mpmath.workdps(dps):
        return [complex(c) for c in mpmath.taylor(func, 0, n - 1)]


def series_divide(a, b, n):
    """c with b*c = a, by the schoolbook triangular solve."""
    c = []
    for m in range(n):
        s = a[m] if m < len(a) else 0
        for j in range(1, m + 1):
            if j < len(b):
                s -= b[j] * c[m - j]
        c.append(s / b[0])
    return c


def series_exp(h, n):
    """exp(h) for h with h[0] = 0, via g' = h' g."""
    g = [1 + 0j] + [0j] * (n - 1)
    for m in range(1, n):
        g[m] = sum(k * h[k] * g[m - k] for k in range(1, m + 1) if k < len(h)) / m
    return g


def blaschke_taylor(zeros, u, n):
    out = [0j, complex(u)] + [0j] * (n - 2)
    for a in zeros:
        fac = [-a] + [math.prod([a.conjugate()] * (k - 1)) * (1 - abs(a) ** 2) for k in range(1, n)]
        out = convolve(out, fac, n)
    return out


def member_by_log_derivative(phi, A, B, beta, p, n):
    """Coefficients a_p .. a_{p+n-1} of the member with Schwarz function phi.

    q = (p + M phi) / (1 + B phi), then f / z^p = exp(sum_k (q_k / k) z^k).
    """
    c = (A - B) * (p - beta)
    M = p * B + c
    num = [M * x for x in phi[:n]]
    den = [B * x for x in phi[:n]]
    num[0], den[0] = p, 1
    q = series_divide(num, den, n)
    h = [0j] + [q[k] / k for k in range(1, n)]
    return series_exp(h, n)


def goel_mehrok(A, B, n):
    """Janowski-class bound for p = 1, beta = 0; None where no case applies."""
    if n == 2:
        return A - B
    if A - 2 * B <= 1:
        return (A - B) / (n - 1)
    if A - (n - 1) * B > n - 2:
        return math.prod(A - (j - 1) * B for j in range(2, n + 1)) / math.factorial(n - 1)
    return None
