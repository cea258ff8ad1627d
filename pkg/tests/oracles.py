"""Brute-force reference implementations.

Everything here is written as literal loops over the defining sums. None of it
shares code with the package, so agreement is meaningful.
"""

import cmath
import math

import numpy as np


def dzt_direct(x, K, L):
    Z = np.zeros((L, K), dtype=complex)
    for n in range(L):
        for k in range(K):
            acc = 0j
            for l in range(K):
                acc += x[(n + l * L) % (K * L)] * cmath.exp(-2j * math.pi * k * l / K)
            Z[n, k] = acc / math.sqrt(K)
    return Z


def dft_direct(x):
    N = len(x)
    X = np.zeros(N, dtype=complex)
    for k in range(N):
        acc = 0j
        for n in range(N):
            acc += x[n] * cmath.exp(-2j * math.pi * k * n / N)
        X[k] = acc / math.sqrt(N)
    return X


def ext(Z, n, k):
    """Quasi-periodic lookup, written independently of the package."""
    L, K = Z.shape
    m = math.floor(n / L)
    return cmath.exp(2j * math.pi * (k % K) * m / K) * Z[n - m * L, k % K]


def delay(x, m):
    N = len(x)
    return np.array([x[(n - m) % N] for n in range(N)])


def circconv(x, y):
    N = len(x)
    return np.array([sum(x[j] * y[(n - j) % N] for j in range(N)) for n in range(N)])


def inner(x, y):
    return sum(a * b.conjugate() for a, b in zip(x, y))


def tf_shift(y, m, l, K, L):
    N = K * L
    return np.array([y[(n - m * L) % N] * cmath.exp(2j * math.pi * l * n / L) for n in range(N)])


def isfft_direct(Z):
    L, K = Z.shape
    A = np.zeros((K, L), dtype=complex)
    for m in range(K):
        for l in range(L):
            acc = 0j
            for n in range(L):
                for k in range(K):
                    acc += Z[n, k] * cmath.exp(2j * math.pi * (m * k / K - l * n / L))
            A[m, l] = acc / math.sqrt(K * L)
    return A


def sfft_direct(A):
    K, L = A.shape
    Z = np.zeros((L, K), dtype=complex)
    for n in range(L):
        for k in range(K):
            acc = 0j
            for l in range(L):
                for m in range(K):
                    acc += A[m, l] * cmath.exp(-2j * math.pi * (k * m / K - n * l / L))
            Z[n, k] = acc / math.sqrt(K * L)
    return Z


def heisenberg_direct(A, g):
    K, L = A.shape
    N = K * L
    s = np.zeros(N, dtype=complex)
    for n in range(N):
        for m in range(K):
            for l in range(L):
                s[n] += A[m, l] * g[(n - m * L) % N] * cmath.exp(2j * math.pi * l * n / L)
    return s


def channel_time_domain(x, taps, K, L):
    """Circular channel: y[m] = sum_p c_p sum_n x[n] exp(2j pi k_p n/N) h_p[m-n].

    ``taps`` is a list of ``(c_p, k_p, h_p)`` with ``h_p`` already periodized.
    """
    N = K * L
    y = np.zeros(N, dtype=complex)
    for c, kp, h in taps:
        mod = [x[n] * cmath.exp(2j * math.pi * kp * n / N) for n in range(N)]
        for m in range(N):
            y[m] += c * sum(mod[n] * h[(m - n) % N] for n in range(N))
    return y


def random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
