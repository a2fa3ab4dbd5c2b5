"""Deterministic builders for small groups, and the builtin verification corpus.

Every builder works from normal forms and a multiplication rule; elements are
numbered in BFS order from the listed generators, so tables are identical
across runs.
"""
from __future__ import annotations

import re
from functools import lru_cache

import numpy as np

from .core import Group, factorize, from_multiplication, generating_sequence
from .errors import InvalidParameter


def _is_prime(p: int) -> bool:
    return p >= 2 and factorize(p) == {p: 1}


def cyclic(n: int) -> Group:
    if n < 1:
        raise InvalidParameter("cyclic group order must be positive")
    gens = [1] if n > 1 else []
    return from_multiplication(0, gens, lambda x, y: (x + y) % n, f"C{n}")


def direct_product(G: Group, H: Group, label: str | None = None) -> Group:
    tg, th = G.table, H.table
    gg = list(G.gen_hint) if G.gen_hint is not None else generating_sequence(G)
    gh = list(H.gen_hint) if H.gen_hint is not None else generating_sequence(H)
    gens = [(g, 0) for g in gg] + [(0, h) for h in gh]

    def mul(x, y):
        return (int(tg[x[0], y[0]]), int(th[x[1], y[1]]))

    return from_multiplication((0, 0), gens, mul, label or f"{G.label}x{H.label}")


def dihedral(order: int) -> Group:
    """Dihedral group of the given order ``2n`` (``n >= 2``)."""
    if order < 4 or order % 2:
        raise InvalidParameter(f"dihedral order must be even and >= 4, got {order}")
    n = order // 2

    def mul(x, y):
        i, j = x
        k, l = y
        return ((i + (k if j == 0 else -k)) % n, (j + l) % 2)

    return from_multiplication((0, 0), [(1, 0), (0, 1)], mul, f"D{order}")


def generalized_quaternion(order: int) -> Group:
    """``<a, b | a^(2t), b^2 = a^t, b^-1 a b = a^-1>`` of order ``4t = 2^k``, ``k >= 3``."""
    if order < 8 or order & (order - 1):
        raise InvalidParameter(f"generalized quaternion order must be a power of 2 >= 8, got {order}")
    t = order // 4
    m = 2 * t

    def mul(x, y):
        i, j = x
        k, l = y
        if j == 0:
            return ((i + k) % m, l)
        if l == 0:
            return ((i - k) % m, 1)
        return ((i - k + t) % m, 0)

    return from_multiplication((0, 0), [(1, 0), (0, 1)], mul, f"Q{order}")


def semidirect_cyclic(m: int, n: int, k: int, label: str | None = None) -> Group:
    """``C_m x| C_n`` with ``b a b^-1 = a^k``; needs ``gcd(k, m) = 1`` and ``k^n = 1 mod m``."""
    if m < 1 or n < 1:
        raise InvalidParameter("orders must be positive")
    k %= m
    if m > 1 and (np.gcd(k, m) != 1 or pow(k, n, m) != 1 % m):
        raise InvalidParameter(f"{k} does not define an action of C{n} on C{m}")
    powers = [pow(k, j, m) for j in range(n)]

    def mul(x, y):
        i, j = x
        i2, j2 = y
        return ((i + i2 * powers[j]) % m, (j + j2) % n)

    gens = [g for g in [(1 % m, 0), (0, 1 % n)] if g != (0, 0)]
    return from_multiplication((0, 0), gens, mul, label or f"C{m}:C{n}[{k}]")


def heisenberg(p: int) -> Group:
    """Upper unitriangular 3x3 matrices over GF(p): extraspecial, order p^3, exponent p."""
    if not _is_prime(p) or p == 2:
        raise InvalidParameter(f"heisenberg needs an odd prime, got {p}")

    def mul(x, y):
        a, b, c = x
        a2, b2, c2 = y
        return ((a + a2) % p, (b + b2) % p, (c + c2 + a * b2) % p)

    return from_multiplication((0, 0, 0), [(1, 0, 0), (0, 1, 0)], mul, f"heisenberg{p}")


def extraspecial_p2(p: int) -> Group:
    """Extraspecial group of order p^3 and exponent p^2 (p odd)."""
    if not _is_prime(p) or p == 2:
        raise InvalidParameter(f"extraspecial_p2 needs an odd prime, got {p}")
    return semidirect_cyclic(p * p, p, 1 + p, label=f"extraspecial{p}")


def modular_group(order: int) -> Group:
    """``M_{p^k} = <a, b | a^(p^(k-1)), b^p, b a b^-1 = a^(1 + p^(k-2))>``."""
    f = factorize(order)
    if len(f) != 1:
        raise InvalidParameter(f"modular group order must be a prime power, got {order}")
    (p, k), = f.items()
    if k < (4 if p == 2 else 3):
        raise InvalidParameter(f"modular group of order {order} needs a larger exponent")
    return semidirect_cyclic(p ** (k - 1), p, 1 + p ** (k - 2), label=f"modular{order}")


# --- builtin names ---------------------------------------------------------

_NAMED = {
    "SD": lambda n: semidirect_cyclic(n // 2, 2, n // 4 - 1, label=f"SD{n}"),
    "D": dihedral,
    "Q": generalized_quaternion,
    "C": cyclic,
    "quaternion": generalized_quaternion,
    "dihedral": dihedral,
    "heisenberg": heisenberg,
    "extraspecial": extraspecial_p2,
    "modular": modular_group,
}


def _relabel(G: Group, label: str) -> Group:
    G.label = label
    return G


@lru_cache(maxsize=None)
def builtin(name: str) -> Group:
    """Resolve a builtin group name.

    Accepted forms: ``C12``, ``D8``, ``Q16`` / ``quaternion16``, ``SD16``,
    ``heisenberg3``, ``extraspecial3``, ``modular16``, ``semidirect8_4_3``
    (``C_8 x| C_4`` with ``a -> a^3``) and direct products joined by ``x``,
    e.g. ``C2xD8`` or ``C4xC2xC2``.  Results are cached; Group values are
    immutable so sharing is safe.
    """
    parts = re.split(r"(?<=\d)x(?=[A-Za-z])", name)
    if len(parts) > 1:
        G = builtin(parts[0])
        for part in parts[1:]:
            G = direct_product(G, builtin(part))
        return _relabel(G, name)
    m = re.fullmatch(r"semidirect(\d+)_(\d+)_(\d+)", name)
    if m:
        a, b, c = map(int, m.groups())
        return semidirect_cyclic(a, b, c, label=name)
    m = re.fullmatch(r"([A-Za-z]+)(\d+)", name)
    if m and m.group(1) in _NAMED:
        return _relabel(_NAMED[m.group(1)](int(m.group(2))), name)
    raise InvalidParameter(f"unknown builtin group {name!r}")


NONABELIAN_CORPUS = [
    "D8", "Q8",
    "D16", "Q16", "SD16", "modular16", "C2xD8", "C2xQ8", "semidirect4_4_3",
    "heisenberg3", "extraspecial3",
    "D32", "Q32", "SD32", "modular32", "C4xD8", "C4xQ8", "C2xQ16", "C2xSD16", "C2xmodular16",
    "semidirect8_4_3", "semidirect8_4_5", "semidirect4_8_3", "C2xC2xQ8",
    "modular64", "semidirect16_4_5", "semidirect8_8_3", "C8xQ8", "C8xD8", "C2xQ32",
    "heisenberg3xC3", "extraspecial3xC3", "modular81", "semidirect9_9_4",
    "heisenberg5", "extraspecial5",
    "modular243", "semidirect27_9_4",
]

ABELIAN_CORPUS = [
    "C1", "C2", "C3", "C4", "C2xC2", "C5", "C7", "C8", "C4xC2", "C2xC2xC2", "C9", "C3xC3",
    "C16", "C8xC2", "C4xC4", "C4xC2xC2", "C2xC2xC2xC2", "C25", "C5xC5", "C27", "C9xC3",
    "C32", "C8xC4", "C16xC2", "C49", "C64",
]

NON_P_CORPUS = ["C6", "D6", "D12"]


def builtin_corpus(max_order: int = 243) -> list[Group]:
    """Nonabelian p-groups, abelian groups and a few non-p-groups, capped by order."""
    if max_order > 2048:
        raise InvalidParameter("max_order must not exceed 2048")
    out = []
    for name in NONABELIAN_CORPUS + ABELIAN_CORPUS + NON_P_CORPUS:
        G = builtin(name)
        if G.order <= max_order:
            out.append(G)
    return out
