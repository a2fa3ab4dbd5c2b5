"""Finite abelian groups: invariant factors, rank, and Hom-groups.

Hom-groups are available two ways: by the gcd formula
(:func:`hom_order`, :func:`hom_invariants`) and by explicit enumeration of
homomorphisms (:func:`brute_force_homs`), which serves as the oracle for the
formula.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .core import Group, Subgroup, factorize, generating_sequence, is_p_group
from .errors import NotAbelian, NotPGroup, OracleCapExceeded

DEFAULT_ORACLE_CAP = 1 << 16


@dataclass(frozen=True)
class AbelianInvariants:
    """Invariant factors ``d_1 | d_2 | ... | d_k``, all ``>= 2``."""
    factors: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        f = tuple(int(d) for d in self.factors)
        object.__setattr__(self, "factors", f)
        if any(d < 2 for d in f):
            raise ValueError(f"invariant factors must be >= 2: {f}")
        if any(b % a for a, b in zip(f, f[1:])):
            raise ValueError(f"not a divisor chain: {f}")

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def exponent(self) -> int:
        return self.factors[-1] if self.factors else 1

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def as_list(self) -> list[int]:
        return list(self.factors)

    def __str__(self) -> str:
        return "[" + ", ".join(map(str, self.factors)) + "]"


@dataclass(frozen=True)
class HomDescriptor:
    source_invariants: AbelianInvariants
    target_invariants: AbelianInvariants
    hom_invariants: AbelianInvariants
    hom_order: int


def chain_from_cyclic_orders(orders: Iterable[int]) -> AbelianInvariants:
    """Normalise a direct product of cyclic groups of the given orders.

    Each order is split into prime powers; per prime the powers are sorted
    descending and the k-th largest of every prime are multiplied together to
    give the k-th largest invariant factor.
    """
    primary: dict[int, list[int]] = {}
    for d in orders:
        for p, e in factorize(int(d)).items():
            primary.setdefault(p, []).append(p ** e)
    return _merge_primary(primary)


def _merge_primary(primary: dict[int, list[int]]) -> AbelianInvariants:
    for p in primary:
        primary[p].sort(reverse=True)
    k = max((len(v) for v in primary.values()), default=0)
    chain = []
    for i in range(k):
        chain.append(math.prod(v[i] for v in primary.values() if i < len(v)))
    return AbelianInvariants(tuple(reversed(chain)))


def invariants_from_order_census(orders: Sequence[int]) -> AbelianInvariants:
    """Invariant factors of an abelian group given the multiset of its element orders.

    For each prime ``p`` the number of solutions of ``x^(p^k) = 1`` is
    ``p^(c_k)``; the number of cyclic factors of order at least ``p^k`` is
    ``c_k - c_(k-1)``.
    """
    orders = np.asarray(orders, dtype=np.int64)
    n = orders.size
    primary: dict[int, list[int]] = {}
    for p, top in factorize(n).items():
        c = [0]
        for k in range(1, top + 1):
            count = int(np.count_nonzero((p ** k) % orders == 0))
            ck = round(math.log(count, p))
            if p ** ck != count:
                raise NotAbelian("element order census is not that of an abelian group")
            c.append(ck)
            if ck == top:
                break
        at_least = [c[k] - c[k - 1] for k in range(1, len(c))] + [0]
        parts = []
        for k in range(1, len(c)):
            parts += [p ** k] * (at_least[k - 1] - at_least[k])
        if math.prod(parts) != p ** top:
            raise NotAbelian("element order census is not that of an abelian group")
        primary[p] = parts
    return _merge_primary(primary)


def _orders_and_check(A) -> tuple[np.ndarray, int]:
    from .automorphisms import AutomorphismSet  # local: avoids an import cycle

    if isinstance(A, AutomorphismSet):
        if not A.is_abelian:
            raise NotAbelian(f"{A.label} is not abelian")
        return A.element_orders, A.order
    if isinstance(A, Subgroup):
        if not A.is_abelian:
            raise NotAbelian("subgroup is not abelian")
        return A.parent.elem_order[A.elements], A.order
    if isinstance(A, Group):
        if not A.is_abelian:
            raise NotAbelian(f"{A.label} is not abelian")
        return A.elem_order, A.order
    if isinstance(A, HomGroup):
        return A.element_orders, A.order
    raise TypeError(f"cannot take abelian invariants of {type(A).__name__}")


def abelian_invariants(A) -> AbelianInvariants:
    """Invariant factors of an abelian Group, Subgroup, AutomorphismSet or HomGroup."""
    orders, _ = _orders_and_check(A)
    return invariants_from_order_census(orders)


def rank(A) -> int:
    if isinstance(A, AbelianInvariants):
        inv = A
    else:
        inv = abelian_invariants(A)
    if inv.order > 1 and is_p_group(inv.order) is None:
        raise NotPGroup(f"abelian group of order {inv.order} is not a p-group")
    return len(inv)


def hom_order(A: AbelianInvariants, B: AbelianInvariants) -> int:
    return math.prod(math.gcd(d, e) for d in A for e in B)


def hom_invariants(A: AbelianInvariants, B: AbelianInvariants) -> AbelianInvariants:
    return chain_from_cyclic_orders(g for d in A for e in B if (g := math.gcd(d, e)) > 1)


def hom_descriptor(A: AbelianInvariants, B: AbelianInvariants) -> HomDescriptor:
    return HomDescriptor(A, B, hom_invariants(A, B), hom_order(A, B))


# --- brute-force oracle ----------------------------------------------------

@dataclass(frozen=True)
class HomGroup:
    """Homomorphisms ``A -> B`` into an abelian ``B`` under pointwise product."""
    source: Group
    target: Group
    maps: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.maps)

    @property
    def element_orders(self) -> np.ndarray:
        if not self.maps:
            return np.zeros(0, dtype=np.int64)
        m = np.array(self.maps)
        per_point = self.target.elem_order[m]
        return np.array([math.lcm(*map(int, row)) for row in per_point], dtype=np.int64)

    def product(self, f: Sequence[int], g: Sequence[int]) -> tuple[int, ...]:
        t = self.target.table
        return tuple(int(t[a, b]) for a, b in zip(f, g))


def brute_force_homs(A: Group, B: Group, cap: int = DEFAULT_ORACLE_CAP) -> list[tuple[int, ...]]:
    """Every homomorphism ``A -> B`` as an image tuple.

    Images of a generating sequence of ``A`` range over all elements of ``B``
    whose order divides the generator's order; each assignment is extended
    along the Cayley graph and rejected on the first inconsistent product.
    """
    gens = generating_sequence(A)
    choices = [
        [y for y in range(B.order) if A.elem_order[g] % B.elem_order[y] == 0] for g in gens
    ]
    n_candidates = math.prod(len(c) for c in choices)
    if n_candidates > cap:
        raise OracleCapExceeded(f"{n_candidates} candidate maps exceed the oracle cap {cap}")
    ta = A.table.tolist()
    tb = B.table.tolist()
    homs = []
    for images in itertools.product(*choices):
        img = [-1] * A.order
        img[0] = 0
        queue = [0]
        ok = True
        for x in queue:
            for g, y in zip(gens, images):
                z = ta[x][g]
                v = tb[img[x]][y]
                if img[z] < 0:
                    img[z] = v
                    queue.append(z)
                elif img[z] != v:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            homs.append(tuple(img))
    return homs


def hom_group(A: Group, B: Group, cap: int = DEFAULT_ORACLE_CAP) -> HomGroup:
    if not B.is_abelian:
        raise NotAbelian("pointwise product needs an abelian target")
    return HomGroup(A, B, tuple(brute_force_homs(A, B, cap)))


def order_census(orders: Iterable[int]) -> dict[int, int]:
    return dict(sorted(Counter(int(o) for o in orders).items()))
