"""Finite groups as Cayley tables, and the subgroup/quotient machinery built on them.

Elements are integer indices ``0..n-1`` with the identity at index 0.  All
arrays held by :class:`Group`, :class:`Subgroup` and :class:`QuotientMap`
are read-only once constructed, so values can be shared freely between
workers.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import (
    ClosureCapExceeded,
    InvalidGroup,
    InvalidPermutation,
    NotNilpotent,
    NotNormal,
    ParentMismatch,
)

DEFAULT_CLOSURE_CAP = 2048
FULL_ASSOCIATIVITY_LIMIT = 256


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation of a positive integer by trial division."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def lcm_all(values: Iterable[int]) -> int:
    return reduce(math.lcm, (int(v) for v in values), 1)


class Group:
    """A finite group given by its Cayley table.

    ``table[i, j]`` is the index of ``x_i * x_j``.  Construction validates the
    group axioms; pass ``validate=False`` only for tables produced internally
    from an already-validated group.
    """

    def __init__(
        self,
        table: Union[np.ndarray, Sequence[Sequence[int]]],
        label: str = "G",
        gen_hint: Optional[Sequence[int]] = None,
        validate: bool = True,
    ):
        t = np.asarray(table, dtype=np.int32)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise InvalidGroup(f"{label}: table must be a non-empty square array, got shape {t.shape}")
        n = t.shape[0]
        if t.min() < 0 or t.max() >= n:
            raise InvalidGroup(f"{label}: table entries must lie in 0..{n - 1}")
        self.table = _frozen(t)
        self.order = n
        self.label = label
        self.gen_hint = tuple(int(g) for g in gen_hint) if gen_hint is not None else None
        if validate:
            self._check_identity_and_latin()
        inv = np.argmin(self.table, axis=1).astype(np.int32)
        if validate and not (np.all(self.table[np.arange(n), inv] == 0) and np.all(self.table[inv, np.arange(n)] == 0)):
            raise InvalidGroup(f"{label}: some element has no two-sided inverse")
        self.inverse = _frozen(inv)
        if validate:
            check_associativity(self.table, label)
        self.elem_order = _frozen(_element_orders(self.table))
        if validate and np.any(n % self.elem_order != 0):
            raise InvalidGroup(f"{label}: element order does not divide group order")

    def _check_identity_and_latin(self) -> None:
        n = self.order
        ar = np.arange(n)
        if not (np.array_equal(self.table[0], ar) and np.array_equal(self.table[:, 0], ar)):
            raise InvalidGroup(f"{self.label}: index 0 is not a two-sided identity")
        srt = np.sort(self.table, axis=1)
        if not np.all(srt == ar):
            raise InvalidGroup(f"{self.label}: some row is not a permutation (cancellation fails)")
        srt = np.sort(self.table, axis=0)
        if not np.all(srt == ar[:, None]):
            raise InvalidGroup(f"{self.label}: some column is not a permutation (cancellation fails)")

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"Group({self.label!r}, order={self.order})"

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def power(self, g: int, m: int) -> int:
        return int(power_map(self, m)[g])

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def digest(self) -> str:
        """Stable hash of the table bytes (int32 little-endian)."""
        h = hashlib.sha256()
        h.update(str(self.order).encode())
        h.update(self.table.astype("<i4").tobytes())
        return h.hexdigest()

    @cached_property
    def class_sizes(self) -> np.ndarray:
        """Size of the conjugacy class of each element."""
        n = self.order
        ar = np.arange(n)
        # conj[x, g] = x g x^-1
        conj = self.table[self.table[ar[:, None], ar[None, :]], self.inverse[:, None]]
        srt = np.sort(conj, axis=0)
        sizes = 1 + np.count_nonzero(np.diff(srt, axis=0), axis=0)
        return _frozen(sizes.astype(np.int32))

    def same_as(self, other: "Group") -> bool:
        return self is other or (self.order == other.order and np.array_equal(self.table, other.table))


def check_associativity(table: np.ndarray, label: str = "G", seed: int = 0) -> None:
    """Exhaustive for small tables, ``10 n^2`` seeded random triples above."""
    n = table.shape[0]
    if n <= FULL_ASSOCIATIVITY_LIMIT:
        for i in range(n):
            lhs = table[table[i]]  # (x_i x_j) x_k
            rhs = table[i][table]  # x_i (x_j x_k)
            if not np.array_equal(lhs, rhs):
                j, k = np.argwhere(lhs != rhs)[0]
                raise InvalidGroup(f"{label}: associativity fails at triple ({i}, {j}, {k})")
        return
    rng = np.random.default_rng(seed)
    total = 10 * n * n
    chunk = 1 << 20
    for start in range(0, total, chunk):
        m = min(chunk, total - start)
        i, j, k = rng.integers(0, n, size=(3, m))
        bad = table[table[i, j], k] != table[i, table[j, k]]
        if bad.any():
            w = int(np.argmax(bad))
            raise InvalidGroup(f"{label}: associativity fails at triple ({i[w]}, {j[w]}, {k[w]})")


def _element_orders(table: np.ndarray) -> np.ndarray:
    n = table.shape[0]
    ar = np.arange(n)
    orders = np.zeros(n, dtype=np.int64)
    cur = ar.copy()
    for k in range(1, n + 1):
        hit = (cur == 0) & (orders == 0)
        orders[hit] = k
        if orders.all():
            break
        cur = table[cur, ar]
    if not orders.all():
        raise InvalidGroup("element of infinite order in a finite table")
    return orders.astype(np.int32)


def power_map(G: Group, m: int) -> np.ndarray:
    """Array whose entry ``i`` is the index of ``x_i ** m`` (``m`` may be negative)."""
    ar = np.arange(G.order)
    base = ar if m >= 0 else G.inverse.astype(np.int64)
    m = abs(m)
    result = np.zeros(G.order, dtype=np.int64)
    while m:
        if m & 1:
            result = G.table[result, base]
        base = G.table[base, base]
        m >>= 1
    return result.astype(np.int32)


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: Group
    members: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        m = np.asarray(self.members, dtype=bool)
        if m.shape != (self.parent.order,):
            raise InvalidGroup("membership bitset has the wrong length")
        object.__setattr__(self, "members", _frozen(m))
        if not m[0]:
            raise InvalidGroup("subgroup must contain the identity")
        idx = np.flatnonzero(m)
        if not m[self.parent.table[np.ix_(idx, idx)]].all():
            raise InvalidGroup("subgroup is not closed under products")
        if self.parent.order % idx.size:
            raise InvalidGroup("subgroup order does not divide group order")

    @cached_property
    def elements(self) -> np.ndarray:
        return _frozen(np.flatnonzero(self.members).astype(np.int32))

    @property
    def order(self) -> int:
        return int(self.elements.size)

    def __len__(self) -> int:
        return self.order

    def __contains__(self, g: int) -> bool:
        return bool(self.members[g])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent.same_as(other.parent) and np.array_equal(self.members, other.members)

    def __hash__(self) -> int:
        return hash((self.parent.order, self.members.tobytes()))

    def __le__(self, other: "Subgroup") -> bool:
        _require_same_parent(self, other)
        return bool(np.all(other.members[self.elements]))

    def __repr__(self) -> str:
        return f"Subgroup(of {self.parent.label!r}, order={self.order})"

    @cached_property
    def is_abelian(self) -> bool:
        e = self.elements
        sub = self.parent.table[np.ix_(e, e)]
        return bool(np.array_equal(sub, sub.T))

    def as_group(self, label: Optional[str] = None) -> Group:
        """The subgroup as a standalone Group (elements renumbered in index order)."""
        e = self.elements
        pos = np.full(self.parent.order, -1, dtype=np.int32)
        pos[e] = np.arange(e.size, dtype=np.int32)
        sub = pos[self.parent.table[np.ix_(e, e)]]
        return Group(sub, label or f"sub({self.parent.label})", validate=False)


def _require_same_parent(a: Subgroup, b: Subgroup) -> None:
    if not a.parent.same_as(b.parent):
        raise ParentMismatch(f"subgroups of {a.parent.label!r} and {b.parent.label!r} cannot be combined")


@dataclass(frozen=True, eq=False)
class QuotientMap:
    source: Group
    kernel: Subgroup
    image: Group
    projection: np.ndarray = field(repr=False)


GroupLike = Union[Group, Subgroup]


def elements_of(A: GroupLike) -> np.ndarray:
    if isinstance(A, Subgroup):
        return A.elements
    return np.arange(A.order, dtype=np.int32)


def order_of(A: GroupLike) -> int:
    return A.order


def orders_in(A: GroupLike) -> np.ndarray:
    """Element orders of every member of ``A``."""
    if isinstance(A, Subgroup):
        return A.parent.elem_order[A.elements]
    return A.elem_order


# --- subgroup construction -------------------------------------------------

def generate_subgroup(G: Group, gens: Iterable[int]) -> Subgroup:
    """Worklist closure of ``gens`` under right multiplication."""
    g = np.unique(np.fromiter((int(x) for x in gens), dtype=np.int64))
    g = g[g != 0]
    members = np.zeros(G.order, dtype=bool)
    members[0] = True
    frontier = np.array([0])
    while frontier.size and g.size:
        prods = G.table[np.ix_(frontier, g)].ravel()
        fresh = np.unique(prods[~members[prods]])
        members[fresh] = True
        frontier = fresh
    return Subgroup(G, members)


def trivial_subgroup(G: Group) -> Subgroup:
    m = np.zeros(G.order, dtype=bool)
    m[0] = True
    return Subgroup(G, m)


def whole_group(G: Group) -> Subgroup:
    return Subgroup(G, np.ones(G.order, dtype=bool))


def group_from_permutations(
    degree: int,
    generators: Sequence[Sequence[int]],
    label: str = "G",
    cap: int = DEFAULT_CLOSURE_CAP,
) -> Group:
    """Closure of a list of permutations of ``{0..degree-1}``.

    Permutations are image arrays; the product ``x*y`` applies ``x`` first.
    Elements are numbered in BFS order from the identity using the generators
    in the given order.
    """
    if degree < 1:
        raise InvalidPermutation("degree must be positive")
    gens = []
    for p in generators:
        arr = np.asarray(p, dtype=np.int64)
        if arr.shape != (degree,) or not np.array_equal(np.sort(arr), np.arange(degree)):
            raise InvalidPermutation(f"{list(p)!r} is not a permutation of 0..{degree - 1}")
        gens.append(arr)

    ident = np.arange(degree)
    seen = {ident.tobytes(): 0}
    perms = [ident]
    i = 0
    while i < len(perms):
        x = perms[i]
        for gp in gens:
            y = gp[x]  # apply x then g
            key = y.tobytes()
            if key not in seen:
                seen[key] = len(perms)
                perms.append(y)
                if len(perms) > cap:
                    raise ClosureCapExceeded(f"permutation closure exceeds cap {cap}")
        i += 1
    gen_hint = [seen[gp.tobytes()] for gp in gens]

    P = np.array(perms, dtype=np.int64)
    n = len(perms)
    # rows are looked up by lexicographic rank via a void view
    keys = np.ascontiguousarray(P).view(np.dtype((np.void, P.dtype.itemsize * degree))).ravel()
    order = np.argsort(keys)
    sorted_keys = keys[order]
    table = np.empty((n, n), dtype=np.int32)
    for a in range(n):
        prod = P[:, P[a]]  # row b: apply x_a then x_b  -> that is x_a * x_b
        pk = np.ascontiguousarray(prod).view(keys.dtype).ravel()
        table[a] = order[np.searchsorted(sorted_keys, pk)]
    return Group(table, label, gen_hint=gen_hint)


def from_multiplication(
    identity, generators: Sequence, mul, label: str, cap: int = DEFAULT_CLOSURE_CAP
) -> Group:
    """Build a Group from hashable normal forms and a product function.

    Elements are numbered in BFS order from ``identity`` by right
    multiplication with ``generators``.
    """
    elems = [identity]
    index = {identity: 0}
    i = 0
    while i < len(elems):
        x = elems[i]
        for g in generators:
            y = mul(x, g)
            if y not in index:
                index[y] = len(elems)
                elems.append(y)
                if len(elems) > cap:
                    raise ClosureCapExceeded(f"{label}: closure exceeds cap {cap}")
        i += 1
    n = len(elems)
    table = np.empty((n, n), dtype=np.int32)
    for a, x in enumerate(elems):
        table[a] = [index[mul(x, y)] for y in elems]
    return Group(table, label, gen_hint=[index[g] for g in generators])


# --- structural operations -------------------------------------------------

def is_normal(G: Group, N: Subgroup) -> bool:
    e = N.elements
    conj = G.table[G.table[G.inverse[:, None], e[None, :]], np.arange(G.order)[:, None]]
    return bool(N.members[conj].all())


def centre(G: Group) -> Subgroup:
    return Subgroup(G, np.all(G.table == G.table.T, axis=1))


def commutator_subgroup(G: Group, A: GroupLike, B: GroupLike) -> Subgroup:
    """``[A, B]``, generated by all ``a^-1 b^-1 a b``."""
    a = elements_of(A)
    b = elements_of(B)
    t, inv = G.table, G.inverse
    comms = t[t[inv[a][:, None], inv[b][None, :]], t[a[:, None], b[None, :]]]
    return generate_subgroup(G, np.unique(comms))


def derived_subgroup(G: Group) -> Subgroup:
    return commutator_subgroup(G, G, G)


def power_subgroup(G: Group, m: int) -> Subgroup:
    if m < 1:
        raise ValueError("power must be positive")
    return generate_subgroup(G, np.unique(power_map(G, m)))


def subgroup_join(A: Subgroup, B: Subgroup) -> Subgroup:
    _require_same_parent(A, B)
    return generate_subgroup(A.parent, np.union1d(A.elements, B.elements))


def subgroup_intersection(A: Subgroup, B: Subgroup) -> Subgroup:
    _require_same_parent(A, B)
    return Subgroup(A.parent, A.members & B.members)


def quotient_group(G: Group, N: Subgroup, label: Optional[str] = None) -> QuotientMap:
    if not N.parent.same_as(G):
        raise ParentMismatch("kernel is not a subgroup of the source group")
    if not is_normal(G, N):
        raise NotNormal(f"subgroup of order {N.order} is not normal in {G.label}")
    proj = np.full(G.order, -1, dtype=np.int32)
    reps = []
    for g in range(G.order):
        if proj[g] < 0:
            proj[G.table[g, N.elements]] = len(reps)
            reps.append(g)
    reps_arr = np.array(reps)
    img_table = proj[G.table[np.ix_(reps_arr, reps_arr)]]
    image = Group(img_table, label or f"{G.label}/N{N.order}", validate=True)
    if not np.array_equal(proj[G.table], image.table[proj[:, None], proj[None, :]]):
        raise NotNormal("coset multiplication is not well defined")
    return QuotientMap(G, N, image, _frozen(proj))


def exponent(A: GroupLike) -> int:
    return lcm_all(np.unique(orders_in(A)))


def is_p_group(A: Union[GroupLike, int]) -> Optional[int]:
    """The prime ``p`` if the order is a positive power of ``p``, else None."""
    n = A if isinstance(A, int) else A.order
    f = factorize(n)
    if len(f) == 1:
        return next(iter(f))
    return None


def lower_central_series(G: Group) -> list[Subgroup]:
    series = [whole_group(G)]
    while series[-1].order > 1:
        nxt = commutator_subgroup(G, series[-1], G)
        if nxt.order == series[-1].order:
            raise NotNilpotent(f"{G.label}: lower central series stabilises at order {nxt.order}")
        series.append(nxt)
    return series


def nilpotency_class(G: Group) -> int:
    return len(lower_central_series(G)) - 1


def is_cyclic(A: GroupLike) -> bool:
    return bool(np.any(orders_in(A) == A.order))


def generating_sequence(G: Group) -> list[int]:
    """Greedy generating sequence: each step adds the element whose join with the
    current subgroup is largest, ties going to the lowest index."""
    gens: list[int] = []
    H = trivial_subgroup(G)
    while H.order < G.order:
        best, best_size = -1, 0
        tried: set[bytes] = set()
        for x in range(G.order):
            if H.members[x]:
                continue
            cyc = generate_subgroup(G, [x]).members
            key = cyc.tobytes()
            if key in tried:
                continue
            tried.add(key)
            size = generate_subgroup(G, gens + [x]).order
            if size > best_size:
                best, best_size = x, size
                if size == G.order:
                    break
        gens.append(best)
        H = generate_subgroup(G, gens)
    return gens
