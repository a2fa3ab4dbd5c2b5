"""Automorphism groups by pruned backtracking, and the subgroups of Aut(G) built from them.

An automorphism is stored as its image array ``img`` (``img[i]`` is the
image of element ``i``).  Composition ``a * b`` means "apply ``b`` first",
i.e. ``(a * b)[i] = a[b[i]]``, which for image arrays is ``a[b]``.
"""
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from . import kernels
from .core import (
    Group,
    Subgroup,
    centre,
    generate_subgroup,
    generating_sequence,
    lcm_all,
    power_map,
    trivial_subgroup,
    whole_group,
    factorize,
)
from .errors import EnumerationCapExceeded, ParentMismatch, SearchTimeout

log = logging.getLogger(__name__)

DEFAULT_AUT_CAP = 1 << 20
DEFAULT_TIMEOUT = 30.0


@dataclass(frozen=True, eq=False)
class Automorphism:
    parent: Group
    img: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        a = np.ascontiguousarray(self.img, dtype=np.int32)
        a.setflags(write=False)
        object.__setattr__(self, "img", a)

    def __call__(self, g: int) -> int:
        return int(self.img[g])

    def __mul__(self, other: "Automorphism") -> "Automorphism":
        return Automorphism(self.parent, self.img[other.img])

    def inverse(self) -> "Automorphism":
        inv = np.empty_like(self.img)
        inv[self.img] = np.arange(self.img.size, dtype=np.int32)
        return Automorphism(self.parent, inv)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Automorphism) and np.array_equal(self.img, other.img)

    def __hash__(self) -> int:
        return hash(self.img.tobytes())

    def is_valid(self) -> bool:
        return is_automorphism(self.parent, self.img)


def is_automorphism(G: Group, img: np.ndarray) -> bool:
    """Exhaustive check: fixes 0, bijective, preserves every product."""
    img = np.asarray(img)
    n = G.order
    if img.shape != (n,) or img[0] != 0:
        return False
    if not np.array_equal(np.sort(img), np.arange(n)):
        return False
    if not np.array_equal(G.elem_order[img], G.elem_order):
        return False
    return bool(np.array_equal(img[G.table], G.table[img[:, None], img[None, :]]))


def _sort_rows(images: np.ndarray) -> np.ndarray:
    if images.shape[0] <= 1:
        return images
    order = np.lexsort(images.T[::-1])
    return images[order]


def _row_keys(images: np.ndarray) -> list[bytes]:
    return [row.tobytes() for row in images]


class AutomorphismSet:
    """A subgroup of Aut(G), materialised as a sorted array of image rows."""

    def __init__(self, parent: Group, images: np.ndarray, label: str = "A"):
        imgs = np.ascontiguousarray(images, dtype=np.int32).reshape(-1, parent.order)
        imgs = _sort_rows(imgs)
        imgs.setflags(write=False)
        self.parent = parent
        self.images = imgs
        self.label = label

    @property
    def order(self) -> int:
        return int(self.images.shape[0])

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"AutomorphismSet({self.label!r} of {self.parent.label!r}, order={self.order})"

    def __iter__(self):
        return (Automorphism(self.parent, row) for row in self.images)

    @property
    def elements(self) -> list[Automorphism]:
        return list(self)

    @cached_property
    def _keys(self) -> frozenset[bytes]:
        return frozenset(_row_keys(self.images))

    def __contains__(self, a) -> bool:
        img = a.img if isinstance(a, Automorphism) else np.asarray(a, dtype=np.int32)
        return np.ascontiguousarray(img, dtype=np.int32).tobytes() in self._keys

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AutomorphismSet):
            return NotImplemented
        return self.parent.same_as(other.parent) and np.array_equal(self.images, other.images)

    __hash__ = None  # type: ignore[assignment]

    def issubset(self, other: "AutomorphismSet") -> bool:
        return all(k in other._keys for k in self._keys)

    @cached_property
    def element_orders(self) -> np.ndarray:
        """Order of each automorphism as a permutation of the elements."""
        out = np.empty(self.order, dtype=np.int64)
        for r, row in enumerate(self.images):
            out[r] = _perm_order(row)
        return out

    @cached_property
    def generators(self) -> list[int]:
        """Row indices of a generating sublist, picked greedily in canonical order."""
        gens: list[int] = []
        reached: set[bytes] = {np.arange(self.parent.order, dtype=np.int32).tobytes()}
        members = [np.arange(self.parent.order, dtype=np.int32)]
        keys = _row_keys(self.images)
        for r, key in enumerate(keys):
            if len(reached) == self.order:
                break
            if key in reached:
                continue
            gens.append(r)
            members = _close(np.array(members), self.images[gens], reached)
        return gens

    def is_closed(self) -> bool:
        """Contains the identity and is closed under composition with its generators."""
        ident = np.arange(self.parent.order, dtype=np.int32)
        if ident.tobytes() not in self._keys:
            return False
        for g in self.images[self.generators]:
            prods = self.images[:, g]  # row r: a_r * g
            if any(k not in self._keys for k in _row_keys(prods)):
                return False
        return True

    @cached_property
    def is_abelian(self) -> bool:
        gens = self.images[self.generators]
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                if not np.array_equal(gens[i][gens[j]], gens[j][gens[i]]):
                    return False
        return True

    def is_normal_in(self, ambient: "AutomorphismSet") -> bool:
        """``a N a^-1 == N`` for every generator ``a`` of the ambient group."""
        mine = self.images[self.generators]
        for a in ambient.images[ambient.generators]:
            ainv = np.empty_like(a)
            ainv[a] = np.arange(a.size, dtype=np.int32)
            for b in mine:
                if a[b[ainv]].tobytes() not in self._keys:
                    return False
        return True


def _perm_order(row: np.ndarray) -> int:
    n = row.size
    seen = np.zeros(n, dtype=bool)
    lengths = set()
    for s in range(n):
        if seen[s]:
            continue
        length = 0
        x = s
        while not seen[x]:
            seen[x] = True
            x = row[x]
            length += 1
        lengths.add(length)
    return lcm_all(lengths)


def _close(members: np.ndarray, gens: np.ndarray, reached: set[bytes]) -> list[np.ndarray]:
    """Extend ``members`` (closed under the old generators) to the group generated with ``gens``."""
    out = list(members)
    frontier = members
    while frontier.shape[0]:
        fresh = []
        for g in gens:
            prods = frontier[:, g]
            for row in prods:
                k = row.tobytes()
                if k not in reached:
                    reached.add(k)
                    fresh.append(row)
        frontier = np.array(fresh, dtype=np.int32).reshape(-1, members.shape[1])
        out.extend(fresh)
    return out


# --- search planning -------------------------------------------------------

@dataclass(frozen=True)
class SearchPlan:
    """Level-by-level schedule for extending generator images to a full map."""
    gens: np.ndarray
    tree_ptr: np.ndarray
    tree_elem: np.ndarray
    tree_parent: np.ndarray
    tree_gen: np.ndarray
    chk_ptr: np.ndarray
    chk_elem: np.ndarray
    chk_gen: np.ndarray


def build_plan(G: Group, gens: Sequence[int]) -> SearchPlan:
    n = G.order
    t = G.table
    in_h = np.zeros(n, dtype=bool)
    in_h[0] = True
    h_elems = [0]
    tree_ptr, chk_ptr = [0], [0]
    tree: list[tuple[int, int, int]] = []
    chk: list[tuple[int, int]] = []
    for d in range(len(gens)):
        old = len(h_elems)
        tree_edges: set[tuple[int, int]] = set()
        i = 0
        while i < len(h_elems):
            x = h_elems[i]
            for gi in range(d + 1):
                y = int(t[x, gens[gi]])
                if not in_h[y]:
                    in_h[y] = True
                    h_elems.append(y)
                    tree.append((y, x, gi))
                    tree_edges.add((x, gi))
            i += 1
        for idx, x in enumerate(h_elems):
            for gi in range(d + 1):
                if idx < old and gi < d:
                    continue  # checked at an earlier level
                if (x, gi) not in tree_edges:
                    chk.append((x, gi))
        tree_ptr.append(len(tree))
        chk_ptr.append(len(chk))
    if len(h_elems) != n:
        raise ValueError("sequence does not generate the group")
    as32 = lambda xs: np.asarray(xs, dtype=np.int32)
    tr = np.array(tree, dtype=np.int32).reshape(-1, 3)
    ck = np.array(chk, dtype=np.int32).reshape(-1, 2)
    return SearchPlan(as32(gens), as32(tree_ptr), tr[:, 0].copy(), tr[:, 1].copy(), tr[:, 2].copy(),
                      as32(chk_ptr), ck[:, 0].copy(), ck[:, 1].copy())


def fingerprints(G: Group) -> np.ndarray:
    """Per-element invariant under automorphisms: order, class size, and the
    orders of the images under the squaring map and each prime power map."""
    cols = [G.elem_order, G.class_sizes, G.elem_order[power_map(G, 2)]]
    for q in sorted(factorize(G.order)):
        if q != 2:
            cols.append(G.elem_order[power_map(G, q)])
    return np.stack(cols, axis=1)


def _run(src: Group, tgt: Group, plan: SearchPlan, cands: Sequence[np.ndarray], *,
         injective: bool, limit: int = 0, cap: int = 0, timeout: Optional[float] = None,
         verify: bool = True, search=None) -> np.ndarray:
    cand_ptr = np.zeros(len(cands) + 1, dtype=np.int32)
    cand_ptr[1:] = np.cumsum([len(c) for c in cands])
    flat = np.concatenate([np.asarray(c, dtype=np.int32) for c in cands]) if cands else np.zeros(0, np.int32)
    deadline = time.monotonic() + timeout if timeout else 0.0
    fn = search or kernels.search
    result, status, count = fn(
        src.table, tgt.table, plan.gens, plan.tree_ptr, plan.tree_elem, plan.tree_parent,
        plan.tree_gen, plan.chk_ptr, plan.chk_elem, plan.chk_gen, cand_ptr, flat,
        injective, limit, cap, deadline, verify,
    )
    if status == kernels.CAP_EXCEEDED:
        raise EnumerationCapExceeded(
            f"{src.label}: more than {cap} maps found, search aborted", partial_count=int(count) - 1
        )
    if status == kernels.TIMED_OUT:
        raise SearchTimeout(f"{src.label}: search exceeded {timeout} s", partial_count=int(count))
    return result


# --- public operations -----------------------------------------------------

def automorphism_group(G: Group, cap: int = DEFAULT_AUT_CAP,
                       timeout: Optional[float] = DEFAULT_TIMEOUT, search=None) -> AutomorphismSet:
    gens = generating_sequence(G)
    plan = build_plan(G, gens)
    fp = fingerprints(G)
    cands = [np.flatnonzero(np.all(fp == fp[g], axis=1)) for g in gens]
    images = _run(G, G, plan, cands, injective=True, cap=cap, timeout=timeout, search=search)
    return AutomorphismSet(G, images, "Aut")


def find_isomorphism(G: Group, H: Group, timeout: Optional[float] = None) -> Optional[np.ndarray]:
    """An isomorphism G -> H as an image array, or None."""
    if G.order != H.order:
        return None
    if not np.array_equal(np.sort(G.elem_order), np.sort(H.elem_order)):
        return None
    if not np.array_equal(np.sort(G.class_sizes), np.sort(H.class_sizes)):
        return None
    gens = generating_sequence(G)
    plan = build_plan(G, gens)
    fg, fh = fingerprints(G), fingerprints(H)
    if fg.shape[1] != fh.shape[1]:
        return None
    cands = [np.flatnonzero(np.all(fh == fg[g], axis=1)) for g in gens]
    found = _run(G, H, plan, cands, injective=True, limit=1, timeout=timeout)
    return found[0] if found.shape[0] else None


def are_isomorphic(G: Group, H: Group) -> bool:
    return find_isomorphism(G, H) is not None


def absolute_centre(G: Group, A: AutomorphismSet) -> Subgroup:
    """Elements fixed by every automorphism in ``A``."""
    fixed = np.all(A.images == np.arange(G.order, dtype=np.int32), axis=0)
    return Subgroup(G, fixed)


def autocommutator(G: Group, g: int, alpha) -> int:
    img = alpha.img if isinstance(alpha, Automorphism) else np.asarray(alpha)
    return int(G.table[G.inverse[g], img[g]])


def inner_automorphisms(G: Group) -> AutomorphismSet:
    """Conjugations ``g -> x^-1 g x`` for every ``x``, deduplicated."""
    t = G.table
    ar = np.arange(G.order)
    rows = t[t[G.inverse[:, None], ar[None, :]], ar[:, None]]
    return AutomorphismSet(G, np.unique(rows, axis=0), "Inn")


def restricted_automorphisms(A: AutomorphismSet, M: Subgroup, N: Subgroup, label: str = "Aut^M_N") -> AutomorphismSet:
    """Members of ``A`` with every ``x^-1 a(x)`` in ``M`` and fixing ``N`` pointwise."""
    G = A.parent
    if not (M.parent.same_as(G) and N.parent.same_as(G)):
        raise ParentMismatch("restriction subgroups must live in the automorphism set's group")
    comm = G.table[G.inverse[None, :], A.images]
    keep = M.members[comm].all(axis=1)
    ne = N.elements
    keep &= np.all(A.images[:, ne] == ne, axis=1)
    return AutomorphismSet(G, A.images[keep], label)


def central_automorphisms(A: AutomorphismSet) -> AutomorphismSet:
    G = A.parent
    return restricted_automorphisms(A, centre(G), trivial_subgroup(G), "Aut_c")


def absolute_central_automorphisms(A: AutomorphismSet, L: Optional[Subgroup] = None) -> AutomorphismSet:
    G = A.parent
    L = absolute_centre(G, A) if L is None else L
    return restricted_automorphisms(A, L, trivial_subgroup(G), "Aut_l")


def autl_fixing_centre(A: AutomorphismSet, L: Optional[Subgroup] = None) -> AutomorphismSet:
    """Absolute central automorphisms that also fix the centre pointwise."""
    G = A.parent
    L = absolute_centre(G, A) if L is None else L
    return restricted_automorphisms(A, L, centre(G), "Aut^L_Z")


def constrained_autl(G: Group, L: Subgroup, timeout: Optional[float] = DEFAULT_TIMEOUT,
                     search=None) -> AutomorphismSet:
    """Absolute central automorphisms found directly: each generator may only
    move within its coset ``g L``.  Aut(G) is never enumerated."""
    gens = generating_sequence(G)
    plan = build_plan(G, gens)
    cands = [np.sort(G.table[g, L.elements]) for g in gens]
    images = _run(G, G, plan, cands, injective=True, timeout=timeout, search=search)
    result = AutomorphismSet(G, images, "Aut_l")
    filtered = restricted_automorphisms(result, L, trivial_subgroup(G), "Aut_l")
    if filtered.order != result.order:
        raise AssertionError(f"{G.label}: coset-constrained map leaves L on some element")
    return result
