# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled backtracking kernel for homomorphism and automorphism search.

Mirrors ``autl._search_py.search`` exactly; see that module for the meaning
of the plan arrays.
"""
import time

import numpy as np

cimport numpy as cnp
from libcpp.vector cimport vector

cnp.import_array()

DONE = 0
CAP_EXCEEDED = 1
TIMED_OUT = 2
LIMIT_REACHED = 3


cdef inline void _undo(int d, const int[:] tree_ptr, const int[:] tree_elem,
                       int[:] img, char[:] used, bint injective) noexcept:
    cdef int t, y
    for t in range(tree_ptr[d], tree_ptr[d + 1]):
        y = tree_elem[t]
        if img[y] >= 0:
            if injective:
                used[img[y]] = 0
            img[y] = -1


cdef inline bint _apply(int d, const int[:, :] src, const int[:, :] tgt, const int[:] gens,
                        const int[:] tree_ptr, const int[:] tree_elem, const int[:] tree_parent,
                        const int[:] tree_gen, const int[:] chk_ptr, const int[:] chk_elem,
                        const int[:] chk_gen, int[:] gimg, int[:] img, char[:] used,
                        bint injective) noexcept:
    cdef int t, y, v, x, g
    for t in range(tree_ptr[d], tree_ptr[d + 1]):
        y = tree_elem[t]
        v = tgt[img[tree_parent[t]], gimg[tree_gen[t]]]
        if injective:
            if used[v]:
                _undo(d, tree_ptr, tree_elem, img, used, injective)
                return False
            used[v] = 1
        img[y] = v
    for t in range(chk_ptr[d], chk_ptr[d + 1]):
        x = chk_elem[t]
        g = chk_gen[t]
        if img[src[x, gens[g]]] != tgt[img[x], gimg[g]]:
            _undo(d, tree_ptr, tree_elem, img, used, injective)
            return False
    return True


cdef bint _full_check(const int[:, :] src, const int[:, :] tgt, int[:] img, int n) noexcept:
    cdef int i, j
    for i in range(n):
        for j in range(n):
            if img[src[i, j]] != tgt[img[i], img[j]]:
                return False
    return True


def search(src_table, tgt_table, gens_a, tree_ptr_a, tree_elem_a, tree_parent_a, tree_gen_a,
           chk_ptr_a, chk_elem_a, chk_gen_a, cand_ptr_a, cand_a,
           bint injective, long limit, long cap, double deadline, bint verify):
    cdef const int[:, :] src = np.ascontiguousarray(src_table, dtype=np.int32)
    cdef const int[:, :] tgt = np.ascontiguousarray(tgt_table, dtype=np.int32)
    cdef const int[:] gens = np.ascontiguousarray(gens_a, dtype=np.int32)
    cdef const int[:] tree_ptr = np.ascontiguousarray(tree_ptr_a, dtype=np.int32)
    cdef const int[:] tree_elem = np.ascontiguousarray(tree_elem_a, dtype=np.int32)
    cdef const int[:] tree_parent = np.ascontiguousarray(tree_parent_a, dtype=np.int32)
    cdef const int[:] tree_gen = np.ascontiguousarray(tree_gen_a, dtype=np.int32)
    cdef const int[:] chk_ptr = np.ascontiguousarray(chk_ptr_a, dtype=np.int32)
    cdef const int[:] chk_elem = np.ascontiguousarray(chk_elem_a, dtype=np.int32)
    cdef const int[:] chk_gen = np.ascontiguousarray(chk_gen_a, dtype=np.int32)
    cdef const int[:] cand_ptr = np.ascontiguousarray(cand_ptr_a, dtype=np.int32)
    cdef const int[:] cand = np.ascontiguousarray(cand_a, dtype=np.int32)

    cdef int n = src.shape[0]
    cdef int m = tgt.shape[0]
    cdef int k = gens.shape[0]
    cdef int[:] img = np.full(n, -1, dtype=np.int32)
    cdef char[:] used = np.zeros(m, dtype=np.int8)
    cdef int[:] gimg = np.zeros(max(k, 1), dtype=np.int32)
    cdef int[:] pos = np.zeros(max(k, 1), dtype=np.int32)
    cdef vector[int] out
    cdef long count = 0
    cdef long nodes = 0
    cdef int status = DONE
    cdef int d, i
    cdef bint use_deadline = deadline > 0

    img[0] = 0
    if injective:
        used[0] = 1
    if k == 0:
        return np.zeros((1, 1), dtype=np.int32), DONE, 0

    d = 0
    pos[0] = cand_ptr[0]
    while d >= 0:
        if pos[d] >= cand_ptr[d + 1]:
            d -= 1
            if d >= 0:
                _undo(d, tree_ptr, tree_elem, img, used, injective)
                pos[d] += 1
            continue
        nodes += 1
        if use_deadline and (nodes & 4095) == 0 and time.monotonic() > deadline:
            status = TIMED_OUT
            break
        gimg[d] = cand[pos[d]]
        if not _apply(d, src, tgt, gens, tree_ptr, tree_elem, tree_parent, tree_gen,
                      chk_ptr, chk_elem, chk_gen, gimg, img, used, injective):
            pos[d] += 1
            continue
        if d == k - 1:
            if not verify or _full_check(src, tgt, img, n):
                count += 1
                if cap > 0 and count > cap:
                    status = CAP_EXCEEDED
                    break
                for i in range(n):
                    out.push_back(img[i])
                if limit > 0 and count >= limit:
                    status = LIMIT_REACHED
                    break
            _undo(d, tree_ptr, tree_elem, img, used, injective)
            pos[d] += 1
        else:
            d += 1
            pos[d] = cand_ptr[d]

    cdef long rows = out.size() // n
    result = np.empty((rows, n), dtype=np.int32)
    cdef int[:, :] rv = result
    cdef long r
    for r in range(rows):
        for i in range(n):
            rv[r, i] = out[r * n + i]
    return result, status, count
