"""Pure-Python backtracking kernel (fallback for ``autl._search``).

The search assigns images to a generating sequence ``gens`` of the source
group one level at a time.  Level ``d`` owns:

* tree edges ``(elem, parent, gen)``: elements first reached at level ``d``,
  with ``img[elem] = tgt[img[parent], gimg[gen]]``;
* check edges ``(elem, gen)``: products that must agree,
  ``img[src[elem, gens[gen]]] == tgt[img[elem], gimg[gen]]``;
* candidate images ``cand[cand_ptr[d]:cand_ptr[d+1]]`` for ``gens[d]``.

Every edge of the Cayley graph over the generators is either a tree edge or a
check edge at some level, so a full assignment surviving all checks is a
homomorphism.
"""
import time

import numpy as np

DONE = 0
CAP_EXCEEDED = 1
TIMED_OUT = 2
LIMIT_REACHED = 3


def search(src_table, tgt_table, gens, tree_ptr, tree_elem, tree_parent, tree_gen,
           chk_ptr, chk_elem, chk_gen, cand_ptr, cand,
           injective, limit, cap, deadline, verify):
    src = np.asarray(src_table).tolist()
    tgt = np.asarray(tgt_table).tolist()
    gens = [int(g) for g in gens]
    tree_ptr = [int(x) for x in tree_ptr]
    chk_ptr = [int(x) for x in chk_ptr]
    cand_ptr = [int(x) for x in cand_ptr]
    cand = [int(x) for x in cand]
    n, m, k = len(src), len(tgt), len(gens)
    levels_tree = [
        list(zip(tree_elem[tree_ptr[d]:tree_ptr[d + 1]].tolist(),
                 tree_parent[tree_ptr[d]:tree_ptr[d + 1]].tolist(),
                 tree_gen[tree_ptr[d]:tree_ptr[d + 1]].tolist()))
        for d in range(k)
    ]
    levels_chk = [
        list(zip(chk_elem[chk_ptr[d]:chk_ptr[d + 1]].tolist(),
                 chk_gen[chk_ptr[d]:chk_ptr[d + 1]].tolist()))
        for d in range(k)
    ]
    if k == 0:
        return np.zeros((1, 1), dtype=np.int32), DONE, 0

    img = [-1] * n
    img[0] = 0
    used = [False] * m
    used[0] = bool(injective)
    gimg = [0] * k
    out = []
    count = 0
    nodes = 0
    status = DONE

    def undo(d):
        for y, _, _ in levels_tree[d]:
            v = img[y]
            if v >= 0:
                if injective:
                    used[v] = False
                img[y] = -1

    def apply(d):
        for y, parent, g in levels_tree[d]:
            v = tgt[img[parent]][gimg[g]]
            if injective:
                if used[v]:
                    undo(d)
                    return False
                used[v] = True
            img[y] = v
        for x, g in levels_chk[d]:
            if img[src[x][gens[g]]] != tgt[img[x]][gimg[g]]:
                undo(d)
                return False
        return True

    def full_check():
        for i in range(n):
            row = src[i]
            ti = tgt[img[i]]
            for j in range(n):
                if img[row[j]] != ti[img[j]]:
                    return False
        return True

    pos = [0] * k
    d = 0
    pos[0] = cand_ptr[0]
    while d >= 0:
        if pos[d] >= cand_ptr[d + 1]:
            d -= 1
            if d >= 0:
                undo(d)
                pos[d] += 1
            continue
        nodes += 1
        if deadline > 0 and (nodes & 4095) == 0 and time.monotonic() > deadline:
            status = TIMED_OUT
            break
        gimg[d] = cand[pos[d]]
        if not apply(d):
            pos[d] += 1
            continue
        if d == k - 1:
            if not verify or full_check():
                count += 1
                if cap > 0 and count > cap:
                    status = CAP_EXCEEDED
                    break
                out.append(list(img))
                if limit > 0 and count >= limit:
                    status = LIMIT_REACHED
                    break
            undo(d)
            pos[d] += 1
        else:
            d += 1
            pos[d] = cand_ptr[d]

    result = np.array(out, dtype=np.int32).reshape(len(out), n)
    return result, status, count
