"""Write all 14 groups of order 16 as GroupFiles under groupfiles/order16/.

Twelve come straight from the builders.  The Pauli group is the quotient of
C4 x D8 by the diagonal central subgroup of order 2, and the remaining one is
(C4 x C2) x| C2 with the involution a -> ab, b -> b.
"""
import json
import sys
from pathlib import Path

from autl.constructions import builtin
from autl.core import from_multiplication, generate_subgroup, quotient_group
from autl.groupfile import group_to_document

OUT = Path(__file__).resolve().parent.parent / "groupfiles" / "order16"

BUILTIN = [
    "C16", "C8xC2", "C4xC4", "C4xC2xC2", "C2xC2xC2xC2",
    "D16", "Q16", "SD16", "modular16", "C2xD8", "C2xQ8", "semidirect4_4_3",
]


def pauli():
    P = builtin("C4xD8")
    # centre of D8 is its unique central involution r^2; pair it with 2 in C4
    D8 = builtin("D8")
    z = next(i for i in range(1, 8) if all(D8.table[i, j] == D8.table[j, i] for j in range(8)))
    pos = {(a, b): i for i, (a, b) in enumerate(_pairs(P))}
    N = generate_subgroup(P, [pos[(2, z)]])
    Q = quotient_group(P, N, "pauli16").image
    return Q


def _pairs(P):
    # recover (C4 index, D8 index) coordinates of the direct product by BFS replay
    C4, D8 = builtin("C4"), builtin("D8")
    gens = [(g, 0) for g in C4.gen_hint] + [(0, h) for h in D8.gen_hint]
    mul = lambda x, y: (int(C4.table[x[0], y[0]]), int(D8.table[x[1], y[1]]))
    elems, index = [(0, 0)], {(0, 0): 0}
    for x in elems:
        for g in gens:
            y = mul(x, g)
            if y not in index:
                index[y] = len(elems)
                elems.append(y)
    return elems


def c4c2_semidirect_c2():
    def act(x, k):
        i, j = x
        return (i, (j + i) % 2) if k else x

    def mul(x, y):
        (i, j, k), (i2, j2, k2) = x, y
        a2, b2 = act((i2, j2), k)
        return ((i + a2) % 4, (j + b2) % 2, (k + k2) % 2)

    return from_multiplication((0, 0, 0), [(1, 0, 0), (0, 1, 0), (0, 0, 1)], mul, "C4xC2:C2")


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    groups = [builtin(n) for n in BUILTIN] + [pauli(), c4c2_semidirect_c2()]
    for i, G in enumerate(groups, 1):
        path = OUT / f"{i:02d}_{G.label.replace(':', '_')}.json"
        path.write_text(json.dumps(group_to_document(G)) + "\n")
        print(path, file=sys.stderr)


if __name__ == "__main__":
    main()
