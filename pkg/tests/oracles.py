"""Independent reference implementations used as test oracles.

Everything here recomputes quantities from first principles by a route
different from the package's (subset-sum spans, recursive matchings,
literal definitions), so agreement is evidence and not tautology.
"""

import itertools

import numpy as np

from kinser import elements_of

FANO_COLS = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1)]


def gf2_span_closure(mask: int) -> int:
    """Closure of a Fano column set = columns lying in the GF(2) span."""
    chosen = [FANO_COLS[i] for i in elements_of(mask)]
    span = set()
    for bits in range(1 << len(chosen)):
        v = (0, 0, 0)
        for i, col in enumerate(chosen):
            if (bits >> i) & 1:
                v = tuple((a + b) % 2 for a, b in zip(v, col))
        span.add(v)
    out = 0
    for j, col in enumerate(FANO_COLS):
        if col in span:
            out |= 1 << j
    return out


def brute_matching_rank(x: int, family: tuple[int, ...]) -> int:
    """Largest partial transversal of X by trying every assignment."""
    els = elements_of(x)

    def best(i: int, used: int) -> int:
        if i == len(els):
            return 0
        top = best(i + 1, used)  # leave els[i] unmatched
        for j, a in enumerate(family):
            if not (used >> j) & 1 and (a >> els[i]) & 1:
                top = max(top, 1 + best(i + 1, used | (1 << j)))
        return top

    return best(0, 0)


def ingleton_value(M, x1, x2, x3, x4):
    """The Ingleton inequality's two sides, written out literally."""
    r = M.rank
    lhs = r(x3) + r(x4) + r(x1 | x2) + r(x1 | x3 | x4) + r(x2 | x3 | x4)
    rhs = r(x1 | x3) + r(x1 | x4) + r(x2 | x3) + r(x2 | x4) + r(x3 | x4)
    return lhs, rhs


def kinser_value(M, sets):
    """Inequality n from the displayed formula, 1-based summation indices."""
    n = len(sets)
    X = [None] + list(sets)
    r = M.rank

    def u(*idx):
        m = 0
        for i in idx:
            m |= X[i]
        return m

    lhs = sum(r(X[i]) for i in range(3, n + 1)) + r(u(1, 2)) + r(u(1, 3, n))
    lhs += sum(r(u(2, i - 1, i)) for i in range(4, n + 1))
    rhs = r(u(1, 3)) + r(u(1, n)) + sum(r(u(2, i)) for i in range(3, n + 1))
    rhs += sum(r(u(i - 1, i)) for i in range(4, n + 1))
    return lhs, rhs


def definition_closure(M, x: int) -> int:
    return x | sum(1 << e for e in range(M.m)
                   if not (x >> e) & 1 and M.rank(x | (1 << e)) == M.rank(x))


def definition_flats(M) -> list[int]:
    """Flats as deduplicated closures of every subset."""
    return sorted({definition_closure(M, x) for x in range(1 << M.m)})


def definition_is_circuit(M, x: int) -> bool:
    """Dependent with every proper subset independent (all of them)."""
    if M.rank(x) == M.size(x):
        return False
    els = elements_of(x)
    for k in range(len(els)):
        for sub in itertools.combinations(els, k):
            s = sum(1 << e for e in sub)
            if M.rank(s) != len(sub):
                return False
    return True


def gf_column_rank(p: int, columns) -> int:
    """Rank of integer column vectors mod p by full elimination."""
    if not columns:
        return 0
    a = np.array(columns, dtype=np.int64).T % p
    rows, cols = a.shape
    rank = 0
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if a[r, c] % p), None)
        if piv is None:
            continue
        a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, c]), p - 2, p)
        a[rank] = (a[rank] * inv) % p
        for r in range(rows):
            if r != rank and a[r, c] % p:
                a[r] = (a[r] - a[r, c] * a[rank]) % p
        rank += 1
    return rank


def bias_rank_oracle(edges, group_order: int, x: int) -> int:
    """Frame-matroid rank by linear algebra over Z_p (p = 1, 2 or 3).

    Components found by union-find; a component is balanced iff the system
    phi(head) - phi(tail) = label (and 0 = label for loops) is consistent,
    decided by Gaussian elimination over Z_p on the incidence system.
    """
    idxs = [i for i in range(len(edges)) if (x >> i) & 1]
    verts = sorted({v for i in idxs for v in (edges[i][0], edges[i][1])})
    parent = {v: v for v in verts}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for i in idxs:
        u, v = edges[i][0], edges[i][1]
        parent[find(u)] = find(v)
    comps: dict[int, list[int]] = {}
    for i in idxs:
        comps.setdefault(find(edges[i][0]), []).append(i)

    balanced = 0
    for comp_edges in comps.values():
        if group_order == 1:
            balanced += 1
            continue
        vs = sorted({v for i in comp_edges for v in (edges[i][0], edges[i][1])})
        col = {v: j for j, v in enumerate(vs)}
        rows = []
        rhs = []
        consistent = True
        for i in comp_edges:
            u, v, lab, is_loop = edges[i]
            if is_loop:
                consistent = False
                break
            row = [0] * len(vs)
            row[col[v]] = (row[col[v]] + 1) % group_order
            row[col[u]] = (row[col[u]] - 1) % group_order
            rows.append(row)
            rhs.append(lab % group_order)
        if consistent:
            aug = [row + [b] for row, b in zip(rows, rhs)]
            a = np.array(aug, dtype=np.int64)
            p = group_order
            rank = 0
            for c in range(len(vs)):
                piv = next((r for r in range(rank, len(aug)) if a[r, c] % p), None)
                if piv is None:
                    continue
                a[[rank, piv]] = a[[piv, rank]]
                inv = pow(int(a[rank, c]), p - 2, p)
                a[rank] = (a[rank] * inv) % p
                for r2 in range(len(aug)):
                    if r2 != rank and a[r2, c] % p:
                        a[r2] = (a[r2] - a[r2, c] * a[rank]) % p
                rank += 1
            consistent = not any((row[:-1] % p == 0).all() and row[-1] % p
                                 for row in a)
        balanced += 1 if consistent else 0
    return len(verts) - balanced
