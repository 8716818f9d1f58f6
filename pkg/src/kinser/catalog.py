"""Constructors for the named matroids: uniform, GF(p)-linear, Fano pair,
transversal systems, the Kinser family Kin(r) and its relaxations, binary
spikes, and small Dowling geometries.

Each construction attaches a layout exposing its named parts (V1..Vr and
the series pair e,f for Kinser matroids; legs a_i/b_i for spikes; edge and
loop names for Dowling geometries) so families of subsets can be addressed
symbolically.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .core import (MAX_GROUND, InvalidSubsetError, Matroid, MatroidError,
                   NotAMatroidError, SizeCapError, matroid_from_circuits,
                   popcount_array, validate_circuit_axioms)
from .transforms import relax, truncate

RADO_FAMILY_LIMIT = 12  # above this, per-subset matching replaces the Rado scan


def uniform(k: int, m: int, label: str | None = None) -> Matroid:
    """U_{k,m}: rank of X is min(|X|, k)."""
    if not 0 <= k <= m:
        raise MatroidError(f"uniform matroid needs 0 <= k <= m, got k={k}, m={m}")
    if m > MAX_GROUND:
        raise SizeCapError(f"ground size {m} exceeds cap {MAX_GROUND}")
    table = np.minimum(popcount_array(m), k).astype(np.uint8)
    return Matroid(m, table, label=label or f"U({k},{m})", validate=False)


# -- linear matroids over GF(p) ----------------------------------------------


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class MatrixGFp:
    """A rows x cols matrix over GF(p), row-major residues."""

    p: int
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if not _is_prime(self.p):
            raise MatroidError(f"modulus {self.p} is not prime")
        if len(self.entries) != self.rows * self.cols:
            raise MatroidError("entry count does not match dimensions")
        if any(not 0 <= v < self.p for v in self.entries):
            raise MatroidError(f"entries must be residues in [0, {self.p})")

    def column(self, j: int) -> list[int]:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]


def from_matrix(mat: MatrixGFp, label: str | None = None) -> Matroid:
    """Linear matroid of the matrix columns: r(X) = GF(p) rank of X's columns.

    The table is filled by a depth-first walk over the column-inclusion
    tree, carrying a reduced pivot basis, so each subset costs one column
    reduction instead of a full elimination.
    """
    m = mat.cols
    if m > MAX_GROUND:
        raise SizeCapError(f"column count {m} exceeds cap {MAX_GROUND}")
    p = mat.p
    table = np.zeros(1 << m, dtype=np.uint8)
    basis: list[tuple[int, list[int]]] = []  # (pivot position, normalized vector)

    def reduce(vec: list[int]) -> list[int]:
        v = list(vec)
        for piv, bvec in basis:
            c = v[piv]
            if c:
                for i in range(mat.rows):
                    v[i] = (v[i] - c * bvec[i]) % p
        return v

    def walk(j: int, mask: int):
        if j == m:
            table[mask] = len(basis)
            return
        walk(j + 1, mask)
        v = reduce(mat.column(j))
        piv = next((i for i, c in enumerate(v) if c), None)
        if piv is None:
            walk(j + 1, mask | (1 << j))
        else:
            inv = pow(v[piv], p - 2, p)
            basis.append((piv, [(c * inv) % p for c in v]))
            walk(j + 1, mask | (1 << j))
            basis.pop()

    walk(0, 0)
    return Matroid(m, table, label=label or f"GF({p})[{mat.rows}x{mat.cols}]", validate=False)


FANO_ROWS = ((1, 0, 0, 1, 1, 0, 1),
             (0, 1, 0, 1, 0, 1, 1),
             (0, 0, 1, 0, 1, 1, 1))


def fano_pair() -> tuple[Matroid, Matroid]:
    """(F_7, F_7^-): the 3x7 matrix read over GF(2) and over GF(3)."""
    entries = tuple(v for row in FANO_ROWS for v in row)
    f7 = from_matrix(MatrixGFp(2, 3, 7, entries), label="F7")
    f7m = from_matrix(MatrixGFp(3, 3, 7, entries), label="F7-")
    return f7, f7m


# -- transversal matroids ------------------------------------------------------


@dataclass(frozen=True)
class SetSystem:
    """Ordered family (A_1, ..., A_k) of subsets of {0..m-1}, as masks."""

    m: int
    family: tuple[int, ...]

    def __post_init__(self):
        for a in self.family:
            if a >> self.m or a < 0:
                raise InvalidSubsetError(f"family member {a:#x} outside ground size {self.m}")


def _matching_rank(x: int, family: tuple[int, ...]) -> int:
    """Maximum matching of X's elements into family indices (augmenting paths)."""
    match: dict[int, int] = {}  # family index -> element

    def augment(e: int, seen: set[int]) -> bool:
        for j, a in enumerate(family):
            if a & (1 << e) and j not in seen:
                seen.add(j)
                if j not in match or augment(match[j], seen):
                    match[j] = e
                    return True
        return False

    size = 0
    e = x
    while e:
        b = e & (-e)
        if augment(b.bit_length() - 1, set()):
            size += 1
        e ^= b
    return size


def transversal(system: SetSystem, label: str | None = None) -> Matroid:
    """Transversal matroid M[A]: independent sets are partial transversals.

    For small families the full table comes from the matching-duality
    formula r(X) = min over S of (k - |S| + |X & union(S)|), evaluated
    vectorized over all X; large families fall back to one bipartite
    matching per subset.
    """
    m, fam = system.m, system.family
    if m > MAX_GROUND:
        raise SizeCapError(f"ground size {m} exceeds cap {MAX_GROUND}")
    k = len(fam)
    n = 1 << m
    if k <= RADO_FAMILY_LIMIT:
        idx = np.arange(n, dtype=np.int64)
        rank = np.full(n, k, dtype=np.int16)
        for smask in range(1 << k):
            u, s = 0, 0
            for j in range(k):
                if (smask >> j) & 1:
                    u |= fam[j]
                    s += 1
            np.minimum(rank, (k - s) + np.bitwise_count(idx & u), out=rank)
    else:
        if m > 16:
            raise SizeCapError("family too large for the Rado scan and ground too "
                               "large for per-subset matching")
        rank = np.fromiter((_matching_rank(x, fam) for x in range(n)),
                           dtype=np.int16, count=n)
    return Matroid(m, rank.astype(np.uint8), label=label or f"M[A], k={k}", validate=False)


# -- Kinser matroids -----------------------------------------------------------


def _kinser_parts(r: int) -> tuple[int, dict[str, int]]:
    """Ground size and layout V1..Vr (V2 = {e,f}), laid out in that order."""
    sizes = [r - 2, 2] + [r - 2] * (r - 2)
    layout: dict[str, int] = {}
    off = 0
    for i, size in enumerate(sizes, start=1):
        layout[f"V{i}"] = ((1 << size) - 1) << off
        off += size
    layout["e"] = 1 << (r - 2)
    layout["f"] = 1 << (r - 1)
    return off, layout


def kinser_base(r: int) -> Matroid:
    """The rank r+1 transversal matroid whose truncation is Kin(r).

    Parts V1..Vr with |V2| = 2 and all others of size r-2; the presented
    family is (A_1, A_3, ..., A_r, A, A') where A_i omits the cyclically
    consecutive pair of parts, A is the whole ground set and A' = V2.
    """
    if r < 4:
        raise MatroidError(f"kinser construction needs r >= 4, got {r}")
    m, layout = _kinser_parts(r)
    if m > MAX_GROUND:
        raise SizeCapError(f"kinser ground size r^2-3r+4 = {m} exceeds cap {MAX_GROUND}")
    E = (1 << m) - 1
    W = E & ~layout["V2"]
    fam = [W & ~(layout["V1"] | layout[f"V{r}"]),
           W & ~(layout["V1"] | layout["V3"])]
    for i in range(4, r + 1):
        fam.append(W & ~(layout[f"V{i - 1}"] | layout[f"V{i}"]))
    fam.extend([E, layout["V2"]])
    M = transversal(SetSystem(m, tuple(fam)), label=f"M_{r + 1}")
    if M.rank_total != r + 1:
        raise NotAMatroidError(f"kinser base has rank {M.rank_total}, expected {r + 1}")
    return Matroid(m, M.table, label=f"M_{r + 1}", layout=layout, validate=False)


def kinser(r: int) -> Matroid:
    """Kin(r): the truncation of the base transversal matroid, rank r."""
    base = kinser_base(r)
    t = truncate(base)
    return Matroid(base.m, t.table, label=f"Kin({r})", layout=base.layout, validate=False)


def kinser_relaxed(r: int, also_relax: int | None = None) -> Matroid:
    """Kin(r)^-: relax the circuit-hyperplane V1 u V2.

    With also_relax = i (3 <= i <= r), additionally relax V2 u Vi, giving
    the doubly relaxed matroid; Kin(4)^- is the Vamos matroid.
    """
    M = kinser(r)
    out = relax(M, M.parts("V1", "V2"))
    label = f"Kin({r})-"
    if also_relax is not None:
        if not 3 <= also_relax <= r:
            raise MatroidError(f"also_relax must be in [3, {r}], got {also_relax}")
        out = relax(out, M.parts("V2", f"V{also_relax}"))
        label = f"Kin({r})_{also_relax}="
    return Matroid(M.m, out.table, label=label, layout=M.layout, validate=False)


# -- binary spikes --------------------------------------------------------------


def spike_transversals(r: int, parity: str = "even") -> list[int]:
    """Leg transversals {z_1..z_r}, z_i in {a_i, b_i}, filtered by b-count parity."""
    want = 0 if parity == "even" else 1
    out = []
    for bits in range(1 << r):
        if bits.bit_count() % 2 != want:
            continue
        z = 0
        for i in range(r):
            z |= (1 << (r + i)) if (bits >> i) & 1 else (1 << i)
        out.append(z)
    return sorted(out)


def binary_spike(r: int) -> Matroid:
    """Z_r on legs {a_i, b_i}: non-spanning circuits are the transversals
    with an even number of b's plus every two-leg set {a_i,b_i,a_k,b_k}.

    Built from the circuit description (rank table by largest-independent-
    subset search) and cross-validated against the circuit axioms.
    """
    if not 4 <= r <= 8:
        raise MatroidError(f"binary spike supported for 4 <= r <= 8, got {r}")
    m = 2 * r
    circuits = spike_transversals(r, "even")
    for i, k in itertools.combinations(range(r), 2):
        circuits.append((1 << i) | (1 << (r + i)) | (1 << k) | (1 << (r + k)))
    res = validate_circuit_axioms(m, circuits)
    if not res:
        raise NotAMatroidError(f"spike circuit list fails {res.axiom}: {res.message}",
                               axiom=res.axiom, witness=res.witness)
    layout = {f"a{i + 1}": 1 << i for i in range(r)}
    layout.update({f"b{i + 1}": 1 << (r + i) for i in range(r)})
    layout["A"] = (1 << r) - 1
    layout["B"] = ((1 << r) - 1) << r
    return matroid_from_circuits(m, r, circuits, label=f"Z{r}", layout=layout)


# -- Dowling geometries ----------------------------------------------------------


@dataclass(frozen=True)
class GroupTable:
    """A finite group as an explicit multiplication table.

    `table[i][j]` is the index of g_i * g_j; identity and inverses are
    derived and the group laws are validated eagerly.
    """

    order: int
    table: tuple[tuple[int, ...], ...]
    identity: int = field(init=False)
    inverse: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        g, t = self.order, self.table
        if len(t) != g or any(len(row) != g for row in t):
            raise MatroidError("multiplication table must be order x order")
        if any(not 0 <= v < g for row in t for v in row):
            raise MatroidError("multiplication table entries out of range")
        ident = next((e for e in range(g)
                      if all(t[e][x] == x and t[x][e] == x for x in range(g))), None)
        if ident is None:
            raise MatroidError("group has no identity element")
        inv = []
        for x in range(g):
            y = next((y for y in range(g) if t[x][y] == ident and t[y][x] == ident), None)
            if y is None:
                raise MatroidError(f"element {x} has no inverse")
            inv.append(y)
        for a in range(g):
            for b in range(g):
                for c in range(g):
                    if t[t[a][b]][c] != t[a][t[b][c]]:
                        raise MatroidError(f"multiplication not associative at ({a},{b},{c})")
        object.__setattr__(self, "identity", ident)
        object.__setattr__(self, "inverse", tuple(inv))

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def is_abelian(self) -> bool:
        return all(self.table[a][b] == self.table[b][a]
                   for a in range(self.order) for b in range(self.order))


def cyclic_group(n: int) -> GroupTable:
    """Z_n with elements 0..n-1 under addition mod n."""
    return GroupTable(n, tuple(tuple((a + b) % n for b in range(n)) for a in range(n)))


@dataclass(frozen=True)
class GainEdge:
    tail: int
    head: int
    label: int
    is_loop: bool


@dataclass(frozen=True)
class GainGraph:
    """Group-labeled multigraph: oriented edges plus labeled loops."""

    n_vertices: int
    group: GroupTable
    edges: tuple[GainEdge, ...]

    def __post_init__(self):
        ident = self.group.identity
        classes: dict[tuple[int, int], list[int]] = {}
        for e in self.edges:
            if e.is_loop:
                if e.tail != e.head:
                    raise MatroidError("loop must have equal endpoints")
                if e.label == ident:
                    raise MatroidError("loops must carry non-identity labels")
            else:
                if e.tail >= e.head:
                    raise MatroidError("parallel classes must share orientation (tail < head)")
                classes.setdefault((e.tail, e.head), []).append(e.label)
        for pair, labels in classes.items():
            if sorted(labels) != list(range(self.group.order)):
                raise MatroidError(f"parallel class {pair} is not bijectively labeled")


def _balanced(edges: list[GainEdge], idxs: list[int], group: GroupTable) -> bool:
    """Whether the sub(multi)graph admits a consistent vertex potential.

    Potentials phi satisfy phi(head) = phi(tail) * label for every chosen
    edge; a loop with a non-identity label always breaks consistency.
    """
    chosen = [edges[i] for i in idxs]
    if any(e.is_loop for e in chosen):
        return False
    adj: dict[int, list[tuple[int, int, bool]]] = {}
    for e in chosen:
        adj.setdefault(e.tail, []).append((e.head, e.label, True))
        adj.setdefault(e.head, []).append((e.tail, e.label, False))
    phi: dict[int, int] = {}
    for start in adj:
        if start in phi:
            continue
        phi[start] = group.identity
        stack = [start]
        while stack:
            u = stack.pop()
            for (v, lab, forward) in adj[u]:
                val = group.mul(phi[u], lab) if forward \
                    else group.mul(phi[u], group.inverse[lab])
                if v not in phi:
                    phi[v] = val
                    stack.append(v)
                elif phi[v] != val:
                    return False
    return True


def _edge_subset_shape(edges: list[GainEdge], idxs: list[int]) -> tuple[bool, int, dict[int, int]]:
    """(connected, cyclomatic number, degree map) of an edge subset."""
    verts: set[int] = set()
    deg: dict[int, int] = {}
    adj: dict[int, set[int]] = {}
    for i in idxs:
        e = edges[i]
        verts.update((e.tail, e.head))
        deg[e.tail] = deg.get(e.tail, 0) + 1
        deg[e.head] = deg.get(e.head, 0) + 1  # a loop contributes 2 at its vertex
        adj.setdefault(e.tail, set()).add(e.head)
        adj.setdefault(e.head, set()).add(e.tail)
    seen: set[int] = set()
    stack = [next(iter(verts))]
    while stack:
        u = stack.pop()
        if u in seen:
            continue
        seen.add(u)
        stack.extend(adj[u] - seen)
    connected = seen == verts
    return connected, len(idxs) - len(verts) + 1, deg


def _is_cycle(edges: list[GainEdge], idxs: list[int]) -> bool:
    connected, cyclo, deg = _edge_subset_shape(edges, idxs)
    return connected and cyclo == 1 and all(d == 2 for d in deg.values())


def dowling_gain_graph(group: GroupTable, n: int) -> GainGraph:
    """Complete graph on n vertices with |G| bijectively labeled parallel
    edges per pair and one loop per non-identity element at each vertex."""
    if not group.is_abelian():
        raise MatroidError("dowling construction requires an abelian group")
    g = group.order
    m = n * (n - 1) // 2 * g + n * (g - 1)
    if m > MAX_GROUND:
        raise SizeCapError(f"dowling ground size {m} exceeds cap {MAX_GROUND}")
    edges = []
    for u, v in itertools.combinations(range(n), 2):
        for lab in range(g):
            edges.append(GainEdge(u, v, lab, False))
    for v in range(n):
        for lab in range(g):
            if lab != group.identity:
                edges.append(GainEdge(v, v, lab, True))
    return GainGraph(n, group, tuple(edges))


def dowling_bias_rank_table(graph: GainGraph) -> np.ndarray:
    """Independent rank oracle: r(X) = vertices touched - balanced components."""
    edges = list(graph.edges)
    m = len(edges)
    group = graph.group
    table = np.zeros(1 << m, dtype=np.uint8)
    for x in range(1, 1 << m):
        idxs = [i for i in range(m) if (x >> i) & 1]
        verts: set[int] = set()
        adj: dict[int, set[int]] = {}
        for i in idxs:
            e = edges[i]
            verts.update((e.tail, e.head))
            adj.setdefault(e.tail, set()).add(e.head)
            adj.setdefault(e.head, set()).add(e.tail)
        balanced_comps = 0
        seen: set[int] = set()
        for s in verts:
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            while stack:
                u = stack.pop()
                for v in adj[u]:
                    if v not in comp:
                        comp.add(v)
                        stack.append(v)
            seen |= comp
            comp_edges = [i for i in idxs
                          if edges[i].tail in comp or edges[i].head in comp]
            if _balanced(edges, comp_edges, group):
                balanced_comps += 1
        table[x] = len(verts) - balanced_comps
    return table


def dowling(group: GroupTable, n: int) -> Matroid:
    """Dowling geometry of the group-labeled complete graph.

    Circuits are the balanced cycles together with the minimal connected
    subgraphs carrying two unbalanced cycles (tight/loose handcuffs and
    contrabalanced thetas).  The table built from those circuits is
    cross-checked, entry by entry, against the bias rank oracle; any
    mismatch is a construction bug and raises.
    """
    graph = dowling_gain_graph(group, n)
    edges = list(graph.edges)
    m = len(edges)
    bias = dowling_bias_rank_table(graph)
    rank_full = int(bias[-1])

    circuits: list[int] = []
    for size in range(1, rank_full + 1):
        for combo in itertools.combinations(range(m), size):
            idxs = list(combo)
            connected, cyclo, deg = _edge_subset_shape(edges, idxs)
            if not connected:
                continue
            if cyclo == 1 and all(d == 2 for d in deg.values()):
                if _balanced(edges, idxs, graph.group):
                    circuits.append(sum(1 << i for i in idxs))
                continue
            if cyclo == 2 and all(d >= 2 for d in deg.values()):
                contrabalanced = True
                for sub_size in range(1, size):
                    for sub in itertools.combinations(idxs, sub_size):
                        if _is_cycle(edges, list(sub)) and _balanced(edges, list(sub),
                                                                     graph.group):
                            contrabalanced = False
                            break
                    if not contrabalanced:
                        break
                if contrabalanced:
                    circuits.append(sum(1 << i for i in idxs))

    label = f"Dowling({group.order},{n})"
    M = matroid_from_circuits(m, rank_full, sorted(circuits), label=label)
    if not np.array_equal(M.table, bias):
        bad = int(np.nonzero(M.table != bias)[0][0])
        raise NotAMatroidError(
            f"dowling circuit table disagrees with bias rank oracle at mask {bad:#x}",
            witness=(bad,))
    layout = {}
    for i, e in enumerate(edges):
        name = f"loop_{e.tail}_{e.label}" if e.is_loop else f"edge_{e.tail}_{e.head}_{e.label}"
        layout[name] = 1 << i
    return Matroid(m, M.table, label=label, layout=layout, validate=False)
