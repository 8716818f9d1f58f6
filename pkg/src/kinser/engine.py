"""Kinser inequality evaluation and exhaustive bad-family search.

Inequality n (n >= 4) compares, for subsets X_1..X_n,

    sum_{i=3..n} r(X_i) + r(X1 u X2) + r(X1 u X3 u Xn)
        + sum_{i=4..n} r(X2 u X_{i-1} u X_i)
    <=  r(X1 u X3) + r(X1 u Xn) + sum_{i=3..n} r(X2 u X_i)
        + sum_{i=4..n} r(X_{i-1} u X_i)

with 2n-3 terms per side; n = 4 is the Ingleton inequality.  The search
for violating families runs over the flats of the matroid (replacing each
set by its closure changes no term rank, so this loses nothing), in
lexicographic tuple order, with optional symmetry pruning:

* for every n the inequality is invariant under reversing (X3, ..., Xn);
* at n = 4 it is additionally invariant under swapping X1 with X2 and
  under swapping X3 with X4 independently.

A tuple is enumerated only if it is the lexicographically least member of
its orbit; the least violating tuple overall is always canonical, so
pruning cannot change either the verdict or the lex-first certificate.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import Matroid, MatroidError, SizeCapError, content_fingerprint
from .transforms import dual

ALL_SUBSETS_LIMIT = 8       # all-subsets search space allowed only up to this m
TENSOR_BYTES_LIMIT = 1 << 29  # fall back to row gathers above ~512 MiB


@dataclass(frozen=True)
class Family:
    """Ordered tuple X_1..X_n of subset masks; repeats and empties allowed."""

    n: int
    sets: tuple[int, ...]

    def __post_init__(self):
        if self.n < 4:
            raise MatroidError(f"inequality index must be >= 4, got {self.n}")
        if len(self.sets) != self.n:
            raise MatroidError(f"family needs {self.n} sets, got {len(self.sets)}")


def family(*sets: int) -> Family:
    return Family(len(sets), tuple(sets))


@dataclass(frozen=True)
class TermValue:
    side: str                 # "lhs" | "rhs"
    kind: str                 # "single" | "pair" | "triple"
    members: tuple[int, ...]  # 1-based indices of the X_i in the term
    mask: int
    rank: int


@dataclass(frozen=True)
class InequalityValue:
    lhs: int
    rhs: int
    terms: tuple[TermValue, ...]

    @property
    def satisfied(self) -> bool:
        return self.lhs <= self.rhs

    @property
    def margin(self) -> int:
        return self.lhs - self.rhs


@dataclass(frozen=True)
class BadFamilyCertificate:
    matroid_label: str
    fingerprint: str
    family: Family
    lhs: int
    rhs: int


@dataclass(frozen=True)
class SearchConfig:
    space: str = "flats"            # "flats" | "all_subsets"
    determinism: str = "lex_first"  # "lex_first" | "any"
    symmetry_pruning: bool = True
    parallel_width: int = 1


@dataclass(frozen=True)
class Verdict:
    in_class: bool
    n: int
    tuples_examined: int
    rank_queries: int
    certificate: BadFamilyCertificate | None = None


def term_members(n: int) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """The 2n-3 member tuples per side of inequality n (1-based indices)."""
    lhs = [(i,) for i in range(3, n + 1)]
    lhs.append((1, 2))
    lhs.append((1, 3, n))
    lhs.extend((2, i - 1, i) for i in range(4, n + 1))
    rhs = [(1, 3), (1, n)]
    rhs.extend((2, i) for i in range(3, n + 1))
    rhs.extend((i - 1, i) for i in range(4, n + 1))
    return lhs, rhs


_KINDS = {1: "single", 2: "pair", 3: "triple"}


def evaluate(M: Matroid, fam: Family) -> InequalityValue:
    """Evaluate inequality n for an explicit family, term by term."""
    for x in fam.sets:
        M.check_mask(x)
    lhs_members, rhs_members = term_members(fam.n)
    terms = []
    totals = {"lhs": 0, "rhs": 0}
    for side, members_list in (("lhs", lhs_members), ("rhs", rhs_members)):
        for members in members_list:
            mask = 0
            for i in members:
                mask |= fam.sets[i - 1]
            r = M.rank(mask)
            # members with equal sets still count by index multiplicity
            terms.append(TermValue(side, _KINDS[len(set(members))], members, mask, r))
            totals[side] += r
    value = InequalityValue(totals["lhs"], totals["rhs"], tuple(terms))
    assert len(lhs_members) == len(rhs_members) == 2 * fam.n - 3
    return value


# -- family reductions ---------------------------------------------------------


def reduce_family(M: Matroid, fam: Family, mode: str) -> Family:
    """Replace each set by its closure, or by its lex-least maximal
    independent subset; both leave every term rank unchanged."""
    if mode == "closure":
        return Family(fam.n, tuple(M.closure(x) for x in fam.sets))
    if mode == "basis":
        out = []
        for x in fam.sets:
            cur = 0
            rest = M.check_mask(x)
            while rest:
                b = rest & (-rest)
                if M.table[cur | b] > M.table[cur]:
                    cur |= b
                rest ^= b
            out.append(cur)
        return Family(fam.n, tuple(out))
    raise MatroidError(f"unknown reduction mode {mode!r}")


def extend_family(fam: Family) -> Family:
    """The n+1 family with X_{n+1} = X_n; preserves lhs - rhs exactly."""
    return Family(fam.n + 1, fam.sets + (fam.sets[-1],))


def canonical_family(M: Matroid, kind: str, transversal_mask: int | None = None) -> Family:
    """The paper families: the part tuple (V_1..V_r) of a Kinser matroid, or
    the four-part partition attached to a spike circuit-hyperplane Z."""
    if M.layout is None:
        raise MatroidError(f"{M.label or 'matroid'} carries no layout")
    if kind == "kinser":
        r = max(int(name[1:]) for name in M.layout if name.startswith("V"))
        return Family(r, tuple(M.part(f"V{i}") for i in range(1, r + 1)))
    if kind == "spike":
        if transversal_mask is None:
            raise MatroidError("spike family needs the transversal mask Z")
        Z = M.check_mask(transversal_mask)
        legs = max(int(name[1:]) for name in M.layout if name.startswith("a"))
        A, B = M.part("A"), M.part("B")
        x1, x2 = Z & A, Z & B
        if x1 == 0 or x2 == 0:
            raise MatroidError("Z must meet both legs sides: Z&A and Z&B nonempty")
        x3 = x4 = 0
        bcount = 0
        for i in range(1, legs + 1):
            a, b = M.part(f"a{i}"), M.part(f"b{i}")
            if bool(Z & a) == bool(Z & b):
                raise MatroidError(f"Z is not a transversal: leg {i} hit {bin(Z & (a | b)).count('1')} times")
            if Z & a:
                x3 |= b
            else:
                x4 |= a
                bcount += 1
        if bcount % 2:
            raise MatroidError("Z has an odd number of b-elements, not a circuit-hyperplane")
        return Family(4, (x1, x2, x3, x4))
    raise MatroidError(f"unknown canonical family kind {kind!r}")


@dataclass(frozen=True)
class TermReport:
    side: str
    kind: str
    members: tuple[int, ...]
    mask: int
    size: int
    rank_complement: int
    corank: int


def corank_term_report(M: Matroid, fam: Family) -> list[TermReport]:
    """Per term U of the inequality: |U|, r(E - U) and r*(U) by the dual
    rank formula, all computed on the primal matroid."""
    E = M.full_mask
    rm = M.rank_total
    out = []
    for t in evaluate(M, fam).terms:
        size = M.size(t.mask)
        rc = M.rank(E & ~t.mask)
        out.append(TermReport(t.side, t.kind, t.members, t.mask, size, rc,
                              size + rc - rm))
    return out


# -- exhaustive search ----------------------------------------------------------


def _space_masks(M: Matroid, cfg: SearchConfig) -> np.ndarray:
    if cfg.space == "flats":
        return np.array(M.enumerate("flats"), dtype=np.int64)
    if cfg.space == "all_subsets":
        if M.m > ALL_SUBSETS_LIMIT:
            raise SizeCapError(
                f"all-subsets search refused for m={M.m} > {ALL_SUBSETS_LIMIT}")
        return np.arange(1 << M.m, dtype=np.int64)
    raise MatroidError(f"unknown search space {cfg.space!r}")


def _search_n4_chunk(table: np.ndarray, masks: np.ndarray, i1_lo: int, i1_hi: int,
                     pruning: bool) -> tuple[tuple[int, ...] | None, int, int]:
    """Scan inequality 4 for i1 in [i1_lo, i1_hi), lex order, first hit wins.

    For fixed (X1, X2) the margin over the (X3, X4) plane decomposes as

        margin = r(X1 u X2) + G[X1] + G[X2] + (r(X3) + r(X4) - r(X3 u X4))

    with G[j][k,l] = r(Xj u Xk u Xl) - r(Xj u Xk) - r(Xj u Xl), so the whole
    plane is three precomputed-array adds.  G entries lie in [-r, 0] and the
    plane sums stay within int16.
    """
    F = len(masks)
    rank_f = table[masks].astype(np.int16)
    pair_union = masks[:, None] | masks[None, :]
    PR = table[pair_union].astype(np.int16)
    base34 = rank_f[:, None] + rank_f[None, :] - PR
    queries = F + F * F
    tensor_ok = F ** 3 <= TENSOR_BYTES_LIMIT
    G = None
    if tensor_ok:
        G = np.empty((F, F, F), dtype=np.int8)
        for j in range(F):
            T = table[masks[j] | pair_union].astype(np.int16)
            G[j] = (T - PR[j][:, None] - PR[j][None, :]).astype(np.int8)
        queries += F ** 3

    def g_plane(j: int) -> np.ndarray:
        nonlocal queries
        if G is not None:
            return G[j]
        T = table[masks[j] | pair_union].astype(np.int16)
        queries += F * F
        return T - PR[j][:, None] - PR[j][None, :]

    tuples = 0
    for i1 in range(i1_lo, i1_hi):
        G1 = g_plane(i1)
        for i2 in range(i1 if pruning else 0, F):
            plane = (G1 + g_plane(i2)) + base34
            tuples += F * F
            hits = plane > -int(PR[i1, i2])
            if not hits.any():
                continue
            for i3, i4 in np.argwhere(hits):
                if pruning and i3 > i4:
                    continue
                return (i1, i2, int(i3), int(i4)), tuples, queries
    return None, tuples, queries


def _search_generic_chunk(table: np.ndarray, masks: np.ndarray, n: int,
                          i1_lo: int, i1_hi: int,
                          pruning: bool) -> tuple[tuple[int, ...] | None, int, int]:
    """Depth-first scan for n >= 5, vectorized over the last family slot.

    Constants accumulate along the prefix; the X_n axis needs two fresh
    union-rank gathers plus three precomputed pair-rank rows.  Reversal
    canonicality (X3..Xn) <= reversed is applied on the final axis.
    """
    F = len(masks)
    rank_f = table[masks].astype(np.int32)
    PR = table[masks[:, None] | masks[None, :]].astype(np.int32)
    state = {"queries": F + F * F, "tuples": 0}
    idxs = [0] * (n + 1)  # 1-based slots 1..n
    found: list[tuple[int, ...]] = []

    def mid_reversed_cmp() -> int:
        """Compare (j4..j_{n-1}) with its reverse; settles jn == j3 ties."""
        mid = [idxs[i] for i in range(4, n)]
        rev = mid[::-1]
        return (mid > rev) - (mid < rev)

    def rec(d: int, const: int):
        if found:
            return
        if d == n:
            m1, m2 = masks[idxs[1]], masks[idxs[2]]
            m3, mprev = masks[idxs[3]], masks[idxs[n - 1]]
            vec = (const + rank_f
                   + table[(m1 | m3) | masks] + table[(m2 | mprev) | masks]
                   - PR[idxs[1]] - PR[idxs[2]] - PR[idxs[n - 1]])
            state["queries"] += 2 * F
            state["tuples"] += F
            hits = vec > 0
            if pruning:
                j3 = idxs[3]
                allowed = np.arange(F) > j3
                if mid_reversed_cmp() <= 0:
                    allowed |= np.arange(F) == j3
                hits &= allowed
            nz = np.nonzero(hits)[0]
            if nz.size:
                found.append(tuple(idxs[1:n]) + (int(nz[0]),))
            return
        lo, hi = (i1_lo, i1_hi) if d == 1 else (0, F)
        for j in range(lo, hi):
            idxs[d] = j
            delta = 0
            if d == 2:
                delta += PR[idxs[1]][j]
            if d >= 3:
                delta += int(rank_f[j]) - PR[idxs[2]][j]
            if d == 3:
                delta -= PR[idxs[1]][j]
            if d >= 4:
                prev = idxs[d - 1]
                delta += int(table[masks[idxs[2]] | masks[prev] | masks[j]])
                delta -= PR[prev][j]
                state["queries"] += 1
            rec(d + 1, const + delta)
            if found:
                return

    rec(1, 0)
    best = found[0] if found else None
    return best, state["tuples"], state["queries"]


def _chunk_worker(args):
    table, masks, n, lo, hi, pruning = args
    if n == 4:
        return _search_n4_chunk(table, masks, lo, hi, pruning)
    return _search_generic_chunk(table, masks, n, lo, hi, pruning)


def _run_search(M: Matroid, n: int, cfg: SearchConfig):
    masks = _space_masks(M, cfg)
    F = len(masks)
    width = max(1, cfg.parallel_width)
    if width == 1 or F < 2 * width:
        chunks = [(0, F)]
    else:
        bounds = np.linspace(0, F, width + 1).astype(int)
        chunks = [(int(bounds[i]), int(bounds[i + 1])) for i in range(width)]
    results = []
    if len(chunks) == 1:
        results.append(_chunk_worker((M.table, masks, n, 0, F, cfg.symmetry_pruning)))
    else:
        with ProcessPoolExecutor(max_workers=width) as pool:
            jobs = [(M.table, masks, n, lo, hi, cfg.symmetry_pruning) for lo, hi in chunks]
            results = list(pool.map(_chunk_worker, jobs))
    tuples = sum(r[1] for r in results)
    queries = max(r[2] for r in results) if len(results) > 1 else results[0][2]
    hits = [r[0] for r in results if r[0] is not None]
    best = min(hits) if hits else None
    if best is None:
        return None, tuples, queries
    fam = Family(n, tuple(int(masks[j]) for j in best))
    return fam, tuples, queries


def search_bad_family(M: Matroid, n: int, cfg: SearchConfig | None = None
                      ) -> BadFamilyCertificate | None:
    """Exhaustive search for a violating family; None when the space is clean.

    In lex_first mode the returned family is the lexicographically least
    violating tuple over the configured space (pruning on or off); "any"
    mode promises only some violation.
    """
    cfg = cfg or SearchConfig()
    fam, _, _ = _run_search(M, n, cfg)
    if fam is None:
        return None
    value = evaluate(M, fam)
    assert value.lhs > value.rhs
    return BadFamilyCertificate(M.label, content_fingerprint(M), fam,
                                value.lhs, value.rhs)


def membership(M: Matroid, n: int, cfg: SearchConfig | None = None) -> Verdict:
    """Decide membership in Kinser class n over the configured space."""
    cfg = cfg or SearchConfig()
    fam, tuples, queries = _run_search(M, n, cfg)
    if fam is None:
        return Verdict(True, n, tuples, queries)
    value = evaluate(M, fam)
    cert = BadFamilyCertificate(M.label, content_fingerprint(M), fam,
                                value.lhs, value.rhs)
    return Verdict(False, n, tuples, queries, cert)


def dual_membership(M: Matroid, n: int, cfg: SearchConfig | None = None) -> Verdict:
    """Membership of the dual matroid (class K_n applied to M*)."""
    return membership(dual(M), n, cfg)
