"""Rank-table matroids on bitmask subsets.

A matroid on ground set {0, ..., m-1} is stored as a full table of 2**m
ranks, indexed by subset mask (element i <-> bit i).  Everything else --
closure, flats, circuits, axiom validation -- is derived from table
lookups, so the cost model is "one array access per rank query".
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

MAX_GROUND = 24
EAGER_VALIDATION_LIMIT = 16  # above this, constructor validation is sampled

ENUM_KINDS = ("flats", "circuits", "bases", "hyperplanes", "circuit_hyperplanes")


class MatroidError(ValueError):
    """Base class for all matroid construction/usage errors."""


class InvalidSubsetError(MatroidError):
    """Subset mask has bits at positions >= ground size."""


class NotAMatroidError(MatroidError):
    """Input data does not define a matroid (carries a witness)."""

    def __init__(self, message, axiom=None, witness=None):
        super().__init__(message)
        self.axiom = axiom
        self.witness = witness


class SizeCapError(MatroidError):
    """Request exceeds the size cap of an exhaustive operation."""


_POPCOUNT_CACHE: dict[int, np.ndarray] = {}


def popcount_array(m: int) -> np.ndarray:
    """|X| for every mask X on m elements, as uint8 (cached per m)."""
    pc = _POPCOUNT_CACHE.get(m)
    if pc is None:
        idx = np.arange(1 << m, dtype=np.uint32)
        pc = np.bitwise_count(idx).astype(np.uint8)
        pc.flags.writeable = False
        _POPCOUNT_CACHE[m] = pc
    return pc


def mask_of(elements) -> int:
    """Mask with the given element indices set."""
    x = 0
    for e in elements:
        x |= 1 << e
    return x


def elements_of(mask: int) -> list[int]:
    """Ascending element indices of a mask."""
    out = []
    e = 0
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return out


@dataclass(frozen=True)
class SetClass:
    """Classification flags of one subset, all derived from rank lookups."""

    independent: bool
    dependent: bool
    spanning: bool
    basis: bool
    flat: bool
    circuit: bool
    hyperplane: bool
    circuit_hyperplane: bool
    loop: bool
    coloop: bool


@dataclass(frozen=True)
class AxiomResult:
    """Outcome of an axiom scan: ok, or the violated axiom plus witness."""

    ok: bool
    axiom: str | None = None
    witness: tuple | None = None
    message: str = ""

    def __bool__(self):
        return self.ok


class Matroid:
    """Immutable matroid with a materialized rank table.

    Parameters
    ----------
    m:      ground size, 1 <= m <= 24
    table:  sequence of 2**m ranks in mask order
    label:  provenance string
    layout: optional name -> mask dict for the construction's named parts
    validate: run the rank-axiom check (full for m <= 16, sampled above)
    """

    __slots__ = ("m", "table", "label", "layout", "_pc")

    def __init__(self, m: int, table, label: str = "", layout: dict[str, int] | None = None,
                 validate: bool = True):
        if not 1 <= m <= MAX_GROUND:
            raise MatroidError(f"ground size must be in [1, {MAX_GROUND}], got {m}")
        tab = np.asarray(table, dtype=np.uint8)
        if tab.shape != (1 << m,):
            raise MatroidError(f"rank table must have 2^{m} entries, got {tab.shape}")
        self.m = m
        self.table = tab
        self.table.flags.writeable = False
        self.label = label
        self.layout = dict(layout) if layout else None
        self._pc = popcount_array(m)
        if validate:
            res = validate_rank_table(m, tab, exhaustive=(m <= EAGER_VALIDATION_LIMIT))
            if not res:
                raise NotAMatroidError(f"{label or 'table'}: {res.message}",
                                       axiom=res.axiom, witness=res.witness)

    # -- basic queries ----------------------------------------------------

    @property
    def full_mask(self) -> int:
        return (1 << self.m) - 1

    @property
    def rank_total(self) -> int:
        return int(self.table[-1])

    def check_mask(self, x: int) -> int:
        if x < 0 or x >> self.m:
            raise InvalidSubsetError(f"mask {x:#x} has bits outside ground size {self.m}")
        return x

    def rank(self, x: int) -> int:
        return int(self.table[self.check_mask(x)])

    def size(self, x: int) -> int:
        return int(self._pc[self.check_mask(x)])

    def closure(self, x: int) -> int:
        """X together with every e outside X that keeps the rank unchanged."""
        x = self.check_mask(x)
        rx = self.table[x]
        out = x
        for e in range(self.m):
            b = 1 << e
            if not x & b and self.table[x | b] == rx:
                out |= b
        return out

    def classify(self, x: int) -> SetClass:
        x = self.check_mask(x)
        tab = self.table
        rx = int(tab[x])
        n = int(self._pc[x])
        rm = self.rank_total
        independent = rx == n
        spanning = rx == rm
        circuit = not independent and all(
            tab[x ^ (1 << e)] == n - 1 for e in range(self.m) if x & (1 << e))
        flat = all(tab[x | (1 << e)] > rx for e in range(self.m) if not x & (1 << e))
        hyperplane = flat and rx == rm - 1
        return SetClass(
            independent=independent,
            dependent=not independent,
            spanning=spanning,
            basis=independent and spanning,
            flat=flat,
            circuit=circuit,
            hyperplane=hyperplane,
            circuit_hyperplane=circuit and hyperplane,
            loop=n == 1 and rx == 0,
            coloop=n == 1 and bool(tab[self.full_mask ^ x] == rm - 1),
        )

    # -- enumeration ------------------------------------------------------

    def _flat_mask_vector(self) -> np.ndarray:
        """Boolean vector over all masks: True where the mask is a flat."""
        n = 1 << self.m
        idx = np.arange(n, dtype=np.int64)
        is_flat = np.ones(n, dtype=bool)
        tab = self.table
        for e in range(self.m):
            b = 1 << e
            absent = (idx & b) == 0
            sub = idx[absent]
            is_flat[sub] &= tab[sub | b] > tab[sub]
        return is_flat

    def _circuit_mask_vector(self) -> np.ndarray:
        n = 1 << self.m
        idx = np.arange(n, dtype=np.int64)
        dep = self.table < self._pc
        is_circ = dep.copy()
        for e in range(self.m):
            b = 1 << e
            present = (idx & b) != 0
            sub = idx[present]
            is_circ[sub] &= ~dep[sub ^ b]
        is_circ[0] = False
        return is_circ

    def enumerate(self, kind: str) -> list[int]:
        """All masks of the requested kind, ascending by mask value."""
        if kind not in ENUM_KINDS:
            raise MatroidError(f"unknown enumeration kind {kind!r}")
        if kind == "flats":
            sel = self._flat_mask_vector()
        elif kind == "circuits":
            sel = self._circuit_mask_vector()
        elif kind == "bases":
            sel = (self.table == self.rank_total) & (self._pc == self.rank_total)
        elif kind == "hyperplanes":
            sel = self._flat_mask_vector() & (self.table == self.rank_total - 1)
        else:  # circuit_hyperplanes
            sel = (self._circuit_mask_vector()
                   & self._flat_mask_vector()
                   & (self.table == self.rank_total - 1))
        return [int(x) for x in np.nonzero(sel)[0]]

    # -- misc ---------------------------------------------------------------

    def table_equal(self, other: "Matroid") -> bool:
        return self.m == other.m and np.array_equal(self.table, other.table)

    def part(self, name: str) -> int:
        """Mask of a named layout part."""
        if not self.layout or name not in self.layout:
            raise MatroidError(f"{self.label or 'matroid'} has no layout part {name!r}")
        return self.layout[name]

    def parts(self, *names: str) -> int:
        """Union mask of several named layout parts."""
        x = 0
        for name in names:
            x |= self.part(name)
        return x

    def __repr__(self):
        return f"Matroid(m={self.m}, r={self.rank_total}, label={self.label!r})"


def content_fingerprint(M: Matroid) -> str:
    """Stable digest of the rank table; binds certificates to matroid content."""
    h = hashlib.sha256()
    h.update(b"matroid-v1")
    h.update(M.m.to_bytes(1, "little"))
    h.update(M.table.tobytes())
    return h.hexdigest()[:16]


# -- axiom validation -------------------------------------------------------


def validate_rank_table(m: int, table: np.ndarray, exhaustive: bool = True,
                        samples: int = 200_000, seed: int = 0) -> AxiomResult:
    """Check R1-R3 (plus r(empty)=0) on a rank table.

    Monotonicity and submodularity are checked through their single-element
    local forms, which are equivalent to the quantified axioms; the reported
    witness is always an instance of the literal axiom.  When not exhaustive,
    a seeded sample of local checks is used instead of the full scan.
    """
    n = 1 << m
    pc = popcount_array(m)
    if table[0] != 0:
        return AxiomResult(False, "R1", (0,), "rank of empty set is nonzero")
    bad = np.nonzero(table > pc)[0]
    if bad.size:
        x = int(bad[0])
        return AxiomResult(False, "R1", (x,), f"r(X)={int(table[x])} > |X|={int(pc[x])} for X={x:#x}")
    if exhaustive:
        idx = np.arange(n, dtype=np.int64)
        for e in range(m):
            b = 1 << e
            sub = idx[(idx & b) == 0]
            bad = sub[table[sub | b] < table[sub]]
            if bad.size:
                x = int(bad[0])
                return AxiomResult(False, "R2", (x, x | b),
                                   f"r decreases from X={x:#x} to X+{{{e}}}")
        for e in range(m):
            for f in range(e + 1, m):
                be, bf = 1 << e, 1 << f
                sub = idx[(idx & (be | bf)) == 0]
                lhs = table[sub | be].astype(np.int16) + table[sub | bf]
                rhs = table[sub | be | bf].astype(np.int16) + table[sub]
                bad = sub[lhs < rhs]
                if bad.size:
                    x = int(bad[0])
                    return AxiomResult(False, "R3", (x | be, x | bf),
                                       f"submodularity fails at X={(x | be):#x}, Y={(x | bf):#x}")
    else:
        rng = np.random.default_rng(seed)
        xs = rng.integers(0, n, size=samples, dtype=np.int64)
        es = rng.integers(0, m, size=samples)
        fs = rng.integers(0, m, size=samples)
        be, bf = (1 << es).astype(np.int64), (1 << fs).astype(np.int64)
        base = xs & ~(be | bf)
        mono = table[base | be] >= table[base]
        if not mono.all():
            i = int(np.nonzero(~mono)[0][0])
            return AxiomResult(False, "R2", (int(base[i]), int(base[i] | be[i])),
                               "sampled monotonicity violation")
        lhs = table[base | be].astype(np.int16) + table[base | bf]
        rhs = table[base | be | bf].astype(np.int16) + table[base]
        ok = lhs >= rhs
        if not ok.all():
            i = int(np.nonzero(~ok)[0][0])
            return AxiomResult(False, "R3", (int(base[i] | be[i]), int(base[i] | bf[i])),
                               "sampled submodularity violation")
    return AxiomResult(True)


def validate_closure_axioms(matroid: Matroid) -> AxiomResult:
    """Check CL1-CL4 for every subset (exhaustive)."""
    m = matroid.m
    cl = np.empty(1 << m, dtype=np.int64)
    for x in range(1 << m):
        c = matroid.closure(x)
        if c & x != x:
            return AxiomResult(False, "CL1", (x,), f"X not contained in cl(X) for X={x:#x}")
        cl[x] = c
    idx = np.arange(1 << m, dtype=np.int64)
    for e in range(m):
        b = 1 << e
        sub = idx[(idx & b) == 0]
        bad = sub[(cl[sub] & ~cl[sub | b]) != 0]
        if bad.size:
            x = int(bad[0])
            return AxiomResult(False, "CL2", (x, x | b),
                               f"cl not monotone from X={x:#x} to X+{{{e}}}")
    bad = idx[cl[cl] != cl]
    if bad.size:
        x = int(bad[0])
        return AxiomResult(False, "CL3", (x,), f"cl(cl(X)) != cl(X) for X={x:#x}")
    for x_bit in range(m):
        bx = 1 << x_bit
        gained = cl[idx | bx] & ~cl[idx] & ~(idx | bx)
        for y_bit in range(m):
            by = 1 << y_bit
            has_y = (gained & by) != 0
            if not has_y.any():
                continue
            sub = idx[has_y]
            bad = sub[(cl[sub | by] & bx) == 0]
            if bad.size:
                x = int(bad[0])
                return AxiomResult(False, "CL4", (x, x_bit, y_bit),
                                   f"exchange fails for X={x:#x}, x={x_bit}, y={y_bit}")
    return AxiomResult(True)


def validate_circuit_axioms(m: int, circuits: list[int]) -> AxiomResult:
    """Check C1-C3 on a circuit list, literally, as given.

    C3 is checked for e in the intersection; for e outside it the axiom
    holds trivially because one of the two circuits survives untouched.
    """
    sets = [int(c) for c in circuits]
    for c in sets:
        if c >> m:
            return AxiomResult(False, "C1", (c,), f"circuit {c:#x} outside ground size {m}")
    if 0 in sets:
        return AxiomResult(False, "C1", (0,), "empty set listed as a circuit")
    if len(set(sets)) != len(sets):
        dup = next(c for c in sets if sets.count(c) > 1)
        return AxiomResult(False, "C2", (dup, dup), "duplicate circuit")
    for i, c in enumerate(sets):
        for d in sets[i + 1:]:
            if c & d == c or c & d == d:
                return AxiomResult(False, "C2", (c, d),
                                   f"circuits {c:#x} and {d:#x} are nested")
    for i, c in enumerate(sets):
        for d in sets[i + 1:]:
            inter = c & d
            union = c | d
            e = inter
            while e:
                b = e & (-e)
                rest = union ^ b
                if not any(g & rest == g for g in sets):
                    return AxiomResult(False, "C3", (c, d, b.bit_length() - 1),
                                       "elimination produced a circuit-free set")
                e ^= b
    return AxiomResult(True)


def validate_independence_axioms(m: int, table: np.ndarray) -> AxiomResult:
    """Check I1-I3 on the independence system derived from a rank table."""
    n = 1 << m
    pc = popcount_array(m)
    indep = np.asarray(table) == pc
    if not indep[0]:
        return AxiomResult(False, "I1", (0,), "empty set is dependent")
    idx = np.arange(n, dtype=np.int64)
    for e in range(m):
        b = 1 << e
        sub = idx[((idx & b) != 0) & indep[idx]]
        bad = sub[~indep[sub ^ b]]
        if bad.size:
            x = int(bad[0])
            return AxiomResult(False, "I2", (x, x ^ b), f"subset of independent {x:#x} dependent")
    # I3 with |J| = |I| + 1 (equivalent to the general form by induction)
    ind_masks = idx[indep[idx]]
    by_size = {k: ind_masks[pc[ind_masks] == k] for k in range(m + 1)}
    for k in range(m):
        smaller, larger = by_size[k], by_size[k + 1]
        if smaller.size == 0 or larger.size == 0:
            continue
        for i in smaller:
            i = int(i)
            for j in larger:
                extra = int(j) & ~i
                augmented = False
                while extra:
                    b = extra & (-extra)
                    if indep[i | b]:
                        augmented = True
                        break
                    extra ^= b
                if not augmented:
                    return AxiomResult(False, "I3", (i, int(j)),
                                       f"no augmentation of {i:#x} from {int(j):#x}")
    return AxiomResult(True)


def validate_axioms(matroid_or_input, which: str) -> AxiomResult:
    """Dispatch an axiom scan by family name.

    `which` is one of rank | closure | circuits | independence.  The input
    is a Matroid for rank/closure/independence, or an (m, circuit list)
    pair for circuits.  Exhaustive scans refuse beyond m = 16.
    """
    if which == "circuits":
        m, circuits = matroid_or_input
        return validate_circuit_axioms(m, circuits)
    M = matroid_or_input
    if M.m > EAGER_VALIDATION_LIMIT:
        raise SizeCapError(
            f"exhaustive {which} axiom scan refused for m={M.m} > {EAGER_VALIDATION_LIMIT}")
    if which == "rank":
        return validate_rank_table(M.m, M.table, exhaustive=True)
    if which == "closure":
        return validate_closure_axioms(M)
    if which == "independence":
        return validate_independence_axioms(M.m, M.table)
    raise MatroidError(f"unknown axiom family {which!r}")


# -- construction from circuits ----------------------------------------------


def matroid_from_circuits(m: int, r: int, nonspanning_circuits: list[int],
                          label: str = "", layout: dict[str, int] | None = None) -> Matroid:
    """Matroid from its non-spanning circuits plus a declared rank.

    X is independent iff |X| <= r and no listed circuit is contained in X;
    the rank of X is the size of its largest independent subset.  The
    resulting table is validated; a failure raises NotAMatroidError with
    the witnessing axiom instance.
    """
    if m > MAX_GROUND:
        raise SizeCapError(f"ground size {m} exceeds cap {MAX_GROUND}")
    circuits = [int(c) for c in nonspanning_circuits]
    for c in circuits:
        if c >> m:
            raise InvalidSubsetError(f"circuit {c:#x} outside ground size {m}")
        if c.bit_count() > r + 1:
            raise NotAMatroidError(f"circuit {c:#x} has more than r+1 elements", "C1", (c,))
    for i, c in enumerate(circuits):
        for d in circuits[i + 1:]:
            if c & d == c or c & d == d:
                raise NotAMatroidError(
                    f"circuit list is not an antichain: {c:#x} vs {d:#x}", "C2", (c, d))

    n = 1 << m
    pc = popcount_array(m)
    indep = pc <= r
    full = n - 1
    for c in circuits:
        rest = full & ~c
        sub = rest
        while True:
            indep[c | sub] = False
            if sub == 0:
                break
            sub = (sub - 1) & rest

    # rank DP by popcount level: r(X) = |X| if independent, else max over e of r(X - e)
    table = np.zeros(n, dtype=np.uint8)
    order = np.argsort(pc, kind="stable")
    level_starts = np.searchsorted(pc[order], np.arange(m + 2))
    for k in range(1, m + 1):
        masks = order[level_starts[k]:level_starts[k + 1]]
        if masks.size == 0:
            continue
        best = np.zeros(masks.size, dtype=np.uint8)
        for e in range(m):
            b = 1 << e
            has = (masks & b) != 0
            best[has] = np.maximum(best[has], table[masks[has] ^ b])
        table[masks] = np.where(indep[masks], k, best)

    if int(table[-1]) != r:
        raise NotAMatroidError(
            f"declared rank {r} but circuits force rank {int(table[-1])}", "R1", (full,))
    res = validate_rank_table(m, table, exhaustive=(m <= EAGER_VALIDATION_LIMIT))
    if not res:
        raise NotAMatroidError(f"circuit input yields invalid rank table: {res.message}",
                               axiom=res.axiom, witness=res.witness)
    return Matroid(m, table, label=label, layout=layout, validate=False)
