"""Inequality evaluation, reductions, canonical families, exhaustive search."""

import itertools

import numpy as np
import pytest

import kinser as K
from kinser.engine import _search_generic_chunk, _search_n4_chunk

from oracles import ingleton_value, kinser_value


def random_linear_matroid(rng, rows=4, cols=8):
    entries = tuple(int(v) for v in rng.integers(0, 2, size=rows * cols))
    return K.from_matrix(K.MatrixGFp(2, rows, cols, entries))


class TestEvaluate:
    @pytest.mark.parametrize("n", [4, 5, 6, 7, 8])
    def test_term_count_is_2n_minus_3(self, n, fano):
        fam = K.Family(n, tuple([0b11, 0, 0b101] + [0b1] * (n - 3)))
        value = K.evaluate(fano, fam)
        for side in ("lhs", "rhs"):
            assert sum(1 for t in value.terms if t.side == side) == 2 * n - 3

    def test_ingleton_at_n4(self):
        rng = np.random.default_rng(42)
        checked = 0
        for _ in range(20):
            M = random_linear_matroid(rng)
            for _ in range(500):
                sets = tuple(int(x) for x in rng.integers(0, 1 << 8, size=4))
                value = K.evaluate(M, K.Family(4, sets))
                assert (value.lhs, value.rhs) == ingleton_value(M, *sets)
                checked += 1
        assert checked == 10_000

    def test_formula_for_larger_n(self, fano):
        rng = np.random.default_rng(1)
        for n in (5, 6, 7):
            for _ in range(300):
                sets = tuple(int(x) for x in rng.integers(0, 1 << 7, size=n))
                value = K.evaluate(fano, K.Family(n, sets))
                assert (value.lhs, value.rhs) == kinser_value(fano, sets)

    def test_canonical_margin_vamos(self, vamos):
        value = K.evaluate(vamos, K.canonical_family(vamos, "kinser"))
        assert (value.lhs, value.rhs) == (16, 15)
        assert not value.satisfied and value.margin == 1

    def test_all_empty_family(self, fano):
        value = K.evaluate(fano, K.Family(4, (0, 0, 0, 0)))
        assert (value.lhs, value.rhs) == (0, 0) and value.satisfied

    def test_spike_relaxation_margin(self, z4):
        Z = z4.parts("a1", "a2", "b3", "b4")
        relaxed = K.relax(z4, Z)
        fam = K.canonical_family(relaxed, "spike", Z)
        value = K.evaluate(relaxed, fam)
        assert (value.lhs, value.rhs) == (16, 15)

    def test_representable_satisfy_everything(self, fano):
        rng = np.random.default_rng(9)
        for n in (4, 5, 6):
            for _ in range(300):
                sets = tuple(int(x) for x in rng.integers(0, 1 << 7, size=n))
                assert K.evaluate(fano, K.Family(n, sets)).satisfied

    def test_n_below_four_rejected(self):
        with pytest.raises(K.MatroidError):
            K.Family(3, (0, 0, 0))


class TestReduceFamily:
    def test_flats_are_fixed(self, vamos):
        flats = vamos.enumerate("flats")
        fam = K.Family(4, tuple(flats[3:7]))
        assert K.reduce_family(vamos, fam, "closure") == fam

    def test_vamos_singletons_already_closed(self, vamos):
        fam = K.Family(4, (1, 2, 4, 8))
        assert K.reduce_family(vamos, fam, "closure") == fam

    @pytest.mark.parametrize("mode", ["closure", "basis"])
    def test_reduction_preserves_every_term_rank(self, mode, fano):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            sets = tuple(int(x) for x in rng.integers(0, 1 << 7, size=4))
            fam = K.Family(4, sets)
            reduced = K.reduce_family(fano, fam, mode)
            a, b = K.evaluate(fano, fam), K.evaluate(fano, reduced)
            assert (a.lhs, a.rhs) == (b.lhs, b.rhs)
            for ta, tb in zip(a.terms, b.terms):
                assert ta.rank == tb.rank

    def test_basis_mode_yields_lex_least_bases(self, fano):
        reduced = K.reduce_family(fano, K.Family(4, (0b1011, 0, 0b1111111, 0b11)), "basis")
        assert reduced.sets[0] == 0b0011   # {0,1} spans the line {0,1,3}
        assert reduced.sets[1] == 0
        assert reduced.sets[2] == 0b0111   # first three columns form a basis
        assert reduced.sets[3] == 0b0011


class TestExtendFamily:
    def test_margin_preserved_on_vamos(self, vamos):
        fam = K.canonical_family(vamos, "kinser")
        for n in (4, 5, 6):
            value = K.evaluate(vamos, fam)
            assert value.margin == 1
            fam = K.extend_family(fam)

    def test_all_empty(self):
        fam = K.extend_family(K.Family(4, (0, 0, 0, 0)))
        assert fam == K.Family(5, (0, 0, 0, 0, 0))

    def test_random_margins_equal(self, fano):
        rng = np.random.default_rng(13)
        for _ in range(400):
            sets = tuple(int(x) for x in rng.integers(0, 1 << 7, size=4))
            fam = K.Family(4, sets)
            a = K.evaluate(fano, fam)
            b = K.evaluate(fano, K.extend_family(fam))
            assert a.margin == b.margin


class TestCanonicalFamilies:
    def test_kinser_parts(self, kin5_relaxed):
        fam = K.canonical_family(kin5_relaxed, "kinser")
        assert fam.n == 5
        assert fam.sets == tuple(kin5_relaxed.part(f"V{i}") for i in range(1, 6))
        value = K.evaluate(kin5_relaxed, fam)
        assert (value.lhs, value.rhs) == (29, 28)

    def test_spike_partition(self, z4):
        Z = z4.parts("a1", "a2", "b3", "b4")
        fam = K.canonical_family(z4, "spike", Z)
        assert fam.sets == (z4.parts("a1", "a2"), z4.parts("b3", "b4"),
                            z4.parts("b1", "b2"), z4.parts("a3", "a4"))
        assert sum(fam.sets) == z4.full_mask  # the four parts partition E

    def test_spike_rejects_one_sided_z(self, z4):
        with pytest.raises(K.MatroidError):
            K.canonical_family(z4, "spike", z4.part("A"))

    def test_spike_rejects_odd_z(self, z4):
        odd = z4.parts("b1", "a2", "a3", "a4")
        with pytest.raises(K.MatroidError):
            K.canonical_family(z4, "spike", odd)

    def test_layout_required(self, u24):
        with pytest.raises(K.MatroidError):
            K.canonical_family(u24, "kinser")


class TestCorankReport:
    def test_fields_match_direct_formula(self, vamos):
        fam = K.canonical_family(vamos, "kinser")
        report = K.corank_term_report(vamos, fam)
        assert len(report) == 2 * (2 * 4 - 3)
        for t in report:
            assert t.size == vamos.size(t.mask)
            assert t.rank_complement == vamos.rank(vamos.full_mask ^ t.mask)
            assert t.corank == t.size + t.rank_complement - 4
            # corank really is the dual rank
            assert t.corank == K.dual(vamos).rank(t.mask)


def search_masks(M, space):
    if space == "flats":
        return M.enumerate("flats")
    return list(range(1 << M.m))


def brute_force_lex_first(M, n, masks):
    """Reference search: full lexicographic scan by the displayed formula."""
    for tup in itertools.product(range(len(masks)), repeat=n):
        sets = tuple(masks[j] for j in tup)
        lhs, rhs = kinser_value(M, sets)
        if lhs > rhs:
            return tup, (lhs, rhs)
    return None, None


class TestSearch:
    def test_vamos_certificate(self, vamos):
        cert = K.search_bad_family(vamos, 4)
        assert cert is not None
        assert cert.lhs - cert.rhs == 1
        value = K.evaluate(vamos, cert.family)
        assert (value.lhs, value.rhs) == (cert.lhs, cert.rhs)

    def test_vamos_lex_first_is_stable(self, vamos):
        a = K.search_bad_family(vamos, 4)
        b = K.search_bad_family(vamos, 4)
        c = K.search_bad_family(vamos, 4, K.SearchConfig(symmetry_pruning=False))
        d = K.search_bad_family(vamos, 4, K.SearchConfig(parallel_width=2))
        assert a == b == c == d

    def test_vamos_lex_first_matches_brute_force(self, vamos):
        flats = vamos.enumerate("flats")
        tup, _ = brute_force_lex_first(vamos, 4, flats)
        cert = K.search_bad_family(vamos, 4)
        assert cert.family.sets == tuple(flats[j] for j in tup)

    def test_fano_in_class(self, fano, nonfano):
        for M in (fano, nonfano):
            for n in (4, 5):
                assert K.membership(M, n).in_class

    def test_spike_dichotomy(self, z4):
        assert K.membership(z4, 4).in_class
        Z = z4.parts("a1", "b2", "b3", "a4")
        verdict = K.membership(K.relax(z4, Z), 4)
        assert not verdict.in_class
        assert verdict.certificate.lhs > verdict.certificate.rhs

    def test_all_subsets_refused_above_cap(self, fano_sum):
        with pytest.raises(K.SizeCapError):
            K.membership(fano_sum, 4, K.SearchConfig(space="all_subsets"))

    @pytest.mark.parametrize("maker,n", [
        (lambda: K.uniform(1, 3), 4),
        (lambda: K.uniform(1, 3), 5),
        (lambda: K.uniform(2, 4), 4),
        (lambda: K.uniform(2, 4), 5),
        (lambda: K.uniform(3, 6), 4),
        (lambda: K.dowling(K.cyclic_group(1), 3), 4),
    ])
    def test_flats_vs_all_subsets_agree(self, maker, n):
        M = maker()
        flats_verdict = K.membership(M, n, K.SearchConfig(space="flats"))
        all_verdict = K.membership(M, n, K.SearchConfig(space="all_subsets"))
        assert flats_verdict.in_class == all_verdict.in_class

    def test_pruning_soundness_n4(self, vamos, z4):
        relaxed = K.relax(z4, z4.parts("a1", "a2", "b3", "b4"))
        for M in (vamos, relaxed):
            on = K.search_bad_family(M, 4, K.SearchConfig(symmetry_pruning=True))
            off = K.search_bad_family(M, 4, K.SearchConfig(symmetry_pruning=False))
            assert on == off

    def test_pruning_soundness_n5(self, fano):
        on = K.membership(fano, 5, K.SearchConfig(symmetry_pruning=True))
        off = K.membership(fano, 5, K.SearchConfig(symmetry_pruning=False))
        assert on.in_class and off.in_class

    def test_generic_path_matches_brute_force(self, kin5_relaxed):
        # white-box: restrict the space to the part masks so n=5 is tractable
        M = kin5_relaxed
        masks = sorted([0] + [M.part(f"V{i}") for i in range(1, 6)])
        arr = np.array(masks, dtype=np.int64)
        tup, value = brute_force_lex_first(M, 5, masks)
        assert tup is not None
        got, _, _ = _search_generic_chunk(M.table, arr, 5, 0, len(masks), False)
        assert got == tup
        got_pruned, _, _ = _search_generic_chunk(M.table, arr, 5, 0, len(masks), True)
        assert got_pruned == tup  # least violating tuple is reversal-canonical

    def test_n4_chunk_matches_brute_force(self, vamos):
        masks = vamos.enumerate("flats")[:25]
        arr = np.array(masks, dtype=np.int64)
        tup, _ = brute_force_lex_first(vamos, 4, masks)
        got, _, _ = _search_n4_chunk(vamos.table, arr, 0, len(arr), False)
        assert got == tup

    def test_any_mode_returns_a_violation(self, vamos):
        cert = K.search_bad_family(vamos, 4, K.SearchConfig(determinism="any"))
        assert cert is not None and cert.lhs > cert.rhs

    def test_verdict_statistics_populated(self, fano):
        verdict = K.membership(fano, 4)
        assert verdict.in_class
        flats = len(fano.enumerate("flats"))
        assert verdict.tuples_examined > 0
        assert verdict.rank_queries >= flats ** 2


class TestClassProperties:
    def test_hierarchy_extension_of_found_family(self, vamos):
        cert = K.search_bad_family(vamos, 4)
        extended = K.extend_family(cert.family)
        value = K.evaluate(vamos, extended)
        assert value.margin == cert.lhs - cert.rhs

    @pytest.mark.parametrize("maker", [
        lambda: K.fano_pair()[0],
        lambda: K.binary_spike(4),
        lambda: K.uniform(3, 6),
    ])
    def test_minor_closure_at_n4(self, maker):
        M = maker()
        assert K.membership(M, 4).in_class
        for e in range(M.m):
            assert K.membership(K.delete(M, e)[0], 4).in_class
            assert K.membership(K.contract(M, e)[0], 4).in_class

    def test_direct_sum_closure_at_n4(self, fano):
        a, _, _ = K.direct_sum(K.uniform(2, 4), K.uniform(1, 2))
        b, _, _ = K.direct_sum(fano, K.uniform(1, 1))
        for M in (a, b):
            assert K.membership(M, 4).in_class

    def test_duality_verdict_equality_n4(self, vamos, z4, fano):
        cases = [vamos, z4, fano]
        cases += [K.relax(z4, Z) for Z in K.spike_transversals(4, "even")]
        for M in cases:
            primal = K.membership(M, 4).in_class
            dual_side = K.dual_membership(M, 4).in_class
            assert primal == dual_side, M.label
