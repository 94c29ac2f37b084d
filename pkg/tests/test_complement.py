import random

import pytest

from oracles import factorization_exists, naive_membership_up, random_buchi, random_up_word
from s1sup.buchi import (
    BuchiNfa,
    intersection,
    is_satisfiable,
    membership_up,
    trans,
)
from s1sup.complement import (
    BudgetExceeded,
    Color,
    ComplementStats,
    DimensionMismatch,
    color_add,
    color_nfa,
    compatible,
    complement,
    complement_with_stats,
    gamma_letter,
    gamma_word,
    kind_nfa,
    kind_nfa_semigroup,
    realizable_colors,
    rf_nfa,
)
from s1sup.semigroup import UpWord, col, new_semigroup

LP = new_semigroup(2, [[0, 0], [1, 1]])


def loop_one(accepting=True):
    return BuchiNfa(1, 1, [(0, 0, 0)], [0], [0] if accepting else [])


def inf_ones():
    return BuchiNfa(
        2, 2, [(0, 0, 0), (0, 1, 1), (1, 0, 0), (1, 1, 1)], [0], [1]
    )


def universal(alphabet=2):
    return BuchiNfa(1, alphabet, [(0, a, 0) for a in range(alphabet)], [0], [0])


def random_color(rng, n):
    reach = tuple(rng.randrange(1 << n) for _ in range(n))
    reach_acc = tuple(r & rng.randrange(1 << n) for r in reach)
    return Color(reach, reach_acc)


# -- colors -------------------------------------------------------------------


def test_gamma_letter_accepting_loop():
    c = gamma_letter(loop_one(), 0)
    assert c == Color((1,), (1,))


def test_gamma_letter_nonaccepting_source():
    c = gamma_letter(loop_one(accepting=False), 0)
    assert c == Color((1,), (0,))


def test_gamma_word_folds_letters():
    A = inf_ones()
    for w in ([0, 0], [1, 1], [0, 1]):
        assert gamma_word(A, w) == color_add(
            gamma_letter(A, w[0]), gamma_letter(A, w[1])
        )


def test_gamma_word_rejects_empty():
    with pytest.raises(ValueError):
        gamma_word(inf_ones(), [])


def test_gamma_homomorphism_random():
    rng = random.Random(440)
    for _ in range(300):
        A = random_buchi(rng, 4, 2)
        u = [rng.randrange(2) for _ in range(rng.randint(1, 4))]
        v = [rng.randrange(2) for _ in range(rng.randint(1, 4))]
        assert gamma_word(A, u + v) == color_add(gamma_word(A, u), gamma_word(A, v))


def test_color_add_empty_absorbs():
    empty = Color((0, 0), (0, 0))
    other = Color((3, 1), (1, 0))
    assert color_add(empty, other) == empty
    assert color_add(other, empty) == Color((0, 0), (0, 0))


def test_color_add_identity_reach():
    ident = Color((1, 2), (0, 0))
    assert color_add(ident, ident).reach == (1, 2)


def test_color_add_associative_random():
    rng = random.Random(441)
    for _ in range(300):
        n = rng.randint(1, 4)
        a, b, c = (random_color(rng, n) for _ in range(3))
        assert color_add(color_add(a, b), c) == color_add(a, color_add(b, c))


def test_color_add_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        color_add(Color((0,), (0,)), Color((0, 0), (0, 0)))


# -- realizable color closure ---------------------------------------------------


def test_realizable_colors_idempotent_loop():
    assert len(realizable_colors(loop_one())) == 1


def test_realizable_colors_no_transitions():
    A = BuchiNfa(1, 1, [], [0], [0])
    cs = realizable_colors(A)
    assert cs == [Color((0,), (0,))]


def test_realizable_colors_small_automata_bounded():
    rng = random.Random(442)
    worst = 0
    for _ in range(200):
        A = random_buchi(rng, 3, 2)
        cs = realizable_colors(A)
        worst = max(worst, len(cs))
        assert len(set(cs)) == len(cs)
    assert worst <= 512


def test_realizable_colors_budget():
    A = inf_ones()
    with pytest.raises(BudgetExceeded):
        realizable_colors(A, max_colors=1)


# -- color tracking automaton ----------------------------------------------------


def test_color_nfa_tracks_col():
    rng = random.Random(443)
    for _ in range(40):
        A = random_buchi(rng, 3, 2)
        cs = realizable_colors(A)
        c = rng.choice(cs)
        C = color_nfa(A, c)
        (acc,) = C.accepting
        for _ in range(8):
            w = [rng.randrange(2) for _ in range(rng.randint(1, 4))]
            assert trans(C, 0, w, acc) == (gamma_word(A, w) == c)


def test_color_nfa_start_has_no_incoming():
    A = inf_ones()
    C = color_nfa(A, realizable_colors(A)[0])
    assert all(q != 0 for _, _, q in C.transitions)


# -- kind automata over a semigroup -----------------------------------------------


def test_kind_semigroup_accepts_block_factorization():
    rng = random.Random(444)
    for _ in range(100):
        g = new_semigroup(3, [[(a + b) % 3 for b in range(3)] for a in range(3)])
        w = [rng.randrange(3) for _ in range(rng.randint(1, 3))]
        v = [rng.randrange(3) for _ in range(rng.randint(1, 3))]
        K = kind_nfa_semigroup(g, (col(g, w), col(g, v)))
        assert membership_up(K, UpWord(tuple(w), tuple(v)))


def test_kind_semigroup_rejects_unreachable_color():
    # constant 0s only ever produce color 0 under left projection
    K = kind_nfa_semigroup(LP, (0, 1))
    assert not membership_up(K, UpWord((0,), (0,)))


def test_kind_semigroup_matches_factorization_oracle():
    rng = random.Random(445)
    for _ in range(60):
        g = LP if rng.random() < 0.5 else new_semigroup(
            2, [[(a + b) % 2 for b in range(2)] for a in range(2)]
        )
        c, d = rng.randrange(g.size), rng.randrange(g.size)
        K = kind_nfa_semigroup(g, (c, d))
        sigma = random_up_word(rng, g.size)
        want = factorization_exists(lambda ws: col(g, ws), c, d, sigma, 4)
        assert membership_up(K, sigma) == want


def test_kind_semigroup_shape():
    K = kind_nfa_semigroup(LP, (0, 0))
    assert K.state_count == 2 + 2 * LP.size
    with pytest.raises(ValueError):
        kind_nfa_semigroup(LP, (0, 5))


# -- Ramseyan factorization automaton ----------------------------------------------


def test_rf_nfa_accepts_everything():
    rng = random.Random(446)
    for size in (1, 2, 3):
        table = [[(a + b) % size for b in range(size)] for a in range(size)]
        for g in (new_semigroup(size, table), LP if size == 2 else None):
            if g is None:
                continue
            R = rf_nfa(g)
            assert R.state_count == g.size**2 * (2 + 2 * g.size)
            for _ in range(60):
                assert membership_up(R, random_up_word(rng, g.size))


def test_rf_nfa_idempotent_constant():
    R = rf_nfa(LP)
    for e in range(2):
        assert membership_up(R, UpWord((e,), (e,)))


# -- kind automata over an NFA ------------------------------------------------------


def test_kind_nfa_accepts_own_kind():
    rng = random.Random(447)
    for _ in range(150):
        A = random_buchi(rng, 3, 2)
        sigma = random_up_word(rng, 2)
        x, y = list(sigma.prefix), list(sigma.period)
        K = kind_nfa(A, (gamma_word(A, x), gamma_word(A, y)))
        assert membership_up(K, sigma)
        K2 = kind_nfa(A, (gamma_word(A, x), gamma_word(A, y + y)))
        assert membership_up(K2, sigma)


def test_kind_nfa_matches_factorization_oracle():
    rng = random.Random(448)
    agree_reject = 0
    for _ in range(80):
        A = random_buchi(rng, 2, 2)
        cs = realizable_colors(A)
        v, w = rng.choice(cs), rng.choice(cs)
        K = kind_nfa(A, (v, w))
        sigma = random_up_word(rng, 2)
        want = factorization_exists(lambda ws: gamma_word(A, ws), v, w, sigma, 4)
        assert membership_up(K, sigma) == want
        if not want:
            agree_reject += 1
    assert agree_reject > 10


def test_kind_soundness_on_up_probes():
    rng = random.Random(449)
    for _ in range(150):
        A = random_buchi(rng, 3, 2)
        cs = realizable_colors(A)
        v, w = rng.choice(cs), rng.choice(cs)
        if not compatible(A, (v, w)):
            continue
        sigma = random_up_word(rng, 2)
        if membership_up(kind_nfa(A, (v, w)), sigma):
            assert membership_up(A, sigma)


# -- compatibility -------------------------------------------------------------------


def test_compatible_universal_and_empty():
    U = universal()
    for v in realizable_colors(U):
        for w in realizable_colors(U):
            assert compatible(U, (v, w))
    E = BuchiNfa(2, 2, [(0, 0, 0), (0, 1, 1), (1, 0, 0), (1, 1, 1)], [0], [])
    for v in realizable_colors(E):
        for w in realizable_colors(E):
            assert not compatible(E, (v, w))


def test_compatible_inf_ones_zero_kind():
    A = inf_ones()
    z = gamma_word(A, [0])
    assert not compatible(A, (z, z))


def test_compatible_equals_product_emptiness():
    # the fast relational check must agree with the defining construction
    rng = random.Random(450)
    for _ in range(250):
        A = random_buchi(rng, 3, 2)
        cs = realizable_colors(A)
        v, w = rng.choice(cs), rng.choice(cs)
        via_product = is_satisfiable(intersection(kind_nfa(A, (v, w)), A))
        assert compatible(A, (v, w)) == via_product


# -- complement ------------------------------------------------------------------------


def test_complement_of_empty_accepting():
    E = BuchiNfa(1, 2, [(0, 0, 0), (0, 1, 0)], [0], [])
    C = complement(E)
    rng = random.Random(451)
    for _ in range(50):
        assert membership_up(C, random_up_word(rng, 2))


def test_complement_of_universal():
    C = complement(universal())
    rng = random.Random(452)
    for _ in range(50):
        assert not membership_up(C, random_up_word(rng, 2))


def test_complement_inf_ones():
    C = complement(inf_ones())
    assert membership_up(C, UpWord((1,), (0,)))
    assert not membership_up(C, UpWord((0,), (1,)))


def test_complement_exactly_one_random():
    rng = random.Random(453)
    for _ in range(60):
        A = random_buchi(rng, 3, 2)
        C = complement(A)
        for _ in range(5):
            sigma = random_up_word(rng, 2)
            assert membership_up(A, sigma) != membership_up(C, sigma)
            assert naive_membership_up(A, sigma) != naive_membership_up(C, sigma)


def test_complement_stats():
    A = inf_ones()
    C, stats = complement_with_stats(A)
    assert isinstance(stats, ComplementStats)
    assert stats.kinds == stats.colors**2
    assert 0 < stats.incompatible <= stats.kinds
    # every block contributes 2 + 2*colors states
    assert C.state_count == stats.incompatible * (2 + 2 * stats.colors)


def test_complement_budget_propagates():
    with pytest.raises(BudgetExceeded):
        complement(inf_ones(), max_colors=1)
