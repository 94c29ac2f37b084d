import itertools
import random

from oracles import (
    merges_zero_often,
    never_merges_zero,
    random_semigroup,
    random_up_word,
    some_suffix_merges_often,
)
from s1sup.buchi import membership_up
from s1sup.encodings import (
    MERGE_FIRST_ORDER,
    check_merge_encoding,
    exists_prefix_merge_nfa,
    interp_of_word,
    merge0_nfa,
    merge_second_order,
    never_merge_nfa,
    phi_merge,
)
from s1sup.logic import (
    FoAnd,
    FoEx1,
    FoEx2,
    FoIn,
    FoLess,
    FoNot,
    free_full,
)
from s1sup.semigroup import UpWord, merges_up, new_semigroup, up_at, up_equiv

LP = new_semigroup(2, [[0, 0], [1, 1]])
TRIV = new_semigroup(1, [[0]])


def node_count(phi):
    if isinstance(phi, (FoLess, FoIn)):
        return 1
    if isinstance(phi, FoAnd):
        return 1 + node_count(phi.left) + node_count(phi.right)
    if isinstance(phi, (FoNot, FoEx1, FoEx2)):
        return 1 + node_count(phi.sub)
    raise TypeError(phi)


# -- the formula --------------------------------------------------------------


def test_phi_merge_free_variables():
    for g in (TRIV, LP):
        free_fo, free_so = free_full(phi_merge(g))
        assert free_fo == {"x", "y"}
        assert free_so == {f"X{a}" for a in range(g.size)}


def test_phi_merge_growth_is_quadratic():
    sizes = []
    for n in (1, 2, 3):
        g = new_semigroup(n, [[(a + b) % n for b in range(n)] for a in range(n)])
        sizes.append(node_count(phi_merge(g)))
    assert sizes[0] < sizes[1] < sizes[2]
    # ratio of successive quadratic-ish growth stays well below cubic
    assert sizes[2] < sizes[0] * 30


def test_merge_variable_lists():
    assert MERGE_FIRST_ORDER[:2] == ("x", "y")
    assert merge_second_order(LP) == ("X0", "X1", "Y0", "Y1")


# -- the interpretation builder ------------------------------------------------


def test_interp_of_word_constant():
    interp = interp_of_word(LP, UpWord((0,), (0,)), 0, 1)
    assert up_equiv(interp.sets["X0"], UpWord((1,), (1,)))
    assert up_equiv(interp.sets["X1"], UpWord((0,), (0,)))
    assert interp.nums == {"x": 0, "y": 1}


def test_interp_of_word_prefix_only_letter():
    interp = interp_of_word(LP, UpWord((0,), (1,)), 0, 0)
    assert up_equiv(interp.sets["X0"], UpWord((1,), (0,)))


def test_interp_of_word_partitions():
    rng = random.Random(480)
    for _ in range(100):
        g = random_semigroup(rng, 3)
        sigma = random_up_word(rng, g.size)
        interp = interp_of_word(g, sigma, 0, 1)
        span = len(sigma.prefix) + len(sigma.period)
        for n in range(span):
            marks = [
                up_at(interp.sets[f"X{a}"], n) for a in range(g.size)
            ]
            assert sum(marks) == 1
            assert marks[up_at(sigma, n)] == 1


# -- the merging automata ---------------------------------------------------------


def test_merge0_shape_and_frozen_behavior():
    A = merge0_nfa(LP)
    assert A.state_count == (1 + LP.size) ** 2 == 9
    assert membership_up(A, UpWord((0,), (0,)))
    assert not membership_up(A, UpWord((0,), (1,)))


def test_merge0_constant_idempotent():
    assert membership_up(merge0_nfa(TRIV), UpWord((0,), (0,)))


def test_merge0_up_equiv_invariance():
    A = merge0_nfa(LP)
    assert membership_up(A, UpWord((0, 0), (0, 0))) == membership_up(
        A, UpWord((0,), (0,))
    )
    assert membership_up(A, UpWord((0,), (1, 1))) == membership_up(
        A, UpWord((0, 1), (1,))
    )


def test_merge0_agrees_with_oracle():
    rng = random.Random(481)
    for trial in range(40):
        g = random_semigroup(rng, 3)
        A = merge0_nfa(g)
        for _ in range(15):
            sigma = random_up_word(rng, g.size)
            assert membership_up(A, sigma) == merges_zero_often(g, sigma), (
                g.table,
                sigma,
            )


def test_never_merge_shape_and_frozen_behavior():
    A = never_merge_nfa(LP)
    assert A.state_count == (1 + LP.size) * (1 + 2**LP.size) == 15
    assert membership_up(A, UpWord((0,), (1,)))
    assert not membership_up(A, UpWord((0,), (0,)))


def test_never_merge_constant_idempotent():
    assert not membership_up(never_merge_nfa(TRIV), UpWord((0,), (0,)))


def test_never_merge_agrees_with_oracle():
    rng = random.Random(482)
    for trial in range(40):
        g = random_semigroup(rng, 3)
        A = never_merge_nfa(g)
        for _ in range(15):
            sigma = random_up_word(rng, g.size)
            assert membership_up(A, sigma) == never_merges_zero(g, sigma), (
                g.table,
                sigma,
            )


def test_merge0_and_never_merge_partition():
    rng = random.Random(483)
    for _ in range(30):
        g = random_semigroup(rng, 3)
        A0 = merge0_nfa(g)
        An = never_merge_nfa(g)
        for _ in range(10):
            sigma = random_up_word(rng, g.size)
            assert membership_up(A0, sigma) != membership_up(An, sigma)


def test_exists_prefix_shape_and_frozen_behavior():
    A = exists_prefix_merge_nfa(LP)
    assert A.state_count == merge0_nfa(LP).state_count + 1 == 10
    assert membership_up(A, UpWord((0,), (0,)))
    assert membership_up(A, UpWord((0,), (1,)))


def test_exists_prefix_accepts_everything():
    rng = random.Random(484)
    for size in (1, 2, 3):
        g = random_semigroup(rng, size)
        A = exists_prefix_merge_nfa(g)
        for _ in range(60):
            assert membership_up(A, random_up_word(rng, g.size))


def test_exists_prefix_covers_merge0():
    rng = random.Random(485)
    g = LP
    A0 = merge0_nfa(g)
    Ae = exists_prefix_merge_nfa(g)
    for _ in range(40):
        sigma = random_up_word(rng, g.size)
        if membership_up(A0, sigma):
            assert membership_up(Ae, sigma)


def test_exists_prefix_agrees_with_oracle():
    rng = random.Random(486)
    for _ in range(25):
        g = random_semigroup(rng, 3)
        A = exists_prefix_merge_nfa(g)
        for _ in range(10):
            sigma = random_up_word(rng, g.size)
            assert membership_up(A, sigma) == some_suffix_merges_often(g, sigma)


# -- end-to-end formula checking ----------------------------------------------------


def test_check_merge_encoding_reflexive():
    assert check_merge_encoding(TRIV, UpWord((0,), (0,)), 2, 2)
    assert check_merge_encoding(LP, UpWord((0,), (1,)), 1, 1)


def test_check_merge_encoding_constant_idempotent():
    assert check_merge_encoding(TRIV, UpWord((0,), (0,)), 0, 3)


def test_check_merge_encoding_left_projection_counterexample():
    assert not check_merge_encoding(LP, UpWord((0,), (1,)), 0, 1)


def test_check_merge_encoding_matches_merges_up():
    words1 = [UpWord((0,), (0,)), UpWord((0, 0), (0,))]
    words2 = [
        UpWord((0,), (1,)),
        UpWord((1,), (0, 1)),
        UpWord((0, 1), (0,)),
    ]
    for g, words in ((TRIV, words1), (LP, words2)):
        for sigma in words:
            for i, j in itertools.product(range(3), repeat=2):
                assert check_merge_encoding(g, sigma, i, j) == merges_up(
                    g, sigma, i, j
                ), (g.size, sigma, i, j)
