"""Complementation of Buchi automata through transition colors.

The color of a finite word records, per state, which states it can reach
and which it can reach while passing through an accepting state before the
final position.  Colors compose like relations, so the finitely many
realizable colors form a semigroup.  A kind is a pair of colors (V, W); the
kind automaton accepts the words that factor into a V block followed by
infinitely many W blocks.  A kind is compatible when the base automaton
accepts some word of that kind; the union of kind automata over the
incompatible kinds accepts exactly the ultimately periodic words the base
automaton rejects.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .buchi import BuchiNfa, _strongly_connected, _union_many, letter_relation
from .semigroup import FiniteSemigroup

DEFAULT_MAX_COLORS = 20000


class DimensionMismatch(ValueError):
    """Colors over different state counts cannot be combined."""


class BudgetExceeded(RuntimeError):
    """The color closure grew past the configured cap."""

    def __init__(self, max_colors: int):
        super().__init__(f"more than {max_colors} realizable colors")
        self.max_colors = max_colors


@dataclass(frozen=True)
class Color:
    """Reachability profile of a nonempty word.

    reach[p] is the bitmask of states reachable from p over the word;
    reach_acc[p] the bitmask reachable while visiting an accepting state at
    some position other than the last.  reach_acc is pointwise contained in
    reach.
    """

    reach: tuple[int, ...]
    reach_acc: tuple[int, ...]


Kind = tuple[Color, Color]


def _compose(r: Sequence[int], s: Sequence[int]) -> tuple[int, ...]:
    out = []
    for mask in r:
        acc = 0
        m = mask
        while m:
            q = (m & -m).bit_length() - 1
            acc |= s[q]
            m &= m - 1
        out.append(acc)
    return tuple(out)


def color_add(v: Color, w: Color) -> Color:
    """Concatenation of profiles; v is the left factor."""
    if len(v.reach) != len(w.reach):
        raise DimensionMismatch(
            f"colors over {len(v.reach)} and {len(w.reach)} states"
        )
    reach = _compose(v.reach, w.reach)
    reach_acc = tuple(
        a | b
        for a, b in zip(_compose(v.reach_acc, w.reach), _compose(v.reach, w.reach_acc))
    )
    return Color(reach, reach_acc)


def gamma_letter(A: BuchiNfa, a: int) -> Color:
    """Color of a single letter."""
    reach = letter_relation(A, a)
    reach_acc = tuple(
        row if p in A.accepting else 0 for p, row in enumerate(reach)
    )
    return Color(reach, reach_acc)


def gamma_word(A: BuchiNfa, w: Sequence[int]) -> Color:
    """Color of a nonempty word, the fold of its letter colors."""
    if not w:
        raise ValueError("gamma of the empty word is undefined")
    acc = gamma_letter(A, w[0])
    for a in w[1:]:
        acc = color_add(acc, gamma_letter(A, a))
    return acc


def _class_gammas(A: BuchiNfa) -> list[Color]:
    out = []
    for cls, first in enumerate(A._class_first_letter):
        out.append(gamma_letter(A, first))
    return out


def _closure(A: BuchiNfa, max_colors: int):
    """All colors of nonempty words, in deterministic discovery order.

    Returns (colors, index map, per-class letter colors).  Seeds are the
    letter colors in class order; the worklist extends each discovered
    color on the right by every letter color.  Right extension alone
    reaches the whole subsemigroup, every word being a left fold of its
    letters.
    """
    gammas = _class_gammas(A)
    colors: list[Color] = []
    index: dict[Color, int] = {}

    def add(c: Color):
        if c not in index:
            if len(colors) >= max_colors:
                raise BudgetExceeded(max_colors)
            index[c] = len(colors)
            colors.append(c)

    for g in gammas:
        add(g)
    i = 0
    while i < len(colors):
        x = colors[i]
        for g in gammas:
            add(color_add(x, g))
        i += 1
    return colors, index, gammas


def realizable_colors(A: BuchiNfa, max_colors: int = DEFAULT_MAX_COLORS) -> list[Color]:
    """Colors realized by nonempty words, in deterministic order."""
    colors, _, _ = _closure(A, max_colors)
    return colors


def color_nfa(A: BuchiNfa, c: Color, max_colors: int = DEFAULT_MAX_COLORS) -> BuchiNfa:
    """Automaton accepting the finite-word tracking of color c, read as a
    Buchi automaton: state 0 is a start with no incoming transitions, state
    1 + i tracks the i-th realizable color, and the state of c accepts."""
    colors, index, gammas = _closure(A, max_colors)
    letter_class = list(A._letter_class)
    class_rows = []
    for g in gammas:
        rows = [(1 + index[g],)]
        for ci in colors:
            rows.append((1 + index[color_add(ci, g)],))
        class_rows.append(tuple(rows))
    accepting = [1 + index[c]] if c in index else []
    return BuchiNfa._make(
        1 + len(colors), A.alphabet_size, letter_class, class_rows, [0], accepting
    )


def _kind_block(A: BuchiNfa, colors, index, gammas, v: Color, w: Color) -> BuchiNfa:
    """Chain of two color trackers.

    States 0 .. C are the first tracker (start plus one state per color),
    1 + C .. 1 + 2C the second, with q2 = 1 + C both the second start and
    the only accepting state.  Every transition entering the v state of the
    first tracker or the w state of the second gets a parallel copy into
    q2, which cuts the input into a v block followed by w blocks.
    """
    ncol = len(colors)
    q2 = 1 + ncol
    letter_class = list(A._letter_class)
    class_rows = []
    for g in gammas:
        rows = []
        ig = index[g]
        rows.append((1 + ig, q2) if g == v else (1 + ig,))
        for ci in colors:
            nxt = index[color_add(ci, g)]
            rows.append((1 + nxt, q2) if colors[nxt] == v else (1 + nxt,))
        rows.append((q2, q2 + 1 + ig) if g == w else (q2 + 1 + ig,))
        for ci in colors:
            nxt = index[color_add(ci, g)]
            rows.append((q2, q2 + 1 + nxt) if colors[nxt] == w else (q2 + 1 + nxt,))
        class_rows.append(tuple(rows))
    return BuchiNfa._make(
        2 + 2 * ncol, A.alphabet_size, letter_class, class_rows, [0], [q2]
    )


def kind_nfa(A: BuchiNfa, kind: Kind, max_colors: int = DEFAULT_MAX_COLORS) -> BuchiNfa:
    """Automaton accepting the words that factor as one block of color
    kind[0] followed by infinitely many blocks of color kind[1]."""
    colors, index, gammas = _closure(A, max_colors)
    v, w = kind
    return _kind_block(A, colors, index, gammas, v, w)


def compatible(A: BuchiNfa, kind: Kind, max_colors: int = DEFAULT_MAX_COLORS) -> bool:
    """Does A accept some word of this kind?

    Equivalent to emptiness of the product of kind_nfa(A, kind) with A, but
    decided directly on the color relations: follow one v step from the
    initial states, saturate under w steps, and look for a w cycle that
    passes through an accepting state.
    """
    v, w = kind
    n = A.state_count
    if len(v.reach) != n or len(w.reach) != n:
        raise DimensionMismatch("kind colors do not match the automaton")
    start = 0
    for p in A.initial:
        start |= v.reach[p]
    seen = start
    work = start
    while work:
        img = 0
        m = work
        while m:
            q = (m & -m).bit_length() - 1
            img |= w.reach[q]
            m &= m - 1
        work = img & ~seen
        seen |= work
    if not seen:
        return False
    nodes = [q for q in range(n) if seen >> q & 1]
    node_set = set(nodes)

    def succ(p):
        return [q for q in range(n) if w.reach[p] >> q & 1 and q in node_set]

    comp, has_cycle = _strongly_connected(nodes, succ)
    for p in nodes:
        if not has_cycle[comp[p]]:
            continue
        m = w.reach_acc[p]
        while m:
            q = (m & -m).bit_length() - 1
            m &= m - 1
            if q in node_set and comp.get(q) == comp[p]:
                return True
    return False


@dataclass(frozen=True)
class ComplementStats:
    colors: int
    kinds: int
    incompatible: int


def complement(A: BuchiNfa, max_colors: int = DEFAULT_MAX_COLORS) -> BuchiNfa:
    """Automaton accepting exactly the ultimately periodic words A rejects.

    Union of the kind automata over all incompatible kinds, in closure
    order.  Sound and complete for ultimately periodic words; arbitrary
    words of an incompatible kind are rejected by A as well.
    """
    return complement_with_stats(A, max_colors)[0]


def complement_with_stats(
    A: BuchiNfa, max_colors: int = DEFAULT_MAX_COLORS
) -> tuple[BuchiNfa, ComplementStats]:
    colors, index, gammas = _closure(A, max_colors)
    blocks = []
    kinds = 0
    for v in colors:
        for w in colors:
            kinds += 1
            if not compatible(A, (v, w)):
                blocks.append(_kind_block(A, colors, index, gammas, v, w))
    result = _union_many(blocks, A.alphabet_size)
    return result, ComplementStats(len(colors), kinds, len(blocks))


# -- semigroup variants ---------------------------------------------------------


def kind_nfa_semigroup(g: FiniteSemigroup, kind: tuple[int, int]) -> BuchiNfa:
    """Kind automaton over a semigroup alphabet: accepts words over the
    elements that factor as one block of color kind[0] followed by
    infinitely many blocks of color kind[1], colors taken by col."""
    c, d = kind
    if not (0 <= c < g.size and 0 <= d < g.size):
        raise ValueError("kind colors out of range")
    n = g.size
    q2 = 1 + n
    letter_class = list(range(n))
    class_rows = []
    for a in range(n):
        rows = []
        rows.append((1 + a, q2) if a == c else (1 + a,))
        for i in range(n):
            s = g.table[i][a]
            rows.append((1 + s, q2) if s == c else (1 + s,))
        rows.append((q2, q2 + 1 + a) if a == d else (q2 + 1 + a,))
        for i in range(n):
            s = g.table[i][a]
            rows.append((q2, q2 + 1 + s) if s == d else (q2 + 1 + s,))
        class_rows.append(tuple(rows))
    return BuchiNfa._make(2 + 2 * n, n, letter_class, class_rows, [0], [q2])


def rf_nfa(g: FiniteSemigroup) -> BuchiNfa:
    """Union of the semigroup kind automata over every color pair.  Every
    infinite word over the elements has a Ramseyan factorization, so this
    automaton accepts everything; it exists to witness that fact."""
    blocks = [
        kind_nfa_semigroup(g, (c, d)) for c in range(g.size) for d in range(g.size)
    ]
    return _union_many(blocks, g.size)
