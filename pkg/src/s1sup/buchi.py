"""Buchi automata over indexed alphabets.

States and letters are dense integer indices.  Acceptance is weak: a run is
accepting when it visits the accepting set infinitely often, any member of
it.  Transition tables are stored once per letter class, where two letters
belong to the same class when they act identically on every state.  Derived
alphabets (sets of logic variables) are exponentially large but have few
classes, so most operations iterate over classes instead of letters.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .semigroup import UpWord, up_at


class AlphabetMismatch(ValueError):
    """Automata or words disagree on the alphabet size."""


class BuchiNfa:
    """Immutable nondeterministic Buchi automaton.

    Construct from explicit transition triples (p, a, q).  Internally the
    triples are grouped by letter into per-state successor rows, and letters
    with identical rows share one class.  Classes are numbered by first
    occurrence, which makes the representation canonical: two automata are
    equal exactly when they have the same states, alphabet, transition set,
    initial set and accepting set.
    """

    __slots__ = (
        "state_count",
        "alphabet_size",
        "initial",
        "accepting",
        "_letter_class",
        "_class_rows",
        "_class_first_letter",
        "_transitions",
        "_mask_cache",
        "_edge_cache",
    )

    def __init__(
        self,
        state_count: int,
        alphabet_size: int,
        transitions: Iterable[tuple[int, int, int]],
        initial: Iterable[int],
        accepting: Iterable[int],
    ):
        if state_count < 0 or alphabet_size < 0:
            raise ValueError("state_count and alphabet_size must be nonnegative")
        per_letter: list[list[list[int]]] = [
            [[] for _ in range(state_count)] for _ in range(alphabet_size)
        ]
        for p, a, q in transitions:
            if not (0 <= p < state_count and 0 <= q < state_count):
                raise ValueError(f"transition ({p},{a},{q}) uses an unknown state")
            if not (0 <= a < alphabet_size):
                raise ValueError(f"transition ({p},{a},{q}) uses an unknown letter")
            per_letter[a][p].append(q)
        rows_by_letter = [
            tuple(tuple(sorted(set(row))) for row in rows) for rows in per_letter
        ]
        ini = frozenset(initial)
        acc = frozenset(accepting)
        for s in ini | acc:
            if not (0 <= s < state_count):
                raise ValueError(f"state {s} out of range")
        self._init_from(
            state_count,
            alphabet_size,
            list(range(alphabet_size)),
            rows_by_letter,
            ini,
            acc,
        )

    def _init_from(self, state_count, alphabet_size, letter_class, class_rows, ini, acc):
        # canonical form: rows deduplicated by content, classes renumbered
        # by the first letter that uses them
        self.state_count = state_count
        self.alphabet_size = alphabet_size
        self.initial = ini
        self.accepting = acc
        content_id: dict = {}
        old_to_new: dict[int, int] = {}
        new_rows: list = []
        new_first: list[int] = []
        new_class: list[int] = []
        for a in range(alphabet_size):
            oc = letter_class[a]
            nid = old_to_new.get(oc)
            if nid is None:
                rows = class_rows[oc]
                nid = content_id.get(rows)
                if nid is None:
                    nid = len(new_rows)
                    content_id[rows] = nid
                    new_rows.append(rows)
                    new_first.append(a)
                old_to_new[oc] = nid
            new_class.append(nid)
        self._letter_class = tuple(new_class)
        self._class_rows = tuple(new_rows)
        self._class_first_letter = tuple(new_first)
        self._transitions = None
        self._mask_cache = {}
        self._edge_cache = {}

    @classmethod
    def _make(cls, state_count, alphabet_size, letter_class, class_rows, initial, accepting):
        """Internal constructor from prebuilt per-class rows, revalidated lightly."""
        self = object.__new__(cls)
        self._init_from(
            state_count,
            alphabet_size,
            letter_class,
            class_rows,
            frozenset(initial),
            frozenset(accepting),
        )
        return self

    # -- inspection ---------------------------------------------------------

    def successors(self, p: int, a: int) -> tuple[int, ...]:
        if not (0 <= a < self.alphabet_size):
            raise ValueError(f"letter {a} out of range")
        return self._class_rows[self._letter_class[a]][p]

    @property
    def transitions(self) -> frozenset[tuple[int, int, int]]:
        if self._transitions is None:
            trips = []
            for a in range(self.alphabet_size):
                rows = self._class_rows[self._letter_class[a]]
                for p in range(self.state_count):
                    for q in rows[p]:
                        trips.append((p, a, q))
            self._transitions = frozenset(trips)
        return self._transitions

    def transition_count(self) -> int:
        per_class = [sum(len(r) for r in rows) for rows in self._class_rows]
        uses = [0] * len(self._class_rows)
        for c in self._letter_class:
            uses[c] += 1
        return sum(u * n for u, n in zip(uses, per_class))

    def __eq__(self, other):
        if not isinstance(other, BuchiNfa):
            return NotImplemented
        return (
            self.state_count == other.state_count
            and self.alphabet_size == other.alphabet_size
            and self.initial == other.initial
            and self.accepting == other.accepting
            and self._letter_class == other._letter_class
            and self._class_rows == other._class_rows
        )

    def __hash__(self):
        return hash(
            (
                self.state_count,
                self.alphabet_size,
                self.initial,
                self.accepting,
                self._letter_class,
                self._class_rows,
            )
        )

    def __repr__(self):
        return (
            f"BuchiNfa(states={self.state_count}, alphabet={self.alphabet_size}, "
            f"transitions={self.transition_count()}, initial={sorted(self.initial)}, "
            f"accepting={sorted(self.accepting)})"
        )

    # -- cached low level views ----------------------------------------------

    def _masks(self, cls: int) -> tuple[int, ...]:
        got = self._mask_cache.get(cls)
        if got is None:
            got = tuple(
                sum(1 << q for q in row) for row in self._class_rows[cls]
            )
            self._mask_cache[cls] = got
        return got

    def _np_edges(self, cls: int):
        got = self._edge_cache.get(cls)
        if got is None:
            rows = self._class_rows[cls]
            counts = np.fromiter((len(r) for r in rows), dtype=np.int64, count=len(rows))
            total = int(counts.sum())
            src = np.repeat(np.arange(self.state_count, dtype=np.int64), counts)
            dst = np.fromiter(
                itertools.chain.from_iterable(rows), dtype=np.int64, count=total
            )
            got = (src, dst)
            self._edge_cache[cls] = got
        return got


def empty_nfa(alphabet_size: int) -> BuchiNfa:
    """The automaton with no states; accepts nothing."""
    return BuchiNfa(0, alphabet_size, [], [], [])


# -- word relations ----------------------------------------------------------


def letter_relation(A: BuchiNfa, a: int) -> tuple[int, ...]:
    """Successor sets of one letter as per-state bitmasks."""
    if not (0 <= a < A.alphabet_size):
        raise ValueError(f"letter {a} out of range")
    return A._masks(A._letter_class[a])


def _mask_image(rows: Sequence[int], frontier: int) -> int:
    out = 0
    m = frontier
    while m:
        s = (m & -m).bit_length() - 1
        out |= rows[s]
        m &= m - 1
    return out


def trans(A: BuchiNfa, p: int, w: Sequence[int], q: int) -> bool:
    """Is there a w-labeled path from p to q?  w must be nonempty."""
    if not w:
        raise ValueError("trans needs a nonempty word")
    frontier = 1 << p
    for a in w:
        frontier = _mask_image(letter_relation(A, a), frontier)
        if not frontier:
            return False
    return bool(frontier >> q & 1)


def transa(A: BuchiNfa, p: int, w: Sequence[int], q: int) -> bool:
    """Like trans, but the path must visit an accepting state at some
    position other than the last one.  w must be nonempty."""
    if not w:
        raise ValueError("transa needs a nonempty word")
    acc_mask = sum(1 << s for s in A.accepting)
    reach = 1 << p
    reach_acc = reach & acc_mask
    for a in w:
        rows = letter_relation(A, a)
        new_acc = _mask_image(rows, reach_acc | (reach & acc_mask))
        reach = _mask_image(rows, reach)
        reach_acc = new_acc & reach
        if not reach:
            return False
    return bool(reach_acc >> q & 1)


# -- emptiness and witness extraction -----------------------------------------


@dataclass(frozen=True)
class Match:
    """An accepting lasso: stem from an initial state to an anchor, then a
    loop from the anchor back to itself that starts at an accepting state.
    When the anchor is itself initial the stem repeats the loop, keeping
    both word components nonempty."""

    stem: tuple[int, ...]
    loop: tuple[int, ...]
    stem_path: tuple[int, ...]
    loop_path: tuple[int, ...]

    def word(self) -> UpWord:
        return UpWord(self.stem, self.loop)


def _layered_bfs(A: BuchiNfa, sources: Iterable[int]):
    """Parent-pointer BFS.  States expand layer by layer in ascending order
    and letters in ascending order, first visit wins, so the parent tree is
    deterministic."""
    parent: dict[int, tuple[int, int] | None] = {}
    dist: dict[int, int] = {}
    frontier = sorted(set(sources))
    for s in frontier:
        parent[s] = None
        dist[s] = 0
    d = 0
    while frontier:
        nxt = []
        for p in frontier:
            for c, rows in enumerate(A._class_rows):
                a = A._class_first_letter[c]
                for q in rows[p]:
                    if q not in parent:
                        parent[q] = (p, a)
                        dist[q] = d + 1
                        nxt.append(q)
        frontier = sorted(set(nxt))
        d += 1
    return parent, dist


def _adjacency(A: BuchiNfa, nodes: Iterable[int]) -> dict[int, tuple[int, ...]]:
    adj = {}
    for p in nodes:
        seen = set()
        for rows in A._class_rows:
            seen.update(rows[p])
        adj[p] = tuple(sorted(seen))
    return adj


def _strongly_connected(nodes: Sequence, succ: Callable):
    """Iterative Tarjan.  Returns a map node -> component id; components
    that contain a cycle (size above one, or a self loop) are flagged."""
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    comp: dict = {}
    has_cycle: list[bool] = []
    counter = itertools.count()

    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = next(counter)
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for child in it:
                if child not in index:
                    index[child] = low[child] = next(counter)
                    stack.append(child)
                    on_stack.add(child)
                    work.append((child, iter(succ(child))))
                    advanced = True
                    break
                if child in on_stack:
                    if index[child] < low[node]:
                        low[node] = index[child]
            if advanced:
                continue
            work.pop()
            if work:
                parent_node = work[-1][0]
                if low[node] < low[parent_node]:
                    low[parent_node] = low[node]
            if low[node] == index[node]:
                cid = len(has_cycle)
                members = []
                while True:
                    m = stack.pop()
                    on_stack.discard(m)
                    comp[m] = cid
                    members.append(m)
                    if m == node:
                        break
                cyclic = len(members) > 1 or any(
                    m in succ(m) for m in members
                )
                has_cycle.append(cyclic)
    return comp, has_cycle


def find_match(A: BuchiNfa) -> Match | None:
    """Deterministic accepting lasso search.

    Reachability runs breadth first with parent pointers; among accepting
    states inside a cyclic strongly connected component the anchor with the
    smallest (distance, index) wins; the loop is the shortest cycle through
    the anchor.  Returns None when the language is empty.
    """
    if A.state_count == 0 or not A.initial:
        return None
    parent, dist = _layered_bfs(A, A.initial)
    adj = _adjacency(A, parent)
    comp, has_cycle = _strongly_connected(sorted(parent), lambda n: adj[n])
    candidates = [
        f for f in A.accepting if f in parent and has_cycle[comp[f]]
    ]
    if not candidates:
        return None
    anchor = min(candidates, key=lambda f: (dist[f], f))
    loop_word, loop_path = _shortest_loop(A, anchor)
    stem_word: list[int] = []
    stem_path = [anchor]
    node = anchor
    while parent[node] is not None:
        pp, aa = parent[node]
        stem_word.append(aa)
        stem_path.append(pp)
        node = pp
    stem_word.reverse()
    stem_path.reverse()
    if not stem_word:
        return Match(loop_word, loop_word, loop_path, loop_path)
    return Match(tuple(stem_word), loop_word, tuple(stem_path), loop_path)


def _shortest_loop(A: BuchiNfa, anchor: int):
    """Shortest nonempty anchor-to-anchor path, deterministic tie breaks."""
    parent: dict[int, tuple[int, int]] = {}
    frontier = [anchor]
    first_hit: tuple[int, int] | None = None
    while frontier and first_hit is None:
        nxt = []
        for p in frontier:
            for c, rows in enumerate(A._class_rows):
                a = A._class_first_letter[c]
                for q in rows[p]:
                    if q == anchor:
                        first_hit = (p, a)
                        break
                    if q not in parent and q != anchor:
                        parent[q] = (p, a)
                        nxt.append(q)
                if first_hit:
                    break
            if first_hit:
                break
        frontier = sorted(set(nxt))
    if first_hit is None:
        raise AssertionError("anchor is not on a cycle")
    p, a = first_hit
    word = [a]
    path = [p]
    while p != anchor:
        pp, aa = parent[p]
        word.append(aa)
        path.append(pp)
        p = pp
    word.reverse()
    path.reverse()
    return tuple(word), tuple(path + [anchor])


def is_satisfiable(A: BuchiNfa) -> bool:
    """Does the automaton accept any word at all?"""
    return find_match(A) is not None


# -- constructions -------------------------------------------------------------


def exact_up_nfa(sigma: UpWord, alphabet_size: int) -> BuchiNfa:
    """Automaton accepting exactly the words equal to sigma's expansion.

    A chain spells the prefix, a cycle spells the period; every cycle state
    is accepting, so the only run is the intended one.
    """
    nx, ny = len(sigma.prefix), len(sigma.period)
    for a in itertools.chain(sigma.prefix, sigma.period):
        if not (0 <= a < alphabet_size):
            raise AlphabetMismatch(f"letter {a} outside alphabet of size {alphabet_size}")
    transitions = []
    for i, a in enumerate(sigma.prefix):
        transitions.append((i, a, i + 1 if i + 1 < nx else nx))
    for j, a in enumerate(sigma.period):
        transitions.append((nx + j, a, nx + (j + 1) % ny))
    return BuchiNfa(
        nx + ny,
        alphabet_size,
        transitions,
        [0],
        range(nx, nx + ny),
    )


def _union_many(parts: Sequence[BuchiNfa], alphabet_size: int) -> BuchiNfa:
    for part in parts:
        if part.alphabet_size != alphabet_size:
            raise AlphabetMismatch(
                f"alphabet {part.alphabet_size} differs from {alphabet_size}"
            )
    offsets = []
    total = 0
    for part in parts:
        offsets.append(total)
        total += part.state_count
    combo_id: dict[tuple[int, ...], int] = {}
    letter_class = []
    class_rows = []
    for a in range(alphabet_size):
        combo = tuple(part._letter_class[a] for part in parts)
        cid = combo_id.get(combo)
        if cid is None:
            cid = len(class_rows)
            combo_id[combo] = cid
            rows: list[tuple[int, ...]] = []
            for part, off, pc in zip(parts, offsets, combo):
                if off == 0:
                    rows.extend(part._class_rows[pc])
                else:
                    rows.extend(
                        tuple(q + off for q in row) for row in part._class_rows[pc]
                    )
            class_rows.append(tuple(rows))
        letter_class.append(cid)
    initial = [s + off for part, off in zip(parts, offsets) for s in part.initial]
    accepting = [s + off for part, off in zip(parts, offsets) for s in part.accepting]
    return BuchiNfa._make(total, alphabet_size, letter_class, class_rows, initial, accepting)


def union(A: BuchiNfa, B: BuchiNfa) -> BuchiNfa:
    """Disjoint union; B's states follow A's."""
    if A.alphabet_size != B.alphabet_size:
        raise AlphabetMismatch(
            f"alphabets differ: {A.alphabet_size} vs {B.alphabet_size}"
        )
    return _union_many([A, B], A.alphabet_size)


def intersection(A: BuchiNfa, B: BuchiNfa) -> BuchiNfa:
    """Product with a round-robin flag.

    State (flag, p, q) is encoded as (flag * nA + p) * nB + q.  The flag
    arms when leaving an accepting B state and resets when leaving an
    accepting A state while armed; accepting product states are armed
    states over accepting A states, so a run is accepting exactly when both
    components accept.
    """
    if A.alphabet_size != B.alphabet_size:
        raise AlphabetMismatch(
            f"alphabets differ: {A.alphabet_size} vs {B.alphabet_size}"
        )
    nA, nB = A.state_count, B.state_count
    size = 2 * nA * nB
    acc_a = A.accepting
    acc_b = B.accepting

    combo_id: dict[tuple[int, int], int] = {}
    letter_class = []
    class_rows = []
    for a in range(A.alphabet_size):
        combo = (A._letter_class[a], B._letter_class[a])
        cid = combo_id.get(combo)
        if cid is None:
            cid = len(class_rows)
            combo_id[combo] = cid
            rows_a = A._class_rows[combo[0]]
            rows_b = B._class_rows[combo[1]]
            rows = []
            for flag in (0, 1):
                for p in range(nA):
                    succ_p = rows_a[p]
                    for q in range(nB):
                        if flag and p in acc_a:
                            nf = 0
                        elif not flag and q in acc_b:
                            nf = 1
                        else:
                            nf = flag
                        base = nf * nA
                        rows.append(
                            tuple(
                                (base + p2) * nB + q2
                                for p2 in succ_p
                                for q2 in rows_b[q]
                            )
                        )
            class_rows.append(tuple(rows))
        letter_class.append(cid)
    initial = [p * nB + q for p in sorted(A.initial) for q in sorted(B.initial)]
    accepting = [
        (nA + p) * nB + q for p in sorted(acc_a) for q in range(nB)
    ]
    return BuchiNfa._make(size, A.alphabet_size, letter_class, class_rows, initial, accepting)


def ex_project(A: BuchiNfa, pairs: Iterable[tuple[int, int]]) -> BuchiNfa:
    """Letter relaxation: for every transition (p, a, q) and every pair
    (a, b), the transition (p, b, q) is added."""
    extra: dict[int, set[int]] = {}
    for a, b in pairs:
        if not (0 <= a < A.alphabet_size and 0 <= b < A.alphabet_size):
            raise ValueError(f"pair ({a},{b}) outside the alphabet")
        extra.setdefault(b, set()).add(A._letter_class[a])
    group_id: dict[tuple[int, ...], int] = {}
    letter_class = []
    class_rows = []
    for b in range(A.alphabet_size):
        sources = {A._letter_class[b]} | extra.get(b, set())
        key = tuple(sorted(sources))
        cid = group_id.get(key)
        if cid is None:
            cid = len(class_rows)
            group_id[key] = cid
            if len(key) == 1:
                rows = A._class_rows[key[0]]
            else:
                parts = [A._class_rows[c] for c in key]
                rows = tuple(
                    tuple(sorted(set(itertools.chain.from_iterable(part[p] for part in parts))))
                    for p in range(A.state_count)
                )
            class_rows.append(rows)
        letter_class.append(cid)
    return BuchiNfa._make(
        A.state_count, A.alphabet_size, letter_class, class_rows, A.initial, A.accepting
    )


# -- membership of ultimately periodic words -----------------------------------

_VECTOR_THRESHOLD = 40000


def _check_word_alphabet(A: BuchiNfa, sigma: UpWord):
    for a in itertools.chain(sigma.prefix, sigma.period):
        if not (0 <= a < A.alphabet_size):
            raise AlphabetMismatch(
                f"letter {a} outside alphabet of size {A.alphabet_size}"
            )


def membership_up(A: BuchiNfa, sigma: UpWord) -> bool:
    """Does A accept the expansion of sigma?

    Explores the product of A with sigma's position structure; a product
    cycle through an accepting state decides acceptance, and every product
    cycle already sits inside the periodic part.  Small products run a
    direct search, large ones a vectorized fixpoint; both compute the same
    boolean.
    """
    _check_word_alphabet(A, sigma)
    if A.state_count == 0 or not A.initial or not A.accepting:
        return False
    positions = len(sigma.prefix) + len(sigma.period)
    if A.state_count * positions <= _VECTOR_THRESHOLD:
        return _member_lazy(A, sigma)
    return _member_vector(A, sigma)


def _member_lazy(A: BuchiNfa, sigma: UpWord) -> bool:
    nx, ny = len(sigma.prefix), len(sigma.period)
    total = nx + ny
    n = A.state_count
    letters = sigma.prefix + sigma.period

    def node_succ(node: int) -> tuple[int, ...]:
        pos, state = divmod(node, n)
        cls = A._letter_class[letters[pos]]
        npos = pos + 1 if pos + 1 < total else nx
        base = npos * n
        return tuple(base + q for q in A._class_rows[cls][state])

    seen = set()
    frontier = [0 * n + s for s in sorted(A.initial)]
    seen.update(frontier)
    order = list(frontier)
    i = 0
    while i < len(order):
        node = order[i]
        i += 1
        for q in node_succ(node):
            if q not in seen:
                seen.add(q)
                order.append(q)
    adj = {node: node_succ(node) for node in order}
    comp, has_cycle = _strongly_connected(order, lambda v: adj[v])
    acc = A.accepting
    return any(has_cycle[comp[node]] and (node % n) in acc for node in order)


def _member_vector(A: BuchiNfa, sigma: UpWord) -> bool:
    n = A.state_count
    ny = len(sigma.period)
    f = np.zeros(n, dtype=bool)
    f[list(A.initial)] = True
    for a in sigma.prefix:
        src, dst = A._np_edges(A._letter_class[a])
        nf = np.zeros(n, dtype=bool)
        nf[dst[f[src]]] = True
        f = nf
        if not f.any():
            return False
    srcs = []
    dsts = []
    for t, a in enumerate(sigma.period):
        src, dst = A._np_edges(A._letter_class[a])
        srcs.append(src + t * n)
        dsts.append(dst + ((t + 1) % ny) * n)
    psrc = np.concatenate(srcs)
    pdst = np.concatenate(dsts)
    m = ny * n
    reach = np.zeros(m, dtype=bool)
    reach[np.flatnonzero(f)] = True
    while True:
        new = pdst[reach[psrc] & ~reach[pdst]]
        if new.size == 0:
            break
        reach[new] = True
    keep = reach[psrc] & reach[pdst]
    psrc = psrc[keep]
    pdst = pdst[keep]
    acc_states = np.fromiter(A.accepting, dtype=np.int64, count=len(A.accepting))
    z = np.zeros(m, dtype=bool)
    for t in range(ny):
        z[acc_states + t * n] = True
    z &= reach
    while True:
        if not z.any():
            return False
        pre = np.zeros(m, dtype=bool)
        pre[psrc[z[pdst]]] = True
        while True:
            new = psrc[pre[pdst] & ~pre[psrc]]
            if new.size == 0:
                break
            pre[new] = True
        z2 = z & pre
        if int(z2.sum()) == int(z.sum()):
            return True
        z = z2


def match_for_up(A: BuchiNfa, sigma: UpWord) -> Match | None:
    """A concrete accepting lasso of A over sigma's expansion, or None.

    Runs the witness search on the product with the exact-word automaton
    and projects the paths back to A.
    """
    _check_word_alphabet(A, sigma)
    if A.state_count == 0:
        return None
    word_aut = exact_up_nfa(sigma, A.alphabet_size)
    prod = intersection(A, word_aut)
    m = find_match(prod)
    if m is None:
        return None
    nA, nB = A.state_count, word_aut.state_count

    def proj(path: tuple[int, ...]) -> tuple[int, ...]:
        return tuple((node // nB) % nA for node in path)

    return Match(m.stem, m.loop, proj(m.stem_path), proj(m.loop_path))


# -- language preserving reductions (internal) ----------------------------------


def _trim(A: BuchiNfa) -> BuchiNfa:
    """Keep states that are reachable and can still reach an accepting
    cycle.  Preserves the language exactly."""
    if A.state_count == 0:
        return A
    parent, _ = _layered_bfs(A, A.initial)
    reachable = sorted(parent)
    adj = _adjacency(A, reachable)
    comp, has_cycle = _strongly_connected(reachable, lambda v: adj[v])
    targets = {
        s for s in reachable if s in A.accepting and has_cycle[comp[s]]
    }
    if not targets:
        return empty_nfa(A.alphabet_size)
    rev: dict[int, list[int]] = {s: [] for s in reachable}
    for p in reachable:
        for q in adj[p]:
            rev[q].append(p)
    keep = set(targets)
    work = list(targets)
    while work:
        q = work.pop()
        for p in rev[q]:
            if p not in keep:
                keep.add(p)
                work.append(p)
    old_order = sorted(keep)
    remap = {s: i for i, s in enumerate(old_order)}
    letter_class = list(A._letter_class)
    new_rows = []
    for rows in A._class_rows:
        new_rows.append(
            tuple(
                tuple(remap[q] for q in rows[s] if q in keep) for s in old_order
            )
        )
    return BuchiNfa._make(
        len(old_order),
        A.alphabet_size,
        letter_class,
        new_rows,
        [remap[s] for s in A.initial if s in keep],
        [remap[s] for s in A.accepting if s in keep],
    )


def _bisim_quotient(A: BuchiNfa) -> BuchiNfa:
    """Quotient by the coarsest forward bisimulation that respects the
    accepting flag.  Preserves the language exactly."""
    n = A.state_count
    if n == 0:
        return A
    seed_id: dict[int, int] = {}
    block = [
        seed_id.setdefault(1 if s in A.accepting else 0, len(seed_id))
        for s in range(n)
    ]
    nblocks = len(seed_id)
    while True:
        sig_id: dict = {}
        new_block = [0] * n
        for s in range(n):
            sig = (
                block[s],
                tuple(
                    tuple(sorted({block[q] for q in rows[s]}))
                    for rows in A._class_rows
                ),
            )
            sid = sig_id.get(sig)
            if sid is None:
                sid = len(sig_id)
                sig_id[sig] = sid
            new_block[s] = sid
        if len(sig_id) == nblocks:
            block = new_block
            break
        nblocks = len(sig_id)
        block = new_block
    rep = {}
    for s in range(n):
        rep.setdefault(block[s], s)
    new_rows = []
    for rows in A._class_rows:
        new_rows.append(
            tuple(
                tuple(sorted({block[q] for q in rows[rep[b]]}))
                for b in range(nblocks)
            )
        )
    return BuchiNfa._make(
        nblocks,
        A.alphabet_size,
        list(A._letter_class),
        new_rows,
        {block[s] for s in A.initial},
        {block[s] for s in A.accepting},
    )


def _bisim_quotient_bw(A: BuchiNfa) -> BuchiNfa:
    """Quotient by the coarsest backward bisimulation respecting the
    initial and accepting flags.

    States in one block admit exactly the same finite pasts, so every run
    of the quotient stitches back into a concrete run over the same word;
    blocks are acceptance uniform and only the infinite tail of a run
    matters, hence the language is preserved exactly."""
    n = A.state_count
    if n == 0:
        return A
    preds = []
    for rows in A._class_rows:
        pr: list[list[int]] = [[] for _ in range(n)]
        for p in range(n):
            for q in rows[p]:
                pr[q].append(p)
        preds.append(pr)
    seed_id: dict[int, int] = {}
    block = [
        seed_id.setdefault(
            (2 if s in A.initial else 0) | (1 if s in A.accepting else 0),
            len(seed_id),
        )
        for s in range(n)
    ]
    nblocks = len(seed_id)
    while True:
        sig_id: dict = {}
        new_block = [0] * n
        for s in range(n):
            sig = (
                block[s],
                tuple(tuple(sorted({block[p] for p in pr[s]})) for pr in preds),
            )
            sid = sig_id.get(sig)
            if sid is None:
                sid = len(sig_id)
                sig_id[sig] = sid
            new_block[s] = sid
        if len(sig_id) == nblocks:
            block = new_block
            break
        nblocks = len(sig_id)
        block = new_block
    members: list[list[int]] = [[] for _ in range(nblocks)]
    for s in range(n):
        members[block[s]].append(s)
    # blocks agree on pasts, not futures: quotient rows union over members
    new_rows = []
    for rows in A._class_rows:
        new_rows.append(
            tuple(
                tuple(sorted({block[q] for s in members[b] for q in rows[s]}))
                for b in range(nblocks)
            )
        )
    return BuchiNfa._make(
        nblocks,
        A.alphabet_size,
        list(A._letter_class),
        new_rows,
        {block[s] for s in A.initial},
        {block[s] for s in A.accepting},
    )


def is_deterministic(A: BuchiNfa) -> bool:
    """At most one initial state and one successor per state and letter."""
    if len(A.initial) > 1:
        return False
    return all(len(row) <= 1 for rows in A._class_rows for row in rows)


def is_weak(A: BuchiNfa) -> bool:
    """Every strongly connected component is uniformly accepting or not.

    On such automata a run is accepting exactly when it eventually stays
    inside accepting states, so the Buchi and co-Buchi readings coincide.
    """
    n = A.state_count
    succs = [sorted({q for rows in A._class_rows for q in rows[p]}) for p in range(n)]
    comp = [-1] * n
    low = [0] * n
    num = [-1] * n
    counter = 0
    ncomp = 0
    stack: list[int] = []
    on_stack = [False] * n
    for root in range(n):
        if num[root] >= 0:
            continue
        # iterative Tarjan: (state, next child index)
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                num[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            while i < len(succs[v]):
                w = succs[v][i]
                i += 1
                if num[w] < 0:
                    work.append((v, i))
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], num[w])
            if advanced:
                continue
            if low[v] == num[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    flags: dict[int, bool] = {}
    for s in range(n):
        f = s in A.accepting
        if flags.setdefault(comp[s], f) != f:
            return False
    return True


def complement_deterministic(A: BuchiNfa) -> BuchiNfa:
    """Complement of a deterministic automaton, two copies plus a sink.

    The unique run of a rejected word either dies or stops visiting
    accepting states.  Copy one follows the run without accepting, moves to
    the sink when the run dies, and may guess at any step that no accepting
    state comes later; copy two checks that guess by only ever stepping to
    non-accepting states (dying if the real run visits one).  Exact only
    for deterministic input.
    """
    if not is_deterministic(A):
        raise ValueError("complement_deterministic needs a deterministic automaton")
    n = A.state_count
    if not A.initial:
        return _universal(A.alphabet_size)
    acc = A.accepting
    # copy one: 0..n-1, copy two: n..2n-1, sink: 2n
    sink = 2 * n
    rows_by_class = []
    for rows in A._class_rows:
        out = [() for _ in range(sink + 1)]
        out[sink] = (sink,)
        for p in range(n):
            if not rows[p]:
                out[p] = (sink,)
                if p not in acc:
                    out[n + p] = (sink,)
                continue
            q = rows[p][0]
            out[p] = (q,) if q in acc else (q, n + q)
            if p not in acc and q not in acc:
                out[n + p] = (n + q,)
        rows_by_class.append(tuple(out))
    accepting = [n + p for p in range(n) if p not in acc] + [sink]
    return BuchiNfa._make(sink + 1, A.alphabet_size, list(A._letter_class),
                          rows_by_class, list(A.initial), accepting)


class BreakpointBudget(RuntimeError):
    """Breakpoint complement grew past its state allowance."""


def complement_weak(A: BuchiNfa, max_states: int = 30000) -> BuchiNfa:
    """Breakpoint complement, exact for weak automata.

    Reading a weak automaton as co-Buchi, a word is rejected exactly when
    no run eventually stays inside accepting states.  States are pairs
    (reachable set, watched subset still inside accepting states since the
    last breakpoint); the watched set emptying is the breakpoint, and a run
    of breakpoints at infinitely many steps certifies rejection.  A word
    whose runs all die is rejected too, which the empty reachable set
    accepts vacuously.
    """
    if not is_weak(A):
        raise ValueError("complement_weak needs SCC-uniform acceptance")
    acc = A.accepting
    start = (frozenset(A.initial), frozenset(A.initial & acc))
    index: dict[tuple[frozenset[int], frozenset[int]], int] = {start: 0}
    order = [start]
    nclasses = len(A._class_rows)
    targets: list[list[int]] = [[] for _ in range(nclasses)]
    i = 0
    while i < len(order):
        s, o = order[i]
        for c, rows in enumerate(A._class_rows):
            ns = frozenset(q for p in s for q in rows[p])
            if o:
                no = frozenset(q for p in o for q in rows[p]) & acc
            else:
                no = ns & acc
            key = (ns, no)
            j = index.get(key)
            if j is None:
                if len(order) >= max_states:
                    raise BreakpointBudget(max_states)
                j = len(order)
                index[key] = j
                order.append(key)
            targets[c].append(j)
        i += 1
    rows_by_class = [tuple((t,) for t in col) for col in targets]
    accepting = [j for j, (_, o) in enumerate(order) if not o]
    return BuchiNfa._make(len(order), A.alphabet_size, list(A._letter_class),
                          rows_by_class, [0], accepting)


def product_weak(A: BuchiNfa, B: BuchiNfa) -> BuchiNfa:
    """Plain product with accepting = accepting x accepting.

    Correct for weak operands: a weak run is accepting exactly when it is
    eventually confined to accepting states, and confinement holds in the
    product iff it holds in both parts.  The two-copy intersection stays
    the general construction; this one keeps weak automata weak.
    """
    if A.alphabet_size != B.alphabet_size:
        raise AlphabetMismatch(f"{A.alphabet_size} != {B.alphabet_size}")
    n, m = A.state_count, B.state_count
    pair_index: dict[tuple[int, int], int] = {}
    letter_class = []
    pairs = []
    for a in range(A.alphabet_size):
        key = (A._letter_class[a], B._letter_class[a])
        c = pair_index.get(key)
        if c is None:
            c = len(pairs)
            pair_index[key] = c
            pairs.append(key)
        letter_class.append(c)
    rows_by_class = []
    for ca, cb in pairs:
        ra = A._class_rows[ca]
        rb = B._class_rows[cb]
        rows_by_class.append(tuple(
            tuple(p2 * m + q2 for p2 in ra[p] for q2 in rb[q])
            for p in range(n) for q in range(m)
        ))
    initial = [p * m + q for p in A.initial for q in B.initial]
    accepting = [p * m + q for p in A.accepting for q in B.accepting]
    return BuchiNfa._make(n * m, A.alphabet_size, letter_class,
                          rows_by_class, initial, accepting)


def _universal(alphabet_size: int) -> BuchiNfa:
    """One accepting state looping on every letter."""
    return BuchiNfa._make(1, alphabet_size, [0] * alphabet_size, [((0,),)], [0], [0])


_SIM_LIMIT = 1000


def _sim_reduce(A: BuchiNfa) -> BuchiNfa:
    """Quotient and prune by direct simulation.

    q simulates p when q is accepting wherever p is and every successor of
    p is simulated by some successor of q on the same letter.  Merging
    mutually similar states, dropping transitions into states dominated by
    a sibling, and dropping dominated initial states all preserve the
    language: any accepting run maps stepwise to one through the dominating
    states, and direct simulation keeps acceptance at every step.  Automata
    above _SIM_LIMIT states are returned unchanged (the fixpoint is a dense
    n x n computation)."""
    n = A.state_count
    if n <= 1 or n > _SIM_LIMIT:
        return A
    acc = np.zeros(n, dtype=bool)
    acc[list(A.accepting)] = True
    sim = np.ones((n, n), dtype=bool)
    sim[np.ix_(acc, ~acc)] = False
    mats = []
    for rows in A._class_rows:
        t = np.zeros((n, n), dtype=np.float32)
        for p in range(n):
            if rows[p]:
                t[p, list(rows[p])] = 1.0
        mats.append(t)
    while True:
        cur = sim.astype(np.float32)
        new = sim
        for t in mats:
            # can_match[p2, q] = some successor of q simulates p2
            can_match = (cur @ t.T) > 0.5
            blocked = (t @ (~can_match).astype(np.float32)) > 0.5
            new = new & ~blocked
        if (new == sim).all():
            break
        sim = new
    eq = sim & sim.T
    block_of = [int(np.flatnonzero(eq[p])[0]) for p in range(n)]
    reps = sorted(set(block_of))
    dense = {r: i for i, r in enumerate(reps)}
    members: dict[int, list[int]] = {r: [] for r in reps}
    for p in range(n):
        members[block_of[p]].append(p)

    def dominated(targets: set[int]) -> list[int]:
        keep = []
        for b in targets:
            if not any(c != b and sim[b, c] for c in targets):
                keep.append(b)
        return sorted(keep)

    new_rows = []
    for rows in A._class_rows:
        out_rows = []
        for r in reps:
            targets = {block_of[q] for p in members[r] for q in rows[p]}
            out_rows.append(tuple(dense[b] for b in dominated(targets)))
        new_rows.append(tuple(out_rows))
    initial = dominated({block_of[s] for s in A.initial})
    return BuchiNfa._make(
        len(reps),
        A.alphabet_size,
        list(A._letter_class),
        new_rows,
        [dense[b] for b in initial],
        [dense[block_of[s]] for s in A.accepting],
    )


def _satisfiable_product(A: BuchiNfa, B: BuchiNfa) -> bool:
    """Emptiness of the intersection without materializing it.

    Same boolean as is_satisfiable(intersection(A, B)); explores only the
    reachable flagged product.
    """
    if A.alphabet_size != B.alphabet_size:
        raise AlphabetMismatch(
            f"alphabets differ: {A.alphabet_size} vs {B.alphabet_size}"
        )
    if not A.initial or not B.initial:
        return False
    pair_classes: dict[tuple[int, int], int] = {}
    pairs: list[tuple[int, int]] = []
    for a in range(A.alphabet_size):
        combo = (A._letter_class[a], B._letter_class[a])
        if combo not in pair_classes:
            pair_classes[combo] = len(pairs)
            pairs.append(combo)
    acc_a = A.accepting
    acc_b = B.accepting

    def succ(node):
        flag, p, q = node
        if flag and p in acc_a:
            nf = 0
        elif not flag and q in acc_b:
            nf = 1
        else:
            nf = flag
        out = []
        for ca, cb in pairs:
            for p2 in A._class_rows[ca][p]:
                for q2 in B._class_rows[cb][q]:
                    out.append((nf, p2, q2))
        return out

    start = [(0, p, q) for p in sorted(A.initial) for q in sorted(B.initial)]
    seen = set(start)
    order = list(start)
    i = 0
    while i < len(order):
        node = order[i]
        i += 1
        for nxt in succ(node):
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
    adj = {node: tuple(sorted(set(succ(node)))) for node in order}
    comp, has_cycle = _strongly_connected(order, lambda v: adj[v])
    return any(
        has_cycle[comp[node]] and node[0] == 1 and node[1] in acc_a
        for node in order
    )


# -- text formats ---------------------------------------------------------------


def format_nfa(A: BuchiNfa) -> str:
    lines = [
        f"nfa {A.state_count} {A.alphabet_size}",
        "initial " + " ".join(str(s) for s in sorted(A.initial)),
        "accepting " + " ".join(str(s) for s in sorted(A.accepting)),
    ]
    for p, a, q in sorted(A.transitions):
        lines.append(f"trans {p} {a} {q}")
    return "\n".join(line.rstrip() for line in lines) + "\n"


def parse_nfa(text: str) -> BuchiNfa:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise ValueError("expected header line 'nfa <states> <alphabet>'")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "nfa":
        raise ValueError("expected header line 'nfa <states> <alphabet>'")
    try:
        state_count, alphabet_size = int(head[1]), int(head[2])
    except ValueError:
        raise ValueError("expected header line 'nfa <states> <alphabet>'") from None
    fields: dict[str, list[int]] = {}
    transitions = []
    for line in lines[1:]:
        toks = line.split()
        if toks[0] in ("initial", "accepting"):
            fields[toks[0]] = [int(t) for t in toks[1:]]
        elif toks[0] == "trans":
            if len(toks) != 4:
                raise ValueError(f"bad transition line: {line!r}")
            transitions.append(tuple(int(t) for t in toks[1:]))
        else:
            raise ValueError(f"unrecognized line: {line!r}")
    return BuchiNfa(
        state_count,
        alphabet_size,
        transitions,
        fields.get("initial", []),
        fields.get("accepting", []),
    )


def format_dot(A: BuchiNfa, name: str = "nfa") -> str:
    out = [f"digraph {name} {{", "  rankdir=LR;"]
    for s in sorted(A.initial):
        out.append(f'  start{s} [shape=point, label=""];')
        out.append(f"  start{s} -> s{s};")
    for s in range(A.state_count):
        shape = "doublecircle" if s in A.accepting else "circle"
        out.append(f'  s{s} [shape={shape}, label="{s}"];')
    by_edge: dict[tuple[int, int], list[int]] = {}
    for p, a, q in sorted(A.transitions):
        by_edge.setdefault((p, q), []).append(a)
    for (p, q), letters in sorted(by_edge.items()):
        label = ",".join(str(a) for a in sorted(letters))
        out.append(f'  s{p} -> s{q} [label="{label}"];')
    out.append("}")
    return "\n".join(out) + "\n"
