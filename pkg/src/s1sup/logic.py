"""Monadic second order logic of one successor, over ultimately periodic
interpretations.

Two abstract syntaxes live here.  The minimal one has set variables only:
ordering and inclusion atoms, conjunction, negation and set quantification.
The full one adds first order (position) variables, with ordering and
membership atoms and both quantifier sorts; reduce_full rewrites it into
the minimal syntax by encoding positions as singleton sets.

Formulas are compiled to Buchi automata over the alphabet of variable
bitmasks; one letter fixes the membership bit of every variable at one
position.  Satisfiability, model checking and witness extraction all go
through that compilation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import buchi
from .buchi import BuchiNfa, Match
from .complement import DEFAULT_MAX_COLORS, complement
from .semigroup import UpWord, up_at, up_equiv


class UnknownVariable(ValueError):
    """A formula or interpretation mentions a variable outside the declared list."""


class UnassignedVariable(ValueError):
    """An interpretation misses values for free variables."""

    def __init__(self, names: Sequence[str]):
        super().__init__("unassigned variables: " + ", ".join(names))
        self.names = tuple(names)


class NonSingletonWitness(RuntimeError):
    """A decoded first order value was not a singleton set; indicates a bug
    in the reduction or the solver."""

    def __init__(self, var: str, word: UpWord):
        super().__init__(f"witness for {var} is not a singleton: {word}")
        self.var = var
        self.word = word


# -- abstract syntax -------------------------------------------------------------


@dataclass(frozen=True)
class Less:
    left: str
    right: str


@dataclass(frozen=True)
class Incl:
    left: str
    right: str


@dataclass(frozen=True)
class And:
    left: "MinFormula"
    right: "MinFormula"


@dataclass(frozen=True)
class Not:
    sub: "MinFormula"


@dataclass(frozen=True)
class Ex2:
    var: str
    sub: "MinFormula"


MinFormula = Less | Incl | And | Not | Ex2


@dataclass(frozen=True)
class FoLess:
    left: str
    right: str


@dataclass(frozen=True)
class FoIn:
    elem: str
    container: str


@dataclass(frozen=True)
class FoAnd:
    left: "FullFormula"
    right: "FullFormula"


@dataclass(frozen=True)
class FoNot:
    sub: "FullFormula"


@dataclass(frozen=True)
class FoEx1:
    var: str
    sub: "FullFormula"


@dataclass(frozen=True)
class FoEx2:
    var: str
    sub: "FullFormula"


FullFormula = FoLess | FoIn | FoAnd | FoNot | FoEx1 | FoEx2


def free_min(phi: MinFormula) -> frozenset[str]:
    if isinstance(phi, (Less, Incl)):
        return frozenset((phi.left, phi.right))
    if isinstance(phi, And):
        return free_min(phi.left) | free_min(phi.right)
    if isinstance(phi, Not):
        return free_min(phi.sub)
    if isinstance(phi, Ex2):
        return free_min(phi.sub) - {phi.var}
    raise TypeError(f"not a minimal formula: {phi!r}")


def free_full(phi: FullFormula) -> tuple[frozenset[str], frozenset[str]]:
    """Free variables, split into (first order, second order)."""
    if isinstance(phi, FoLess):
        return frozenset((phi.left, phi.right)), frozenset()
    if isinstance(phi, FoIn):
        return frozenset((phi.elem,)), frozenset((phi.container,))
    if isinstance(phi, FoAnd):
        l1, l2 = free_full(phi.left)
        r1, r2 = free_full(phi.right)
        return l1 | r1, l2 | r2
    if isinstance(phi, FoNot):
        return free_full(phi.sub)
    if isinstance(phi, FoEx1):
        s1, s2 = free_full(phi.sub)
        return s1 - {phi.var}, s2
    if isinstance(phi, FoEx2):
        s1, s2 = free_full(phi.sub)
        return s1, s2 - {phi.var}
    raise TypeError(f"not a full formula: {phi!r}")


# -- interpretations --------------------------------------------------------------


@dataclass
class UpInterpretation:
    """Variable assignment: sets map to ultimately periodic bit words,
    positions to natural numbers.  Treated as immutable by convention."""

    sets: dict[str, UpWord] = field(default_factory=dict)
    nums: dict[str, int] = field(default_factory=dict)


def number_word(i: int) -> UpWord:
    """The singleton set {i} as a bit word."""
    if i < 0:
        raise ValueError("positions are nonnegative")
    return UpWord((0,) * i + (1,), (0,))


def encode_interp(interp: UpInterpretation) -> UpInterpretation:
    """Replace every position value by its singleton set."""
    sets = dict(interp.sets)
    for name, i in interp.nums.items():
        sets[name] = number_word(i)
    return UpInterpretation(sets=sets, nums={})


@dataclass(frozen=True)
class SetAlphabet:
    """Alphabet of variable bitmasks: bit i of a letter is the membership
    of the i-th variable at the current position."""

    variables: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")

    @property
    def size(self) -> int:
        return 1 << len(self.variables)

    def bit(self, name: str) -> int:
        try:
            return 1 << self.variables.index(name)
        except ValueError:
            raise UnknownVariable(f"variable {name} not declared") from None

    def flip_pairs(self, name: str) -> list[tuple[int, int]]:
        """Letter pairs equal everywhere except on one variable's bit."""
        b = self.bit(name)
        return [(a, a ^ b) for a in range(self.size)]


def interp_to_upword(interp: UpInterpretation, variables: Sequence[str]) -> UpWord:
    """Align all assigned set words to a common shape and pack the bits.

    The common prefix is the longest prefix, the common period the lcm of
    the period lengths.  Unassigned variables read as empty sets.
    """
    if interp.nums:
        raise ValueError("encode position variables before packing")
    alpha = SetAlphabet(tuple(variables))
    for name in interp.sets:
        if name not in variables:
            raise UnknownVariable(f"variable {name} not declared")
    words = {name: interp.sets.get(name) for name in variables}
    pre = 1
    per = 1
    for w in words.values():
        if w is not None:
            pre = max(pre, len(w.prefix))
            per = math.lcm(per, len(w.period))

    def letter(n: int) -> int:
        mask = 0
        for i, name in enumerate(variables):
            w = words[name]
            if w is not None and up_at(w, n):
                mask |= 1 << i
        return mask

    prefix = tuple(letter(n) for n in range(pre))
    period = tuple(letter(n) for n in range(pre, pre + per))
    return UpWord(prefix, period)


def upword_to_interp(sigma: UpWord, variables: Sequence[str]) -> UpInterpretation:
    """Unpack a letter word into one bit word per variable."""
    sets = {}
    for i, name in enumerate(variables):
        sets[name] = UpWord(
            tuple(a >> i & 1 for a in sigma.prefix),
            tuple(a >> i & 1 for a in sigma.period),
        )
    return UpInterpretation(sets=sets)


# -- atoms and translation ---------------------------------------------------------


def atom_incl_nfa(variables: Sequence[str], left: str, right: str) -> BuchiNfa:
    """One looping state that refuses letters putting left outside right."""
    alpha = SetAlphabet(tuple(variables))
    bl, br = alpha.bit(left), alpha.bit(right)
    transitions = [
        (0, a, 0) for a in range(alpha.size) if not (a & bl and not a & br)
    ]
    return BuchiNfa(1, alpha.size, transitions, [0], [0])


def atom_less_nfa(variables: Sequence[str], left: str, right: str) -> BuchiNfa:
    """Three states: wait for a left position, then wait for a strictly
    later right position, then loop."""
    alpha = SetAlphabet(tuple(variables))
    bl, br = alpha.bit(left), alpha.bit(right)
    transitions = []
    for a in range(alpha.size):
        transitions.append((0, a, 0))
        transitions.append((1, a, 1))
        transitions.append((2, a, 2))
        if a & bl:
            transitions.append((0, a, 1))
        if a & br:
            transitions.append((1, a, 2))
    return BuchiNfa(3, alpha.size, transitions, [0], [2])


def _compact(A: BuchiNfa) -> BuchiNfa:
    # each pass preserves the language; passes enable each other, so loop
    out = buchi._trim(A)
    while True:
        before = (out.state_count, out._class_rows, out.initial)
        out = buchi._bisim_quotient(out)
        out = buchi._bisim_quotient_bw(out)
        out = buchi._sim_reduce(out)
        if (out.state_count, out._class_rows, out.initial) == before:
            return out
        out = buchi._trim(out)


def _negate(A: BuchiNfa, max_colors: int) -> BuchiNfa:
    """Complement dispatch for the translation pipeline.

    Deterministic and weak operands admit small exact complements; nested
    quantifiers blow the profile-semigroup budget without them.  The
    general construction stays the fallback, so every route recognizes the
    same language.
    """
    if buchi.is_deterministic(A):
        return _compact(buchi.complement_deterministic(A))
    if buchi.is_weak(A):
        try:
            return _compact(buchi.complement_weak(A))
        except buchi.BreakpointBudget:
            pass
    return _compact(complement(A, max_colors=max_colors))


def _conjoin(A: BuchiNfa, B: BuchiNfa) -> BuchiNfa:
    # the plain product is exact for weak operands and keeps them weak,
    # which later negations rely on; otherwise use the two-copy product
    if buchi.is_weak(A) and buchi.is_weak(B):
        return _compact(buchi.product_weak(A, B))
    return _compact(buchi.intersection(A, B))


def translate(
    phi: MinFormula,
    variables: Sequence[str],
    max_colors: int = DEFAULT_MAX_COLORS,
    stats: list | None = None,
) -> BuchiNfa:
    """Compile a minimal formula to a Buchi automaton over the variable
    alphabet.  The automaton accepts exactly the packed interpretations
    satisfying the formula, on ultimately periodic words.

    Intermediate results are trimmed and quotiented by bisimulation, which
    never changes the language but keeps negations affordable.  When stats
    is a list, one (formula, state count) entry is appended per node in
    postorder.
    """
    alpha = SetAlphabet(tuple(variables))

    def go(node: MinFormula) -> BuchiNfa:
        if isinstance(node, Incl):
            out = atom_incl_nfa(variables, node.left, node.right)
        elif isinstance(node, Less):
            out = atom_less_nfa(variables, node.left, node.right)
        elif isinstance(node, And):
            out = _conjoin(go(node.left), go(node.right))
        elif isinstance(node, Not):
            out = _negate(go(node.sub), max_colors)
        elif isinstance(node, Ex2):
            out = _compact(buchi.ex_project(go(node.sub), alpha.flip_pairs(node.var)))
        else:
            raise TypeError(f"not a minimal formula: {node!r}")
        if stats is not None:
            stats.append((node, out.state_count))
        return out

    return go(phi)


def models_up(
    interp: UpInterpretation,
    phi: MinFormula,
    variables: Sequence[str],
    max_colors: int = DEFAULT_MAX_COLORS,
) -> bool:
    """Does the interpretation satisfy the formula?"""
    missing = sorted(free_min(phi) - set(interp.sets))
    if missing:
        raise UnassignedVariable(missing)
    if interp.nums:
        raise ValueError("minimal formulas take set assignments only")
    word = interp_to_upword(interp, variables)
    return buchi.membership_up(translate(phi, variables, max_colors=max_colors), word)


def models_up_direct(interp: UpInterpretation, phi: MinFormula) -> bool:
    """Quantifier free model check straight from the definitions, used to
    cross check the automaton route.  Atom truth is decided on an initial
    segment long enough to cover one full joint period twice."""
    missing = sorted(free_min(phi) - set(interp.sets))
    if missing:
        raise UnassignedVariable(missing)

    def eval_node(node: MinFormula) -> bool:
        if isinstance(node, (Less, Incl)):
            x = interp.sets[node.left]
            y = interp.sets[node.right]
            bound = max(len(x.prefix), len(y.prefix)) + 2 * math.lcm(
                len(x.period), len(y.period)
            )
            if isinstance(node, Incl):
                return all(
                    not (up_at(x, n) and not up_at(y, n)) for n in range(bound)
                )
            return any(
                up_at(x, m) and any(up_at(y, n) for n in range(m + 1, bound))
                for m in range(bound)
            )
        if isinstance(node, And):
            return eval_node(node.left) and eval_node(node.right)
        if isinstance(node, Not):
            return not eval_node(node.sub)
        raise ValueError("direct evaluation handles quantifier free formulas only")

    return eval_node(phi)


def sat_min(
    phi: MinFormula,
    variables: Sequence[str],
    max_colors: int = DEFAULT_MAX_COLORS,
) -> UpInterpretation | None:
    """A satisfying interpretation for the free variables, or None."""
    m = buchi.find_match(translate(phi, variables, max_colors=max_colors))
    if m is None:
        return None
    decoded = upword_to_interp(m.word(), variables)
    free = free_min(phi)
    return UpInterpretation(
        sets={name: w for name, w in decoded.sets.items() if name in free}
    )


def ex2_witness(
    phi: Ex2,
    interp: UpInterpretation,
    variables: Sequence[str],
    max_colors: int = DEFAULT_MAX_COLORS,
) -> UpInterpretation | None:
    """For interp satisfying Ex2(X, body), an interpretation that satisfies
    the body and differs from interp only on X.  None when interp does not
    satisfy the quantified formula.

    The match over the projected automaton is relabeled step by step back
    to letters the body automaton allows; the projection only ever touched
    X's bit, so the relabeled word agrees with interp everywhere else.
    """
    if not isinstance(phi, Ex2):
        raise TypeError("ex2_witness needs a quantified formula")
    alpha = SetAlphabet(tuple(variables))
    body_aut = translate(phi.sub, variables, max_colors=max_colors)
    proj = buchi.ex_project(body_aut, alpha.flip_pairs(phi.var))
    sigma = interp_to_upword(interp, variables)
    m = buchi.match_for_up(proj, sigma)
    if m is None:
        return None
    bit = alpha.bit(phi.var)

    def relabel(word, path):
        out = []
        for i, b in enumerate(word):
            p, q = path[i], path[i + 1]
            for a in (b, b ^ bit):
                if q in body_aut.successors(p, a):
                    out.append(a)
                    break
            else:
                raise AssertionError("projected step has no source letter")
        return tuple(out)

    witness_word = UpWord(relabel(m.stem, m.stem_path), relabel(m.loop, m.loop_path))
    decoded = upword_to_interp(witness_word, variables)
    free = free_min(phi.sub)
    return UpInterpretation(
        sets={name: w for name, w in decoded.sets.items() if name in free}
    )


# -- full syntax reduction ----------------------------------------------------------


def sing(x: str, helper: str) -> MinFormula:
    """x is a singleton: no two members, at least one member."""
    return And(Not(Less(x, x)), Ex2(helper, Less(x, helper)))


def _fresh_helper(taken: Iterable[str]) -> str:
    taken = set(taken)
    name = "_s"
    while name in taken:
        name += "_"
    return name


def reduce_full(
    phi: FullFormula, first_order: Sequence[str], second_order: Sequence[str]
) -> tuple[MinFormula, tuple[str, ...]]:
    """Encode a full formula into the minimal syntax.

    Position variables become set variables constrained to singletons:
    each first order quantifier guards its body and every free first order
    variable is guarded at the top.  Returns the formula and the variable
    list, the declared variables plus one helper."""
    helper = _fresh_helper(list(first_order) + list(second_order))

    def go(node: FullFormula) -> MinFormula:
        if isinstance(node, FoLess):
            return Less(node.left, node.right)
        if isinstance(node, FoIn):
            return Incl(node.elem, node.container)
        if isinstance(node, FoAnd):
            return And(go(node.left), go(node.right))
        if isinstance(node, FoNot):
            return Not(go(node.sub))
        if isinstance(node, FoEx1):
            return Ex2(node.var, And(sing(node.var, helper), go(node.sub)))
        if isinstance(node, FoEx2):
            return Ex2(node.var, go(node.sub))
        raise TypeError(f"not a full formula: {node!r}")

    out = go(phi)
    free_fo, _ = free_full(phi)
    for x in reversed([x for x in first_order if x in free_fo]):
        out = And(sing(x, helper), out)
    return out, tuple(first_order) + tuple(second_order) + (helper,)


def models_full_up(
    interp: UpInterpretation,
    phi: FullFormula,
    first_order: Sequence[str],
    second_order: Sequence[str],
    max_colors: int = DEFAULT_MAX_COLORS,
) -> bool:
    """Model checking for the full syntax, via the reduction."""
    free_fo, free_so = free_full(phi)
    missing = sorted(free_fo - set(interp.nums)) + sorted(free_so - set(interp.sets))
    if missing:
        raise UnassignedVariable(missing)
    reduced, variables = reduce_full(phi, first_order, second_order)
    return models_up(encode_interp(interp), reduced, variables, max_colors=max_colors)


def decode_number(var: str, word: UpWord) -> int:
    """Position of the single member of a singleton set word."""
    if any(word.period):
        raise NonSingletonWitness(var, word)
    ones = [n for n, b in enumerate(word.prefix) if b]
    if len(ones) != 1:
        raise NonSingletonWitness(var, word)
    return ones[0]


def sat_full(
    phi: FullFormula,
    first_order: Sequence[str],
    second_order: Sequence[str],
    max_colors: int = DEFAULT_MAX_COLORS,
) -> UpInterpretation | None:
    """A satisfying interpretation of the free variables, positions decoded
    back from their singleton encodings, or None."""
    reduced, variables = reduce_full(phi, first_order, second_order)
    found = sat_min(reduced, variables, max_colors=max_colors)
    if found is None:
        return None
    free_fo, free_so = free_full(phi)
    nums = {}
    sets = {}
    for name, word in found.sets.items():
        if name in free_fo:
            nums[name] = decode_number(name, word)
        elif name in free_so:
            sets[name] = word
    return UpInterpretation(sets=sets, nums=nums)
