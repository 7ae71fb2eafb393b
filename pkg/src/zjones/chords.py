"""Chord diagrams, four-term relations and the sl2 weight system.

A chord diagram with ``m`` chords is stored as a word of length ``2m`` read
counterclockwise around the circle; each label occurs exactly twice.  The
canonical form is the lexicographically least word over all rotations after
relabelling chords in order of first appearance (no reflections: the circle
is oriented).

``cv_weight`` evaluates the sl2 weight system composed with a central
character, as a polynomial in the Casimir value ``c``, by the
Chmutov-Varchenko recursion.  ``verma_oracle`` computes the same number by
brute force on the highest-weight vector of a Verma module.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import MPoly

C_RING = ("c",)
S_RING = ("s",)

#: per-chord rescaling between the trace-form weight system and the colour
#: normalisation (one chord -> z(z+1)/2)
KAPPA = Fraction(1, 4)


class MalformedDiagramError(ValueError):
    pass


class InvalidPositionsError(ValueError):
    pass


class ResourceBoundError(RuntimeError):
    pass


def _relabel(word: Sequence) -> tuple[int, ...]:
    names: dict = {}
    out = []
    for t in word:
        if t not in names:
            names[t] = len(names) + 1
        out.append(names[t])
    return tuple(out)


def canonical_word(word: Sequence) -> tuple[int, ...]:
    n = len(word)
    if n == 0:
        return ()
    return min(_relabel(word[i:] + word[:i]) for i in range(n))


@dataclass(frozen=True)
class ChordDiagram:
    word: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.word) // 2

    def __str__(self):
        return " ".join(map(str, self.word))

    def chords(self) -> dict[int, tuple[int, int]]:
        pos: dict[int, list[int]] = {}
        for i, t in enumerate(self.word):
            pos.setdefault(t, []).append(i)
        return {t: (p[0], p[1]) for t, p in pos.items()}


def make_diagram(word: Sequence) -> ChordDiagram:
    """Validate and canonicalise a label word."""
    word = list(word)
    counts: dict = {}
    for t in word:
        counts[t] = counts.get(t, 0) + 1
    bad = [t for t, k in counts.items() if k != 2]
    if bad:
        raise MalformedDiagramError(f"labels not occurring exactly twice: {bad}")
    return ChordDiagram(canonical_word(word))


def parse_canonicalize(text: str | Sequence) -> ChordDiagram:
    """``"1 2 1 2"`` (whitespace separated tokens) -> canonical diagram."""
    tokens = text.split() if isinstance(text, str) else list(text)
    return make_diagram(tokens)


def all_diagrams(m: int) -> list[ChordDiagram]:
    """Every canonical diagram with ``m`` chords, sorted."""
    seen = set()

    def matchings(points):
        if not points:
            yield []
            return
        a = points[0]
        for i in range(1, len(points)):
            rest = points[1:i] + points[i + 1:]
            for mt in matchings(rest):
                yield [(a, points[i])] + mt

    for mt in matchings(list(range(2 * m))):
        word = [0] * (2 * m)
        for k, (i, j) in enumerate(mt):
            word[i] = word[j] = k + 1
        seen.add(canonical_word(word))
    return [ChordDiagram(w) for w in sorted(seen)]


def random_word(m: int, rng: random.Random) -> list[int]:
    word = [k for k in range(1, m + 1) for _ in (0, 1)]
    rng.shuffle(word)
    return word


# -- formal sums -----------------------------------------------------------

class DiagramSum(dict):
    """Rational linear combination of canonical diagrams (zero terms dropped)."""

    def add(self, d: ChordDiagram, coef) -> None:
        v = self.get(d, Fraction(0)) + coef
        if v:
            self[d] = v
        else:
            self.pop(d, None)

    def to_json(self) -> dict:
        return {str(d): str(c) for d, c in sorted(self.items(), key=lambda t: t[0].word)}


def four_t_generate(base: ChordDiagram | Sequence, positions: Sequence[int],
                    signs: Sequence[int] = (1, -1, 1, -1)) -> DiagramSum:
    """One generator of the four-term relations.

    The three markers are placed at the distinct indices ``positions`` of a
    word of length ``len(base)+3``; base endpoints fill the remaining slots
    in order.  Chord ``a`` joins markers 1 and 2; chord ``b`` has one end at
    marker 3 and the other end immediately before/after an end of ``a``:

        D(b before a@1) - D(b after a@1) + D(b before a@2) - D(b after a@2)

    ``signs`` exists for negative tests; other patterns are not relations.
    """
    word = list(base.word if isinstance(base, ChordDiagram) else base)
    n = len(word) + 3
    p1, p2, p3 = positions
    if len({p1, p2, p3}) != 3 or not all(0 <= p < n for p in positions):
        raise InvalidPositionsError(f"positions {positions} for {n} slots")
    A, B = "a", "b"
    it = iter(word)
    slots = []
    for i in range(n):
        if i == p1:
            slots.append(("m1",))
        elif i == p2:
            slots.append(("m2",))
        elif i == p3:
            slots.append((B,))
        else:
            slots.append((next(it),))

    def build(at: str, before: bool) -> list:
        out = []
        for sl in slots:
            if sl[0] == at:
                out.extend([B, A] if before else [A, B])
            elif sl[0] in ("m1", "m2"):
                out.append(A)
            else:
                out.append(sl[0])
        return out

    rel = DiagramSum()
    sg = iter(signs)
    for at in ("m1", "m2"):
        rel.add(make_diagram(build(at, True)), next(sg))
        rel.add(make_diagram(build(at, False)), next(sg))
    return rel


def all_four_t(m: int) -> Iterable[DiagramSum]:
    """Every generator with ``m`` total chords (bases of ``m-2`` chords)."""
    for base in all_diagrams(m - 2):
        n = len(base.word) + 3
        for pos in itertools.permutations(range(n), 3):
            yield four_t_generate(base, pos)


# -- Chmutov-Varchenko recursion ------------------------------------------

def _crossing(chords: dict, a) -> list:
    i, j = chords[a]
    return [b for b, (k, l) in chords.items() if b != a and ((i < k < j) != (i < l < j))]


def _reconnect(word: list, a, b, c, cross: bool) -> list:
    """Remove ``a, b, c``; join ends of ``b, c`` across or along the arcs of ``a``."""
    i, j = [k for k, t in enumerate(word) if t == a]

    def ends(x):
        k, l = [p for p, t in enumerate(word) if t == x]
        return (k, l) if i < k < j else (l, k)  # (inside arc, outside arc)

    eb, fb = ends(b)
    ec, fc = ends(c)
    new = list(word)
    x, y = ("x", "y")
    if cross:
        new[eb], new[fc], new[ec], new[fb] = x, x, y, y
    else:
        new[eb], new[ec], new[fb], new[fc] = x, x, y, y
    return [t for k, t in enumerate(new) if k not in (i, j)]


class CVWeight:
    """Memoised recursion; one instance per worker."""

    #: sign of the pair term: 2*sum [W(across) - W(along)] with the
    #: across/along reconnection of ``_reconnect``; fixed by the Verma oracle
    PAIR_SIGN = -1

    def __init__(self):
        self.memo: dict[tuple, MPoly] = {(): MPoly.const(C_RING, 1)}
        self.c = MPoly.var(C_RING, "c")

    def __call__(self, d: ChordDiagram | Sequence, pivot=None) -> MPoly:
        word = d.word if isinstance(d, ChordDiagram) else canonical_word(list(d))
        if pivot is None:
            hit = self.memo.get(word)
            if hit is not None:
                return hit
        val = self._expand(list(word), pivot)
        if pivot is None:
            self.memo[word] = val
        return val

    def _eval(self, word: list) -> MPoly:
        return self(canonical_word(word))

    def _expand(self, word: list, pivot=None) -> MPoly:
        chords = {}
        for k, t in enumerate(word):
            chords.setdefault(t, []).append(k)
        if pivot is None:
            pivot = min(chords, key=lambda t: (len(_crossing(chords, t)), chords[t]))
        elif pivot not in chords:
            raise KeyError(pivot)
        cr = _crossing(chords, pivot)
        rest = self._eval([t for t in word if t != pivot])
        val = rest * (self.c - 2 * len(cr))
        for b, c in itertools.combinations(cr, 2):
            x = self._eval(_reconnect(word, pivot, b, c, True))
            p = self._eval(_reconnect(word, pivot, b, c, False))
            val = val + (x - p) * (2 * self.PAIR_SIGN)
        return val


_default = CVWeight()


def cv_weight(d: ChordDiagram | Sequence, pivot=None) -> MPoly:
    """sl2 weight system value as a polynomial in the Casimir value ``c``."""
    return _default(d, pivot)


def casimir_to_s(p: MPoly) -> MPoly:
    """``c -> (s^2 - 1)/2``."""
    s = MPoly.var(S_RING, "s")
    c_val = (s * s - 1) * Fraction(1, 2)
    out = MPoly(S_RING)
    for k, part in p.univariate_coeffs("c").items():
        out = out + c_val ** k * part.constant_term()
    return out


def weight_character(d: ChordDiagram | Sequence | DiagramSum) -> MPoly:
    """Colour-normalised weight: ``KAPPA^m * cv_weight`` at ``c = (s^2-1)/2``."""
    if isinstance(d, DiagramSum):
        out = MPoly(S_RING)
        for diag, coef in d.items():
            out = out + weight_character(diag) * coef
        return out
    if not isinstance(d, ChordDiagram):
        d = make_diagram(d)
    return casimir_to_s(cv_weight(d)) * KAPPA ** d.m


# -- brute-force oracle -----------------------------------------------------

#: trace-form tensor E(x)F + F(x)E + H(x)H/2 as (left, right, coefficient)
_TENSOR = (("E", "F", Fraction(1)), ("F", "E", Fraction(1)), ("H", "H", Fraction(1, 2)))


def verma_oracle(d: ChordDiagram | Sequence, max_chords: int = 4) -> MPoly:
    """Scalar of the central element on the Verma module of highest weight s-1.

    Each chord picks one term of the trace-form tensor; the resulting word
    in E, F, H acts on v_0 with v_k = F^k v_0, H v_k = (lam-2k) v_k,
    E v_k = k(lam-k+1) v_{k-1}, lam = s-1.  The v_0 component of the image is
    the answer.
    """
    word = d.word if isinstance(d, ChordDiagram) else list(d)
    labels = sorted(set(word))
    m = len(labels)
    if m > max_chords:
        raise ResourceBoundError(f"{m} chords exceeds oracle bound {max_chords}")
    s = MPoly.var(S_RING, "s")
    lam = s - 1
    first_seen: dict = {}
    for k, t in enumerate(word):
        first_seen.setdefault(t, k)
    total = MPoly(S_RING)
    for choice in itertools.product(range(3), repeat=m):
        pick = dict(zip(labels, choice))
        coef = Fraction(1)
        ops = []
        for k, t in enumerate(word):
            left, right, c = _TENSOR[pick[t]]
            if first_seen[t] == k:
                ops.append(left)
                coef *= c
            else:
                ops.append(right)
        # operators act right to left on v_0
        state = {0: MPoly.const(S_RING, 1)}
        for op in reversed(ops):
            nxt: dict = {}
            for k, v in state.items():
                if op == "H":
                    nxt[k] = nxt.get(k, MPoly(S_RING)) + v * (lam - 2 * k)
                elif op == "F":
                    nxt[k + 1] = nxt.get(k + 1, MPoly(S_RING)) + v
                elif k > 0:
                    nxt[k - 1] = nxt.get(k - 1, MPoly(S_RING)) + v * (lam - (k - 1)) * k
            state = {k: v for k, v in nxt.items() if not v.is_zero()}
            if not state:
                break
        if 0 in state:
            total = total + state[0] * coef
    return total


def casimir_poly_str(p: MPoly) -> str:
    return str(p).replace("*", "")
