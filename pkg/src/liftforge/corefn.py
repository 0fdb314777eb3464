"""Truth-table and ANF core for Boolean local rules of small arity.

A rule is a Boolean function f(x1..xk) stored as a packed truth table:
bit v of the table is f(v), where bit i of the index v holds the value
of variable x_{i+1} (x1 is the least significant bit).  Rules are kept
normalized: the window is trimmed so that f depends on both x1 and xk,
and the number of positions the window slid during trimming is recorded
in ``shift``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

MAX_DIAMETER = 24


class LiftforgeError(Exception):
    """Base class for all errors raised by this package."""


class InvalidRuleError(LiftforgeError):
    pass


class ArityCapError(LiftforgeError):
    """An operation would need a truth table wider than the configured cap."""


def bitmask(n: int) -> int:
    return (1 << n) - 1


# ---------------------------------------------------------------------------
# packed-table helpers


def table_to_array(table: int, k: int) -> np.ndarray:
    """Unpack a truth-table integer into a uint8 array of length 2**k."""
    size = 1 << k
    buf = table.to_bytes((size + 7) // 8, "little")
    return np.unpackbits(np.frombuffer(buf, dtype=np.uint8), bitorder="little")[:size]


def array_to_table(arr: np.ndarray) -> int:
    bits = np.packbits(np.asarray(arr, dtype=np.uint8), bitorder="little")
    return int.from_bytes(bits.tobytes(), "little")


@lru_cache(maxsize=64)
def _var_zero_mask(i: int, k: int) -> int:
    """Bitmask over table indices v (k-bit) selecting those with bit i == 0."""
    block = bitmask(1 << i)
    period = 1 << (i + 1)
    size = 1 << k
    reps = (1 << size) - 1
    reps //= (1 << period) - 1  # 0..010..01 pattern, one 1 per period
    return block * reps


def essential_vars(table: int, k: int) -> int:
    """Bitmask of 0-based variable indices the table actually depends on."""
    ess = 0
    for i in range(k):
        m = _var_zero_mask(i, k)
        if ((table >> (1 << i)) ^ table) & m:
            ess |= 1 << i
    return ess


# ---------------------------------------------------------------------------
# rules


@dataclass(frozen=True)
class Rule:
    """A normalized local rule: tight diameter k, packed table, window shift.

    ``shift`` records how far the window slid during normalization (the
    offset needed to re-align the rule's induced map with the map of the
    raw table it came from); it accumulates through compositions and is
    ignored by value equality of the underlying Boolean function.
    """

    k: int
    table: int
    shift: int = 0

    def __post_init__(self):
        if not 1 <= self.k <= MAX_DIAMETER:
            raise InvalidRuleError(f"diameter {self.k} outside 1..{MAX_DIAMETER}")
        if not 0 <= self.table < (1 << (1 << self.k)):
            raise InvalidRuleError("table does not fit 2**k bits")

    # -- basic accessors ---------------------------------------------------

    def table_array(self) -> np.ndarray:
        return table_to_array(self.table, self.k)

    def bit(self, v: int) -> int:
        return (self.table >> v) & 1

    def __call__(self, v: int) -> int:
        return (self.table >> v) & 1

    def same_function(self, other: "Rule") -> bool:
        """True if both rules compute the same Boolean function (shift ignored)."""
        return self.k == other.k and self.table == other.table

    def text(self) -> str:
        return rule_to_text(self)

    def __str__(self) -> str:
        return rule_to_text(self)


def _normalize(k: int, table: int, shift: int = 0) -> Rule:
    """Trim a raw k-variable table to its tight window and record the slide."""
    if k < 1:
        raise InvalidRuleError("rule must have at least one variable")
    ess = essential_vars(table, k)
    if ess == 0:
        raise InvalidRuleError("constant rule: diameter undefined")
    i0 = (ess & -ess).bit_length() - 1
    j0 = ess.bit_length() - 1
    k2 = j0 - i0 + 1
    if k2 == k:
        return Rule(k, table, shift)
    if i0 == 0:
        # only trailing variables dropped: keep the low 2**k2 entries
        return Rule(k2, table & bitmask(1 << k2), shift)
    arr = table_to_array(table, k)
    sub = arr[0 : (1 << k2) << i0 : 1 << i0]
    return Rule(k2, array_to_table(sub), shift - i0)


def rule_from_table(k: int, table) -> Rule:
    """Build a normalized Rule from a diameter-k truth table.

    ``table`` may be a packed integer or a sequence of 2**k bits indexed by
    the input word v (x1 = least significant bit of v).
    """
    if not 1 <= k <= MAX_DIAMETER:
        raise InvalidRuleError(f"diameter {k} outside 1..{MAX_DIAMETER}")
    if isinstance(table, (int, np.integer)):
        t = int(table)
        if not 0 <= t < (1 << (1 << k)):
            raise InvalidRuleError("table does not fit 2**k bits")
    else:
        arr = np.asarray(table, dtype=np.uint8)
        if arr.shape != ((1 << k),):
            raise InvalidRuleError(
                f"table length {arr.size} does not match 2**{k} = {1 << k}"
            )
        if np.any(arr > 1):
            raise InvalidRuleError("table entries must be bits")
        t = array_to_table(arr)
    return _normalize(k, t)


def rule_to_text(r: Rule) -> str:
    digits = max(1, (1 << r.k) // 4)
    return f"{r.k}:{r.table:0{digits}X}"


def rule_from_text(s: str) -> Rule:
    m = re.fullmatch(r"\s*(\d+)\s*:\s*([0-9a-fA-F]+)\s*", s)
    if not m:
        raise InvalidRuleError(f"bad rule literal {s!r}; expected 'k:HEX'")
    return rule_from_table(int(m.group(1)), int(m.group(2), 16))


IDENTITY = Rule(1, 0b10, 0)


def is_identity(r: Rule) -> bool:
    return r.k == 1 and r.table == 0b10


# ---------------------------------------------------------------------------
# the elementary equivalence group: variable reversal and complementation


def reverse(r: Rule) -> Rule:
    """f'(x1..xk) = f(xk..x1)."""
    k = r.k
    idx = np.arange(1 << k, dtype=np.uint32)
    rev = np.zeros_like(idx)
    for b in range(k):
        rev |= ((idx >> b) & 1) << (k - 1 - b)
    return Rule(k, array_to_table(r.table_array()[rev]), 0)


def complement(r: Rule) -> Rule:
    """f'(x) = f(x XOR 1...1) XOR 1."""
    arr = r.table_array()[::-1] ^ 1
    return Rule(r.k, array_to_table(arr), 0)


def orbit(r: Rule) -> tuple[Rule, ...]:
    """The distinct members of r's orbit under {id, reverse, complement, both}."""
    seen: dict[int, Rule] = {}
    for cand in (Rule(r.k, r.table, 0), reverse(r), complement(r), complement(reverse(r))):
        seen.setdefault(cand.table, cand)
    return tuple(seen[t] for t in sorted(seen))


def _lex_key(table: int, k: int) -> int:
    """Key whose integer order equals lexicographic order of (f(0), f(1), ...)."""
    size = 1 << k
    return int(f"{table:0{size}b}"[::-1], 2)


@dataclass(frozen=True)
class EquivClassId:
    """Canonical representative of a rule's elementary equivalence class."""

    k: int
    canon: int

    def text(self) -> str:
        digits = max(1, (1 << self.k) // 4)
        return f"{self.k}:{self.canon:0{digits}X}"

    def rule(self) -> Rule:
        return Rule(self.k, self.canon, 0)


def canonicalize(r: Rule) -> EquivClassId:
    """Class id: the lexicographically smallest table in the 4-element orbit."""
    best = None
    best_key = None
    for cand in orbit(r):
        key = _lex_key(cand.table, cand.k)
        if best_key is None or key < best_key:
            best_key = key
            best = cand
    return EquivClassId(best.k, best.table)


# ---------------------------------------------------------------------------
# algebraic normal form


@dataclass(frozen=True)
class Anf:
    """XOR of AND-monomials; each monomial is a frozenset of variable indices."""

    monomials: frozenset

    @property
    def degree(self) -> int:
        return max((len(m) for m in self.monomials), default=0)

    def masks(self) -> list[int]:
        out = []
        for m in self.monomials:
            mask = 0
            for v in m:
                mask |= 1 << (v - 1)
            out.append(mask)
        return sorted(out)


def _mobius(arr: np.ndarray, k: int) -> np.ndarray:
    """In-place-style binary Moebius transform (its own inverse)."""
    a = arr.copy()
    for i in range(k):
        step = 1 << i
        view = a.reshape(-1, step << 1)
        view[:, step:] ^= view[:, :step]
    return a


def table_to_anf_masks(table: int, k: int) -> list[int]:
    coeff = _mobius(table_to_array(table, k), k)
    return [int(v) for v in np.nonzero(coeff)[0]]


def anf_masks_to_table(masks, k: int) -> int:
    arr = np.zeros(1 << k, dtype=np.uint8)
    for m in masks:
        arr[m] = 1
    return array_to_table(_mobius(arr, k))


def to_anf(r: Rule) -> Anf:
    monos = []
    for m in table_to_anf_masks(r.table, r.k):
        monos.append(frozenset(i + 1 for i in range(r.k) if (m >> i) & 1))
    return Anf(frozenset(monos))


def from_anf(a: Anf) -> Rule:
    """Rule of an ANF; the window is normalized, so leading absent variables slide away."""
    if not a.monomials:
        raise InvalidRuleError("constant-0 ANF has no diameter")
    k = max((max(m) for m in a.monomials if m), default=0)
    if k == 0:
        raise InvalidRuleError("constant-1 ANF has no diameter")
    return _normalize(k, anf_masks_to_table(a.masks(), k))


def degree(r: Rule) -> int:
    """Algebraic degree of the rule."""
    return max(m.bit_count() for m in table_to_anf_masks(r.table, r.k))


def is_balanced(r: Rule) -> bool:
    return r.table.bit_count() == 1 << (r.k - 1)


# ---------------------------------------------------------------------------
# ANF text format: x1..xk, ^ for XOR, * or juxtaposition for AND,
# complemented factors as (x3^1); parsing accepts full XOR/AND/paren nesting.


def render_anf(a: Anf) -> str:
    if not a.monomials:
        return "0"
    terms = []
    for m in sorted(a.monomials, key=lambda m: (len(m), sorted(m))):
        if not m:
            terms.append("1")
        else:
            terms.append("*".join(f"x{v}" for v in sorted(m)))
    return " ^ ".join(terms)


class AnfSyntaxError(LiftforgeError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} (at position {pos})")
        self.pos = pos


_ANF_TOKEN = re.compile(r"\s*(x\d+|[01()^*]|⊕)")


def _anf_tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _ANF_TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise AnfSyntaxError(f"unexpected character {text[pos]!r}", pos)
            break
        out.append((m.group(1), m.start(1)))
        pos = m.end()
    return out


def parse_anf(text: str) -> Anf:
    """Parse a polynomial expression over x1..xk into expanded ANF.

    Accepts nested parentheses, '^' or '⊕' for XOR, '*' or juxtaposition
    for AND, and the constants 0 and 1.
    """
    tokens = _anf_tokens(text)
    n = len(tokens)
    i = 0

    def xor(a: set, b: set) -> set:
        return a ^ b

    def mul(a: set, b: set) -> set:
        out: set = set()
        for m1 in a:
            for m2 in b:
                out ^= {m1 | m2}
        return out

    def parse_expr() -> set:
        nonlocal i
        acc = parse_term()
        while i < n and tokens[i][0] in ("^", "⊕"):
            i += 1
            acc = xor(acc, parse_term())
        return acc

    def parse_term() -> set:
        nonlocal i
        acc = parse_factor()
        while i < n:
            tok = tokens[i][0]
            if tok == "*":
                i += 1
                acc = mul(acc, parse_factor())
            elif tok.startswith("x") or tok in ("0", "1", "("):
                acc = mul(acc, parse_factor())
            else:
                break
        return acc

    def parse_factor() -> set:
        nonlocal i
        if i >= n:
            raise AnfSyntaxError("unexpected end of input", len(text))
        tok, pos = tokens[i]
        if tok == "(":
            i += 1
            inner = parse_expr()
            if i >= n or tokens[i][0] != ")":
                raise AnfSyntaxError("unbalanced parenthesis", pos)
            i += 1
            return inner
        if tok == "0":
            i += 1
            return set()
        if tok == "1":
            i += 1
            return {0}
        if tok.startswith("x"):
            i += 1
            v = int(tok[1:])
            if v < 1:
                raise AnfSyntaxError("variable indices start at x1", pos)
            return {1 << (v - 1)}
        raise AnfSyntaxError(f"unexpected token {tok!r}", pos)

    masks = parse_expr()
    if i < n:
        raise AnfSyntaxError(f"trailing input {tokens[i][0]!r}", tokens[i][1])
    monos = []
    for m in masks:
        monos.append(frozenset(b + 1 for b in range(m.bit_length()) if (m >> b) & 1))
    return Anf(frozenset(monos))


def rule_from_anf_text(text: str) -> Rule:
    return from_anf(parse_anf(text))
