"""Landscape notation: parsing, compilation, the pairing criterion, sets,
and full enumeration with class counting.

A landscape is a string over {0, 1, -, ★} with exactly one interior star
and 0/1 at both ends.  Writing s for the 1-based star position, the symbol
at string position p (p != s) is the pattern bit eps_{p-s}; the compiled
rule flips x_s exactly when every defined pattern position matches:

    f(x) = x_s XOR prod over defined d of (x_{s+d} XOR eps_d XOR 1)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .corefn import (
    LiftforgeError,
    Rule,
    _normalize,
    array_to_table,
    bitmask,
    essential_vars,
)

STAR = "★"
DASH = "-"


class InvalidLandscapeError(LiftforgeError):
    def __init__(self, msg: str, text: str = "", pos: Optional[int] = None):
        loc = f" (at position {pos})" if pos is not None else ""
        super().__init__(f"{msg}{loc}" + (f" in {text!r}" if text else ""))
        self.pos = pos


@dataclass(frozen=True)
class Landscape:
    """A validated landscape string; ``s`` is the 1-based star position."""

    symbols: str
    s: int

    @property
    def k(self) -> int:
        return len(self.symbols)

    def offsets(self) -> dict[int, int]:
        """Defined pattern bits keyed by offset d from the star (d != 0)."""
        out = {}
        for p, ch in enumerate(self.symbols, start=1):
            if ch in "01":
                out[p - self.s] = int(ch)
        return out

    def ascii(self) -> str:
        return self.symbols.replace(STAR, "*")

    def __str__(self) -> str:
        return self.symbols


def parse_landscape(text: str) -> Landscape:
    """Parse a landscape; ASCII '*' is accepted for the star."""
    s = text.strip().replace("*", STAR)
    if not s:
        raise InvalidLandscapeError("empty landscape", text)
    star_at = None
    for p, ch in enumerate(s):
        if ch == STAR:
            if star_at is not None:
                raise InvalidLandscapeError("more than one star", text, p)
            star_at = p
        elif ch not in "01-":
            raise InvalidLandscapeError(f"bad symbol {ch!r}", text, p)
    if star_at is None:
        raise InvalidLandscapeError("no star", text)
    if star_at in (0, len(s) - 1):
        raise InvalidLandscapeError("star must be interior", text, star_at)
    if s[0] not in "01":
        raise InvalidLandscapeError("first symbol must be 0 or 1", text, 0)
    if s[-1] not in "01":
        raise InvalidLandscapeError("last symbol must be 0 or 1", text, len(s) - 1)
    return Landscape(s, star_at + 1)


def compile_landscape(l: Landscape) -> Rule:
    """Truth table of the landscape's flip rule (normalized; already tight)."""
    k = l.k
    idx = np.arange(1 << k, dtype=np.uint32)
    match = np.ones(idx.size, dtype=bool)
    for d, e in l.offsets().items():
        p = l.s + d  # 1-based variable index
        match &= ((idx >> np.uint32(p - 1)) & 1) == e
    center = ((idx >> np.uint32(l.s - 1)) & 1).astype(np.uint8)
    table = center ^ match.astype(np.uint8)
    return _normalize(k, array_to_table(table))


# the operation name used throughout the interface docs
compile = compile_landscape


def _masks(l: Landscape) -> tuple[int, int]:
    """(defined, ones) bitmasks over 0-based string positions."""
    D = O = 0
    for p, ch in enumerate(l.symbols):
        if ch in "01":
            D |= 1 << p
            if ch == "1":
                O |= 1 << p
    return D, O


def is_conserved(l: Landscape) -> bool:
    """Pairing criterion: every defined offset d1 admits d2 with the d2-th
    and (d1+d2)-th symbols being 0 and 1 in some order."""
    D, O = _masks(l)
    Z = D & ~O
    q = l.s - 1
    for p1 in range(l.k):
        if not (D >> p1) & 1:
            continue
        t = p1 - q
        if t >= 0:
            found = (Z & (O >> t)) | (O & (Z >> t))
        else:
            found = (Z & (O << -t)) | (O & (Z << -t))
        if not found:
            return False
    return True


def check_shift_product(r: Rule) -> Optional[int]:
    """Smallest j such that f + x_j ignores x_j and all shifted products
    (f(x) + x_j)(f(shifted x) + x_{j+t}) vanish identically; None if no j.

    Success implies the induced maps square to the identity.
    """
    k = r.k
    arr = r.table_array()
    idx_k = np.arange(1 << k, dtype=np.uint32)
    for j in range(1, k + 1):
        g = arr ^ ((idx_k >> np.uint32(j - 1)) & 1).astype(np.uint8)
        g_t = array_to_table(g)
        if g_t == 0:
            return j  # f == x_j exactly; nothing left to depend on
        ess = essential_vars(g_t, k)
        if (ess >> (j - 1)) & 1:
            continue  # f + x_j still depends on x_j
        ok = True
        for d in range(k):
            if not (ess >> d) & 1:
                continue
            t = (d + 1) - j
            if t == 0:
                continue
            span = k + abs(t)
            idx = np.arange(1 << span, dtype=np.uint32)
            if t > 0:
                w1 = idx & np.uint32(bitmask(k))
                w2 = (idx >> np.uint32(t)) & np.uint32(bitmask(k))
            else:
                w1 = (idx >> np.uint32(-t)) & np.uint32(bitmask(k))
                w2 = idx & np.uint32(bitmask(k))
            if np.any(g[w1] & g[w2]):
                ok = False
                break
        if ok:
            return j
    return None


# ---------------------------------------------------------------------------
# sets of landscapes


@dataclass(frozen=True)
class LandscapeSet:
    """Nonempty set of landscapes aligned on their stars."""

    members: tuple[Landscape, ...]

    def __post_init__(self):
        if not self.members:
            raise InvalidLandscapeError("empty landscape set")


def compile_set(S: LandscapeSet | Iterable[Landscape]) -> Rule:
    """Rule flipping the star bit when at least one member pattern matches."""
    members = tuple(S.members if isinstance(S, LandscapeSet) else S)
    if not members:
        raise InvalidLandscapeError("empty landscape set")
    dmin = min(1 - l.s for l in members)
    dmax = max(l.k - l.s for l in members)
    K = dmax - dmin + 1
    s = 1 - dmin  # star position in the combined window
    idx = np.arange(1 << K, dtype=np.uint32)
    flip = np.zeros(idx.size, dtype=bool)
    for l in members:
        match = np.ones(idx.size, dtype=bool)
        for d, e in l.offsets().items():
            p = s + d
            match &= ((idx >> np.uint32(p - 1)) & 1) == e
        flip |= match
    center = ((idx >> np.uint32(s - 1)) & 1).astype(np.uint8)
    return _normalize(K, array_to_table(center ^ flip.astype(np.uint8)))


# ---------------------------------------------------------------------------
# string-level orbit of the elementary equivalence group


def reverse_landscape(l: Landscape) -> Landscape:
    return parse_landscape(l.symbols[::-1])


def complement_landscape(l: Landscape) -> Landscape:
    flipped = l.symbols.translate(str.maketrans("01", "10"))
    return parse_landscape(flipped)


def landscape_orbit(l: Landscape) -> tuple[Landscape, ...]:
    out = {}
    for cand in (
        l,
        reverse_landscape(l),
        complement_landscape(l),
        complement_landscape(reverse_landscape(l)),
    ):
        out.setdefault(cand.symbols, cand)
    return tuple(out[s] for s in sorted(out))


def canonical_symbols(l: Landscape) -> str:
    return min(m.symbols for m in landscape_orbit(l))


# ---------------------------------------------------------------------------
# enumeration

_ENUM_MIN_K = 4
_ENUM_MAX_K = 18
_CHUNK = 1 << 19


def _conserved_counts_for_star(k: int, q: int, collect: bool):
    """Count (and optionally collect) conserved landscapes with 0-based star q.

    Candidates are indexed by 2 end bits plus base-3 digits for the interior
    non-star positions; returns (count, list of (D, O) packed masks).
    """
    interior = [p for p in range(1, k - 1) if p != q]
    n_int = len(interior)
    total = 4 * 3**n_int
    ends_mask = 1 | (1 << (k - 1))
    count = 0
    survivors = []
    ts = [p - q for p in range(k) if p != q]
    for base in range(0, total, _CHUNK):
        m = min(_CHUNK, total - base)
        idx = np.arange(base, base + m, dtype=np.int64)
        D = np.full(m, ends_mask, dtype=np.int64)
        O = (idx & 1) | (((idx >> 1) & 1) << (k - 1))
        rest = idx >> 2
        p3 = 1
        for p in interior:
            digit = (rest // p3) % 3
            p3 *= 3
            D |= (digit < 2).astype(np.int64) << p
            O |= (digit == 1).astype(np.int64) << p
        Z = D & ~O
        bad = np.zeros(m, dtype=bool)
        for t in ts:
            req = ((D >> (q + t)) & 1) == 1
            if t >= 0:
                found = (Z & (O >> t)) | (O & (Z >> t))
            else:
                found = (Z & (O << -t)) | (O & (Z << -t))
            bad |= req & (found == 0)
        good = ~bad
        count += int(good.sum())
        if collect:
            survivors.append(np.stack([D[good], O[good]], axis=1))
    return count, survivors


def _decode(k: int, q: int, D: int, O: int) -> Landscape:
    chars = []
    for p in range(k):
        if p == q:
            chars.append(STAR)
        elif (D >> p) & 1:
            chars.append("1" if (O >> p) & 1 else "0")
        else:
            chars.append(DASH)
    return Landscape("".join(chars), q + 1)


def _fixed_point_count(k: int, transform: str) -> int:
    """Conserved landscapes fixed by string reversal ('rev') or by
    reversal-plus-complement ('rc'); zero for even k (the star cannot sit
    at the center)."""
    if k % 2 == 0:
        return 0
    q = (k - 1) // 2
    half = [p for p in range(q + 1, k - 1)]  # mirror determines p < q
    count = 0
    end_choices = "01"
    for last in end_choices:
        for fill in itertools.product("01-", repeat=len(half)):
            chars = [None] * k
            chars[q] = STAR
            chars[k - 1] = last
            for p, ch in zip(half, fill):
                chars[p] = ch
            for p in range(q):
                src = chars[k - 1 - p]
                if transform == "rev":
                    chars[p] = src
                else:
                    chars[p] = {"0": "1", "1": "0", DASH: DASH}[src]
            if chars[0] not in "01":
                continue
            l = Landscape("".join(chars), q + 1)
            if is_conserved(l):
                count += 1
    return count


@dataclass(frozen=True)
class EnumerationResult:
    k: int
    count: int
    class_count: int
    landscapes: Optional[tuple[Landscape, ...]] = None

    def to_json(self) -> dict:
        return {"k": self.k, "count": self.count, "classes": self.class_count}


def enumerate_conserved(k: int, include_list: bool = True, jobs: int = 1) -> EnumerationResult:
    """All conserved landscapes of length k with exact orbit-class count.

    Class counting uses the string-level orbit via Burnside (reversal and
    reversal-plus-complement fixed points; pure complement never fixes a
    landscape because the defined ends flip), which agrees with rule-level
    canonicalization; the agreement is exercised by the test-suite on small k.
    """
    if not _ENUM_MIN_K <= k <= _ENUM_MAX_K:
        raise LiftforgeError(f"enumeration supports {_ENUM_MIN_K} <= k <= {_ENUM_MAX_K}")
    stars = list(range(1, k - 1))
    count = 0
    chunks = []
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=min(jobs, len(stars))) as pool:
            results = list(pool.map(_conserved_counts_for_star, *zip(*[(k, q, include_list) for q in stars])))
    else:
        results = [_conserved_counts_for_star(k, q, include_list) for q in stars]
    per_star = {}
    for q, (c, surv) in zip(stars, results):
        count += c
        per_star[q] = surv
    f_rev = _fixed_point_count(k, "rev")
    f_rc = _fixed_point_count(k, "rc")
    assert (count + f_rev + f_rc) % 4 == 0
    classes = (count + f_rev + f_rc) // 4
    landscapes = None
    if include_list:
        out = []
        for q in stars:
            for block in per_star[q]:
                for D, O in block:
                    out.append(_decode(k, q, int(D), int(O)))
        landscapes = tuple(out)
    return EnumerationResult(k, count, classes, landscapes)


def conserved_class_representatives(k: int) -> list[Landscape]:
    """One landscape per orbit class, by smallest string in the orbit."""
    res = enumerate_conserved(k, include_list=True)
    reps = {}
    for l in res.landscapes:
        reps.setdefault(canonical_symbols(l), l)
    assert len(reps) == res.class_count
    return [parse_landscape(s) for s in sorted(reps)]
