"""Differential distribution maxima for induced maps, with the 2^(9-n)
scaling convention used by the per-length tables.

The DDT row multiset is invariant under rotating the input difference, so
the maximum over all nonzero differences is taken over necklace
representatives only; the restriction is cross-checked against the full
scan on small lengths by the test-suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .corefn import Rule, bitmask
from .lifting import CapExceededError, induce

DEFAULT_DU_CAP = 14


@lru_cache(maxsize=32)
def necklace_representatives(n: int) -> tuple[int, ...]:
    """Lexicographically-least rotation representatives of n-bit necklaces."""
    x = np.arange(1 << n, dtype=np.uint32)
    best = x.copy()
    m = np.uint32(bitmask(n))
    for c in range(1, n):
        rot = ((x >> np.uint32(c)) | (x << np.uint32(n - c))) & m
        np.minimum(best, rot, out=best)
    reps = np.nonzero(best == x)[0]
    return tuple(int(v) for v in reps)


@dataclass(frozen=True)
class DuEntry:
    n: int
    raw: int
    scaled: Fraction
    witness: tuple[int, int]  # (a, b) achieving the max

    def scaled_str(self) -> str:
        if self.scaled.denominator == 1:
            return str(self.scaled.numerator)
        return f"{self.scaled.numerator}/{self.scaled.denominator}"


@dataclass(frozen=True)
class DuReport:
    rule_text: str
    entries: tuple[DuEntry, ...]

    def raw_values(self) -> list[int]:
        return [e.raw for e in self.entries]

    def scaled_values(self) -> list[Fraction]:
        return [e.scaled for e in self.entries]

    @property
    def stabilized(self) -> Optional[bool]:
        """Whether 2^-n * raw was constant over the last three lengths."""
        if len(self.entries) < 3:
            return None
        tail = [Fraction(e.raw, 1 << e.n) for e in self.entries[-3:]]
        return tail[0] == tail[1] == tail[2]

    def running_max(self) -> Fraction:
        return max(Fraction(e.raw, 1 << e.n) for e in self.entries)

    def to_json(self) -> dict:
        return {
            "rule": self.rule_text,
            "entries": [
                {"n": e.n, "raw": e.raw, "scaled": e.scaled_str(), "a": e.witness[0], "b": e.witness[1]}
                for e in self.entries
            ],
            "stabilized": self.stabilized,
        }


def ddt_max(
    r: Rule, n: int, n_cap: int = DEFAULT_DU_CAP, restrict_necklaces: bool = True
) -> tuple[int, tuple[int, int]]:
    """Maximum DDT entry over nonzero input differences, with a witness."""
    if not r.k <= n <= n_cap:
        raise CapExceededError(f"need k <= n <= {n_cap}, got n={n}")
    F = induce(r, n).as_array()
    x = np.arange(1 << n, dtype=np.uint32)
    best = -1
    wit = (0, 0)
    diffs = necklace_representatives(n) if restrict_necklaces else range(1, 1 << n)
    for a in diffs:
        if a == 0:
            continue
        d = F[x ^ np.uint32(a)] ^ F[x]
        counts = np.bincount(d, minlength=1 << n)
        m = int(counts.max())
        if m > best:
            best = m
            wit = (int(a), int(counts.argmax()))
    return best, wit


def scale(n: int, raw: int) -> Fraction:
    return Fraction(raw) * Fraction(1 << 9, 1 << n) if n > 9 else Fraction(raw * (1 << (9 - n)))


def du_profile(r: Rule, n_from: int, n_to: int, n_cap: int = DEFAULT_DU_CAP) -> DuReport:
    entries = []
    for n in range(max(n_from, r.k), n_to + 1):
        raw, wit = ddt_max(r, n, n_cap)
        entries.append(DuEntry(n, raw, scale(n, raw), wit))
    return DuReport(r.text(), tuple(entries))


@dataclass(frozen=True)
class ScaledTable:
    n_from: int
    n_to: int
    rows: tuple[tuple[str, int, int, tuple[Optional[Fraction], ...]], ...]
    # row = (label, diameter, degree, per-n scaled values; None below the diameter)

    def render_text(self) -> str:
        header = ["function", "k", "deg"] + [f"n={n}" for n in range(self.n_from, self.n_to + 1)]
        lines = ["\t".join(header)]
        for label, k, deg, vals in self.rows:
            cells = ["-" if v is None else (str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}") for v in vals]
            lines.append("\t".join([label, str(k), str(deg)] + cells))
        return "\n".join(lines)

    def render_csv(self) -> str:
        return self.render_text().replace("\t", ",")

    def to_json(self) -> list[dict]:
        out = []
        for label, k, deg, vals in self.rows:
            out.append(
                {
                    "function": label,
                    "k": k,
                    "deg": deg,
                    "scaled": {
                        str(n): (None if v is None else (v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"))
                        for n, v in zip(range(self.n_from, self.n_to + 1), vals)
                    },
                }
            )
        return out


def du_scaled_table(rows: Sequence, n_from: int, n_to: int, n_cap: int = DEFAULT_DU_CAP) -> ScaledTable:
    """Per-length scaled-DU table for expressions or rules.

    ``rows`` holds (label, Rule) pairs, bare Rules, or expression trees from
    :mod:`liftforge.exprlang`.
    """
    from . import exprlang
    from .corefn import degree as rule_degree

    table_rows = []
    for item in rows:
        if isinstance(item, tuple):
            label, rule = item
        elif isinstance(item, Rule):
            label, rule = item.text(), item
        else:
            label, rule = exprlang.print_expr(item), exprlang.eval_expr(item)
        vals: list[Optional[Fraction]] = []
        for n in range(n_from, n_to + 1):
            if n < rule.k:
                vals.append(None)
            else:
                raw, _ = ddt_max(rule, n, n_cap)
                vals.append(scale(n, raw))
        table_rows.append((label, rule.k, rule_degree(rule), tuple(vals)))
    return ScaledTable(n_from, n_to, tuple(table_rows))
