"""Bundled catalog of the 120 diameter-6 composition expressions with their
stated degrees and per-length differential uniformities, plus the
verification harness, the compositional closure search, and the degree-2
composition probe.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

import numpy as np

from .corefn import (
    EquivClassId,
    LiftforgeError,
    Rule,
    canonicalize,
    degree,
    is_balanced,
    orbit,
    table_to_array,
)
from .diffunif import ddt_max
from .exprlang import LiftExpr, eval_expr, parse_expr, print_expr
from .landscape import compile_landscape, enumerate_conserved
from .lifting import DEFAULT_ARITY_CAP, compose, decide_proper, is_lifting

CATALOG_RESOURCE = "appendix_a.tsv"
CATALOG_SHA256 = "bd0be47ea0d5d69c6ef0b6c5bc139cb653b3bd9f0643b9d23811546a657387bb"
CATALOG_SIZE = 120
DEGREE_COUNTS = {3: 1, 4: 42, 5: 77}
DU_RANGE = (6, 12)


class CatalogError(LiftforgeError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    index: int
    text: str
    expr: LiftExpr
    stated_degree: int
    stated_du: Optional[tuple[int, ...]]
    highlight: bool

    def rule(self) -> Rule:
        return eval_expr(self.expr)


def _catalog_bytes() -> bytes:
    return resources.files("liftforge").joinpath("data", CATALOG_RESOURCE).read_bytes()


def load_catalog() -> list[CatalogEntry]:
    """Parse and structurally validate the bundled 120-entry table."""
    raw = _catalog_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    if CATALOG_SHA256 != "PLACEHOLDER" and digest != CATALOG_SHA256:
        raise CatalogError(f"catalog checksum mismatch: {digest}")
    rows = []
    for lineno, line in enumerate(raw.decode("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise CatalogError(f"line {lineno}: expected 3 tab-separated fields")
        text, deg_s, du_s = parts
        du = None if du_s.strip() == "-" else tuple(int(v) for v in du_s.split(","))
        if du is not None and len(du) != DU_RANGE[1] - DU_RANGE[0] + 1:
            raise CatalogError(f"line {lineno}: expected 7 differential-uniformity values")
        rows.append((text, int(deg_s), du))
    if len(rows) != CATALOG_SIZE:
        raise CatalogError(f"expected {CATALOG_SIZE} entries, found {len(rows)}")
    per_degree: dict[int, int] = {}
    for _, d, _ in rows:
        per_degree[d] = per_degree.get(d, 0) + 1
    if per_degree != DEGREE_COUNTS:
        raise CatalogError(f"per-degree counts {per_degree} != {DEGREE_COUNTS}")
    # the two lowest final-column values per degree table are the highlighted ones
    highlights: set[int] = set()
    for d in (4, 5):
        rows_d = [(i, r[2][-1]) for i, r in enumerate(rows) if r[1] == d and r[2]]
        rows_d.sort(key=lambda t: t[1])
        highlights.update(i for i, _ in rows_d[:2])
    out = []
    for i, (text, d, du) in enumerate(rows):
        out.append(CatalogEntry(i, text, parse_expr(text), d, du, i in highlights))
    return out


@dataclass
class Problem:
    index: int
    kind: str
    detail: str

    def __str__(self):
        return f"entry {self.index}: {self.kind}: {self.detail}"


@dataclass
class CatalogReport:
    problems: list[Problem] = field(default_factory=list)
    checked_du_range: Optional[tuple[int, int]] = None

    @property
    def ok(self) -> bool:
        return not self.problems

    def summary(self) -> str:
        if self.ok:
            return "catalog verification clean"
        return "\n".join(str(p) for p in self.problems)


def verify_catalog(
    entries: Optional[list[CatalogEntry]] = None,
    check_du: bool = False,
    du_to: int = 12,
    required_classes=None,
) -> CatalogReport:
    """Check diameter, degree, properness, balance and pairwise class
    distinctness of every entry; optionally the stated per-length
    differential uniformities and containment of a set of class ids."""
    entries = entries if entries is not None else load_catalog()
    report = CatalogReport()
    seen: dict[EquivClassId, int] = {}
    classes = set()
    for e in entries:
        r = e.rule()
        if r.k != 6:
            report.problems.append(Problem(e.index, "diameter", f"got {r.k}"))
            continue
        d = degree(r)
        if d != e.stated_degree:
            report.problems.append(Problem(e.index, "degree", f"stated {e.stated_degree}, computed {d}"))
        if not is_balanced(r):
            report.problems.append(Problem(e.index, "balance", "table is not balanced"))
        cid = canonicalize(r)
        if cid in seen:
            report.problems.append(Problem(e.index, "duplicate-class", f"same class as entry {seen[cid]}"))
        seen[cid] = e.index
        classes.add(cid)
        verdict = decide_proper(r)
        if not verdict.proper:
            report.problems.append(Problem(e.index, "not-proper", verdict.to_json()))
        if check_du and e.stated_du is not None:
            lo = DU_RANGE[0]
            for n in range(lo, du_to + 1):
                raw, _ = ddt_max(r, n)
                stated = e.stated_du[n - lo]
                if raw != stated:
                    report.problems.append(
                        Problem(e.index, "du", f"n={n}: stated {stated}, computed {raw}")
                    )
            report.checked_du_range = (lo, du_to)
    if required_classes is not None:
        missing = set(required_classes) - classes
        for cid in sorted(missing, key=lambda c: c.text()):
            report.problems.append(Problem(-1, "missing-class", cid.text()))
    return report


def catalog_function_pool(entries: Optional[list[CatalogEntry]] = None) -> list[Rule]:
    """Orbit expansion of the catalog classes (all members are constant-free)."""
    entries = entries if entries is not None else load_catalog()
    seen: dict[int, Rule] = {}
    for e in entries:
        for member in orbit(e.rule()):
            seen.setdefault(member.table, member)
    return [seen[t] for t in sorted(seen)]


# ---------------------------------------------------------------------------
# closure search


@dataclass(frozen=True)
class ClosureResult:
    max_diameter: int
    found_classes: frozenset
    discovered_classes: int
    compositions: int
    exhausted: bool

    @property
    def found_count(self) -> int:
        return len(self.found_classes)


def default_generators() -> list[Rule]:
    """All conserved-landscape functions of diameter 4..6 (90 rules)."""
    gens = []
    for k in (4, 5, 6):
        res = enumerate_conserved(k, include_list=True)
        gens.extend(compile_landscape(l) for l in res.landscapes)
    gens.sort(key=lambda r: (r.k, r.table))
    return gens


_REV_IDX: dict[int, np.ndarray] = {}
_ARANGE: dict[int, np.ndarray] = {}


def _rev_index(k: int) -> np.ndarray:
    got = _REV_IDX.get(k)
    if got is None:
        idx = np.arange(1 << k, dtype=np.uint32)
        rev = np.zeros_like(idx)
        for b in range(k):
            rev |= ((idx >> np.uint32(b)) & 1) << np.uint32(k - 1 - b)
        got = _REV_IDX[k] = rev
    return got


def _arange(k: int) -> np.ndarray:
    got = _ARANGE.get(k)
    if got is None:
        got = _ARANGE[k] = np.arange(1 << k, dtype=np.uint32)
    return got


def _compose_arr(ga: np.ndarray, kg: int, fa32: np.ndarray, kf: int) -> tuple[int, np.ndarray]:
    """Array-native compose-and-trim; ``fa32`` is the right table as uint32.

    Returns (diameter, uint8 table array).
    """
    from .corefn import essential_vars

    K = kg + kf - 1
    idx = _arange(K)
    acc = fa32[idx & np.uint32((1 << kf) - 1)].copy()
    mf = np.uint32((1 << kf) - 1)
    for j in range(1, kg):
        acc |= fa32[(idx >> np.uint32(j)) & mf] << np.uint32(j)
    out = ga[acc]
    packed = int.from_bytes(np.packbits(out, bitorder="little").tobytes(), "little")
    ess = essential_vars(packed, K)
    if ess == 0:
        raise LiftforgeError("constant composite")
    i0 = (ess & -ess).bit_length() - 1
    j0 = ess.bit_length() - 1
    k2 = j0 - i0 + 1
    if k2 == K:
        return K, out
    return k2, np.ascontiguousarray(out[0 : (1 << k2) << i0 : 1 << i0])


def _orbit_arrays(arr: np.ndarray, k: int) -> list[np.ndarray]:
    rev = arr[_rev_index(k)]
    comp = arr[::-1] ^ 1
    revcomp = rev[::-1] ^ 1
    uniq: dict[bytes, np.ndarray] = {}
    for a in (arr, rev, comp, revcomp):
        uniq.setdefault(a.tobytes(), a)
    return list(uniq.values())


def _canon_bytes(arr: np.ndarray, k: int) -> bytes:
    return min(a.tobytes() for a in _orbit_arrays(arr, k))


def closure_search(
    max_diameter: int = 8,
    budget: int = 500_000,
    generators: Optional[list[Rule]] = None,
    arity_cap: int = DEFAULT_ARITY_CAP,
) -> ClosureResult:
    """Fixpoint of composing discovered functions, keeping intermediates of
    diameter <= max_diameter and collecting diameter-<=6, degree->=2 classes.

    Intermediates are memoized by equivalence class: reversal and
    complementation both distribute over composition, so composing a class
    representative with every orbit member of the right operand covers every
    class reachable from the underlying function pairs.  Class pairs are
    explored narrow-first (both sides of diameter <= 6 first, then one side,
    then neither), lazily off cursors so no pair queue is materialized.  If
    the composition budget runs out the result is a correct lower bound and
    ``exhausted`` is set.
    """
    if max_diameter < 6:
        raise LiftforgeError("intermediate diameter cap must be >= 6")
    gens = generators if generators is not None else default_generators()

    ks: list[int] = []  # diameter per discovered class
    reps: list[np.ndarray] = []  # canonical representative tables (uint8)
    orbs: list[list[np.ndarray]] = []  # orbit member tables as uint32
    known: set[tuple[int, bytes]] = set()
    found: set[EquivClassId] = set()

    def add(k: int, arr: np.ndarray) -> None:
        if k > max_diameter or k == 1:
            return
        canon = _canon_bytes(arr, k)
        if (k, canon) in known:
            return
        known.add((k, canon))
        rep = np.frombuffer(canon, dtype=np.uint8)
        ks.append(k)
        reps.append(rep)
        orbs.append([m.astype(np.uint32) for m in _orbit_arrays(rep, k)])
        if k <= 6:
            rule = Rule(k, int.from_bytes(np.packbits(rep, bitorder="little").tobytes(), "little"), 0)
            if degree(rule) >= 2:
                found.add(EquivClassId(k, rule.table))

    smalls: list[int] = []  # non-generator class indices with diameter <= 6
    bigs: list[int] = []
    mixed_prefix: list[int] = []  # per class, size of the opposite list at add time

    n_gen = 0

    def register(idx: int) -> None:
        if idx < n_gen:
            mixed_prefix.append(0)
            return
        if ks[idx] <= 6:
            mixed_prefix.append(len(bigs))
            smalls.append(idx)
        else:
            mixed_prefix.append(len(smalls))
            bigs.append(idx)

    for g in gens:
        add(g.k, g.table_array())
    n_gen = len(ks)
    for idx in range(n_gen):
        register(idx)

    # tiers, drained in order, all cursors lazy so no pair list materializes:
    #  G: generator-class appends (g, X) and (X, g), by X's discovery order --
    #     this is what grows composition chains atom by atom;
    #  0: remaining pairs with both diameters <= 6;
    #  1: remaining mixed pairs (one side <= 6), by the later side;
    #  2: remaining pairs with both diameters >= 7.
    tg = [0, 0, 0]  # (class index X, generator position, flip)
    t0 = [0, 0, 0]  # (p, q, flip) over smalls, q <= p
    t1 = [0, 0, 0]  # (class index, opposite position, flip)
    t2 = [0, 0, 0]  # over bigs

    def next_append(state: list) -> Optional[tuple[int, int]]:
        while True:
            x, g, flip = state
            if x >= len(ks):
                return None
            lim = min(n_gen, x + 1)
            if g >= lim:
                state[0] = x + 1
                state[1] = 0
                state[2] = 0
                continue
            if flip == 0:
                state[2] = 1
                return (g, x)
            state[2] = 0
            state[1] = g + 1
            if g != x:
                return (x, g)

    def next_within(state: list, lst: list[int]) -> Optional[tuple[int, int]]:
        while True:
            p, q, flip = state
            if p >= len(lst):
                return None
            if q > p:
                state[0] = p + 1
                state[1] = 0
                state[2] = 0
                continue
            if flip == 0:
                state[2] = 1
                return (lst[p], lst[q])
            state[2] = 0
            state[1] = q + 1
            if q != p:
                return (lst[q], lst[p])

    def next_mixed(state: list) -> Optional[tuple[int, int]]:
        while True:
            gi, pos, flip = state
            if gi >= len(ks):
                return None
            opp = bigs if ks[gi] <= 6 else smalls
            if pos >= mixed_prefix[gi]:
                state[0] = gi + 1
                state[1] = 0
                state[2] = 0
                continue
            if flip == 0:
                state[2] = 1
                return (gi, opp[pos])
            state[2] = 0
            state[1] = pos + 1
            return (opp[pos], gi)

    compositions = 0
    exhausted = False
    while not exhausted:
        got = next_append(tg)
        if got is None:
            got = next_within(t0, smalls)
        if got is None:
            got = next_mixed(t1)
        if got is None:
            got = next_within(t2, bigs)
        if got is None:
            break
        li, ri = got
        ka, ga = ks[li], reps[li]
        kb = ks[ri]
        before = len(ks)
        for right in orbs[ri]:
            if compositions >= budget:
                exhausted = True
                break
            compositions += 1
            if ka + kb - 1 > arity_cap:
                continue
            try:
                k2, arr2 = _compose_arr(ga, ka, right, kb)
            except LiftforgeError:
                continue
            add(k2, arr2)
        for idx in range(before, len(ks)):
            register(idx)
    return ClosureResult(max_diameter, frozenset(found), len(ks), compositions, exhausted)


# ---------------------------------------------------------------------------
# degree-2 composition probe

PROBE_HEADER = (
    "Universe: the orbit-expanded catalog functions (all constant-free) plus "
    "the orbit-closed conserved-landscape functions of diameter 4 and 5; "
    "'degree <= 6' is read as this diameter-<=6 pool.  All ordered pairs are "
    "composed and the resulting algebraic degree is inspected."
)


@dataclass(frozen=True)
class ProbeReport:
    header: str
    pool_size: int
    pairs: int
    degree2: tuple[tuple[str, str], ...]

    @property
    def ok(self) -> bool:
        return not self.degree2


def _fast_degree_of_composite(ga: np.ndarray, fa: np.ndarray, kg: int, kf: int) -> int:
    """Degree of g o f via a raw-window table and an in-place transform."""
    K = kg + kf - 1
    idx = np.arange(1 << K, dtype=np.uint32)
    acc = np.zeros(idx.size, dtype=np.uint32)
    mf = np.uint32((1 << kf) - 1)
    for j in range(kg):
        acc |= fa[(idx >> np.uint32(j)) & mf].astype(np.uint32) << np.uint32(j)
    h = ga[acc]
    for i in range(K):
        step = 1 << i
        view = h.reshape(-1, step << 1)
        view[:, step:] ^= view[:, :step]
    nz = np.nonzero(h)[0]
    if nz.size == 0:
        return 0
    # max popcount over monomial masks
    pop = np.zeros(nz.size, dtype=np.uint8)
    v = nz.astype(np.uint32)
    while v.any():
        pop += (v & 1).astype(np.uint8)
        v >>= 1
    return int(pop.max())


def degree2_probe(entries: Optional[list[CatalogEntry]] = None) -> ProbeReport:
    """Compose every ordered pair from the probe pool and look for an
    algebraic-degree-2 result; the expectation is that none exists."""
    pool = catalog_function_pool(entries)
    for k in (4, 5):
        res = enumerate_conserved(k, include_list=True)
        seen = {r.table for r in pool}
        for l in res.landscapes:
            r = compile_landscape(l)
            if r.table not in seen:
                pool.append(r)
                seen.add(r.table)
    pool.sort(key=lambda r: (r.k, r.table))
    arrays = [(r.table_array(), r.k, r.text()) for r in pool]
    hits = []
    pairs = 0
    for ga, kg, gt in arrays:
        for fa, kf, ft in arrays:
            pairs += 1
            if _fast_degree_of_composite(ga, fa, kg, kf) == 2:
                hits.append((gt, ft))
    return ProbeReport(PROBE_HEADER, len(pool), pairs, tuple(hits))
