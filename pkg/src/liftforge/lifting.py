"""Induced circular maps, lifting tests, exact properness, composition.

A rule f of diameter k induces, for every circular length n >= k, the
shift-invariant map F(x)_i = f(x_i, ..., x_{i+k-1}) with indices mod n
(offset-0 convention).  States are packed integers with x_{i+1} at bit i;
the cyclic right shift of the sequence is therefore a left bit-rotation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .corefn import (
    ArityCapError,
    InvalidRuleError,
    LiftforgeError,
    Rule,
    _normalize,
    bitmask,
    is_identity,
    table_to_array,
)

DEFAULT_N_CAP = 24
DEFAULT_ARITY_CAP = 26


class CapExceededError(LiftforgeError):
    pass


def sigma(x: int, n: int, c: int = 1) -> int:
    """Cyclic right shift of the sequence by c: (sigma x)_i = x_{i-c}."""
    c %= n
    m = bitmask(n)
    return ((x << c) | (x >> (n - c))) & m


def _rotate_seq_array(y: np.ndarray, n: int, c: int) -> np.ndarray:
    c %= n
    if c == 0:
        return y
    m = np.uint32(bitmask(n))
    return (((y << np.uint32(c)) | (y >> np.uint32(n - c))) & m).astype(np.uint32)


def _raw_induced_array(table: int, k: int, n: int) -> np.ndarray:
    """Materialize F over all 2**n states for a raw k-variable table."""
    size = 1 << n
    x = np.arange(size, dtype=np.uint32)
    tab = table_to_array(table, k)
    mk = np.uint32(bitmask(k))
    out = np.zeros(size, dtype=np.uint32)
    for i in range(n):
        if i == 0:
            w = x & mk
        else:
            w = ((x >> np.uint32(i)) | ((x & np.uint32(bitmask(i))) << np.uint32(n - i))) & mk
        out |= tab[w].astype(np.uint32) << np.uint32(i)
    return out


@dataclass(frozen=True)
class InducedMap:
    """The circular-length-n map induced by a rule (offset-0 convention).

    With ``honor_shift`` the rule's recorded window shift is applied as a
    cyclic rotation of the output, recovering the map of whatever raw
    window the rule was normalized from.
    """

    rule: Rule
    n: int
    honor_shift: bool = False

    @cached_property
    def _array(self) -> np.ndarray:
        out = _raw_induced_array(self.rule.table, self.rule.k, self.n)
        if self.honor_shift:
            out = _rotate_seq_array(out, self.n, self.rule.shift)
        return out

    def as_array(self) -> np.ndarray:
        return self._array

    def __call__(self, x: int) -> int:
        # single-point evaluation without materializing the table
        n, k = self.n, self.rule.k
        out = 0
        for i in range(n):
            w = ((x >> i) | (x << (n - i))) & bitmask(n)
            out |= self.rule.bit(w & bitmask(k)) << i
        if self.honor_shift:
            out = sigma(out, n, self.rule.shift)
        return out

    def is_bijective(self) -> bool:
        seen = np.zeros(1 << self.n, dtype=bool)
        seen[self._array] = True
        return bool(seen.all())


def induce(r: Rule, n: int, honor_shift: bool = False) -> InducedMap:
    if n < r.k:
        raise InvalidRuleError(f"circular length {n} below diameter {r.k}")
    return InducedMap(r, n, honor_shift)


def is_lifting(r: Rule, n: int, n_cap: int = DEFAULT_N_CAP) -> bool:
    """True iff the induced map on n-bit circular states is a bijection."""
    if n > n_cap:
        raise CapExceededError(f"n={n} above cap {n_cap}")
    return induce(r, n).is_bijective()


# ---------------------------------------------------------------------------
# composition and friends


def compose(g: Rule, f: Rule, arity_cap: int = DEFAULT_ARITY_CAP) -> Rule:
    """The rule of G o F (f applied first), normalized with shift tracked."""
    K = g.k + f.k - 1
    if K > arity_cap:
        raise ArityCapError(f"composition needs {K} variables, cap is {arity_cap}")
    fa = f.table_array()
    ga = g.table_array()
    mf = np.uint32(bitmask(f.k))
    chunk_bits = min(K, 22)
    pieces = []
    for base in range(0, 1 << K, 1 << chunk_bits):
        idx = np.arange(base, base + (1 << chunk_bits), dtype=np.uint32)
        acc = np.zeros(idx.size, dtype=np.uint32)
        for j in range(g.k):
            acc |= fa[(idx >> np.uint32(j)) & mf].astype(np.uint32) << np.uint32(j)
        pieces.append(np.packbits(ga[acc], bitorder="little"))
    raw = int.from_bytes(b"".join(p.tobytes() for p in pieces), "little")
    return _normalize(K, raw, g.shift + f.shift)


def compose_chain(rules, arity_cap: int = DEFAULT_ARITY_CAP) -> Rule:
    """Fold a composition chain (leftmost applied last).

    Composition is associative, so adjacent pairs are folded smallest
    raw arity first to keep intermediate tables narrow.
    """
    items = list(rules)
    if not items:
        raise InvalidRuleError("empty composition chain")
    while len(items) > 1:
        best = min(range(len(items) - 1), key=lambda i: items[i].k + items[i + 1].k)
        items[best : best + 2] = [compose(items[best], items[best + 1], arity_cap)]
    return items[0]


def expand(f: Rule, s: int, arity_cap: int = DEFAULT_ARITY_CAP) -> Rule:
    """Spread the rule's window by stride s: f_s(x) = f(x_1, x_{s+1}, ...)."""
    if s < 1:
        raise InvalidRuleError("stride must be >= 1")
    if s == 1:
        return f
    K = (f.k - 1) * s + 1
    if K > arity_cap:
        raise ArityCapError(f"expansion needs {K} variables, cap is {arity_cap}")
    fa = f.table_array()
    idx = np.arange(1 << K, dtype=np.uint64)
    acc = np.zeros(idx.size, dtype=np.uint32)
    for j in range(f.k):
        acc |= ((idx >> np.uint64(j * s)) & np.uint64(1)).astype(np.uint32) << np.uint32(j)
    return _normalize(K, int.from_bytes(np.packbits(fa[acc], bitorder="little").tobytes(), "little"), f.shift)


def iterate_order(r: Rule, max_power: int, arity_cap: int = DEFAULT_ARITY_CAP) -> Optional[int]:
    """Smallest m <= max_power whose m-fold self-composition is a pure shift.

    The m-fold composite normalizing to the identity rule means F^m acts as
    a cyclic rotation on every circle, i.e. the automaton iterate is the
    identity up to the window-indexing convention.  Raises ArityCapError if
    an intermediate table outgrows the cap before a verdict is reached.
    """
    acc = r
    for m in range(1, max_power + 1):
        if is_identity(acc):
            return m
        if m == max_power:
            break
        acc = compose(acc, r, arity_cap)
    return None


def net_rotation(r: Rule) -> int:
    """Rotation applied by a pure-shift rule; only meaningful when identity-like."""
    return r.shift


def divisor_check(r: Rule, n: int, m: int, n_cap: int = DEFAULT_N_CAP) -> bool:
    """Whether 'lifting at n implies lifting at m' held for this rule (m | n)."""
    if n % m != 0 or m < r.k:
        raise InvalidRuleError(f"need m | n and m >= k, got n={n} m={m} k={r.k}")
    if not is_lifting(r, n, n_cap):
        return True
    return is_lifting(r, m, n_cap)


# ---------------------------------------------------------------------------
# exact properness via the pair graph
#
# Nodes are pairs (u, v) of (k-1)-bit windows; appending bits (a, b) moves to
# (u', v') when the two completed k-windows get equal rule output.  The rule
# fails to be injective on the full shift exactly when some non-diagonal node
# lies on a bi-infinite path, and for binary one-dimensional automata that is
# also equivalent to a collision on some circular length (the diagonal
# subgraph is a de Bruijn graph, hence strongly connected, so any such path
# closes into a cycle through a non-diagonal node).


@dataclass(frozen=True)
class Witness:
    """Two distinct circular states with equal image."""

    n: int
    x: int
    y: int

    def bits(self, v: int) -> str:
        return format(v, f"0{self.n}b")[::-1]  # x_1 first

    def to_json(self) -> dict:
        return {"n": self.n, "x": self.bits(self.x), "y": self.bits(self.y)}


@dataclass(frozen=True)
class PropernessVerdict:
    decision: str  # "proper" | "not-proper"
    method: str  # "pair-graph" | "finite-scan"
    witness: Optional[Witness] = None

    @property
    def proper(self) -> bool:
        return self.decision == "proper"

    def to_json(self) -> str:
        doc = {"decision": self.decision, "method": self.method}
        if self.witness is not None:
            doc["witness"] = self.witness.to_json()
        return json.dumps(doc, sort_keys=True)


def _pair_graph_alive(r: Rule) -> np.ndarray:
    """Boolean (W, W) array of pair-graph nodes lying on bi-infinite paths."""
    k = r.k
    W = 1 << (k - 1)
    tab = r.table_array()
    u = np.arange(W, dtype=np.uint32)
    out0 = tab[u]  # appended bit 0: window = u
    out1 = tab[u | (1 << (k - 1))]
    succ0 = (u >> 1).astype(np.intp)
    succ1 = ((u >> 1) | (1 << (k - 2))).astype(np.intp)
    # predecessor windows of u: (u << 1) | c, c in {0, 1}
    pw0 = ((u << 1) & (W - 1)).astype(np.intp)
    pw1 = (((u << 1) | 1) & (W - 1)).astype(np.intp)
    pout0 = tab[(u << 1) & bitmask(k)]
    pout1 = tab[((u << 1) | 1) & bitmask(k)]

    alive = np.ones((W, W), dtype=bool)
    outs = (out0, out1)
    succs = (succ0, succ1)
    pouts = (pout0, pout1)
    pws = (pw0, pw1)
    while True:
        fwd = np.zeros((W, W), dtype=bool)
        for a in range(2):
            for b in range(2):
                valid = outs[a][:, None] == outs[b][None, :]
                fwd |= valid & alive[np.ix_(succs[a], succs[b])]
        bwd = np.zeros((W, W), dtype=bool)
        for c in range(2):
            for d in range(2):
                valid = pouts[c][:, None] == pouts[d][None, :]
                bwd |= valid & alive[np.ix_(pws[c], pws[d])]
        nxt = alive & fwd & bwd
        if nxt.sum() == alive.sum():
            return nxt
        alive = nxt


def _walk_witness(r: Rule, alive: np.ndarray) -> Witness:
    """Build a circular collision from a closed pair-graph walk through a
    non-diagonal node (always possible when one is alive)."""
    k = r.k
    W = 1 << (k - 1)
    tab = r.table_array()

    def succ_edges(u, v):
        for a in range(2):
            for b in range(2):
                w1 = u | (a << (k - 1))
                w2 = v | (b << (k - 1))
                if tab[w1] == tab[w2]:
                    yield (w1 >> 1, w2 >> 1, a, b)

    def pred_edges(u, v):
        for c in range(2):
            for d in range(2):
                w1 = (u << 1) | c
                w2 = (v << 1) | d
                if tab[w1 & bitmask(k)] == tab[w2 & bitmask(k)]:
                    yield (w1 & (W - 1), w2 & (W - 1), (w1 >> (k - 1)) & 1, (w2 >> (k - 1)) & 1)

    nd = np.argwhere(alive & ~np.eye(W, dtype=bool))
    u0, v0 = int(nd[0][0]), int(nd[0][1])

    # forward: walk within alive until a diagonal node or a repetition
    fwd_nodes = [(u0, v0)]
    fwd_bits = []
    seen = {(u0, v0): 0}
    cycle = None
    d2 = None
    while True:
        u, v = fwd_nodes[-1]
        nu = nv = a = b = None
        for su, sv, aa, bb in succ_edges(u, v):
            if alive[su, sv]:
                nu, nv, a, b = su, sv, aa, bb
                break
        fwd_bits.append((a, b))
        fwd_nodes.append((nu, nv))
        if nu == nv:
            d2 = (nu, nv)
            break
        if (nu, nv) in seen:
            i = seen[(nu, nv)]
            cycle = (fwd_nodes[i:], fwd_bits[i:])
            break
        seen[(nu, nv)] = len(fwd_nodes) - 1

    if cycle is None:
        # backward: walk within alive until a diagonal node or a repetition
        bwd_nodes = [(u0, v0)]
        bwd_bits = []
        seen = {(u0, v0): 0}
        d1 = None
        while True:
            u, v = bwd_nodes[-1]
            pu = pv = a = b = None
            for qu, qv, aa, bb in pred_edges(u, v):
                if alive[qu, qv]:
                    pu, pv, a, b = qu, qv, aa, bb
                    break
            bwd_bits.append((a, b))
            bwd_nodes.append((pu, pv))
            if pu == pv:
                d1 = (pu, pv)
                break
            if (pu, pv) in seen:
                i = seen[(pu, pv)]
                cyc_nodes = bwd_nodes[i:]
                cyc_bits = bwd_bits[i:]
                cycle = (list(reversed(cyc_nodes)), [(a, b) for (a, b) in reversed(cyc_bits)])
                break
            seen[(pu, pv)] = len(bwd_nodes) - 1

        if cycle is None:
            # diagonal splice d2 -> d1 feeding d1's k-1 window bits, then the
            # backward path (reversed) into v0 and the forward path to d2
            walk_bits = [(a, b) for (a, b) in reversed(bwd_bits)] + fwd_bits
            du = d1[0]
            splice = [((du >> i) & 1, (du >> i) & 1) for i in range(k - 1)]
            bits = walk_bits + splice
        else:
            bits = cycle[1]
    else:
        bits = cycle[1]

    L = len(bits)
    reps = -(-max(r.k, 2) // L)  # pump short cycles up to at least the diameter
    bits = bits * reps
    n = len(bits)
    x = 0
    y = 0
    for i, (a, b) in enumerate(bits):
        x |= a << i
        y |= b << i
    return Witness(n, x, y)


def decide_proper(
    r: Rule,
    method: str = "pair-graph",
    scan_limit: int = 16,
    n_cap: int = DEFAULT_N_CAP,
) -> PropernessVerdict:
    """Exact properness decision (pair graph) or finite-scan heuristic.

    The pair-graph method is exact for all circular lengths at once; the
    finite scan refutes with the first circular collision found and can only
    report "proper" in the weak sense of no collision up to scan_limit.
    """
    if method == "finite-scan":
        for n in range(r.k, scan_limit + 1):
            fm = induce(r, n)
            arr = fm.as_array()
            order = np.argsort(arr, kind="stable")
            vals = arr[order]
            dup = np.nonzero(vals[1:] == vals[:-1])[0]
            if dup.size:
                i = int(dup[0])
                w = Witness(n, int(order[i]), int(order[i + 1]))
                return PropernessVerdict("not-proper", "finite-scan", w)
        return PropernessVerdict("proper", "finite-scan", None)
    if method != "pair-graph":
        raise LiftforgeError(f"unknown method {method!r}")
    if r.k > 16:
        raise CapExceededError("pair graph supported for diameter <= 16")
    if r.k == 1:
        # single-variable rules: x1 is proper, x1+1 is proper (both bijective)
        return PropernessVerdict("proper", "pair-graph", None)
    alive = _pair_graph_alive(r)
    nondiag = alive & ~np.eye(alive.shape[0], dtype=bool)
    if not nondiag.any():
        return PropernessVerdict("proper", "pair-graph", None)
    w = _walk_witness(r, alive)
    return PropernessVerdict("not-proper", "pair-graph", w)


def replay_witness(r: Rule, w: Witness) -> bool:
    """Check that a witness reproduces a genuine collision."""
    if w.x == w.y or w.n < r.k:
        return False
    fm = induce(r, w.n)
    return fm(w.x) == fm(w.y)
