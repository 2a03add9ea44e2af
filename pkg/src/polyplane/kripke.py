"""Finite reflexive-transitive Kripke frames, models, and their morphisms.

Worlds are integers 0..n-1.  Relations are stored as per-world successor
bitmasks; all operations are pure and frames are immutable after
construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .errors import BudgetExceededError
from .formula import (And, Bottom, Box, Diamond, Formula, Iff, Implies, Not,
                      Or, Var, conj, disj, variables)


def _closure_rows(rows: list[int], n: int) -> list[int]:
    rows = [rows[i] | (1 << i) for i in range(n)]
    changed = True
    while changed:
        changed = False
        for x in range(n):
            acc = rows[x]
            m = rows[x]
            while m:
                y = (m & -m).bit_length() - 1
                m &= m - 1
                acc |= rows[y]
            if acc != rows[x]:
                rows[x] = acc
                changed = True
    return rows


class Frame:
    """Reflexive-transitive frame over worlds 0..n-1.

    The input relation is reflexive-transitively closed at construction;
    `closure_applied` records whether that changed anything.  With
    strict=True a non-closed input is rejected instead.
    """

    __slots__ = ("n", "rows", "root", "closure_applied", "_preds")

    def __init__(self, n: int, pairs: Iterable[tuple[int, int]] = (),
                 root: Optional[int] = None, strict: bool = False):
        if n <= 0:
            raise ValueError("frame needs at least one world")
        rows = [0] * n
        for x, y in pairs:
            if not (0 <= x < n and 0 <= y < n):
                raise ValueError(f"relation pair {(x, y)} out of range")
            rows[x] |= 1 << y
        given = [rows[i] | (1 << i) for i in range(n)]
        closed = _closure_rows(list(rows), n)
        if strict and closed != given:
            raise ValueError("relation is not reflexive-transitively closed")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", tuple(closed))
        object.__setattr__(self, "closure_applied", closed != given)
        if root is not None:
            full = (1 << n) - 1
            if closed[root] != full:
                raise ValueError(f"world {root} does not see every world")
        object.__setattr__(self, "root", root)
        preds = [0] * n
        for x in range(n):
            m = closed[x]
            while m:
                y = (m & -m).bit_length() - 1
                m &= m - 1
                preds[y] |= 1 << x
        object.__setattr__(self, "_preds", tuple(preds))

    def __setattr__(self, *a):
        raise AttributeError("Frame is immutable")

    def __eq__(self, other):
        return (isinstance(other, Frame) and self.n == other.n
                and self.rows == other.rows and self.root == other.root)

    def __hash__(self):
        return hash((self.n, self.rows, self.root))

    def __repr__(self):
        return f"Frame(n={self.n}, pairs={sorted(self.strict_pairs())}, root={self.root})"

    def sees(self, x: int, y: int) -> bool:
        return bool(self.rows[x] >> y & 1)

    def successors(self, x: int) -> tuple[int, ...]:
        return _mask_worlds(self.rows[x])

    def predecessors(self, y: int) -> tuple[int, ...]:
        return _mask_worlds(self._preds[y])

    def pairs(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(self.n) for y in self.successors(x)]

    def strict_pairs(self) -> list[tuple[int, int]]:
        return [(x, y) for x, y in self.pairs() if x != y]

    def find_root(self) -> Optional[int]:
        """Least world that sees every world, or None."""
        full = (1 << self.n) - 1
        for x in range(self.n):
            if self.rows[x] == full:
                return x
        return None

    def rooted(self) -> "Frame":
        """Same frame with root filled in; raises if no world sees everything."""
        if self.root is not None:
            return self
        r = self.find_root()
        if r is None:
            raise ValueError("frame has no root")
        return Frame(self.n, self.strict_pairs(), root=r)


def _mask_worlds(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        w = (mask & -mask).bit_length() - 1
        mask &= mask - 1
        out.append(w)
    return tuple(out)


def _worlds_mask(worlds: Iterable[int]) -> int:
    m = 0
    for w in worlds:
        m |= 1 << w
    return m


@dataclass(frozen=True)
class Model:
    """Frame plus a valuation; unknown variables denote the empty set."""

    frame: Frame
    val: dict[str, frozenset[int]] = field(default_factory=dict)

    def __post_init__(self):
        norm = {}
        for name, worlds in self.val.items():
            ws = frozenset(worlds)
            if any(not (0 <= w < self.frame.n) for w in ws):
                raise ValueError(f"valuation of {name!r} mentions unknown worlds")
            norm[name] = ws
        object.__setattr__(self, "val", norm)


def _truth(frame: Frame, phi: Formula, atoms: dict[str, int], memo: dict) -> int:
    got = memo.get(phi)
    if got is not None:
        return got
    full = (1 << frame.n) - 1
    if isinstance(phi, Var):
        out = atoms.get(phi.name, 0)
    elif isinstance(phi, Bottom):
        out = 0
    elif isinstance(phi, Not):
        out = full & ~_truth(frame, phi.sub, atoms, memo)
    elif isinstance(phi, And):
        out = _truth(frame, phi.left, atoms, memo) & _truth(frame, phi.right, atoms, memo)
    elif isinstance(phi, Or):
        out = _truth(frame, phi.left, atoms, memo) | _truth(frame, phi.right, atoms, memo)
    elif isinstance(phi, Implies):
        out = (full & ~_truth(frame, phi.left, atoms, memo)) | _truth(frame, phi.right, atoms, memo)
    elif isinstance(phi, Iff):
        l = _truth(frame, phi.left, atoms, memo)
        r = _truth(frame, phi.right, atoms, memo)
        out = full & ~(l ^ r)
    elif isinstance(phi, Diamond):
        s = _truth(frame, phi.sub, atoms, memo)
        out = 0
        for w in range(frame.n):
            if frame.rows[w] & s:
                out |= 1 << w
    elif isinstance(phi, Box):
        s = _truth(frame, phi.sub, atoms, memo)
        out = 0
        for w in range(frame.n):
            if frame.rows[w] & ~s == 0:
                out |= 1 << w
    else:
        raise TypeError(f"not a formula: {phi!r}")
    memo[phi] = out
    return out


def truth_mask(model: Model, phi: Formula, _memo: dict | None = None) -> int:
    """Bitmask of worlds where phi holds (S4 semantics, box dual to diamond)."""
    atoms = {name: _worlds_mask(ws) for name, ws in model.val.items()}
    return _truth(model.frame, phi, atoms, {} if _memo is None else _memo)


def eval_formula(model: Model, world: int, phi: Formula) -> bool:
    """Truth of phi at a world of a finite model."""
    if not (0 <= world < model.frame.n):
        raise ValueError(f"world {world} out of range")
    return bool(truth_mask(model, phi) >> world & 1)


# ---------------------------------------------------------------------------
# Frame validity

@dataclass(frozen=True)
class ValidityReport:
    """Result of a frame-validity check.

    `exhaustive` distinguishes a decision from 'no counterexample found in
    k trials'.  Boolean value is 'no counterexample found'.
    """

    valid: bool
    exhaustive: bool
    checked: int
    counterexample: Optional[dict[str, frozenset[int]]] = None
    world: Optional[int] = None

    def __bool__(self):
        return self.valid


def _val_from_int(value: int, names: list[str], n: int) -> dict[str, frozenset[int]]:
    out = {}
    for j, name in enumerate(names):
        block = value >> (j * n) & ((1 << n) - 1)
        out[name] = frozenset(_mask_worlds(block))
    return out


def valid_on_frame(frame: Frame, phi: Formula, mode: str = "exhaustive",
                   samples: int = 10_000, seed: int = 0,
                   budget: int = 1 << 24) -> ValidityReport:
    """Validity of phi on the frame.

    Exhaustive mode decides by checking every valuation of vars(phi) and is
    rejected when 2^(n*|vars|) exceeds the budget.  Sampled mode draws
    `samples` seeded random valuations and can only report the absence of a
    counterexample among them.
    """
    names = sorted(variables(phi))
    n = frame.n
    full = (1 << n) - 1
    if mode == "sampled":
        import random
        rng = random.Random(seed)
        for i in range(samples):
            atoms = {name: rng.getrandbits(n) for name in names}
            mask = _truth(frame, phi, atoms, {})
            if mask != full:
                world = next(w for w in range(n) if not mask >> w & 1)
                val = {name: frozenset(_mask_worlds(m)) for name, m in atoms.items()}
                return ValidityReport(False, False, i + 1, val, world)
        return ValidityReport(True, False, samples)
    if mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")
    bits = n * len(names)
    if (1 << bits) > budget:
        raise BudgetExceededError(
            f"2^{bits} valuations exceed the exhaustive budget {budget}")
    total = 1 << bits
    if bits <= 10:
        for value in range(total):
            atoms = {name: value >> (j * n) & full for j, name in enumerate(names)}
            mask = _truth(frame, phi, atoms, {})
            if mask != full:
                world = next(w for w in range(n) if not mask >> w & 1)
                return ValidityReport(False, True, value + 1,
                                      _val_from_int(value, names, n), world)
        return ValidityReport(True, True, total)
    return _valid_vectorized(frame, phi, names, total)


def _valid_vectorized(frame: Frame, phi: Formula, names: list[str], total: int) -> ValidityReport:
    n = frame.n
    succs = [frame.successors(w) for w in range(n)]
    order = _topo_subformulas(phi)
    chunk = 1 << 20
    for base in range(0, total, chunk):
        hi = min(base + chunk, total)
        vals = np.arange(base, hi, dtype=np.int64)
        cols: dict[Formula, np.ndarray] = {}
        for f in order:
            if isinstance(f, Var):
                j = names.index(f.name)
                arr = np.empty((hi - base, n), dtype=bool)
                for w in range(n):
                    arr[:, w] = (vals >> (j * n + w)) & 1
            elif isinstance(f, Bottom):
                arr = np.zeros((hi - base, n), dtype=bool)
            elif isinstance(f, Not):
                arr = ~cols[f.sub]
            elif isinstance(f, And):
                arr = cols[f.left] & cols[f.right]
            elif isinstance(f, Or):
                arr = cols[f.left] | cols[f.right]
            elif isinstance(f, Implies):
                arr = ~cols[f.left] | cols[f.right]
            elif isinstance(f, Iff):
                arr = cols[f.left] == cols[f.right]
            elif isinstance(f, Diamond):
                sub = cols[f.sub]
                arr = np.empty_like(sub)
                for w in range(n):
                    arr[:, w] = sub[:, succs[w]].any(axis=1)
            else:
                sub = cols[f.sub]
                arr = np.empty_like(sub)
                for w in range(n):
                    arr[:, w] = sub[:, succs[w]].all(axis=1)
            cols[f] = arr
        res = cols[phi]
        if not res.all():
            flat = np.argmin(res.reshape(-1))
            value = base + int(flat) // n
            world = int(flat) % n
            return ValidityReport(False, True, value + 1,
                                  _val_from_int(value, names, n), world)
    return ValidityReport(True, True, total)


def _topo_subformulas(phi: Formula) -> list[Formula]:
    from .formula import children
    seen: list[Formula] = []
    mark: set[Formula] = set()

    def visit(f: Formula):
        if f in mark:
            return
        for c in children(f):
            visit(c)
        mark.add(f)
        seen.append(f)

    visit(phi)
    return seen


def sat_on_frame(frame: Frame, phi: Formula, budget: int = 1 << 24):
    """Exhaustive satisfiability of phi on the frame over all valuations.

    Returns (valuation, world) or None.
    """
    report = valid_on_frame(frame, Not(phi), budget=budget)
    if report.valid:
        return None
    return report.counterexample, report.world


# ---------------------------------------------------------------------------
# p-morphisms and subreductions

@dataclass(frozen=True)
class WorldMap:
    """Partial map between the worlds of two frames, with explicit domain."""

    mapping: dict[int, int]

    def __post_init__(self):
        object.__setattr__(self, "mapping", dict(self.mapping))

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(self.mapping)

    def __getitem__(self, w: int) -> int:
        return self.mapping[w]

    def __eq__(self, other):
        return isinstance(other, WorldMap) and self.mapping == other.mapping

    def is_onto(self, target: Frame) -> bool:
        return set(self.mapping.values()) == set(range(target.n))


def is_p_morphism(f: WorldMap, source: Frame, target: Frame) -> bool:
    """Monotone + back condition on the declared domain; the domain must be
    an up-set of the source (a generated subframe)."""
    dom = f.mapping
    dom_mask = _worlds_mask(dom)
    for x in dom:
        if source.rows[x] & ~dom_mask:
            return False  # domain not an up-set
        fx = dom[x]
        if not (0 <= fx < target.n):
            return False
        for y in _mask_worlds(source.rows[x]):
            if not target.sees(fx, dom[y]):
                return False  # not monotone
        images = {dom[y] for y in _mask_worlds(source.rows[x])}
        for z in _mask_worlds(target.rows[fx]):
            if z not in images:
                return False  # back condition fails
    return True


def find_subreduction(source: Frame, target: Frame,
                      budget: int = 2_000_000) -> Optional[WorldMap]:
    """Search for a generated subframe of `source` mapping p-morphically onto
    `target`.

    Any subreduction restricts to one whose domain is generated by a single
    world, so domains range over R[u] for u ascending.  Assignment order is
    by ascending world index with monotonicity pruning and an incremental
    back-condition check once a world's successors are all assigned.
    """
    if target.root is None:
        raise ValueError("target must be rooted")
    steps = 0

    for u in range(source.n):
        dom = list(_mask_worlds(source.rows[u]))
        if len(dom) < target.n:
            continue
        pos = {w: i for i, w in enumerate(dom)}
        succ_sets = [[pos[y] for y in _mask_worlds(source.rows[w])] for w in dom]
        # last position at which each world's successor set is fully assigned
        ready_at = [max(s) for s in succ_sets]
        assign = [-1] * len(dom)

        def backtrack(i: int) -> bool:
            nonlocal steps
            if i == len(dom):
                return len(set(assign)) == target.n
            for t in range(target.n):
                steps += 1
                if steps > budget:
                    raise BudgetExceededError("subreduction search budget exhausted")
                ok = True
                for j in range(i):
                    xj, xi = dom[j], dom[i]
                    if source.sees(xj, xi) and not target.sees(assign[j], t):
                        ok = False
                        break
                    if source.sees(xi, xj) and not target.sees(t, assign[j]):
                        ok = False
                        break
                if not ok:
                    continue
                assign[i] = t
                ok = True
                for w_idx in range(i + 1):
                    if ready_at[w_idx] == i:
                        images = {assign[j] for j in succ_sets[w_idx]}
                        need = set(_mask_worlds(target.rows[assign[w_idx]]))
                        if not need <= images:
                            ok = False
                            break
                if ok and backtrack(i + 1):
                    return True
                assign[i] = -1
            return False

        if backtrack(0):
            return WorldMap({w: assign[pos[w]] for w in dom})
    return None


def jankov_fine(target: Frame, prefix: str = "p") -> Formula:
    """Frame formula of a finite rooted frame: satisfiable exactly on the
    frames subreducible to it.

    Over variables {prefix+str(w)}: the root variable holds, everywhere some
    variable holds and no two hold together, and for each ordered pair of
    distinct worlds the relation (or its absence) is mirrored by diamonds.
    """
    if target.root is None:
        raise ValueError("target must be rooted")
    n = target.n
    ps = [Var(f"{prefix}{w}") for w in range(n)]
    parts: list[Formula] = [ps[target.root]]
    parts.append(Box(disj(list(ps))))
    for w in range(n):
        for v in range(w + 1, n):
            parts.append(Box(Not(And(ps[w], ps[v]))))
    for w in range(n):
        for v in range(n):
            if w == v:
                continue
            if target.sees(w, v):
                parts.append(Box(Implies(ps[w], Diamond(ps[v]))))
            else:
                parts.append(Box(Implies(ps[w], Not(Diamond(ps[v])))))
    return conj(parts)


# ---------------------------------------------------------------------------
# Bisimulations restricted to a variable set

def sigma_bisimilar(m1: Model, w1: int, m2: Model, w2: int,
                    sigma: Iterable[str]) -> bool:
    """Greatest bisimulation preserving only the variables in sigma,
    computed by fixpoint refinement of the atom-agreeing pairs."""
    names = sorted(set(sigma))
    f1, f2 = m1.frame, m2.frame

    def atoms(model, w):
        return tuple(w in model.val.get(p, ()) for p in names)

    pairs = {(x, y) for x in range(f1.n) for y in range(f2.n)
             if atoms(m1, x) == atoms(m2, y)}
    changed = True
    while changed:
        changed = False
        for (x, y) in list(pairs):
            ok = all(any((x2, y2) in pairs for y2 in f2.successors(y))
                     for x2 in f1.successors(x))
            if ok:
                ok = all(any((x2, y2) in pairs for x2 in f1.successors(x))
                         for y2 in f2.successors(y))
            if not ok:
                pairs.discard((x, y))
                changed = True
    return (w1, w2) in pairs


# ---------------------------------------------------------------------------
# Closure / interior / external boundary on frames

def closure_set(frame: Frame, worlds: Iterable[int]) -> frozenset[int]:
    """Topological closure under the specialization order: a point is close
    to a set iff it sees into it, so closure adds all predecessors."""
    m = _worlds_mask(worlds)
    out = m
    for w in _mask_worlds(m):
        out |= frame._preds[w]
    return frozenset(_mask_worlds(out))


def interior_set(frame: Frame, worlds: Iterable[int]) -> frozenset[int]:
    full = frozenset(range(frame.n))
    return full - closure_set(frame, full - frozenset(worlds))


def delta(frame: Frame, worlds: Iterable[int]) -> frozenset[int]:
    """External boundary: closure minus the set itself."""
    ws = frozenset(worlds)
    return closure_set(frame, ws) - ws


# ---------------------------------------------------------------------------
# JSON interchange

def frame_to_dict(frame: Frame) -> dict:
    d = {"worlds": frame.n, "rel": [list(p) for p in sorted(frame.strict_pairs())]}
    if frame.root is not None:
        d["root"] = frame.root
    return d


def frame_from_dict(d: dict, strict: bool = False) -> Frame:
    pairs = [tuple(p) for p in d.get("rel", [])]
    return Frame(d["worlds"], pairs, root=d.get("root"), strict=strict)


def model_to_dict(model: Model) -> dict:
    d = frame_to_dict(model.frame)
    d["val"] = {name: sorted(ws) for name, ws in sorted(model.val.items())}
    return d


def model_from_dict(d: dict, strict: bool = False) -> Model:
    frame = frame_from_dict(d, strict=strict)
    val = {name: frozenset(ws) for name, ws in d.get("val", {}).items()}
    return Model(frame, val)
