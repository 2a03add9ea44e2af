"""Satisfiability by mosaics: Hintikka label sets over a closure table,
coherent four-world tiles, path checking, and crown-model extraction.

A mosaic is a labelled frame over worlds {r, m, e0, e1} where r sees
everything, m sees itself and both edges, and edges see only themselves.
Labels are maximal consistent subsets of the closure set of the input
formula, stored as bitmasks over its positive members.  Coherent mosaics
glue along matching edge labels into crown models; a formula is satisfiable
iff some root label admits a glueable, witness-complete family of tiles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Union

from .crown import crown
from .errors import BudgetExceededError
from .formula import (And, Bottom, Box, Diamond, Formula, Iff, Implies, Not,
                      Or, Var, ast_size, closure, pretty)
from .kripke import Model, truth_mask


class MosaicError(RuntimeError):
    """Internal consistency failure during extraction; indicates a broken
    coherence rule rather than bad input."""


class LabelSpace:
    """Indexed closure set with the machinery for Hintikka-set enumeration.

    Positive members (those not of the form ~psi) get one bit each; the
    truth of any closure member under a label follows by stripping
    negations.  Enumeration branches only on atoms and modal members,
    deriving boolean compounds by unit propagation.
    """

    def __init__(self, members: Iterable[Formula], theta: Optional[Formula] = None):
        members = set(members)
        self.theta = theta
        self.members = sorted(members, key=lambda f: (ast_size(f), pretty(f)))
        self.positives = [f for f in self.members if not isinstance(f, Not)]
        self.pos_index = {f: i for i, f in enumerate(self.positives)}
        for f in self.members:
            self.ref(f)  # validates closure under single negation
        self.size = len(self.positives)

        self.kinds: list[str] = []
        self.operands: list[tuple] = []
        for f in self.positives:
            if isinstance(f, Var):
                self.kinds.append("var")
                self.operands.append(())
            elif isinstance(f, Bottom):
                self.kinds.append("bot")
                self.operands.append(())
            elif isinstance(f, Diamond):
                self.kinds.append("dia")
                self.operands.append((self.ref(f.sub),))
            elif isinstance(f, Box):
                self.kinds.append("box")
                self.operands.append((self.ref(f.sub),))
            elif isinstance(f, And):
                self.kinds.append("and")
                self.operands.append((self.ref(f.left), self.ref(f.right)))
            elif isinstance(f, Or):
                self.kinds.append("or")
                self.operands.append((self.ref(f.left), self.ref(f.right)))
            elif isinstance(f, Implies):
                self.kinds.append("imp")
                self.operands.append((self.ref(f.left), self.ref(f.right)))
            elif isinstance(f, Iff):
                self.kinds.append("iff")
                self.operands.append((self.ref(f.left), self.ref(f.right)))
            else:
                raise TypeError(f"not a formula: {f!r}")

        self.dia_list = [i for i, k in enumerate(self.kinds) if k == "dia"]
        self.box_list = [i for i, k in enumerate(self.kinds) if k == "box"]
        self._vec_cache: dict[int, tuple[int, int, int, int]] = {}

    @classmethod
    def for_formula(cls, theta: Formula) -> "LabelSpace":
        return cls(closure(theta), theta=theta)

    def ref(self, f: Formula) -> tuple[int, bool]:
        """(positive index, polarity); polarity False means negated."""
        pol = True
        while isinstance(f, Not):
            f = f.sub
            pol = not pol
        idx = self.pos_index.get(f)
        if idx is None:
            raise KeyError(f"{pretty(f)} is not in the closure set")
        return idx, pol

    def member(self, label: int, f: Formula) -> bool:
        idx, pol = self.ref(f)
        return bool(label >> idx & 1) == pol

    def label_formulas(self, label: int) -> frozenset[Formula]:
        return frozenset(f for f in self.members if self.member(label, f))

    def atoms(self, label: int) -> frozenset[str]:
        return frozenset(f.name for f in self.positives
                         if isinstance(f, Var) and self.member(label, f))

    # -- Hintikka enumeration -------------------------------------------

    def _value(self, values: list, ref: tuple[int, bool]):
        v = values[ref[0]]
        return None if v is None else (v == ref[1])

    def _propagate(self, values: list) -> bool:
        """Unit propagation to fixpoint; False on conflict."""

        def put(ref, v) -> bool:
            idx, pol = ref
            want = v == pol
            if values[idx] is None:
                values[idx] = want
                changed[0] = True
                return True
            return values[idx] == want

        changed = [True]
        while changed[0]:
            changed[0] = False
            for i, kind in enumerate(self.kinds):
                c = values[i]
                if kind == "var":
                    continue
                if kind == "bot":
                    if c is True:
                        return False
                    if c is None and not put((i, True), False):
                        return False
                    continue
                if kind == "dia":
                    a = self._value(values, self.operands[i][0])
                    if a is True:
                        if c is False:
                            return False
                        if c is None and not put((i, True), True):
                            return False
                    elif c is False and a is None:
                        if not put(self.operands[i][0], False):
                            return False
                    continue
                if kind == "box":
                    a = self._value(values, self.operands[i][0])
                    if a is False:
                        if c is True:
                            return False
                        if c is None and not put((i, True), False):
                            return False
                    elif c is True and a is None:
                        if not put(self.operands[i][0], True):
                            return False
                    continue
                rx, ry = self.operands[i]
                x, y = self._value(values, rx), self._value(values, ry)
                if kind == "and":
                    if x is False or y is False:
                        if c is True:
                            return False
                        if c is None and not put((i, True), False):
                            return False
                    elif x is True and y is True:
                        if c is False:
                            return False
                        if c is None and not put((i, True), True):
                            return False
                    elif c is True:
                        if not (put(rx, True) and put(ry, True)):
                            return False
                    elif c is False:
                        if x is True and not put(ry, False):
                            return False
                        if y is True and not put(rx, False):
                            return False
                elif kind == "or":
                    if x is True or y is True:
                        if c is False:
                            return False
                        if c is None and not put((i, True), True):
                            return False
                    elif x is False and y is False:
                        if c is True:
                            return False
                        if c is None and not put((i, True), False):
                            return False
                    elif c is False:
                        if not (put(rx, False) and put(ry, False)):
                            return False
                    elif c is True:
                        if x is False and not put(ry, True):
                            return False
                        if y is False and not put(rx, True):
                            return False
                elif kind == "imp":
                    if x is False or y is True:
                        if c is False:
                            return False
                        if c is None and not put((i, True), True):
                            return False
                    elif x is True and y is False:
                        if c is True:
                            return False
                        if c is None and not put((i, True), False):
                            return False
                    elif c is False:
                        if not (put(rx, True) and put(ry, False)):
                            return False
                    elif c is True:
                        if x is True and not put(ry, True):
                            return False
                        if y is False and not put(rx, False):
                            return False
                elif kind == "iff":
                    if x is not None and y is not None:
                        want = x == y
                        if c is None:
                            if not put((i, True), want):
                                return False
                        elif c != want:
                            return False
                    elif c is not None and x is not None:
                        if not put(ry, x == c):
                            return False
                    elif c is not None and y is not None:
                        if not put(rx, y == c):
                            return False
        return True

    def enumerate_labels(self, must: Iterable[tuple[int, bool, bool]] = ()
                         ) -> list[int]:
        """All Hintikka labels satisfying the given (index, polarity, value)
        constraints, as ascending bitmasks."""
        values: list = [None] * self.size
        for idx, pol, v in must:
            want = v == pol
            if values[idx] is not None and values[idx] != want:
                return []
            values[idx] = want
        if not self._propagate(values):
            return []
        out: list[int] = []
        decisions = [i for i, k in enumerate(self.kinds)
                     if k in ("var", "dia", "box")]

        def dfs(vals):
            for i in decisions:
                if vals[i] is None:
                    for v in (False, True):
                        nxt = list(vals)
                        nxt[i] = v
                        if self._propagate(nxt):
                            dfs(nxt)
                    return
            assert all(v is not None for v in vals)
            out.append(sum(1 << i for i, v in enumerate(vals) if v))

        dfs(values)
        out.sort()
        return out

    def is_hintikka(self, label: int) -> bool:
        if label >> self.size:
            return False
        values = [bool(label >> i & 1) for i in range(self.size)]
        return self._propagate(values)

    # -- per-label modal vectors ------------------------------------------

    def vectors(self, label: int) -> tuple[int, int, int, int]:
        """(dia_true, dia_child, box_true, box_child) as bits over the
        diamond / box member lists."""
        got = self._vec_cache.get(label)
        if got is not None:
            return got
        dt = dc = 0
        for pos, i in enumerate(self.dia_list):
            if label >> i & 1:
                dt |= 1 << pos
            idx, pol = self.operands[i][0]
            if bool(label >> idx & 1) == pol:
                dc |= 1 << pos
        bt = bc = 0
        for pos, i in enumerate(self.box_list):
            if label >> i & 1:
                bt |= 1 << pos
            idx, pol = self.operands[i][0]
            if bool(label >> idx & 1) == pol:
                bc |= 1 << pos
        got = (dt, dc, bt, bc)
        self._vec_cache[label] = got
        return got

    def pair_ok(self, above: int, below: int) -> bool:
        """Closure conditions between a world and one it sees: true diamond
        bodies below force diamonds above, boxes above push bodies down."""
        dt_a, _, bt_a, _ = self.vectors(above)
        _, dc_b, _, bc_b = self.vectors(below)
        return dc_b & ~dt_a == 0 and bt_a & ~bc_b == 0

    def edge_ok(self, label: int) -> bool:
        """An edge world sees only itself: diamonds need a reflexive witness
        and true bodies force their boxes."""
        dt, dc, bt, bc = self.vectors(label)
        return dt & ~dc == 0 and bc & ~bt == 0

    def middle_ok(self, middle: int, e0: int, e1: int,
                  strict: bool = False) -> bool:
        """Diamond and box witnesses for a middle world; the non-strict form
        lets the middle witness its own modalities."""
        dt_m, dc_m, bt_m, bc_m = self.vectors(middle)
        _, dc_0, _, bc_0 = self.vectors(e0)
        _, dc_1, _, bc_1 = self.vectors(e1)
        wit = dc_0 | dc_1 if strict else dc_0 | dc_1 | dc_m
        if dt_m & ~wit:
            return False
        everywhere = bc_0 & bc_1 if strict else bc_0 & bc_1 & bc_m
        return everywhere & ~bt_m == 0


def hintikka_sets(sub: Union[LabelSpace, Iterable[Formula]]) -> list[int]:
    """All maximal consistent labels over a closure set, in ascending
    bitmask order."""
    space = sub if isinstance(sub, LabelSpace) else LabelSpace(sub)
    return space.enumerate_labels()


class Mosaic(NamedTuple):
    root: int
    middle: int
    edge0: int
    edge1: int


def mirror(m: Mosaic) -> Mosaic:
    return Mosaic(m.root, m.middle, m.edge1, m.edge0)


def is_coherent(m: Mosaic, space: LabelSpace, strict_middle: bool = False) -> bool:
    """All coherence conditions: labels are Hintikka sets, diamonds and
    boxes agree along every pair of the reflexive-transitive mosaic order,
    and middle/edge witnesses exist."""
    for lab in m:
        if not space.is_hintikka(lab):
            return False
    if not (space.pair_ok(m.root, m.middle) and space.pair_ok(m.root, m.edge0)
            and space.pair_ok(m.root, m.edge1)
            and space.pair_ok(m.middle, m.edge0)
            and space.pair_ok(m.middle, m.edge1)):
        return False
    if not (space.edge_ok(m.edge0) and space.edge_ok(m.edge1)):
        return False
    return space.middle_ok(m.middle, m.edge0, m.edge1, strict=strict_middle)


def check_path(m: Mosaic, m2: Mosaic, pool: Iterable[Mosaic], depth: int) -> bool:
    """Gluing chain of length at most 2^depth from m to m2 within the pool,
    by the halving recursion."""
    if m == m2 or m.edge1 == m2.edge0:
        return True
    if depth <= 0:
        return False
    for mid in pool:
        if mid.root != m.root:
            continue
        if check_path(m, mid, pool, depth - 1) and check_path(mid, m2, pool, depth - 1):
            return True
    return False


def glue_reachable(m: Mosaic, pool: Iterable[Mosaic]) -> set[Mosaic]:
    """Mosaics reachable from m by direct gluing steps (breadth first);
    the independent cross-check for check_path."""
    pool = list(pool)
    seen = {m}
    frontier = [m]
    while frontier:
        nxt = []
        for cur in frontier:
            for cand in pool:
                if cand not in seen and cur.edge1 == cand.edge0:
                    seen.add(cand)
                    nxt.append(cand)
        frontier = nxt
    return seen


# ---------------------------------------------------------------------------
# The decision procedure

@dataclass
class SolverStats:
    roots_tried: int = 0
    labels_built: int = 0
    arcs: int = 0
    pool_size: int = 0
    components: int = 0
    crown_n: int = 0


@dataclass(frozen=True)
class SatResult:
    sat: bool
    n: Optional[int] = None
    model: Optional[Model] = None
    world: Optional[int] = None
    root_label: Optional[int] = None
    mosaics: Optional[tuple[Mosaic, ...]] = None
    stats: SolverStats = field(default_factory=SolverStats)

    def __bool__(self):
        return self.sat


def decide_sat(theta: Formula, strict_middle: bool = False,
               exhaustive_anywhere: bool = False,
               budget: int = 20_000_000) -> SatResult:
    """Satisfiability of theta over the finite crown frames.

    Tries root labels containing theta in ascending order; for each, builds
    the glue graph of coherent tiles compatible with that root and looks for
    a connected family supplying every diamond and every refuted box of the
    root.  Satisfiability somewhere coincides with satisfiability at a root:
    the submodel generated by any crown world pulls back to the root of a
    small crown along a total p-morphism (a constant map for an endpoint,
    the two-teeth cover for a middle), so the root pass is complete.  The
    literal second pass over theta-free root labels is kept behind
    `exhaustive_anywhere` for cross-checking.
    """
    space = LabelSpace.for_formula(theta)
    stats = SolverStats()
    steps = [0]
    idx, pol = space.ref(theta)
    for rho in space.enumerate_labels(must=[(idx, pol, True)]):
        stats.roots_tried += 1
        got = _try_root(space, rho, None, strict_middle, stats, steps, budget)
        if got is not None:
            return got
    if exhaustive_anywhere:
        for rho in space.enumerate_labels(must=[(idx, pol, False)]):
            stats.roots_tried += 1
            got = _try_root(space, rho, theta, strict_middle, stats, steps, budget)
            if got is not None:
                return got
    return SatResult(False, stats=stats)


def valid(theta: Formula, **kw) -> bool:
    """Validity over the polygonal-plane logic: the negation is unsatisfiable."""
    return not decide_sat(Not(theta), **kw).sat


def sat_at_root(theta: Formula, **kw) -> SatResult:
    """Satisfiability with theta in the root label; same verdicts as
    decide_sat (see there), with the witness pinned to the root."""
    kw.pop("exhaustive_anywhere", None)
    return decide_sat(theta, **kw)


def _mid_fits(space: LabelSpace, m: int, e0: int, e1: int, strict: bool) -> bool:
    return (space.pair_ok(m, e0) and space.pair_ok(m, e1)
            and space.middle_ok(m, e0, e1, strict=strict))


def _try_root(space: LabelSpace, rho: int, need: Optional[Formula],
              strict_middle: bool, stats: SolverStats, steps: list[int],
              budget: int) -> Optional[SatResult]:
    """Search for a satisfying tile family with root label rho.  When `need`
    is set (second pass), some placed label must also contain it."""
    # labels compatible below rho: boxes of rho force their bodies and
    # persist (every world's successors sit below the root too), missing
    # diamonds of rho forbid theirs and stay missing; labels violating
    # persistence could never appear in a coherent tile anyway
    must = []
    for i in space.box_list:
        if rho >> i & 1:
            must.append((*space.operands[i][0], True))
            must.append((i, True, True))
    for i in space.dia_list:
        if not rho >> i & 1:
            must.append((*space.operands[i][0], False))
            must.append((i, True, False))
    labels = space.enumerate_labels(must=must)
    stats.labels_built += len(labels)

    edges = [lab for lab in labels if space.edge_ok(lab)]
    if not edges:
        return None

    vecs = {lab: space.vectors(lab) for lab in labels}
    nbox = len(space.box_list)
    full_box = (1 << nbox) - 1

    # arc (xi, yi) exists when some middle makes (rho, m, X, Y) coherent;
    # keep the least such middle per arc
    arc_mid: dict[tuple[int, int], int] = {}
    adj: dict[int, set[int]] = {i: set() for i in range(len(edges))}
    for m in labels:
        dt_m, dc_m, bt_m, bc_m = vecs[m]
        own_wit = 0 if strict_middle else dc_m
        own_box = full_box if strict_middle else bc_m
        pc = [i for i, x in enumerate(edges) if space.pair_ok(m, x)]
        steps[0] += len(pc) * len(pc) + len(edges)
        if steps[0] > budget:
            raise BudgetExceededError("mosaic search budget exhausted")
        for xi in pc:
            dcx = vecs[edges[xi]][1]
            bcx = vecs[edges[xi]][3]
            rd = dt_m & ~(own_wit | dcx)
            rb = own_box & bcx & ~bt_m
            for yi in pc:
                if (xi, yi) in arc_mid:
                    continue
                if rd & ~vecs[edges[yi]][1] or rb & vecs[edges[yi]][3]:
                    continue
                arc_mid[(xi, yi)] = m
                adj[xi].add(yi)
                adj[yi].add(xi)
    stats.arcs += len(arc_mid)
    if not arc_mid:
        return None

    comp_of: dict[int, int] = {}
    comps: list[list[int]] = []
    for start in sorted(adj):
        if start in comp_of or not adj[start]:
            continue
        cid = len(comps)
        stack, members = [start], []
        comp_of[start] = cid
        while stack:
            v = stack.pop()
            members.append(v)
            for w in adj[v]:
                if w not in comp_of:
                    comp_of[w] = cid
                    stack.append(w)
        comps.append(sorted(members))
    stats.components += len(comps)

    for members in comps:
        got = _try_component(space, rho, edges, members, arc_mid, adj, labels,
                             need, strict_middle, stats)
        if got is not None:
            return got
    return None


def _try_component(space: LabelSpace, rho: int, edges: list[int],
                   members: list[int], arc_mid: dict, adj: dict,
                   labels: list[int], need: Optional[Formula],
                   strict: bool, stats: SolverStats) -> Optional[SatResult]:
    dt_r, dc_r, bt_r, bc_r = space.vectors(rho)
    full_box = (1 << len(space.box_list)) - 1
    member_set = set(members)

    chosen: set[tuple[int, int, int]] = set()

    def add_arc(xi: int, yi: int, m: int):
        chosen.add((xi, yi, m))
        chosen.add((yi, xi, m))  # mirrored tile keeps the walk balanced

    def place_edge(xi: int):
        yi = min(adj[xi])
        m = arc_mid.get((xi, yi))
        if m is None:
            m = arc_mid[(yi, xi)]
        add_arc(xi, yi, m)

    def find_middle(pred) -> bool:
        # least (m, xi, yi) with pred(m) and a coherent tile inside the component
        for m in labels:
            if not pred(m):
                continue
            for xi in members:
                if not space.pair_ok(m, edges[xi]):
                    continue
                for yi in members:
                    if _mid_fits(space, m, edges[xi], edges[yi], strict):
                        add_arc(xi, yi, m)
                        return True
        return False

    # every diamond and every refuted box of the root needs a placed witness;
    # the root label itself counts, then component edge labels, then middles
    reqs: list[tuple[str, int]] = []
    base = dt_r & ~dc_r
    while base:
        d = (base & -base).bit_length() - 1
        base &= base - 1
        reqs.append(("dia", d))
    base = ~bt_r & full_box & bc_r
    while base:
        b = (base & -base).bit_length() - 1
        base &= base - 1
        reqs.append(("box", b))
    for kind, bit in reqs:
        done = False
        for xi in members:
            vec = space.vectors(edges[xi])
            hit = vec[1] >> bit & 1 if kind == "dia" else not vec[3] >> bit & 1
            if hit:
                place_edge(xi)
                done = True
                break
        if not done:
            if kind == "dia":
                done = find_middle(lambda m: bool(space.vectors(m)[1] >> bit & 1))
            else:
                done = find_middle(lambda m: not space.vectors(m)[3] >> bit & 1)
        if not done:
            return None

    if need is not None and not space.member(rho, need):
        ok = False
        for xi in members:
            if space.member(edges[xi], need):
                place_edge(xi)
                ok = True
                break
        if not ok:
            ok = find_middle(lambda m: space.member(m, need))
        if not ok:
            return None

    if not chosen:
        loops = [xi for xi in members if (xi, xi) in arc_mid]
        if loops:
            add_arc(loops[0], loops[0], arc_mid[(loops[0], loops[0])])
        else:
            xi, yi = min(k for k in arc_mid if k[0] in member_set)
            add_arc(xi, yi, arc_mid[(xi, yi)])

    # connect the chosen arcs through the component so one closed walk
    # covers them all
    nodes = sorted({t[0] for t in chosen} | {t[1] for t in chosen})
    connected = {nodes[0]}
    missing = set(nodes) - connected
    while missing:
        prev: dict[int, int] = {}
        seen = set(connected)
        frontier = sorted(connected)
        target = None
        while frontier and target is None:
            nxt = []
            for v in frontier:
                for w in sorted(adj[v]):
                    if w in seen:
                        continue
                    seen.add(w)
                    prev[w] = v
                    if w in missing:
                        target = w
                        break
                    nxt.append(w)
                if target is not None:
                    break
            frontier = nxt
        if target is None:
            raise MosaicError("component lost connectivity")
        path = [target]
        while path[-1] not in connected:
            path.append(prev[path[-1]])
        path.reverse()
        for u, v in zip(path, path[1:]):
            m = arc_mid.get((u, v))
            if m is None:
                m = arc_mid[(v, u)]
            add_arc(u, v, m)
        connected |= set(path)
        missing = set(nodes) - connected

    pool = tuple(Mosaic(rho, m, edges[xi], edges[yi])
                 for (xi, yi, m) in sorted(chosen))
    n, model, witness = extract_model(pool, space, rho)
    stats.pool_size = len(pool)
    stats.crown_n = n
    return SatResult(True, n, model, witness, rho, pool, stats)


# ---------------------------------------------------------------------------
# Model extraction

def extract_model(pool: Iterable[Mosaic], space: LabelSpace,
                  root_label: Optional[int] = None) -> tuple[int, Model, int]:
    """Assemble a crown model from a saturated family of coherent mosaics.

    The pool is closed under mirroring, its glue graph must be connected,
    and a closed walk visiting every tile once (edge labels as nodes, tiles
    as arcs) lays the tiles around the crown cycle.  Every closure member is
    re-verified at every world against its label before returning.
    """
    tiles = sorted(set(pool))
    if not tiles:
        raise MosaicError("empty mosaic pool")
    roots = {t.root for t in tiles}
    if len(roots) != 1:
        raise MosaicError("pool mixes root labels")
    if root_label is None:
        root_label = tiles[0].root
    elif root_label not in roots:
        raise MosaicError("root label not used by the pool")
    for t in tiles:
        if not is_coherent(t, space):
            raise MosaicError(f"incoherent mosaic in pool: {t}")
    tiles = sorted(set(tiles) | {mirror(t) for t in tiles})

    nodes = sorted({t.edge0 for t in tiles} | {t.edge1 for t in tiles})
    parent = {v: v for v in nodes}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for t in tiles:
        parent[find(t.edge0)] = find(t.edge1)
    if len({find(v) for v in nodes}) != 1:
        raise MosaicError("pool does not glue into a single cycle")

    out_adj: dict[int, list[tuple[int, Mosaic]]] = {v: [] for v in nodes}
    for t in tiles:
        out_adj[t.edge0].append((t.edge1, t))
    for v in nodes:
        out_adj[v].sort(reverse=True)

    start = nodes[0]
    stack: list[tuple[int, Optional[Mosaic]]] = [(start, None)]
    order: list[Mosaic] = []
    while stack:
        v, via = stack[-1]
        if out_adj[v]:
            to, t = out_adj[v].pop()
            stack.append((to, t))
        else:
            stack.pop()
            if via is not None:
                order.append(via)
    order.reverse()
    if len(order) != len(tiles):
        raise MosaicError("glue walk failed to cover the pool")
    for a, b in zip(order, order[1:] + order[:1]):
        if a.edge1 != b.edge0:
            raise MosaicError("glue walk is not a cycle")

    n = len(order)
    world_labels = [root_label]
    for t in order:
        world_labels.append(t.edge0)
        world_labels.append(t.middle)
    # world 2i+1 carries edge0 of tile i, world 2i+2 its middle
    val: dict[str, frozenset[int]] = {}
    for f in space.positives:
        if isinstance(f, Var):
            val[f.name] = frozenset(w for w, lab in enumerate(world_labels)
                                    if space.member(lab, f))
    model = Model(crown(n), val)

    memo: dict = {}
    for f in space.members:
        mask = truth_mask(model, f, memo)
        for w, lab in enumerate(world_labels):
            if bool(mask >> w & 1) != space.member(lab, f):
                raise MosaicError(
                    f"truth lemma fails at world {w} for {pretty(f)}")

    theta = space.theta
    if theta is None or space.member(root_label, theta):
        witness = 0
    else:
        witness = next(w for w, lab in enumerate(world_labels)
                       if space.member(lab, theta))
    return n, model, witness
