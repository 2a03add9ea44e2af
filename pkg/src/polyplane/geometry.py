"""Exact-rational line arrangements as finite stand-ins for the plane with
polygonal valuations.

Cells are the maximal regions of constant sign against every line of a
scene, encoded as sign vectors with stored rational witness points.  The
specialization order of the cells (a cell sees the cells it is a limit of
touching) is a finite reflexive-transitive frame, which is how formulas get
evaluated topologically.  Scenes of concurrent lines realize crown models
geometrically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from math import gcd
from typing import Iterable, Optional, Sequence

from .crown import crown
from .formula import Formula
from .kripke import (Frame, Model, WorldMap, closure_set, delta as frame_delta,
                     eval_formula, interior_set, is_p_morphism)

Rational = Fraction
Point = tuple[Fraction, Fraction]
SignVector = tuple[int, ...]
CellSet = frozenset


@dataclass(frozen=True)
class Line:
    """Locus a*x + b*y + c = 0 with integer coefficients, content 1, and the
    first nonzero of (a, b) positive, so equal lines compare equal."""

    a: Fraction
    b: Fraction
    c: Fraction

    @classmethod
    def make(cls, a, b, c) -> "Line":
        a, b, c = Fraction(a), Fraction(b), Fraction(c)
        if a == 0 and b == 0:
            raise ValueError("degenerate line: a = b = 0")
        mult = 1
        for f in (a, b, c):
            mult = mult * f.denominator // gcd(mult, f.denominator)
        ai, bi, ci = int(a * mult), int(b * mult), int(c * mult)
        g = gcd(gcd(abs(ai), abs(bi)), abs(ci)) or 1
        ai, bi, ci = ai // g, bi // g, ci // g
        lead = ai if ai != 0 else bi
        if lead < 0:
            ai, bi, ci = -ai, -bi, -ci
        return cls(Fraction(ai), Fraction(bi), Fraction(ci))

    def at(self, p: Point) -> Fraction:
        return self.a * p[0] + self.b * p[1] + self.c

    def sign_at(self, p: Point) -> int:
        v = self.at(p)
        return 0 if v == 0 else (1 if v > 0 else -1)


# ---------------------------------------------------------------------------
# Feasibility of sign systems (two variables, equalities + strict inequalities)

def _solve_1d(eqs: list[tuple[Fraction, Fraction]],
              ins: list[tuple[Fraction, Fraction]]) -> Optional[Fraction]:
    # eqs: p*t + q = 0; ins: p*t + q > 0
    t = None
    for p, q in eqs:
        if p == 0:
            if q != 0:
                return None
        else:
            v = -q / p
            if t is None:
                t = v
            elif t != v:
                return None
    if t is not None:
        return t if all(p * t + q > 0 for p, q in ins) else None
    lo = hi = None
    for p, q in ins:
        if p == 0:
            if q <= 0:
                return None
        elif p > 0:
            v = -q / p
            lo = v if lo is None else max(lo, v)
        else:
            v = -q / p
            hi = v if hi is None else min(hi, v)
    if lo is not None and hi is not None:
        if lo >= hi:
            return None
        return (lo + hi) / 2
    if lo is not None:
        return lo + 1
    if hi is not None:
        return hi - 1
    return Fraction(0)


def feasible_point(eqs: list[tuple[Fraction, Fraction, Fraction]],
                   ins: list[tuple[Fraction, Fraction, Fraction]]
                   ) -> Optional[Point]:
    """Rational point satisfying a*x+b*y+c = 0 for all eqs and > 0 for all
    ins, or None.  Equalities are substituted away; the remaining strict
    system loses y by pairing lower and upper bounds (the standard
    elimination, exact at this dimension)."""
    if eqs:
        a, b, c = eqs[0]
        if b != 0:
            # y = -(a x + c)/b
            def sub(aa, bb, cc):
                return (aa - bb * a / b, cc - bb * c / b)
            x = _solve_1d([sub(*e) for e in eqs[1:]], [sub(*i) for i in ins])
            if x is None:
                return None
            return (x, -(a * x + c) / b)
        x = -c / a
        y = _solve_1d([(bb, aa * x + cc) for aa, bb, cc in eqs[1:]],
                      [(bb, aa * x + cc) for aa, bb, cc in ins])
        if y is None:
            return None
        return (x, y)
    lows, highs, pure = [], [], []
    for a, b, c in ins:
        if b > 0:
            lows.append((a, b, c))
        elif b < 0:
            highs.append((a, b, c))
        else:
            pure.append((a, c))
    for al, bl, cl in lows:
        for ah, bh, ch in highs:
            pure.append((-bh * al + bl * ah, -bh * cl + bl * ch))
    x = _solve_1d([], pure)
    if x is None:
        return None
    ylo = yhi = None
    for a, b, c in lows:
        v = -(a * x + c) / b
        ylo = v if ylo is None else max(ylo, v)
    for a, b, c in highs:
        v = -(a * x + c) / b
        yhi = v if yhi is None else min(yhi, v)
    if ylo is not None and yhi is not None:
        y = (ylo + yhi) / 2
    elif ylo is not None:
        y = ylo + 1
    elif yhi is not None:
        y = yhi - 1
    else:
        y = Fraction(0)
    return (x, y)


# ---------------------------------------------------------------------------
# Scenes

@dataclass(frozen=True)
class Scene:
    """Arrangement of distinct lines; cells are exactly the realizable sign
    vectors, each with a rational witness attaining it."""

    lines: tuple[Line, ...]
    cells: tuple[SignVector, ...]
    witness: dict[SignVector, Point]

    def cell_index(self, cell: SignVector) -> int:
        return self.cells.index(cell)

    def signs_of(self, p: Point) -> SignVector:
        return tuple(l.sign_at(p) for l in self.lines)


MAX_LINES = 12


def build_arrangement(lines: Sequence, max_lines: int = MAX_LINES) -> Scene:
    """Scene of the given lines: enumerate realizable sign vectors by
    depth-first search with feasibility pruning; store witnesses."""
    norm = tuple(l if isinstance(l, Line) else Line.make(*l) for l in lines)
    if len(set(norm)) != len(norm):
        raise ValueError("duplicate line in arrangement")
    if len(norm) > max_lines:
        raise ValueError(f"more than {max_lines} lines")
    found: dict[SignVector, Point] = {}

    def dfs(prefix: list[int], eqs, ins):
        i = len(prefix)
        if i == len(norm):
            p = feasible_point(eqs, ins)
            assert p is not None
            found[tuple(prefix)] = p
            return
        ln = norm[i]
        for s in (-1, 0, 1):
            if s == 0:
                nxt_eqs, nxt_ins = eqs + [(ln.a, ln.b, ln.c)], ins
            elif s == 1:
                nxt_eqs, nxt_ins = eqs, ins + [(ln.a, ln.b, ln.c)]
            else:
                nxt_eqs, nxt_ins = eqs, ins + [(-ln.a, -ln.b, -ln.c)]
            if feasible_point(nxt_eqs, nxt_ins) is not None:
                dfs(prefix + [s], nxt_eqs, nxt_ins)

    dfs([], [], [])
    cells = tuple(sorted(found))
    scene = Scene(norm, cells, {c: found[c] for c in cells})
    for c in cells:
        assert scene.signs_of(scene.witness[c]) == c
    return scene


def scene_frame(scene: Scene) -> Frame:
    """Specialization order of the cells: a cell sees the cells whose
    closure it lies in, i.e. it agrees with them wherever it is off the
    lines."""
    n = len(scene.cells)
    pairs = []
    for i, s in enumerate(scene.cells):
        for j, t in enumerate(scene.cells):
            if i != j and all(a == 0 or a == b for a, b in zip(s, t)):
                pairs.append((i, j))
    fr = Frame(n, pairs)
    root = fr.find_root()
    if root is not None:
        fr = Frame(n, pairs, root=root)
    return fr


_REL_SIGNS = {"<": {-1}, "<=": {-1, 0}, "=": {0}, ">=": {0, 1}, ">": {1}}


def compile_polygon(scene: Scene, dnf: Iterable[Iterable[tuple[int, str]]]
                    ) -> CellSet:
    """Cells of the polygon described by a disjunction of conjunctions of
    (line index, relation) constraints; pure sign logic."""
    out = set()
    clauses = [list(cl) for cl in dnf]
    for clause in clauses:
        for i, rel in clause:
            if not 0 <= i < len(scene.lines):
                raise ValueError(f"line index {i} out of range")
            if rel not in _REL_SIGNS:
                raise ValueError(f"unknown relation {rel!r}")
    for cell in scene.cells:
        for clause in clauses:
            ok = True
            for i, rel in clause:
                if cell[i] not in _REL_SIGNS[rel]:
                    ok = False
                    break
            if ok:
                out.add(cell)
                break
    return frozenset(out)


def cells_to_dnf(scene: Scene, cells: Iterable[SignVector]) -> list[list[tuple[int, str]]]:
    """Each cell as the conjunction of its own sign constraints."""
    sign_rel = {-1: "<", 0: "=", 1: ">"}
    return [[(i, sign_rel[s]) for i, s in enumerate(cell)]
            for cell in sorted(cells)]


def eval_scene(scene: Scene, val: dict[str, CellSet], cell: SignVector,
               phi: Formula) -> bool:
    """Topological truth at any point of the cell, for the cell-constant
    valuation; computed on the specialization frame."""
    fr = scene_frame(scene)
    index = {c: i for i, c in enumerate(scene.cells)}
    if cell not in index:
        raise ValueError(f"cell {cell} does not belong to the scene")
    kv = {}
    for name, cs in val.items():
        ids = set()
        for c in cs:
            if c not in index:
                raise ValueError(f"valuation cell {c} not in scene")
            ids.add(index[c])
        kv[name] = frozenset(ids)
    return eval_formula(Model(fr, kv), index[cell], phi)


def scene_closure(scene: Scene, cells: Iterable[SignVector]) -> CellSet:
    fr = scene_frame(scene)
    idx = {c: i for i, c in enumerate(scene.cells)}
    got = closure_set(fr, [idx[c] for c in cells])
    return frozenset(scene.cells[i] for i in got)


def scene_interior(scene: Scene, cells: Iterable[SignVector]) -> CellSet:
    fr = scene_frame(scene)
    idx = {c: i for i, c in enumerate(scene.cells)}
    got = interior_set(fr, [idx[c] for c in cells])
    return frozenset(scene.cells[i] for i in got)


def scene_delta(scene: Scene, cells: Iterable[SignVector]) -> CellSet:
    fr = scene_frame(scene)
    idx = {c: i for i, c in enumerate(scene.cells)}
    got = frame_delta(fr, [idx[c] for c in cells])
    return frozenset(scene.cells[i] for i in got)


# ---------------------------------------------------------------------------
# Realizing crown models as concurrent-line scenes

def _angle_cmp(u: Point, v: Point) -> int:
    # counterclockwise from the positive x-axis, exact
    def half(p):
        return 0 if (p[1] > 0 or (p[1] == 0 and p[0] > 0)) else 1
    hu, hv = half(u), half(v)
    if hu != hv:
        return -1 if hu < hv else 1
    cross = u[0] * v[1] - u[1] * v[0]
    if cross == 0:
        raise ValueError("equal directions")
    return -1 if cross > 0 else 1


def concurrent_crown_map(scene: Scene) -> dict[int, int]:
    """For a scene of L >= 2 concurrent lines: the isomorphism from cell
    indices onto crown(2L), sending the vertex to the root, rays to the
    even worlds in angular order, and sectors to the odd worlds between
    them."""
    L = len(scene.lines)
    vertex = [c for c in scene.cells if all(s == 0 for s in c)]
    rays = [c for c in scene.cells if sum(1 for s in c if s == 0) == 1]
    sectors = [c for c in scene.cells if all(s != 0 for s in c)]
    if not (len(vertex) == 1 and len(rays) == 2 * L and len(sectors) == 2 * L):
        raise ValueError("scene is not a concurrent-line arrangement")
    around = sorted(rays + sectors,
                    key=cmp_to_key(lambda a, b: _angle_cmp(
                        _direction(scene, vertex[0], a),
                        _direction(scene, vertex[0], b))))
    kinds = [sum(1 for s in c if s == 0) == 1 for c in around]
    assert all(kinds[i] != kinds[(i + 1) % len(kinds)] for i in range(len(kinds)))
    p = kinds.index(True)  # first ray in angular order
    index = {c: i for i, c in enumerate(scene.cells)}
    out = {index[vertex[0]]: 0}
    m = 4 * L
    for j in range(m):
        cell = around[(p + j) % m]
        world = 2 + j if j < m - 1 else 1
        out[index[cell]] = world
    fr = scene_frame(scene)
    target = crown(2 * L)
    assert all(fr.sees(i, j) == target.sees(out[i], out[j])
               for i in out for j in out)
    return out


def _direction(scene: Scene, vertex: SignVector, cell: SignVector) -> Point:
    wx, wy = scene.witness[cell]
    vx, vy = scene.witness[vertex]
    return (wx - vx, wy - vy)


def wrap_map(big: int, small: int) -> WorldMap:
    """The p-morphism crown(big) -> crown(small) wrapping the cycle, valid
    when the small cycle length divides the big one."""
    if (2 * big) % (2 * small) != 0:
        raise ValueError("cycle lengths incompatible")
    mapping = {0: 0}
    for i in range(1, 2 * big + 1):
        mapping[i] = (i - 1) % (2 * small) + 1
    wm = WorldMap(mapping)
    assert is_p_morphism(wm, crown(big), crown(small))
    assert wm.is_onto(crown(small))
    return wm


@dataclass(frozen=True)
class Realization:
    """A crown model realized in the plane: scene, pulled-back valuation,
    distinguished cell, and the composite cell -> crown world map."""

    scene: Scene
    val: dict[str, CellSet]
    cell: SignVector
    cell_world: dict[int, int]


def realize_crown_model(model: Model, witness: int,
                        formula: Optional[Formula] = None) -> Realization:
    """Realize a crown model as a scene of concurrent rational lines through
    the origin, with the valuation pulled back along the composite
    cells -> crown(2L) -> crown(m) map.

    Truth of any formula at the distinguished cell then equals truth at the
    witness world; when `formula` is given this is verified directly.
    """
    m = (model.frame.n - 1) // 2
    if m < 1 or model.frame != crown(m):
        raise ValueError("model frame is not a crown")
    if not 0 <= witness < model.frame.n:
        raise ValueError("witness world out of range")
    L = max(2, m)
    lines = [Line.make(-k, 1, 0) for k in range(L)]
    scene = build_arrangement(lines)
    iso = concurrent_crown_map(scene)
    wrap = wrap_map(2 * L, m)
    composite = {ci: wrap[w] for ci, w in iso.items()}
    val: dict[str, CellSet] = {}
    for name, worlds in model.val.items():
        val[name] = frozenset(scene.cells[ci] for ci, w in composite.items()
                              if w in worlds)
    if witness == 0:
        cell_idx = next(ci for ci, w in iso.items() if w == 0)
    else:
        cell_idx = min(ci for ci, w in composite.items() if w == witness)
    cell = scene.cells[cell_idx]
    if formula is not None:
        assert eval_scene(scene, val, cell, formula) == \
            eval_formula(model, witness, formula)
    return Realization(scene, val, cell, composite)


# ---------------------------------------------------------------------------
# Interchange and figure output

def _frac_str(f: Fraction) -> str:
    return str(f)


def scene_to_dict(scene: Scene, val: Optional[dict[str, CellSet]] = None) -> dict:
    d = {"lines": [[_frac_str(l.a), _frac_str(l.b), _frac_str(l.c)]
                   for l in scene.lines]}
    if val is not None:
        d["val"] = {name: {"dnf": [[[i, rel] for i, rel in clause]
                                   for clause in cells_to_dnf(scene, cs)]}
                    for name, cs in sorted(val.items())}
    return d


def scene_from_dict(d: dict) -> tuple[Scene, dict[str, CellSet]]:
    lines = [Line.make(Fraction(a), Fraction(b), Fraction(c))
             for a, b, c in d["lines"]]
    scene = build_arrangement(lines)
    val = {}
    for name, entry in d.get("val", {}).items():
        dnf = [[(int(i), rel) for i, rel in clause] for clause in entry["dnf"]]
        val[name] = compile_polygon(scene, dnf)
    return scene, val


_PALETTE = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1",
            "#76b7b2", "#edc948", "#ff9da7", "#9c755f", "#bab0ac"]


def scene_to_svg(scene: Scene, val: dict[str, CellSet], radius: int = 160) -> str:
    """Plain SVG figure of a concurrent-line scene: sectors and rays
    coloured by the set of atoms true on them."""
    L = len(scene.lines)
    iso = concurrent_crown_map(scene)  # validates the shape
    names = sorted(val)
    key_of = {}
    for c in scene.cells:
        key_of[c] = tuple(name for name in names if c in val[name])
    combos = sorted(set(key_of.values()))
    color = {k: _PALETTE[i % len(_PALETTE)] for i, k in enumerate(combos)}
    vertex = next(c for c in scene.cells if all(s == 0 for s in c))
    rays = [c for c in scene.cells if sum(1 for s in c if s == 0) == 1]
    sectors = [c for c in scene.cells if all(s != 0 for s in c)]
    around = sorted(rays + sectors,
                    key=cmp_to_key(lambda a, b: _angle_cmp(
                        _direction(scene, vertex, a), _direction(scene, vertex, b))))

    def unit(c):
        dx, dy = _direction(scene, vertex, c)
        norm = (float(dx) ** 2 + float(dy) ** 2) ** 0.5
        return (float(dx) / norm * radius, float(dy) / norm * radius)

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{-radius-10} '
             f'{-radius-10} {2*radius+20} {2*radius+20}">',
             '<g transform="scale(1,-1)">']
    k = len(around)
    for i, c in enumerate(around):
        if c in sectors:
            x1, y1 = unit(around[(i - 1) % k])
            x2, y2 = unit(around[(i + 1) % k])
            parts.append(
                f'<path d="M 0 0 L {x1:.2f} {y1:.2f} A {radius} {radius} 0 0 1 '
                f'{x2:.2f} {y2:.2f} Z" fill="{color[key_of[c]]}" '
                f'fill-opacity="0.6" stroke="none"/>')
    for c in around:
        if c in rays:
            x, y = unit(c)
            parts.append(f'<line x1="0" y1="0" x2="{x:.2f}" y2="{y:.2f}" '
                         f'stroke="{color[key_of[c]]}" stroke-width="3"/>')
    parts.append(f'<circle cx="0" cy="0" r="4" fill="{color[key_of[vertex]]}" '
                 f'stroke="black" stroke-width="0.5"/>')
    parts.append('</g>')
    legend_y = -radius - 8
    for i, kk in enumerate(combos):
        label = "{" + ",".join(kk) + "}"
        parts.append(f'<rect x="{-radius-8}" y="{legend_y + 12*i}" width="10" '
                     f'height="10" fill="{color[kk]}"/>')
        parts.append(f'<text x="{-radius+6}" y="{legend_y + 12*i + 9}" '
                     f'font-size="9">{label}</text>')
    parts.append('</svg>')
    return "\n".join(parts)
