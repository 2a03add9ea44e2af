import random
from fractions import Fraction

import pytest

from polyplane.axioms import classify_frame
from polyplane.crown import crown
from polyplane.formula import parse
from polyplane.geometry import (Line, Scene, build_arrangement, cells_to_dnf,
                                compile_polygon, concurrent_crown_map,
                                eval_scene, feasible_point,
                                realize_crown_model, scene_closure,
                                scene_delta, scene_frame, scene_from_dict,
                                scene_interior, scene_to_dict, scene_to_svg,
                                wrap_map)
from polyplane.kripke import Frame, Model, WorldMap, eval_formula, is_p_morphism
from polyplane.mosaic import decide_sat

from helpers import frames_isomorphic, random_formula


def concurrent(L):
    return build_arrangement([Line.make(-k, 1, 0) for k in range(L)])


def test_line_normalization():
    assert Line.make(2, 4, 6) == Line.make(1, 2, 3)
    assert Line.make(-1, -2, -3) == Line.make(1, 2, 3)
    assert Line.make(Fraction(1, 2), 1, 0) == Line.make(1, 2, 0)
    assert Line.make(0, -3, 6) == Line.make(0, 1, -2)
    with pytest.raises(ValueError):
        Line.make(0, 0, 5)


def test_duplicate_lines_rejected():
    with pytest.raises(ValueError):
        build_arrangement([(1, 0, 0), (2, 0, 0)])
    with pytest.raises(ValueError):
        build_arrangement([(k, 1, 0) for k in range(13)])


def test_single_line_cells():
    s = build_arrangement([(1, 0, 0)])
    assert s.cells == ((-1,), (0,), (1,))


def test_two_concurrent_lines_nine_cells():
    s = build_arrangement([(1, 0, 0), (0, 1, 0)])
    assert len(s.cells) == 9
    zeros = [sum(1 for v in c if v == 0) for c in s.cells]
    assert zeros.count(2) == 1 and zeros.count(1) == 4 and zeros.count(0) == 4


def test_two_parallel_lines_five_cells():
    s = build_arrangement([(1, 0, 0), (1, 0, -1)])
    assert s.cells == ((-1, -1), (0, -1), (1, -1), (1, 0), (1, 1))
    xs = [s.witness[c][0] for c in s.cells]
    assert xs == [-1, 0, Fraction(1, 2), 1, 2]


def test_witnesses_attain_signs():
    rng = random.Random(8)
    for _ in range(20):
        lines = []
        while len(lines) < 4:
            cand = (rng.randint(-3, 3), rng.randint(-3, 3), rng.randint(-3, 3))
            if cand[:2] == (0, 0):
                continue
            ln = Line.make(*cand)
            if ln not in lines:
                lines.append(ln)
        s = build_arrangement(lines)
        for c in s.cells:
            assert s.signs_of(s.witness[c]) == c


def test_scene_frame_one_line():
    s = build_arrangement([(1, 0, 0)])
    fr = scene_frame(s)
    assert sorted(fr.strict_pairs()) == [(1, 0), (1, 2)]
    assert fr.root == 1


def test_concurrent_scenes_are_crowns():
    for L in (2, 3, 4, 5):
        s = concurrent(L)
        mapping = concurrent_crown_map(s)  # asserts the relation transfer
        assert frames_isomorphic(scene_frame(s), crown(2 * L))
        assert sorted(mapping.values()) == list(range(4 * L + 1))


def test_compile_polygon():
    s = build_arrangement([(1, 0, 0)])
    assert compile_polygon(s, [[(0, ">=")]]) == {(0,), (1,)}
    s2 = build_arrangement([(1, 0, 0), (0, 1, 0)])
    assert len(compile_polygon(s2, [[]])) == 9
    assert compile_polygon(s2, []) == frozenset()
    quad = compile_polygon(s2, [[(0, ">"), (1, ">")]])
    assert quad == {(1, 1)}


def test_eval_scene_boundary():
    s = build_arrangement([(1, 0, 0)])
    val = {"p": frozenset({(1,)})}
    assert eval_scene(s, val, (0,), parse("<>p"))
    assert not eval_scene(s, val, (0,), parse("[]p"))
    with pytest.raises(ValueError):
        eval_scene(s, val, (0, 0), parse("p"))


def test_eval_scene_vertex_sees_ray():
    s = build_arrangement([(1, 0, 0), (0, 1, 0)])
    ray = next(c for c in s.cells if sum(1 for v in c if v == 0) == 1)
    val = {"p": frozenset({ray})}
    vertex = (0, 0)
    assert eval_scene(s, val, vertex, parse("<>(p & <>~p)"))


def test_scene_closure_interior_delta():
    s = build_arrangement([(1, 0, 0)])
    plus = frozenset({(1,)})
    assert scene_closure(s, plus) == {(0,), (1,)}
    assert scene_interior(s, {(0,), (1,)}) == {(1,)}
    assert scene_delta(s, plus) == {(0,)}
    # boundary of everything is empty
    assert scene_delta(s, set(s.cells)) == frozenset()


def test_delta_drops_dimension_and_cubes_out():
    rng = random.Random(12)
    s = build_arrangement([(1, 0, 0), (0, 1, 0), (1, 1, -1), (1, -2, 3)])
    for _ in range(50):
        a = frozenset(c for c in s.cells if rng.random() < 0.4)
        d = scene_delta(s, a)
        assert not (d & a)
        full = [c for c in d if all(v != 0 for v in c)]
        open_a = [c for c in a if all(v != 0 for v in c)]
        # the external boundary contains no full-dimensional cell of a's own
        assert not set(full) & set(open_a)
        assert scene_delta(s, scene_delta(s, d)) == frozenset()


def test_face_order_oracle():
    # the face test agrees with the limit test by midpoints, and failures
    # come with a separating line
    rng = random.Random(3)
    scenes = [build_arrangement([(1, 0, 0), (0, 1, 0), (1, 1, -1)]),
              build_arrangement([(1, 0, 0), (1, 0, -1)]),
              concurrent(2)]
    for s in scenes:
        for a in s.cells:
            for b in s.cells:
                face = all(x == 0 or x == y for x, y in zip(a, b))
                wa, wb = s.witness[a], s.witness[b]
                mid = ((wa[0] + wb[0]) / 2, (wa[1] + wb[1]) / 2)
                if face:
                    assert s.signs_of(mid) == b or a == b
                else:
                    sep = [i for i, (x, y) in enumerate(zip(a, b))
                           if x != 0 and x != y]
                    assert sep


def test_small_scene_frames_validate():
    # every point-generated piece of a finite cell quotient of the plane
    # must pass the classifier, whether or not the whole scene has a root
    scenes = [build_arrangement([(1, 0, 0)]),
              build_arrangement([(1, 0, 0), (1, 0, -1)]),
              build_arrangement([(1, 0, 0), (0, 1, 0), (1, 1, -1)]),
              concurrent(2)]
    for s in scenes:
        fr = scene_frame(s)
        if fr.root is not None:
            assert classify_frame(fr).validates
        for x in range(fr.n):
            worlds = sorted(fr.successors(x))
            relabel = {w: i for i, w in enumerate(worlds)}
            sub = Frame(len(worlds),
                        [(relabel[a], relabel[b]) for a in worlds
                         for b in fr.successors(a) if b in relabel and a != b],
                        root=relabel[x])
            assert classify_frame(sub).validates, (s.lines, x)


def test_wrap_map_validity():
    assert wrap_map(4, 1)[1] == 1 and wrap_map(4, 1)[2] == 2
    assert wrap_map(4, 2)[5] == 1
    with pytest.raises(ValueError):
        wrap_map(3, 2)


def test_realize_crown_two_model():
    model = Model(crown(2), {"p": {1}})
    real = realize_crown_model(model, 0, formula=parse("<>[]p"))
    assert len(real.scene.lines) == 2
    assert all(v == 0 for v in real.cell)
    assert eval_scene(real.scene, real.val, real.cell, parse("<>[]p"))
    wm = WorldMap(real.cell_world)
    assert is_p_morphism(wm, scene_frame(real.scene), crown(2))


def test_realize_crown_one_uses_wrap():
    model = Model(crown(1), {"p": {1}})
    real = realize_crown_model(model, 0, formula=parse("<>[]p & <><>p"))
    assert len(real.scene.lines) == 2  # crown(4) scene wrapped onto crown(1)
    wm = WorldMap(real.cell_world)
    assert is_p_morphism(wm, scene_frame(real.scene), crown(1))
    assert wm.is_onto(crown(1))


def test_realize_nonroot_witness():
    model = Model(crown(2), {"p": {2}})
    real = realize_crown_model(model, 2, formula=parse("p & <>~p"))
    assert real.cell_world[real.scene.cells.index(real.cell)] == 2


def test_realize_rejects_non_crown():
    from polyplane.kripke import Frame
    with pytest.raises(ValueError):
        realize_crown_model(Model(Frame(4, [(0, 1), (1, 2), (2, 3)], root=0), {}), 0)


def test_realize_solver_witnesses_roundtrip():
    rng = random.Random(77)
    done = 0
    while done < 10:
        f = random_formula(rng, rng.randint(2, 6), ("p", "q"))
        res = decide_sat(f)
        if not res.sat or res.n > 12:
            continue
        real = realize_crown_model(res.model, res.world, formula=f)
        assert eval_scene(real.scene, real.val, real.cell, f)
        done += 1


def test_scene_json_roundtrip():
    s = concurrent(2)
    val = {"p": frozenset({s.cells[0], s.cells[3]})}
    d = scene_to_dict(s, val)
    s2, val2 = scene_from_dict(d)
    assert s2.lines == s.lines and s2.cells == s.cells
    assert val2 == val


def test_cells_to_dnf_roundtrip():
    s = concurrent(3)
    chosen = frozenset(s.cells[i] for i in (0, 2, 5))
    assert compile_polygon(s, cells_to_dnf(s, chosen)) == chosen


def test_svg_output():
    model = Model(crown(2), {"p": {1, 2}})
    real = realize_crown_model(model, 0)
    svg = scene_to_svg(real.scene, real.val)
    assert svg.startswith("<svg") and svg.endswith("</svg>")
    assert svg == scene_to_svg(real.scene, real.val)  # deterministic
    with pytest.raises(ValueError):
        scene_to_svg(build_arrangement([(1, 0, 0), (1, 0, -1)]), {})


def test_feasible_point_cases():
    # single equality with inequalities
    got = feasible_point([(Fraction(1), Fraction(0), Fraction(0))],
                         [(Fraction(0), Fraction(1), Fraction(-1))])
    assert got is not None and got[0] == 0 and got[1] > 1
    # inconsistent equalities
    assert feasible_point([(Fraction(1), Fraction(0), Fraction(0)),
                           (Fraction(1), Fraction(0), Fraction(-1))], []) is None
    # strict sandwich with no room
    assert feasible_point([], [(Fraction(1), Fraction(0), Fraction(0)),
                               (Fraction(-1), Fraction(0), Fraction(0))]) is None

def test_two_line_scene_maps_onto_crown_four():
    # vertex to the root, rays to the even worlds, sectors to the odd ones
    s = build_arrangement([(1, 0, 0), (0, 1, 0)])
    mapping = concurrent_crown_map(s)
    wm = WorldMap(mapping)
    assert is_p_morphism(wm, scene_frame(s), crown(4))
    assert wm.is_onto(crown(4))
    vertex_idx = s.cells.index((0, 0))
    assert mapping[vertex_idx] == 0
    for i, cell in enumerate(s.cells):
        zeros = sum(1 for v in cell if v == 0)
        if zeros == 1:
            assert mapping[i] % 2 == 0 and mapping[i] != 0
        elif zeros == 0:
            assert mapping[i] % 2 == 1
