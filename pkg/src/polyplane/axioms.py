"""The five forbidden frames, the exclusion axiom, the two concise axioms,
and the finite-frame classifier.

A finite rooted S4 frame validates the logic iff no generated subframe of it
maps p-morphically onto any of the five forbidden frames B1..B5.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .formula import And, Box, Diamond, Formula, Implies, Not, Var, conj
from .kripke import Frame, WorldMap, find_subreduction, is_p_morphism, jankov_fine


@dataclass(frozen=True)
class ForbiddenFrame:
    id: str
    frame: Frame


def forbidden_frames() -> list[ForbiddenFrame]:
    """The five minimal frames a valid frame must not subreduce to.

    B1  two-world cluster
    B2  two-world cluster seeing one extra reflexive point
    B3  root seeing three pairwise unrelated maximal points ("trident")
    B4  reflexive-transitive 4-chain
    B5  root seeing a 2-chain and, separately, a maximal point
    """
    b1 = Frame(2, [(0, 1), (1, 0)], root=0)
    b2 = Frame(3, [(0, 1), (1, 0), (0, 2), (1, 2)], root=0)
    b3 = Frame(4, [(0, 1), (0, 2), (0, 3)], root=0)
    b4 = Frame(4, [(0, 1), (1, 2), (2, 3)], root=0)
    b5 = Frame(4, [(0, 1), (1, 2), (0, 3)], root=0)
    return [ForbiddenFrame("B1", b1), ForbiddenFrame("B2", b2),
            ForbiddenFrame("B3", b3), ForbiddenFrame("B4", b4),
            ForbiddenFrame("B5", b5)]


def xi() -> Formula:
    """Conjunction of the negated frame formulas of B1..B5, with a disjoint
    variable family per conjunct."""
    parts = [Not(jankov_fine(ff.frame, prefix=f"b{i}w"))
             for i, ff in enumerate(forbidden_frames(), start=1)]
    return conj(parts)


def axiom_I() -> Formula:
    p = Var("p")
    return Implies(p, Box(Implies(Not(p), Box(Implies(p, Box(p))))))


def axiom_II() -> Formula:
    # gamma demands three incompatible regions near a marked point: two with
    # interior (they feed the p / ~p bridge in the consequent) and a third
    # that may be boundary-only.  Box-guarding the third as well would make
    # the premise unsatisfiable on the root-over-chain-plus-point frame,
    # which would then validate the axiom vacuously and escape the
    # classification.
    p, q, r = Var("p"), Var("q"), Var("r")
    rq = And(r, q)
    gamma = And(And(Diamond(Box(And(p, q))),
                    Diamond(Box(And(Not(p), q)))),
                Diamond(And(p, Not(q))))
    consequent = Implies(rq, Diamond(And(And(Not(rq), Diamond(Box(p))),
                                         Diamond(Box(Not(p))))))
    return Implies(Box(Implies(rq, gamma)), consequent)


@dataclass(frozen=True)
class Verdict:
    """Classification of a finite rooted frame; a refutation carries the
    p-morphism witnessing the subreduction onto the named forbidden frame."""

    validates: bool
    refuted_id: Optional[str] = None
    witness: Optional[WorldMap] = None

    def __bool__(self):
        return self.validates


def classify_frame(frame: Frame, budget: int = 2_000_000) -> Verdict:
    """Validates iff no subreduction onto any forbidden frame exists; else
    refutes with the first witness in B1..B5 order."""
    frame = frame.rooted()
    for ff in forbidden_frames():
        wm = find_subreduction(frame, ff.frame, budget=budget)
        if wm is not None:
            assert is_p_morphism(wm, frame, ff.frame) and wm.is_onto(ff.frame)
            return Verdict(False, ff.id, wm)
    return Verdict(True)
