"""Modal formulas: AST, concrete syntax, closure sets, substitution.

Concrete syntax::

    formula := iff
    iff     := imp ('<->' iff)?            right associative
    imp     := or ('->' imp)?              right associative
    or      := and ('|' and)*              left associative
    and     := unary ('&' unary)*          left associative
    unary   := '~' unary | '[]' unary | '<>' unary | atom
    atom    := ident | 'T' | 'F' | '(' formula ')'
    ident   := [A-Za-z_][A-Za-z0-9_]*   (T and F are reserved literals)

Binding strength: ``~ [] <>``  >  ``&``  >  ``|``  >  ``->``  >  ``<->``.
'T' is sugar for ~F; there is no separate AST node for it.
"""

from __future__ import annotations


class Formula:
    """Base class of all formula nodes.

    Nodes are immutable values with structural equality; hashes are computed
    once at construction so formulas are cheap dictionary keys.
    """

    __slots__ = ("_hash",)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return (self is other
                or (type(self) is type(other) and self._hash == other._hash
                    and self._tup() == other._tup()))

    def __str__(self) -> str:
        return pretty(self)


class Var(Formula):
    __slots__ = ("name",)

    def __init__(self, name: str):
        if not _is_identifier(name):
            raise ValueError(f"invalid variable name {name!r}")
        self.name = name
        self._hash = hash(("Var", name))

    def _tup(self):
        return (self.name,)

    def __repr__(self):
        return f"Var({self.name!r})"


class Bottom(Formula):
    __slots__ = ()

    def __init__(self):
        self._hash = hash("Bottom")

    def _tup(self):
        return ()

    def __repr__(self):
        return "Bottom()"


class _Unary(Formula):
    __slots__ = ("sub",)

    def __init__(self, sub: Formula):
        if not isinstance(sub, Formula):
            raise TypeError(f"expected a Formula, got {sub!r}")
        self.sub = sub
        self._hash = hash((type(self).__name__, sub._hash))

    def _tup(self):
        return (self.sub,)

    def __repr__(self):
        return f"{type(self).__name__}({self.sub!r})"


class Not(_Unary):
    __slots__ = ()


class Diamond(_Unary):
    __slots__ = ()


class Box(_Unary):
    __slots__ = ()


class _Binary(Formula):
    __slots__ = ("left", "right")

    def __init__(self, left: Formula, right: Formula):
        if not (isinstance(left, Formula) and isinstance(right, Formula)):
            raise TypeError("expected Formula operands")
        self.left = left
        self.right = right
        self._hash = hash((type(self).__name__, left._hash, right._hash))

    def _tup(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"{type(self).__name__}({self.left!r}, {self.right!r})"


class And(_Binary):
    __slots__ = ()


class Or(_Binary):
    __slots__ = ()


class Implies(_Binary):
    __slots__ = ()


class Iff(_Binary):
    __slots__ = ()


_RESERVED_NAMES = {"T", "F"}


def _is_identifier(name: str) -> bool:
    if not name or name in _RESERVED_NAMES:
        return False
    if not (name[0].isalpha() or name[0] == "_"):
        return False
    return all(c.isalnum() or c == "_" for c in name)


TOP = Not(Bottom())

_BINARY = (And, Or, Implies, Iff)
_UNARY = (Not, Box, Diamond)


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, _BINARY):
        return (f.left, f.right)
    if isinstance(f, _UNARY):
        return (f.sub,)
    return ()


def ast_size(f: Formula) -> int:
    """Number of AST nodes."""
    return 1 + sum(ast_size(c) for c in children(f))


def modal_depth(f: Formula) -> int:
    if isinstance(f, (Box, Diamond)):
        return 1 + modal_depth(f.sub)
    if children(f):
        return max(modal_depth(c) for c in children(f))
    return 0


def variables(f: Formula) -> frozenset[str]:
    """Set of variable names occurring in f."""
    if isinstance(f, Var):
        return frozenset((f.name,))
    out: frozenset[str] = frozenset()
    for c in children(f):
        out |= variables(c)
    return out


def subformulas(f: Formula) -> frozenset[Formula]:
    """All subformulas of f, including f itself."""
    seen: set[Formula] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        stack.extend(children(g))
    return frozenset(seen)


def negate(f: Formula) -> Formula:
    """Single negation: strips a leading ~ instead of stacking one."""
    return f.sub if isinstance(f, Not) else Not(f)


def closure(phi: Formula) -> frozenset[Formula]:
    """Smallest set containing all subformulas of phi and closed under
    single negations.

    For every member psi, exactly one of psi / negate(psi) counts as the
    positive representative (the one that is not itself a negation).
    """
    subs = subformulas(phi)
    return subs | frozenset(negate(g) for g in subs)


def substitute(f: Formula, mapping: dict[str, Formula]) -> Formula:
    """Simultaneous substitution of variables; no re-substitution into images."""
    if isinstance(f, Var):
        return mapping.get(f.name, f)
    if isinstance(f, Bottom):
        return f
    if isinstance(f, Not):
        return Not(substitute(f.sub, mapping))
    if isinstance(f, Box):
        return Box(substitute(f.sub, mapping))
    if isinstance(f, Diamond):
        return Diamond(substitute(f.sub, mapping))
    return type(f)(substitute(f.left, mapping), substitute(f.right, mapping))


def conj(parts: list[Formula]) -> Formula:
    """Left-folded conjunction; empty list gives T."""
    if not parts:
        return TOP
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts: list[Formula]) -> Formula:
    if not parts:
        return Bottom()
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


# ---------------------------------------------------------------------------
# Printing

_PREC = {Iff: 0, Implies: 1, Or: 2, And: 3}
_INFIX = {Iff: "<->", Implies: "->", Or: "|", And: "&"}
_PREFIX = {Not: "~", Box: "[]", Diamond: "<>"}


def pretty(f: Formula) -> str:
    """Parenthesis-minimal rendering; parse(pretty(f)) == f."""
    return _render(f, 0)


def _render(f: Formula, min_prec: int) -> str:
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Bottom):
        return "F"
    if isinstance(f, _UNARY):
        return _PREFIX[type(f)] + _render(f.sub, 4)
    prec = _PREC[type(f)]
    if prec >= 2:  # & and | are left associative
        s = _render(f.left, prec) + " " + _INFIX[type(f)] + " " + _render(f.right, prec + 1)
    else:  # -> and <-> are right associative
        s = _render(f.left, prec + 1) + " " + _INFIX[type(f)] + " " + _render(f.right, prec)
    return "(" + s + ")" if prec < min_prec else s


# ---------------------------------------------------------------------------
# Parsing

class ParseError(ValueError):
    """Syntax error with position and the set of expected tokens."""

    def __init__(self, message: str, line: int, col: int, expected: tuple[str, ...]):
        super().__init__(f"{message} at line {line}, column {col} (expected: {', '.join(expected)})")
        self.line = line
        self.col = col
        self.expected = expected


_PUNCT = ("<->", "->", "[]", "<>", "~", "&", "|", "(", ")")


def _tokenize(text: str) -> list[tuple[str, str, int, int]]:
    # token = (kind, value, line, col); kind is 'ident', a punct literal, or 'end'
    toks = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        for p in _PUNCT:
            if text.startswith(p, i):
                toks.append((p, p, line, col))
                i += len(p)
                col += len(p)
                break
        else:
            if ch.isalpha() or ch == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                toks.append(("ident", text[i:j], line, col))
                col += j - i
                i = j
            else:
                raise ParseError(f"unexpected character {ch!r}", line, col,
                                 ("formula",))
    toks.append(("end", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def take(self, kind: str):
        tok = self.toks[self.pos]
        if tok[0] != kind:
            self.fail((kind,))
        self.pos += 1
        return tok

    def fail(self, expected: tuple[str, ...]):
        kind, value, line, col = self.peek()
        shown = value if value else "end of input"
        raise ParseError(f"unexpected {shown!r}", line, col, expected)

    def formula(self) -> Formula:
        left = self.imp()
        if self.peek()[0] == "<->":
            self.take("<->")
            return Iff(left, self.formula())
        return left

    def imp(self) -> Formula:
        left = self.disjunct()
        if self.peek()[0] == "->":
            self.take("->")
            return Implies(left, self.imp())
        return left

    def disjunct(self) -> Formula:
        out = self.conjunct()
        while self.peek()[0] == "|":
            self.take("|")
            out = Or(out, self.conjunct())
        return out

    def conjunct(self) -> Formula:
        out = self.unary()
        while self.peek()[0] == "&":
            self.take("&")
            out = And(out, self.unary())
        return out

    def unary(self) -> Formula:
        kind = self.peek()[0]
        if kind == "~":
            self.take("~")
            return Not(self.unary())
        if kind == "[]":
            self.take("[]")
            return Box(self.unary())
        if kind == "<>":
            self.take("<>")
            return Diamond(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        kind, value, line, col = self.peek()
        if kind == "(":
            self.take("(")
            f = self.formula()
            self.take(")")
            return f
        if kind == "ident":
            self.take("ident")
            if value == "F":
                return Bottom()
            if value == "T":
                return TOP
            return Var(value)
        self.fail(("identifier", "T", "F", "~", "[]", "<>", "("))


def parse(text: str) -> Formula:
    """Parse the concrete syntax above into a Formula."""
    p = _Parser(text)
    f = p.formula()
    if p.peek()[0] != "end":
        p.fail(("end of input", "<->", "->", "|", "&"))
    return f
