"""Constraints: propagation, entailment, naive checking and symmetry action.

Every constraint object doubles as its own propagator.  Constraints carry no
per-store state apart from optional hints, so the same object may be posted
to several stores.

Terms are :class:`View` (``scale * x + offset`` with ``scale`` in {+1, -1})
or :class:`Const`.
"""
from __future__ import annotations

import enum
from typing import Sequence

from .engine import BND, DOM, FIX, Failure, Store
from .symmetry import AffineMap, PermMap, Symmetry, UnrepresentableSymmetry


class Entailment(enum.Enum):
    ENTAILED = "entailed"
    DISENTAILED = "disentailed"
    UNKNOWN = "unknown"


E, D, U = Entailment.ENTAILED, Entailment.DISENTAILED, Entailment.UNKNOWN


# -- terms -------------------------------------------------------------------

class View:
    __slots__ = ("var", "scale", "offset")

    def __init__(self, var: int, scale: int = 1, offset: int = 0):
        if scale not in (1, -1):
            raise ValueError("scale must be +1 or -1")
        self.var = var
        self.scale = scale
        self.offset = offset

    def key(self):
        return ("v", self.var, self.scale, self.offset)

    def __eq__(self, other):
        return isinstance(other, View) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        x = f"x{self.var}"
        if self.scale == 1:
            return x if self.offset == 0 else f"{x}{self.offset:+d}"
        return f"{self.offset}-{x}"

    def __neg__(self):
        return View(self.var, -self.scale, -self.offset)

    def __add__(self, k: int):
        return View(self.var, self.scale, self.offset + k)

    def __rsub__(self, k: int):
        return View(self.var, -self.scale, k - self.offset)

    def map_value(self, theta: AffineMap) -> "View":
        """The view ``theta(self)``."""
        return View(self.var, theta.scale * self.scale, theta.scale * self.offset + theta.offset)

    def eval(self, values) -> int:
        return self.scale * values[self.var] + self.offset

    def min(self, s: Store) -> int:
        if self.scale == 1:
            return s.min(self.var) + self.offset
        return self.offset - s.max(self.var)

    def max(self, s: Store) -> int:
        if self.scale == 1:
            return s.max(self.var) + self.offset
        return self.offset - s.min(self.var)

    def fixed(self, s: Store) -> bool:
        return s.is_fixed(self.var)

    def value(self, s: Store) -> int:
        return self.scale * s.value(self.var) + self.offset

    def contains(self, s: Store, val: int) -> bool:
        return s.contains(self.var, self.scale * (val - self.offset))

    def values(self, s: Store) -> list[int]:
        vals = [self.scale * v + self.offset for v in s.values(self.var)]
        if self.scale == -1:
            vals.reverse()
        return vals

    def remove(self, s: Store, val: int) -> bool:
        return s.remove(self.var, self.scale * (val - self.offset))

    def assign(self, s: Store, val: int) -> bool:
        return s.assign(self.var, self.scale * (val - self.offset))

    def set_min(self, s: Store, val: int) -> bool:
        if self.scale == 1:
            return s.set_min(self.var, val - self.offset)
        return s.set_max(self.var, self.offset - val)

    def set_max(self, s: Store, val: int) -> bool:
        if self.scale == 1:
            return s.set_max(self.var, val - self.offset)
        return s.set_min(self.var, self.offset - val)


class Const:
    __slots__ = ("k",)
    var = None

    def __init__(self, k: int):
        self.k = k

    def key(self):
        return ("c", self.k)

    def __eq__(self, other):
        return isinstance(other, Const) and other.k == self.k

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return str(self.k)

    def eval(self, values) -> int:
        return self.k

    def min(self, s):
        return self.k

    def max(self, s):
        return self.k

    def fixed(self, s):
        return True

    def value(self, s):
        return self.k

    def contains(self, s, val):
        return val == self.k

    def values(self, s):
        return [self.k]

    def remove(self, s, val):
        if val == self.k:
            raise Failure("const")
        return False

    def assign(self, s, val):
        if val != self.k:
            raise Failure("const")
        return False

    def set_min(self, s, val):
        if val > self.k:
            raise Failure("const")
        return False

    def set_max(self, s, val):
        if val < self.k:
            raise Failure("const")
        return False


def term(x) -> "View | Const":
    if isinstance(x, (View, Const)):
        return x
    if isinstance(x, int):
        return Const(x)
    raise TypeError(f"not a term: {x!r}")


def var(i: int) -> View:
    return View(i)


def _map_term(t, g: Symmetry):
    """Replace ``x_j`` by ``theta^-1(x_sigma(j))`` in term ``t``."""
    if isinstance(t, Const):
        return t
    v = View(g.var(t.var), t.scale, t.offset)
    theta = g.val_map
    if theta.is_identity:
        return v
    if isinstance(theta, AffineMap):
        inner = theta.inverse()
        # a*x + b with x replaced by c*x + d
        return View(v.var, v.scale * inner.scale, v.scale * inner.offset + v.offset)
    raise UnrepresentableSymmetry("explicit value permutation on an arithmetic term")


# -- base --------------------------------------------------------------------

class Constraint:
    priority = 0
    idempotent = False  # True: one call always reaches the propagator's own fixpoint

    def scope(self) -> list[int]:
        raise NotImplementedError

    def subscriptions(self) -> list[tuple[int, int]]:
        return [(v, DOM) for v in self.scope()]

    def propagate(self, s: Store) -> None:
        raise NotImplementedError

    def check(self, values) -> bool:
        raise NotImplementedError

    def entailment(self, s: Store) -> Entailment:
        """Sound default: decided only once every scope variable is fixed."""
        scope = self.scope()
        if all(s.is_fixed(v) for v in scope):
            vals = {v: s.value(v) for v in scope}
            return E if self.check(vals) else D
        return U

    def apply(self, g: Symmetry) -> "Constraint":
        raise UnrepresentableSymmetry(type(self).__name__)

    def key(self):
        return (type(self).__name__, id(self))

    def __eq__(self, other):
        return isinstance(other, Constraint) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


def _scope_of(*terms) -> list[int]:
    out = []
    for t in terms:
        if t.var is not None and t.var not in out:
            out.append(t.var)
    return out


# -- comparisons ---------------------------------------------------------------

def _normalize_order(x, y):
    # prefer positive scale; -a+b op -c+d  <=>  c-d op a-b
    if isinstance(x, View) and isinstance(y, View) and x.scale == -1 and y.scale == -1:
        x, y = View(y.var, 1, -y.offset), View(x.var, 1, -x.offset)
    elif isinstance(x, Const) and isinstance(y, View) and y.scale == -1:
        x, y = View(y.var, 1, -y.offset), Const(-x.k)
    elif isinstance(y, Const) and isinstance(x, View) and x.scale == -1:
        x, y = Const(-y.k), View(x.var, 1, -x.offset)
    # move offsets to the right-hand side constant or onto a single view
    if isinstance(x, View) and isinstance(y, Const) and x.offset:
        x, y = View(x.var, x.scale, 0), Const(y.k - x.offset)
    elif isinstance(y, View) and isinstance(x, Const) and y.offset:
        x, y = Const(x.k - y.offset), View(y.var, y.scale, 0)
    elif isinstance(x, View) and isinstance(y, View) and x.scale == 1 and y.scale == 1 and x.offset:
        x, y = View(x.var), View(y.var, 1, y.offset - x.offset)
    return x, y


class Lt(Constraint):
    """``x < y``."""

    op = "<"

    def __init__(self, x, y):
        self.x, self.y = _normalize_order(term(x), term(y))

    def scope(self):
        return _scope_of(self.x, self.y)

    def subscriptions(self):
        return [(v, BND) for v in self.scope()]

    def key(self):
        return (self.op, self.x.key(), self.y.key())

    def __repr__(self):
        return f"{self.x} {self.op} {self.y}"

    def propagate(self, s):
        x, y = self.x, self.y
        x.set_max(s, y.max(s) - 1)
        y.set_min(s, x.min(s) + 1)

    def check(self, values):
        return self.x.eval(values) < self.y.eval(values)

    def entailment(self, s):
        if self.x.max(s) < self.y.min(s):
            return E
        if self.x.min(s) >= self.y.max(s):
            return D
        return U

    def negation(self):
        return Le(self.y, self.x)

    def apply(self, g):
        return type(self)(_map_term(self.x, g), _map_term(self.y, g))


class Le(Lt):
    """``x <= y``."""

    op = "<="

    def propagate(self, s):
        x, y = self.x, self.y
        x.set_max(s, y.max(s))
        y.set_min(s, x.min(s))

    def check(self, values):
        return self.x.eval(values) <= self.y.eval(values)

    def entailment(self, s):
        if self.x.max(s) <= self.y.min(s):
            return E
        if self.x.min(s) > self.y.max(s):
            return D
        return U

    def negation(self):
        return Lt(self.y, self.x)


def Gt(x, y) -> Lt:
    return Lt(y, x)


def Ge(x, y) -> Le:
    return Le(y, x)


class Eq(Constraint):
    """``x == y``."""

    op = "=="

    def __init__(self, x, y):
        x, y = term(x), term(y)
        if isinstance(x, Const) and isinstance(y, View):
            x, y = y, x
        if isinstance(x, View) and isinstance(y, Const) and x.scale == -1:
            x, y = View(x.var), Const(x.offset - y.k)
        elif isinstance(x, View) and isinstance(y, Const) and x.offset:
            x, y = View(x.var), Const(y.k - x.offset)
        self.x, self.y = x, y

    def scope(self):
        return _scope_of(self.x, self.y)

    def key(self):
        a, b = self.x.key(), self.y.key()
        return (self.op, a, b) if self.y.var is None or a <= b else (self.op, b, a)

    def __repr__(self):
        return f"{self.x} {self.op} {self.y}"

    def subscriptions(self):
        return [(v, DOM) for v in self.scope()]

    def propagate(self, s):
        x, y = self.x, self.y
        if isinstance(y, Const):
            x.assign(s, y.k)
            return
        for v in x.values(s):
            if not y.contains(s, v):
                x.remove(s, v)
        for v in y.values(s):
            if not x.contains(s, v):
                y.remove(s, v)

    def check(self, values):
        return self.x.eval(values) == self.y.eval(values)

    def entailment(self, s):
        x, y = self.x, self.y
        if x.fixed(s) and y.fixed(s):
            return E if x.value(s) == y.value(s) else D
        if x.max(s) < y.min(s) or y.max(s) < x.min(s):
            return D
        if not any(y.contains(s, v) for v in x.values(s)):
            return D
        return U

    def negation(self):
        return Ne(self.x, self.y)

    def apply(self, g):
        if isinstance(g.val_map, PermMap) and not g.val_map.is_identity:
            x, y = self.x, self.y
            plain = isinstance(x, View) and x.scale == 1 and x.offset == 0
            if plain and isinstance(y, Const):
                return type(self)(View(g.var(x.var)), Const(g.val(y.k)))
            if plain and isinstance(y, View) and y.scale == 1 and y.offset == 0:
                return type(self)(View(g.var(x.var)), View(g.var(y.var)))
            raise UnrepresentableSymmetry("explicit value permutation on an arithmetic term")
        return type(self)(_map_term(self.x, g), _map_term(self.y, g))


class Ne(Eq):
    """``x != y``."""

    op = "!="

    def subscriptions(self):
        return [(v, FIX) for v in self.scope()]

    def propagate(self, s):
        x, y = self.x, self.y
        if x.fixed(s):
            y.remove(s, x.value(s))
        elif y.fixed(s):
            x.remove(s, y.value(s))

    def check(self, values):
        return self.x.eval(values) != self.y.eval(values)

    def entailment(self, s):
        e = Eq.entailment(self, s)
        return D if e is E else E if e is D else U

    def negation(self):
        return Eq(self.x, self.y)


# -- logical combinators -----------------------------------------------------

class And(Constraint):
    def __init__(self, parts: Sequence[Constraint]):
        self.parts = tuple(parts)

    def scope(self):
        out = []
        for c in self.parts:
            for v in c.scope():
                if v not in out:
                    out.append(v)
        return out

    def key(self):
        return ("and", tuple(c.key() for c in self.parts))

    def __repr__(self):
        return " & ".join(map(repr, self.parts)) if self.parts else "true"

    def propagate(self, s):
        for c in self.parts:
            c.propagate(s)

    def check(self, values):
        return all(c.check(values) for c in self.parts)

    def entailment(self, s):
        out = E
        for c in self.parts:
            e = c.entailment(s)
            if e is D:
                return D
            if e is U:
                out = U
        return out

    def apply(self, g):
        return And([c.apply(g) for c in self.parts])


class Implies(Constraint):
    """``hyp -> concl``; the conclusion is enforced once ``hyp`` is entailed."""

    def __init__(self, hyp: Constraint, concl: Constraint):
        self.hyp = hyp
        self.concl = concl

    def scope(self):
        out = self.hyp.scope()
        for v in self.concl.scope():
            if v not in out:
                out.append(v)
        return out

    def key(self):
        return ("->", self.hyp.key(), self.concl.key())

    def __repr__(self):
        return f"({self.hyp}) -> ({self.concl})"

    def propagate(self, s):
        h = self.hyp.entailment(s)
        if h is E:
            self.concl.propagate(s)
        elif h is U and self.concl.entailment(s) is D:
            hyp = self.hyp
            if isinstance(hyp, And):
                open_parts = [c for c in hyp.parts if c.entailment(s) is not E]
                if len(open_parts) == 1 and hasattr(open_parts[0], "negation"):
                    open_parts[0].negation().propagate(s)
            elif hasattr(hyp, "negation"):
                hyp.negation().propagate(s)

    def check(self, values):
        return (not self.hyp.check(values)) or self.concl.check(values)

    def entailment(self, s):
        h = self.hyp.entailment(s)
        if h is D:
            return E
        c = self.concl.entailment(s)
        if c is E:
            return E
        if h is E and c is D:
            return D
        return U

    def apply(self, g):
        return Implies(self.hyp.apply(g), self.concl.apply(g))


class Reified(Constraint):
    """``b <-> c`` (mode ``full``) or ``b -> c`` (mode ``implication``).

    ``b`` is a 0/1 variable; it may be created non-backtrackable, in which
    case a value it takes sticks across backtracking and keeps ``c`` posted.
    """

    def __init__(self, c: Constraint, b: int, mode: str = "full"):
        if mode not in ("full", "implication"):
            raise ValueError(mode)
        if mode == "full" and not hasattr(c, "negation"):
            raise ValueError("full reification needs a negatable constraint")
        self.c = c
        self.b = b
        self.mode = mode

    def scope(self):
        return [self.b] + [v for v in self.c.scope() if v != self.b]

    def key(self):
        return ("reif", self.mode, self.b, self.c.key())

    def __repr__(self):
        arrow = "<->" if self.mode == "full" else "->"
        return f"x{self.b} {arrow} ({self.c})"

    def propagate(self, s):
        b = self.b
        if s.is_fixed(b):
            if s.value(b) == 1:
                self.c.propagate(s)
            elif self.mode == "full":
                self.c.negation().propagate(s)
            return
        e = self.c.entailment(s)
        if e is E and self.mode == "full":
            s.assign(b, 1)
        elif e is D:
            s.assign(b, 0)

    def check(self, values):
        if self.mode == "full":
            return (values[self.b] == 1) == self.c.check(values)
        return values[self.b] == 0 or self.c.check(values)


def reify(store: Store, c: Constraint, b: int, mode: str = "full") -> int:
    return store.post(Reified(c, b, mode))


# -- lexicographic ordering ----------------------------------------------------

class LexLeq(Constraint):
    """``xs <=_lex ys`` over vectors of terms.

    Filtering is domain consistent when the positions involve distinct
    variables; a variable shared between positions is treated as independent
    copies, which stays sound.
    """

    priority = 1

    def __init__(self, xs: Sequence, ys: Sequence):
        if len(xs) != len(ys):
            raise ValueError("lex vectors differ in length")
        xs = [term(t) for t in xs]
        ys = [term(t) for t in ys]
        # negating both sides reverses the order
        if xs and all(isinstance(a, View) and isinstance(b, View) and a.scale == -1 and b.scale == -1
                      and a.offset == b.offset for a, b in zip(xs, ys)):
            xs, ys = [View(b.var) for b in ys], [View(a.var) for a in xs]
        self.xs = tuple(xs)
        self.ys = tuple(ys)

    def scope(self):
        return _scope_of(*self.xs, *self.ys)

    def key(self):
        return ("lex<=", tuple(t.key() for t in self.xs), tuple(t.key() for t in self.ys))

    def __repr__(self):
        return f"<{', '.join(map(repr, self.xs))}> <=lex <{', '.join(map(repr, self.ys))}>"

    def check(self, values):
        a = [t.eval(values) for t in self.xs]
        b = [t.eval(values) for t in self.ys]
        return a <= b

    def entailment(self, s):
        for x, y in zip(self.xs, self.ys):
            if x.fixed(s) and y.fixed(s) and x.value(s) == y.value(s):
                continue
            if x == y:
                continue
            if x.max(s) < y.min(s):
                return E
            if x.min(s) > y.max(s):
                return D
            return U
        return E

    def apply(self, g):
        return LexLeq([_map_term(t, g) for t in self.xs], [_map_term(t, g) for t in self.ys])

    def propagate(self, s):
        while self._filter(s):
            pass

    def _filter(self, s) -> bool:
        xs, ys = self.xs, self.ys
        n = len(xs)
        xv = [x.values(s) for x in xs]
        yv = [y.values(s) for y in ys]
        # can_eq[i]: positions i can be equal; lt[i]: x_i < y_i possible
        can_eq = [bool(set(a) & set(b)) for a, b in zip(xv, yv)]
        lt = [a[0] < b[-1] for a, b in zip(xv, yv)]
        # Q[i]: the suffix from i can satisfy <=lex given an equal prefix
        q = [False] * (n + 1)
        q[n] = True
        for i in range(n - 1, -1, -1):
            q[i] = lt[i] or (can_eq[i] and q[i + 1])
        if not q[0]:
            raise Failure("lex")
        changed = False
        prefix_eq = True
        earlier_lt = False
        for i in range(n):
            if earlier_lt:
                break
            if not prefix_eq:
                break
            a, b = xv[i], yv[i]
            ymax, xmin = b[-1], a[0]
            bset, aset = set(b), set(a)
            tail = q[i + 1]
            for v in a:
                if not (v < ymax or (tail and v in bset)):
                    changed |= xs[i].remove(s, v)
            for w in b:
                if not (w > xmin or (tail and w in aset)):
                    changed |= ys[i].remove(s, w)
            if lt[i]:
                earlier_lt = True
            prefix_eq = can_eq[i]
        return changed


# -- all-different -------------------------------------------------------------

class AllDifferent(Constraint):
    """Domain-consistent all-different via maximum matching and SCCs."""

    priority = 1
    idempotent = True

    def __init__(self, variables: Sequence[int]):
        self.vars = tuple(variables)
        self._hint: dict[int, int] = {}

    def scope(self):
        return list(self.vars)

    def key(self):
        return ("alldiff", self.vars)

    def __repr__(self):
        return f"alldifferent({', '.join(f'x{v}' for v in self.vars)})"

    def check(self, values):
        vals = [values[v] for v in self.vars]
        return len(set(vals)) == len(vals)

    def apply(self, g):
        return AllDifferent([g.var(v) for v in self.vars])

    def propagate(self, s):
        vs = self.vars
        # cheap pass: remove fixed values from the others
        changed = True
        while changed:
            changed = False
            seen = set()
            for v in vs:
                if s.is_fixed(v):
                    val = s.min(v)
                    if val in seen:
                        raise Failure("alldiff")
                    seen.add(val)
            if not seen:
                break
            for v in vs:
                if not s.is_fixed(v):
                    for val in seen:
                        if s.remove(v, val) and s.is_fixed(v):
                            changed = True
        open_vars = [v for v in vs if not s.is_fixed(v)]
        if len(open_vars) <= 1:
            return
        self._regin(s, open_vars)

    def _regin(self, s: Store, xs: list[int]) -> None:
        n = len(xs)
        doms = [s.values(v) for v in xs]
        values = sorted({val for d in doms for val in d})
        if len(values) < n:
            raise Failure("alldiff")
        vidx = {val: n + k for k, val in enumerate(values)}
        adj = [[vidx[val] for val in d] for d in doms]
        match = [-1] * n          # var -> value node
        owner = {}                # value node -> var
        hint = self._hint
        for i, v in enumerate(xs):
            h = hint.get(v)
            if h is not None and h in vidx:
                node = vidx[h]
                if node not in owner and node in adj[i]:
                    match[i] = node
                    owner[node] = i
        for i in range(n):
            if match[i] < 0 and not self._augment(i, adj, match, owner):
                raise Failure("alldiff")
        for i, v in enumerate(xs):
            hint[v] = values[match[i] - n]
        # residual graph: value -> var for unmatched edges, var -> value for matched
        total = n + len(values)
        succ = [[] for _ in range(total)]
        for i in range(n):
            succ[i].append(match[i])
            for node in adj[i]:
                if node != match[i]:
                    succ[node].append(i)
        # nodes reachable from free values
        reach = [False] * total
        stack = [node for node in range(n, total) if node not in owner]
        for node in stack:
            reach[node] = True
        while stack:
            u = stack.pop()
            for w in succ[u]:
                if not reach[w]:
                    reach[w] = True
                    stack.append(w)
        comp = _tarjan(succ)
        for i, v in enumerate(xs):
            for node in adj[i]:
                if node == match[i] or reach[node] or comp[node] == comp[i]:
                    continue
                s.remove(v, values[node - n])

    @staticmethod
    def _augment(i, adj, match, owner, visited=None) -> bool:
        if visited is None:
            visited = set()
        for node in adj[i]:
            if node in visited:
                continue
            visited.add(node)
            w = owner.get(node)
            if w is None or AllDifferent._augment(w, adj, match, owner, visited):
                match[i] = node
                owner[node] = i
                return True
        return False


def _tarjan(succ: list[list[int]]) -> list[int]:
    n = len(succ)
    index = [-1] * n
    low = [0] * n
    on = [False] * n
    comp = [-1] * n
    st: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        work = [(root, 0)]
        while work:
            u, k = work.pop()
            if k == 0:
                index[u] = low[u] = counter
                counter += 1
                st.append(u)
                on[u] = True
            recurse = False
            edges = succ[u]
            while k < len(edges):
                w = edges[k]
                k += 1
                if index[w] < 0:
                    work.append((u, k))
                    work.append((w, 0))
                    recurse = True
                    break
                if on[w] and index[w] < low[u]:
                    low[u] = index[w]
            if recurse:
                continue
            if low[u] == index[u]:
                while True:
                    w = st.pop()
                    on[w] = False
                    comp[w] = ncomp
                    if w == u:
                        break
                ncomp += 1
            if work:
                p = work[-1][0]
                if low[u] < low[p]:
                    low[p] = low[u]
    return comp


# -- arithmetic and counting -----------------------------------------------------

class AbsDiff(Constraint):
    """``d == |x - y|``, domain consistent."""

    idempotent = True

    def __init__(self, d: int, x: int, y: int):
        self.d, self.x, self.y = d, x, y

    def scope(self):
        return [self.d, self.x, self.y]

    def key(self):
        return ("absdiff", self.d, self.x, self.y)

    def __repr__(self):
        return f"x{self.d} == |x{self.x} - x{self.y}|"

    def check(self, values):
        return values[self.d] == abs(values[self.x] - values[self.y])

    def apply(self, g):
        return AbsDiff(g.var(self.d), g.var(self.x), g.var(self.y))

    def propagate(self, s):
        while self._filter(s):
            pass

    def _filter(self, s) -> bool:
        d, x, y = self.d, self.x, self.y
        off = min(s.min(x), s.min(y))
        xs = [v - off for v in s.values(x)]
        ys = [v - off for v in s.values(y)]
        dvals = s.values(d)
        dmask = 0
        for v in dvals:
            if v >= 0:
                dmask |= 1 << v
        if not dmask:
            raise Failure("absdiff")
        top = max(xs[-1], ys[-1])
        xbits = ybits = xrev = yrev = 0
        for v in xs:
            xbits |= 1 << v
            xrev |= 1 << (top - v)
        for v in ys:
            ybits |= 1 << v
            yrev |= 1 << (top - v)
        changed = False
        support_d = 0
        for v in xs:
            m = (ybits >> v) | (yrev >> (top - v))
            if not m & dmask:
                changed |= s.remove(x, v + off)
            support_d |= m
        for v in ys:
            m = (xbits >> v) | (xrev >> (top - v))
            if not m & dmask:
                changed |= s.remove(y, v + off)
        for v in dvals:
            if v < 0 or not (support_d >> v) & 1:
                changed |= s.remove(d, v)
        return changed


class Gcc(Constraint):
    """``occ[j] == #{k : x_k == values[j]}`` with every ``x_k`` in ``values``.

    Counting-level filtering on the occurrence bounds plus the sum rule.
    """

    priority = 1

    def __init__(self, variables: Sequence[int], values: Sequence[int], occ: Sequence[int]):
        if len(values) != len(occ):
            raise ValueError("one occurrence variable per value")
        self.vars = tuple(variables)
        self.values = tuple(values)
        self.occ = tuple(occ)

    def scope(self):
        return list(self.vars) + list(self.occ)

    def key(self):
        return ("gcc", self.vars, self.values, self.occ)

    def __repr__(self):
        return f"gcc({list(self.vars)}, {list(self.values)}, {list(self.occ)})"

    def check(self, values):
        xs = [values[v] for v in self.vars]
        if any(x not in self.values for x in xs):
            return False
        return all(values[o] == xs.count(d) for d, o in zip(self.values, self.occ))

    def propagate(self, s):
        allowed = self.values
        for v in self.vars:
            s.restrict(v, s.value_mask(v, allowed))
        while self._filter(s):
            pass

    def _filter(self, s) -> bool:
        changed = False
        n = len(self.vars)
        lo, hi = [], []
        for d, o in zip(self.values, self.occ):
            fixed = possible = 0
            for v in self.vars:
                if s.contains(v, d):
                    possible += 1
                    if s.is_fixed(v):
                        fixed += 1
            changed |= s.set_min(o, fixed)
            changed |= s.set_max(o, possible)
            omin, omax = s.min(o), s.max(o)
            if omax == fixed and possible > fixed:
                for v in self.vars:
                    if not s.is_fixed(v) and s.contains(v, d):
                        changed |= s.remove(v, d)
            elif omin == possible and possible > fixed:
                for v in self.vars:
                    if s.contains(v, d) and not s.is_fixed(v):
                        changed |= s.assign(v, d)
            lo.append(s.min(o))
            hi.append(s.max(o))
        slo, shi = sum(lo), sum(hi)
        if slo > n or shi < n:
            raise Failure("gcc")
        for j, o in enumerate(self.occ):
            changed |= s.set_max(o, n - (slo - lo[j]))
            changed |= s.set_min(o, n - (shi - hi[j]))
        return changed


class NValue(Constraint):
    """``z == number of distinct values taken by the variables``."""

    priority = 1

    def __init__(self, variables: Sequence[int], z: int):
        self.vars = tuple(variables)
        self.z = z

    def scope(self):
        return list(self.vars) + [self.z]

    def key(self):
        return ("nvalue", self.vars, self.z)

    def __repr__(self):
        return f"x{self.z} == nvalue({list(self.vars)})"

    def check(self, values):
        return values[self.z] == len({values[v] for v in self.vars})

    def propagate(self, s):
        union_vals = set()
        free_disjoint = False
        used = {s.min(v) for v in self.vars if s.is_fixed(v)}
        open_vars = [v for v in self.vars if not s.is_fixed(v)]
        for v in open_vars:
            vals = s.values(v)
            union_vals.update(vals)
            if not used.intersection(vals):
                free_disjoint = True
        union_vals |= used
        lo = len(used) + (1 if free_disjoint else 0)
        s.set_min(self.z, lo)
        s.set_max(self.z, min(len(self.vars), len(union_vals)))
        if not open_vars:
            s.assign(self.z, len(used))
        elif len(used) == s.max(self.z):
            for v in open_vars:
                s.restrict(v, s.value_mask(v, used))


class AcceptedProfit(Constraint):
    """``p == sum(offers[i] for accepted i)``; ``x_i == reject`` means rejected."""

    priority = 1

    def __init__(self, variables: Sequence[int], offers: Sequence[int], reject: int, p: int):
        self.vars = tuple(variables)
        self.offers = tuple(offers)
        self.reject = reject
        self.p = p

    def scope(self):
        return list(self.vars) + [self.p]

    def subscriptions(self):
        return [(v, DOM) for v in self.vars] + [(self.p, BND)]

    def key(self):
        return ("profit", self.vars, self.offers, self.reject, self.p)

    def check(self, values):
        return values[self.p] == sum(o for v, o in zip(self.vars, self.offers) if values[v] != self.reject)

    def propagate(self, s):
        lo = hi = 0
        undecided = []
        rej = self.reject
        for v, o in zip(self.vars, self.offers):
            can_reject = s.contains(v, rej)
            can_accept = not (can_reject and s.is_fixed(v))
            if can_accept:
                hi += o
                if not can_reject:
                    lo += o
                else:
                    undecided.append((v, o))
        p = self.p
        s.set_min(p, lo)
        s.set_max(p, hi)
        pmin, pmax = s.min(p), s.max(p)
        for v, o in undecided:
            if pmin > hi - o:
                s.remove(v, rej)
            elif pmax < lo + o:
                s.assign(v, rej)


class HallClash(Constraint):
    """``x != y`` unless ``x == skip`` (two accepted overlapping bookings differ)."""

    def __init__(self, x: int, y: int, skip: int):
        self.x, self.y, self.skip = x, y, skip

    def scope(self):
        return [self.x, self.y]

    def subscriptions(self):
        return [(self.x, FIX), (self.y, FIX)]

    def key(self):
        return ("clash", self.x, self.y, self.skip)

    def check(self, values):
        return values[self.x] != values[self.y] or values[self.x] == self.skip

    def propagate(self, s):
        for a, b in ((self.x, self.y), (self.y, self.x)):
            if s.is_fixed(a):
                val = s.min(a)
                if val != self.skip:
                    s.remove(b, val)
