"""Exact scalars, semifields, and subtraction-free expression DAGs.

All scalar computation in this package runs over one of two semifields:

* ``POSITIVE_RATIONALS``: exact rational numbers with (+, *, /); the
  carrier is :class:`fractions.Fraction`, which keeps values reduced and
  denominators positive for free.
* ``TROPICAL_INTEGERS``: the integers with (max, +, -); positive integer
  constants collapse to 0, the tropical unit.

Formulas are built once as expression DAGs (no subtraction node exists)
and may then be evaluated over either semifield.  Evaluating a positive
rational map tropically is exactly the piecewise-linear shadow used for
crystal operators.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping

Rational = Fraction


class ClusterCrystalsError(Exception):
    """Base error; ``kind`` is the machine-readable tag used by the CLI."""

    kind = "error"

    def __init__(self, detail="", kind=None):
        super().__init__(detail)
        if kind is not None:
            self.kind = kind

    @property
    def detail(self) -> str:
        return str(self)


class DomainError(ClusterCrystalsError):
    """A rational map was evaluated outside its domain (zero denominator)."""

    kind = "domain"


class ChartBoundaryError(DomainError):
    """A mutation landed on the boundary of the torus chart (a coordinate hit 0)."""

    kind = "chart-boundary"


class InvalidInputError(ClusterCrystalsError, ValueError):
    kind = "invalid-input"


def rat_str(q) -> str:
    """Serialize a rational as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def rat_parse(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInputError(f"not a rational: {s!r}") from exc


class Semifield:
    """Operations (plus, times, divide, integer power) over an abstract carrier."""

    __slots__ = ("name", "plus", "times", "divide", "power", "const", "one")

    def __init__(self, name, plus, times, divide, power, const, one):
        self.name = name
        self.plus = plus
        self.times = times
        self.divide = divide
        self.power = power
        self.const = const  # image of a positive integer constant
        self.one = one

    def __repr__(self):
        return f"Semifield({self.name})"


def _frac_power(a, e):
    return a ** e


POSITIVE_RATIONALS = Semifield(
    "positive-rationals",
    plus=lambda a, b: a + b,
    times=lambda a, b: a * b,
    divide=lambda a, b: a / b,
    power=_frac_power,
    const=Fraction,
    one=Fraction(1),
)

TROPICAL_INTEGERS = Semifield(
    "tropical-integers",
    plus=max,
    times=lambda a, b: a + b,
    divide=lambda a, b: a - b,
    power=lambda a, e: a * e,
    const=lambda n: 0,
    one=0,
)


class Expr:
    """A node of a subtraction-free expression DAG.

    Nodes are immutable and shared; identity (``id``) is used for
    memoization, so reusing subterm objects keeps evaluation linear in
    the DAG size rather than the tree size.
    """

    __slots__ = ()

    def __add__(self, other):
        return esum([self, other])

    def __mul__(self, other):
        return eprod([self, other])

    def __truediv__(self, other):
        return Quotient(self, other)

    def __pow__(self, e):
        return epow(self, e)


class Var(Expr):
    __slots__ = ("index",)

    def __init__(self, index):
        object.__setattr__(self, "index", index)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def __repr__(self):
        return f"Var({self.index})"


class Const(Expr):
    """A positive integer constant; tropicalizes to 0."""

    __slots__ = ("value",)

    def __init__(self, value):
        if not isinstance(value, int) or value < 1:
            raise InvalidInputError(f"constants must be integers >= 1, got {value!r}")
        object.__setattr__(self, "value", value)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def __repr__(self):
        return f"Const({self.value})"


class Sum(Expr):
    __slots__ = ("terms",)

    def __init__(self, terms):
        terms = tuple(terms)
        if not terms:
            # the semifields carry no additive unit (no 0, no -infinity)
            raise InvalidInputError("empty sums are not representable")
        object.__setattr__(self, "terms", terms)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def __repr__(self):
        return "Sum(%s)" % ", ".join(map(repr, self.terms))


class Product(Expr):
    __slots__ = ("factors",)

    def __init__(self, factors):
        object.__setattr__(self, "factors", tuple(factors))

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def __repr__(self):
        return "Product(%s)" % ", ".join(map(repr, self.factors))


class Quotient(Expr):
    __slots__ = ("num", "den")

    def __init__(self, num, den):
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def __repr__(self):
        return f"Quotient({self.num!r}, {self.den!r})"


class IntPower(Expr):
    """Integer power with exponent of either sign (Laurent monomials stay positive)."""

    __slots__ = ("base", "exponent")

    def __init__(self, base, exponent):
        if not isinstance(exponent, int):
            raise InvalidInputError(f"exponent must be an integer, got {exponent!r}")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "exponent", exponent)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    def __repr__(self):
        return f"IntPower({self.base!r}, {self.exponent})"


ONE = Const(1)


def evar(index) -> Var:
    return Var(index)


def econst(n) -> Const:
    return Const(n)


def esum(terms: Iterable[Expr]) -> Expr:
    """Sum of terms, flattening nested sums.  Must be nonempty."""
    flat = []
    for t in terms:
        if isinstance(t, Sum):
            flat.extend(t.terms)
        else:
            flat.append(t)
    if len(flat) == 1:
        return flat[0]
    return Sum(flat)


def eprod(factors: Iterable[Expr]) -> Expr:
    """Product of factors, flattening nested products and dropping units."""
    flat = []
    for f in factors:
        if isinstance(f, Product):
            flat.extend(f.factors)
        elif isinstance(f, Const) and f.value == 1:
            continue
        else:
            flat.append(f)
    if not flat:
        return ONE
    if len(flat) == 1:
        return flat[0]
    return Product(flat)


def epow(base: Expr, e: int) -> Expr:
    if e == 0:
        return ONE
    if e == 1:
        return base
    return IntPower(base, e)


def _children(node):
    if isinstance(node, Sum):
        return node.terms
    if isinstance(node, Product):
        return node.factors
    if isinstance(node, Quotient):
        return (node.num, node.den)
    if isinstance(node, IntPower):
        return (node.base,)
    return ()


def _postorder(roots):
    """Unique nodes of the DAG below ``roots``, children before parents."""
    seen = set()
    order = []
    stack = [(r, False) for r in reversed(list(roots))]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for ch in _children(node):
            if id(ch) not in seen:
                stack.append((ch, False))
    return order


def variables(expr) -> set:
    """Indices of all variable leaves below ``expr`` (or an iterable of exprs)."""
    roots = expr if isinstance(expr, (list, tuple)) else [expr]
    return {n.index for n in _postorder(roots) if isinstance(n, Var)}


def is_subtraction_free(expr) -> bool:
    """Every node is one of the six positive constructors and constants are >= 1."""
    allowed = (Var, Const, Sum, Product, Quotient, IntPower)
    for node in _postorder([expr]):
        if not isinstance(node, allowed):
            return False
        if isinstance(node, Const) and node.value < 1:
            return False
    return True


def expr_eval(expr: Expr, assignment: Mapping, sf: Semifield = POSITIVE_RATIONALS):
    """Evaluate ``expr`` under ``assignment`` (variable index -> scalar) over ``sf``.

    Raises :class:`InvalidInputError` when a variable is unbound and
    :class:`DomainError` when a denominator evaluates to zero over the
    rationals.  Tropical evaluation is total.
    """
    val: dict = {}
    plus, times, divide, power, const = sf.plus, sf.times, sf.divide, sf.power, sf.const
    for node in _postorder([expr]):
        key = id(node)
        if isinstance(node, Var):
            try:
                val[key] = assignment[node.index]
            except KeyError:
                raise InvalidInputError(f"no binding for variable {node.index}") from None
        elif isinstance(node, Const):
            val[key] = const(node.value)
        elif isinstance(node, Sum):
            acc = val[id(node.terms[0])]
            for t in node.terms[1:]:
                acc = plus(acc, val[id(t)])
            val[key] = acc
        elif isinstance(node, Product):
            acc = sf.one
            for f in node.factors:
                acc = times(acc, val[id(f)])
            val[key] = acc
        elif isinstance(node, Quotient):
            try:
                val[key] = divide(val[id(node.num)], val[id(node.den)])
            except ZeroDivisionError:
                raise DomainError("division by zero while evaluating expression") from None
        elif isinstance(node, IntPower):
            try:
                val[key] = power(val[id(node.base)], node.exponent)
            except ZeroDivisionError:
                raise DomainError("zero raised to a negative power") from None
        else:  # pragma: no cover
            raise TypeError(f"unknown node {node!r}")
    return val[id(expr)]


def substitute(expr: Expr, mapping: Mapping) -> Expr:
    """Replace ``Var(i)`` with ``mapping[i]`` (an Expr) wherever bound.

    Rebuilds shared nodes once, so DAG sharing survives the substitution.
    """
    out: dict = {}
    for node in _postorder([expr]):
        key = id(node)
        if isinstance(node, Var):
            out[key] = mapping.get(node.index, node)
        elif isinstance(node, Const):
            out[key] = node
        elif isinstance(node, Sum):
            out[key] = Sum(tuple(out[id(t)] for t in node.terms))
        elif isinstance(node, Product):
            out[key] = Product(tuple(out[id(f)] for f in node.factors))
        elif isinstance(node, Quotient):
            out[key] = Quotient(out[id(node.num)], out[id(node.den)])
        elif isinstance(node, IntPower):
            out[key] = IntPower(out[id(node.base)], node.exponent)
    return out[id(expr)]


def compile_expr_map(emap: Mapping, sf: Semifield) -> Callable[[Mapping], dict]:
    """Compile ``{key: Expr}`` into one fast function ``env -> {key: value}``.

    The generated function evaluates every shared node exactly once.  It is
    semantically identical to calling :func:`expr_eval` per entry; tests pin
    the two paths against each other.  ``env`` maps variable indices to
    scalars.
    """
    keys = list(emap.keys())
    roots = [emap[k] for k in keys]
    order = _postorder(roots)
    name = {}
    lines = ["def _compiled(env):"]
    tropical = sf is TROPICAL_INTEGERS
    for i, node in enumerate(order):
        nm = f"t{i}"
        name[id(node)] = nm
        if isinstance(node, Var):
            lines.append(f"    {nm} = env[{node.index!r}]")
        elif isinstance(node, Const):
            lines.append(f"    {nm} = 0" if tropical else f"    {nm} = F({node.value})")
        elif isinstance(node, Sum):
            args = [name[id(t)] for t in node.terms]
            if len(args) == 1:
                lines.append(f"    {nm} = {args[0]}")
            elif tropical:
                lines.append(f"    {nm} = max({', '.join(args)})")
            else:
                lines.append(f"    {nm} = {' + '.join(args)}")
        elif isinstance(node, Product):
            args = [name[id(f)] for f in node.factors]
            if not args:
                lines.append(f"    {nm} = 0" if tropical else f"    {nm} = F(1)")
            else:
                op = " + " if tropical else " * "
                lines.append(f"    {nm} = {op.join(args)}")
        elif isinstance(node, Quotient):
            a, b = name[id(node.num)], name[id(node.den)]
            lines.append(f"    {nm} = {a} - {b}" if tropical else f"    {nm} = {a} / {b}")
        elif isinstance(node, IntPower):
            b = name[id(node.base)]
            if tropical:
                lines.append(f"    {nm} = {b} * {node.exponent}")
            else:
                lines.append(f"    {nm} = {b} ** {node.exponent}")
    body = ", ".join(f"{k!r}: {name[id(emap[k])]}" for k in keys)
    lines.append(f"    return {{{body}}}")
    ns = {"F": Fraction, "max": max}
    exec("\n".join(lines), ns)
    return ns["_compiled"]
