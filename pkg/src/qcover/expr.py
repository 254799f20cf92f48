"""Expression grammar for the CLI: parsing, evaluation, pretty printing.

Grammar (1-based indices on generators):

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := scalar | gen | '(' expr ')' | braidword '(' expr ')'
              | 'form' '(' expr ',' expr ')' | '-' factor
    gen    := 'E_1' ['^(2)'] | 'F_2' | 'K{1,-1}' | 'J{0,1}'
    scalar := integer | 'q' ['^' int] | 'pi' ['^' int]
              | ('qint'|'qfact'|'qbinom') '(' ints ')'

Torus exponents in K{...}/J{...} are coroot coordinates.  Evaluation
produces a CoverElement over a fixed datum; the canonical printer emits
sums of `(scalar)*F_..*J{..}*K{..}*E_..` terms that re-parse to the same
element.
"""

import re

from .braid import braider
from .scalars import ONE, QPiScalar, quantum_binomial, quantum_factorial, quantum_int


class ParseError(ValueError):
    def __init__(self, message, pos):
        self.pos = pos
        super().__init__(f"{message} (at position {pos})")


_TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<gen>[EF]_\d+(?:\^\(\d+\))?)"
    r"|(?P<torus>[KJ]\{-?\d+(?:,-?\d+)*\})"
    r"|(?P<braid>T\d+(?:\^-?1)?)"
    r"|(?P<name>qbinom|qfact|qint|form|pi|q)"
    r"|(?P<int>\d+)"
    r"|(?P<pow>\^-?\d+)"
    r"|(?P<sym>[()+\-*/,])"
    r")"
)


def tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == m.start():
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class Parser:
    """Recursive-descent parser producing a small AST of tuples."""

    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.k = 0

    def peek(self):
        return self.tokens[self.k]

    def next(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.next()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val!r}", pos)

    def parse(self):
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input {val!r}", pos)
        return node

    def expr(self):
        terms = [("+", self.term())]
        while self.peek()[1] in ("+", "-"):
            op = self.next()[1]
            terms.append((op, self.term()))
        return ("sum", terms)

    def term(self):
        factors = [("*", self.factor())]
        while self.peek()[1] in ("*", "/"):
            op = self.next()[1]
            factors.append((op, self.factor()))
        return ("prod", factors)

    def factor(self):
        kind, val, pos = self.peek()
        if val == "-":
            self.next()
            return ("neg", self.factor())
        if val == "(":
            self.next()
            node = self.expr()
            self.expect(")")
            return node
        if kind == "gen":
            self.next()
            m = re.fullmatch(r"([EF])_(\d+)(?:\^\((\d+)\))?", val)
            return ("gen", m.group(1), int(m.group(2)), int(m.group(3) or 1))
        if kind == "torus":
            self.next()
            m = re.fullmatch(r"([KJ])\{(.*)\}", val)
            coords = tuple(int(x) for x in m.group(2).split(","))
            return ("torus", m.group(1), coords)
        if kind == "braid":
            letters = [self._braid_letter(self.next()[1])]
            while self.peek()[0] == "braid":
                letters.append(self._braid_letter(self.next()[1]))
            self.expect("(")
            node = self.expr()
            self.expect(")")
            return ("braid", tuple(letters), node)
        if kind == "name":
            self.next()
            if val in ("q", "pi"):
                exp = 1
                if self.peek()[0] == "pow":
                    exp = int(self.next()[1][1:])
                return ("scalar_pow", val, exp)
            if val == "form":
                self.expect("(")
                left = self.expr()
                self.expect(",")
                right = self.expr()
                self.expect(")")
                return ("form", left, right)
            self.expect("(")
            args = [self.signed_int()]
            while self.peek()[1] == ",":
                self.next()
                args.append(self.signed_int())
            self.expect(")")
            return ("qfunc", val, tuple(args))
        if kind == "int":
            self.next()
            exp = 1
            if self.peek()[0] == "pow":
                exp = int(self.next()[1][1:])
            return ("int", int(val), exp)
        raise ParseError(f"unexpected token {val!r}", pos)

    def _braid_letter(self, text):
        m = re.fullmatch(r"T(\d+)(\^(-?1))?", text)
        index = int(m.group(1)) - 1
        sign = int(m.group(3)) if m.group(3) else 1
        return (index, sign)

    def signed_int(self):
        kind, val, pos = self.peek()
        neg = False
        if val == "-":
            self.next()
            neg = True
        kind, val, pos = self.next()
        if kind != "int":
            raise ParseError(f"expected integer, found {val!r}", pos)
        return -int(val) if neg else int(val)


def parse(text):
    """Parse an expression into the tuple AST."""
    return Parser(text).parse()


# ---------------------------------------------------------------------------
# Evaluation over a fixed datum.
# ---------------------------------------------------------------------------

def evaluate(datum, node):
    """Evaluate an AST to a CoverElement over the datum."""
    B = braider(datum)
    U = B.U
    kind = node[0]
    if kind == "sum":
        out = U.zero()
        for op, term in node[1]:
            val = evaluate(datum, term)
            out = out + (val if op == "+" else -val)
        return out
    if kind == "prod":
        out = U.one()
        for op, factor in node[1]:
            val = evaluate(datum, factor)
            if op == "*":
                out = out * val
            else:
                scal = _as_scalar(U, val)
                out = out.scale(scal.invert())
        return out
    if kind == "neg":
        return -evaluate(datum, node[1])
    if kind == "gen":
        _, letter, idx, power = node
        if not 1 <= idx <= datum.rank:
            raise ParseError(f"generator index {idx} out of range", 0)
        return U.E_power(idx - 1, power) if letter == "E" else U.F_power(idx - 1, power)
    if kind == "torus":
        _, letter, coords = node
        if len(coords) != datum.rank:
            raise ParseError("torus exponent has wrong length", 0)
        return U.K(coords) if letter == "K" else U.J(coords)
    if kind == "braid":
        _, letters, arg = node
        for index, _ in letters:
            if not 0 <= index < datum.rank:
                raise ParseError(f"braid index {index + 1} out of range", 0)
        return B.apply_word(letters, evaluate(datum, arg))
    if kind == "scalar_pow":
        _, name, exp = node
        base = QPiScalar.q_power(exp) if name == "q" else QPiScalar.pi_power(exp)
        return U.one().scale(base)
    if kind == "int":
        _, value, exp = node
        return U.one().scale(QPiScalar.from_int(value**exp))
    if kind == "qfunc":
        _, name, args = node
        if name == "qint":
            val = quantum_int(args[0], args[1] if len(args) > 1 else 1)
        elif name == "qfact":
            val = quantum_factorial(args[0], args[1] if len(args) > 1 else 1)
        elif name == "qbinom":
            val = quantum_binomial(args[0], args[1], args[2] if len(args) > 2 else 1)
        else:
            raise ParseError(f"unknown function {name}", 0)
        return U.one().scale(val)
    if kind == "form":
        from .pbw import pbw_context

        P = pbw_context(datum)
        left = P.from_cover(evaluate(datum, node[1]))
        right = P.from_cover(evaluate(datum, node[2]))
        val = P.form(left, right)
        out = U.zero()
        for g, c in val.terms.items():
            out = out + U.J(g).scale(c)
        return out
    raise ParseError(f"unknown node kind {kind}", 0)


def _as_scalar(U, x):
    unit = next(iter(U.one().terms))
    for mono, c in x.terms.items():
        if mono != unit:
            raise ParseError("division by a non-scalar element", 0)
    return x.terms.get(unit, QPiScalar.from_int(0))


# ---------------------------------------------------------------------------
# Canonical printing.
# ---------------------------------------------------------------------------

def scalar_text(c):
    return c.text()


def element_text(U, x):
    """Canonical text of a CoverElement; parses back to the same element."""
    if not x.terms:
        return "0"
    parts = []
    for mono, c in sorted(x.terms.items()):
        body = U.monomial_text(mono)
        coeff = c.text()
        if "+" in coeff or " - " in coeff or "/" in coeff:
            coeff = f"({coeff})"
        if body == "1":
            parts.append(coeff)
        elif coeff == "1":
            parts.append(body)
        elif coeff == "-1":
            parts.append(f"-{body}")
        else:
            parts.append(f"{coeff}*{body}")
    return " + ".join(parts).replace("+ -", "- ")


def eval_text(datum, text):
    """Parse, evaluate, and pretty-print an expression."""
    U = braider(datum).U
    return element_text(U, evaluate(datum, parse(text)))
