"""
Formula syntax for the bunched logic family

Logics and their connective signatures, the formula and term AST, the
ASCII grammar (tokenizer plus precedence-climbing parser), the printer and
the expansion of defined connectives.
"""

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Tuple
import logging

from .exceptions import ParseError, SignatureError

logger = logging.getLogger(__name__)


class LogicName(str, Enum):
    LGL = "LGL"
    ILGL = "ILGL"
    BI = "BI"
    BBI = "BBI"
    SML = "SML"
    DMBI = "DMBI"
    CBI = "CBI"
    BIBI = "BiBI"
    BIBBI = "BiBBI"
    CKBI = "CKBI"


class SigmaAxiom(str, Enum):
    """Optional subclassical axioms of BiBI/BiBBI"""
    ASSOC = "assoc"
    MBOT_WEAK = "mbot-weak"
    MBOT_CONTR = "mbot-contr"
    MOR_CONTR = "mor-contr"
    WEAK_DIST = "weak-dist"


class ModalClass(str, Enum):
    NONE = "none"
    S4 = "S4"
    S5 = "S5"


class Op(str, Enum):
    ATOM = "atom"
    TOP = "top"
    BOT = "bot"
    MUNIT = "munit"
    MBOT = "mbot"
    AND = "and"
    OR = "or"
    IMP = "imp"
    STAR = "star"
    WAND = "wand"
    DNAW = "dnaw"
    MNEG = "mneg"
    MOR = "mor"
    RSLASH = "rslash"
    SEQ = "seq"
    RSEQ = "rseq"
    LSEQ = "lseq"
    DIAMOND = "diamond"
    BOX = "box"
    DIAMOND_SUB = "diamond_sub"
    NOT = "not"
    EQ = "eq"
    POINTSTO = "pointsto"
    EXISTS = "exists"
    FORALL = "forall"


CONSTANTS = frozenset({Op.TOP, Op.BOT, Op.MUNIT, Op.MBOT})
UNARY = frozenset({Op.MNEG, Op.DIAMOND, Op.BOX, Op.NOT})
BINARY = frozenset({
    Op.AND, Op.OR, Op.IMP, Op.STAR, Op.WAND, Op.DNAW, Op.MOR, Op.RSLASH,
    Op.SEQ, Op.RSEQ, Op.LSEQ, Op.DIAMOND_SUB,
})
QUANTIFIERS = frozenset({Op.EXISTS, Op.FORALL})
RELATIONS = frozenset({Op.EQ, Op.POINTSTO})

BOOLEAN_LOGICS = frozenset({
    LogicName.LGL, LogicName.BBI, LogicName.SML, LogicName.CBI,
    LogicName.BIBBI, LogicName.CKBI,
})
LAYERED_LOGICS = frozenset({LogicName.LGL, LogicName.ILGL})

_BASE = frozenset({Op.ATOM, Op.TOP, Op.BOT, Op.AND, Op.OR, Op.IMP})
_BUNCHED = _BASE | {Op.MUNIT, Op.STAR, Op.WAND}
_FIRST_ORDER = frozenset({Op.EQ, Op.POINTSTO, Op.EXISTS, Op.FORALL})

# primitive connectives per logic
SIGNATURES: Dict[LogicName, FrozenSet[Op]] = {
    LogicName.LGL: _BASE | {Op.STAR, Op.WAND, Op.DNAW},
    LogicName.ILGL: _BASE | {Op.STAR, Op.WAND, Op.DNAW},
    LogicName.BI: _BUNCHED,
    LogicName.BBI: _BUNCHED,
    LogicName.SML: _BUNCHED | {Op.DIAMOND},
    LogicName.DMBI: _BUNCHED | {Op.MNEG},
    LogicName.CBI: _BUNCHED | {Op.MNEG},
    LogicName.BIBI: _BUNCHED | {Op.MBOT, Op.MOR, Op.RSLASH},
    LogicName.BIBBI: _BUNCHED | {Op.MBOT, Op.MOR, Op.RSLASH},
    LogicName.CKBI: _BUNCHED | {Op.SEQ, Op.RSEQ, Op.LSEQ},
}

# defined connectives per logic, removed by expand_defined
SUGAR: Dict[LogicName, FrozenSet[Op]] = {
    name: frozenset({Op.NOT}) for name in LogicName
}
SUGAR[LogicName.SML] = frozenset({Op.NOT, Op.BOX, Op.DIAMOND_SUB})
SUGAR[LogicName.DMBI] = frozenset({Op.NOT, Op.MBOT, Op.MOR})
SUGAR[LogicName.CBI] = frozenset({Op.NOT, Op.MBOT, Op.MOR})


@dataclass(frozen=True)
class Logic:
    """A member of the family, with its optional axiom flags"""

    name: LogicName
    sigma: FrozenSet[SigmaAxiom] = frozenset()
    modal: ModalClass = ModalClass.NONE
    first_order: bool = False

    def __post_init__(self):
        try:
            object.__setattr__(self, "name", LogicName(self.name))
            object.__setattr__(self, "sigma", frozenset(SigmaAxiom(s) for s in self.sigma))
            object.__setattr__(self, "modal", ModalClass(self.modal))
        except ValueError as e:
            raise SignatureError(str(e)) from e
        if self.sigma and self.name not in (LogicName.BIBI, LogicName.BIBBI):
            raise SignatureError(f"Sigma axioms are only legal for BiBI/BiBBI, not {self.name.value}")
        if self.modal is not ModalClass.NONE and self.name is not LogicName.SML:
            raise SignatureError(f"modal class is only legal for SML, not {self.name.value}")
        if self.first_order and self.name not in (LogicName.BI, LogicName.BBI):
            raise SignatureError(f"the pointer fragment is only defined over BI/BBI, not {self.name.value}")

    @classmethod
    def parse(cls, name: str, sigma: Iterable[str] = (), modal: str = "none",
              first_order: bool = False) -> "Logic":
        """Build a logic from user-facing strings, matching names case-insensitively"""
        by_lower = {n.value.lower(): n for n in LogicName}
        key = name.strip().lower()
        if key not in by_lower:
            raise SignatureError(f"unknown logic '{name}'")
        return cls(by_lower[key], frozenset(sigma), modal, first_order)

    @property
    def boolean(self) -> bool:
        return self.name in BOOLEAN_LOGICS

    @property
    def commutative(self) -> bool:
        return self.name not in LAYERED_LOGICS

    @property
    def has_units(self) -> bool:
        return self.name not in LAYERED_LOGICS

    @property
    def primitives(self) -> FrozenSet[Op]:
        ops = SIGNATURES[self.name]
        if self.first_order:
            ops = ops | _FIRST_ORDER
        return ops

    @property
    def admitted(self) -> FrozenSet[Op]:
        return self.primitives | SUGAR[self.name]

    def __str__(self) -> str:
        text = self.name.value
        for axiom in sorted(self.sigma, key=lambda s: s.value):
            text += f"+{axiom.value}"
        if self.modal is not ModalClass.NONE:
            text += f"[{self.modal.value}]"
        if self.first_order:
            text += "[FO]"
        return text


@dataclass(frozen=True)
class Term:
    """Variable, integer constant, or modular sum/difference of two terms"""

    kind: str
    name: str = ""
    value: int = 0
    args: Tuple["Term", ...] = ()

    def __str__(self) -> str:
        if self.kind == "var":
            return self.name
        if self.kind == "const":
            return str(self.value)
        sign = "+" if self.kind == "add" else "-"
        left, right = self.args
        # sums associate to the left
        if right.kind in ("add", "sub"):
            return f"{left} {sign} ({right})"
        return f"{left} {sign} {right}"

    def variables(self) -> FrozenSet[str]:
        if self.kind == "var":
            return frozenset({self.name})
        result: FrozenSet[str] = frozenset()
        for arg in self.args:
            result |= arg.variables()
        return result


def var(name: str) -> Term:
    return Term("var", name=name)


def const(value: int) -> Term:
    return Term("const", value=value)


@dataclass(frozen=True)
class Formula:
    op: Op
    children: Tuple["Formula", ...] = ()
    name: str = ""
    terms: Tuple[Term, ...] = field(default=())

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True)
class Sequent:
    antecedent: Formula
    consequent: Formula

    def __str__(self) -> str:
        return f"{print_formula(self.antecedent)} |- {print_formula(self.consequent)}"


def atom(name: str) -> Formula:
    return Formula(Op.ATOM, name=name)


def node(op: Op, *children: Formula) -> Formula:
    return Formula(Op(op), tuple(children))


def relation(op: Op, left: Term, right: Term) -> Formula:
    return Formula(Op(op), terms=(left, right))


def quantified(op: Op, variable: str, body: Formula) -> Formula:
    return Formula(Op(op), (body,), name=variable)


TOP = node(Op.TOP)
BOT = node(Op.BOT)
MUNIT = node(Op.MUNIT)
MBOT = node(Op.MBOT)


# ----------------------------------------------------------------------------
# Tokenizer
# ----------------------------------------------------------------------------

KEYWORDS = {
    "top": "TOP", "bot": "BOT", "emp": "EMP", "mbot": "MBOT", "mnot": "MNOT",
    "mor": "MOR", "rslash": "RSLASH", "exists": "EXISTS", "forall": "FORALL",
}

# longest operators first so that '|->' wins over '|-' and '-*' over '-'
TOKEN_SPEC = [
    ("POINTSTO", r"\|->"),
    ("TURNSTILE", r"\|-"),
    ("IMP", r"->"),
    ("WAND", r"-\*"),
    ("RSEQ", r"-;"),
    ("LSEQ", r";-"),
    ("DNAW", r"\*-"),
    ("AND", r"/\\"),
    ("OR", r"\\/"),
    ("DIAMOND", r"<>"),
    ("BOX", r"\[\]"),
    ("LANGLE", r"<"),
    ("RANGLE", r">"),
    ("STAR", r"\*"),
    ("SEQ", r";"),
    ("NOT", r"!"),
    ("LPAREN", r"\("),
    ("RPAREN", r"\)"),
    ("DOT", r"\."),
    ("EQ", r"="),
    ("PLUS", r"\+"),
    ("MINUS", r"-"),
    ("NUMBER", r"\d+"),
    ("IDENT", r"[A-Za-z_][A-Za-z0-9_']*"),
    ("SKIP", r"\s+"),
    ("MISMATCH", r"."),
]
TOKEN_REGEX = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in TOKEN_SPEC))


@dataclass(frozen=True)
class Token:
    type: str
    value: str
    position: int


def tokenize(text: str) -> List[Token]:
    """Split text into tokens, raising ParseError on foreign characters"""
    tokens = []
    for match in TOKEN_REGEX.finditer(text):
        kind = match.lastgroup
        value = match.group()
        if kind == "SKIP":
            continue
        if kind == "MISMATCH":
            raise ParseError(f"unexpected character {value!r}", match.start())
        if kind == "IDENT" and value in KEYWORDS:
            kind = KEYWORDS[value]
        tokens.append(Token(kind, value, match.start()))
    tokens.append(Token("END", "", len(text)))
    return tokens


# ----------------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------------

_IMPLICATIONS = {"IMP": Op.IMP, "WAND": Op.WAND, "DNAW": Op.DNAW,
                 "RSEQ": Op.RSEQ, "LSEQ": Op.LSEQ, "RSLASH": Op.RSLASH}
_DISJUNCTIONS = {"OR": Op.OR, "MOR": Op.MOR}
_CONJUNCTIONS = {"AND": Op.AND}
_PRODUCTS = {"STAR": Op.STAR, "SEQ": Op.SEQ}
_PREFIXES = {"NOT": Op.NOT, "MNOT": Op.MNEG, "DIAMOND": Op.DIAMOND, "BOX": Op.BOX}
_CONSTANT_TOKENS = {"TOP": TOP, "BOT": BOT, "EMP": MUNIT, "MBOT": MBOT}
_TERM_FOLLOWERS = {"EQ", "POINTSTO", "PLUS", "MINUS"}


class Parser:
    """Recursive-descent parser over the token list"""

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    def current(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.type != "END":
            self.pos += 1
        return token

    def expect(self, token_type: str, what: str) -> Token:
        token = self.current()
        if token.type != token_type:
            found = token.value or "end of input"
            raise ParseError(f"expected {what}, found {found!r}", token.position)
        return self.advance()

    def parse_formula(self) -> Formula:
        token = self.current()
        if token.type in ("EXISTS", "FORALL"):
            self.advance()
            variable = self.expect("IDENT", "a variable after the quantifier").value
            self.expect("DOT", "'.' after the bound variable")
            body = self.parse_formula()
            op = Op.EXISTS if token.type == "EXISTS" else Op.FORALL
            return quantified(op, variable, body)
        return self.parse_implication()

    def parse_implication(self) -> Formula:
        left = self.parse_disjunction()
        if self.current().type in _IMPLICATIONS:
            op = _IMPLICATIONS[self.advance().type]
            right = self.parse_formula()
            return node(op, left, right)
        return left

    def _left_assoc(self, table: Mapping[str, Op], operand) -> Formula:
        left = operand()
        while self.current().type in table:
            op = table[self.advance().type]
            left = node(op, left, operand())
        return left

    def parse_disjunction(self) -> Formula:
        return self._left_assoc(_DISJUNCTIONS, self.parse_conjunction)

    def parse_conjunction(self) -> Formula:
        return self._left_assoc(_CONJUNCTIONS, self.parse_product)

    def parse_product(self) -> Formula:
        return self._left_assoc(_PRODUCTS, self.parse_unary)

    def parse_unary(self) -> Formula:
        token = self.current()
        if token.type in _PREFIXES:
            self.advance()
            return node(_PREFIXES[token.type], self.parse_unary())
        if token.type == "LANGLE":
            self.advance()
            guard = self.parse_formula()
            self.expect("RANGLE", "'>' closing the diamond guard")
            return node(Op.DIAMOND_SUB, guard, self.parse_unary())
        return self.parse_primary()

    def parse_primary(self) -> Formula:
        token = self.current()
        if token.type == "LPAREN":
            self.advance()
            inner = self.parse_formula()
            self.expect("RPAREN", "')'")
            return inner
        if token.type in _CONSTANT_TOKENS:
            self.advance()
            return _CONSTANT_TOKENS[token.type]
        if token.type in ("IDENT", "NUMBER") and self.peek().type in _TERM_FOLLOWERS:
            left = self.parse_term()
            kind = self.current()
            if kind.type == "EQ":
                op = Op.EQ
            elif kind.type == "POINTSTO":
                op = Op.POINTSTO
            else:
                raise ParseError("expected '=' or '|->' after a term", kind.position)
            self.advance()
            return relation(op, left, self.parse_term())
        if token.type == "IDENT":
            self.advance()
            return atom(token.value)
        found = token.value or "end of input"
        raise ParseError(f"unexpected {found!r}", token.position)

    def parse_term(self) -> Term:
        left = self._term_operand()
        while self.current().type in ("PLUS", "MINUS"):
            kind = "add" if self.advance().type == "PLUS" else "sub"
            left = Term(kind, args=(left, self._term_operand()))
        return left

    def _term_operand(self) -> Term:
        token = self.current()
        if token.type == "LPAREN":
            self.advance()
            inner = self.parse_term()
            self.expect("RPAREN", "')' closing the term")
            return inner
        if token.type == "IDENT":
            self.advance()
            return var(token.value)
        if token.type == "NUMBER":
            self.advance()
            return const(int(token.value))
        found = token.value or "end of input"
        raise ParseError(f"expected a variable or integer, found {found!r}", token.position)


def parse_formula(text: str, logic: Logic) -> Formula:
    """
    Parse ASCII formula text and check it against a logic's signature.

    Args:
        text: Formula in the workbench grammar
        logic: Logic whose connectives are admitted

    Returns:
        The formula AST

    Raises:
        ParseError: Malformed text; the message carries the column
        SignatureError: A connective outside the logic's signature
    """
    formula = parse_unchecked(text)
    check_signature(formula, logic)
    return formula


def parse_unchecked(text: str) -> Formula:
    """Parse formula text accepting every connective of the grammar"""
    parser = Parser(text)
    formula = parser.parse_formula()
    parser.expect("END", "end of input")
    return formula


def parse_sequent(text: str, logic: Logic) -> Sequent:
    """Parse 'phi |- psi'"""
    parser = Parser(text)
    antecedent = parser.parse_formula()
    parser.expect("TURNSTILE", "'|-'")
    consequent = parser.parse_formula()
    parser.expect("END", "end of input")
    check_signature(antecedent, logic)
    check_signature(consequent, logic)
    return Sequent(antecedent, consequent)


def check_signature(f: Formula, logic: Logic) -> None:
    """Raise SignatureError naming the first connective the logic does not admit"""
    admitted = logic.admitted
    for sub in subformulas(f):
        if sub.op not in admitted:
            symbol = SYMBOLS.get(sub.op, sub.op.value)
            raise SignatureError(
                f"connective '{symbol}' ({sub.op.value}) is not in the {logic} signature"
            )


# ----------------------------------------------------------------------------
# Printer
# ----------------------------------------------------------------------------

SYMBOLS = {
    Op.TOP: "top", Op.BOT: "bot", Op.MUNIT: "emp", Op.MBOT: "mbot",
    Op.AND: "/\\", Op.OR: "\\/", Op.IMP: "->", Op.STAR: "*", Op.WAND: "-*",
    Op.DNAW: "*-", Op.MOR: "mor", Op.RSLASH: "rslash", Op.SEQ: ";",
    Op.RSEQ: "-;", Op.LSEQ: ";-", Op.NOT: "!", Op.MNEG: "mnot",
    Op.DIAMOND: "<>", Op.BOX: "[]", Op.EQ: "=", Op.POINTSTO: "|->",
    Op.EXISTS: "exists", Op.FORALL: "forall", Op.DIAMOND_SUB: "<_>",
}

# binding strength, loosest first
_QUANT, _IMPL, _DISJ, _CONJ, _PROD, _UNARY, _ATOMIC = range(7)

_LEVEL = {
    Op.IMP: _IMPL, Op.WAND: _IMPL, Op.DNAW: _IMPL, Op.RSEQ: _IMPL,
    Op.LSEQ: _IMPL, Op.RSLASH: _IMPL,
    Op.OR: _DISJ, Op.MOR: _DISJ,
    Op.AND: _CONJ,
    Op.STAR: _PROD, Op.SEQ: _PROD,
    Op.NOT: _UNARY, Op.MNEG: _UNARY, Op.DIAMOND: _UNARY, Op.BOX: _UNARY,
    Op.DIAMOND_SUB: _UNARY,
    Op.EXISTS: _QUANT, Op.FORALL: _QUANT,
}


def _level(f: Formula) -> int:
    return _LEVEL.get(f.op, _ATOMIC)


def _wrap(f: Formula, minimum: int) -> str:
    text = print_formula(f)
    return f"({text})" if _level(f) < minimum else text


def print_formula(f: Formula) -> str:
    """Render a formula in the grammar parse_formula reads back to the same AST"""
    op = f.op
    if op is Op.ATOM:
        return f.name
    if op in CONSTANTS:
        return SYMBOLS[op]
    if op in RELATIONS:
        return f"{f.terms[0]} {SYMBOLS[op]} {f.terms[1]}"
    if op in QUANTIFIERS:
        return f"{SYMBOLS[op]} {f.name}. {print_formula(f.children[0])}"
    if op is Op.DIAMOND_SUB:
        return f"<{print_formula(f.children[0])}>{_wrap(f.children[1], _UNARY)}"
    if op in UNARY:
        body = _wrap(f.children[0], _UNARY)
        return f"mnot {body}" if op is Op.MNEG else f"{SYMBOLS[op]}{body}"
    level = _level(f)
    left, right = f.children
    if level == _IMPL:
        return f"{_wrap(left, level + 1)} {SYMBOLS[op]} {_wrap(right, level)}"
    return f"{_wrap(left, level)} {SYMBOLS[op]} {_wrap(right, level + 1)}"


# ----------------------------------------------------------------------------
# Traversals and rewriting
# ----------------------------------------------------------------------------

def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order walk over f and all its subformulas"""
    yield f
    for child in f.children:
        yield from subformulas(child)


def atoms(f: Formula) -> FrozenSet[str]:
    return frozenset(sub.name for sub in subformulas(f) if sub.op is Op.ATOM)


def depth(f: Formula) -> int:
    if not f.children:
        return 0
    return 1 + max(depth(child) for child in f.children)


def free_vars(f: Formula) -> FrozenSet[str]:
    if f.op in RELATIONS:
        return f.terms[0].variables() | f.terms[1].variables()
    if f.op in QUANTIFIERS:
        return free_vars(f.children[0]) - {f.name}
    result: FrozenSet[str] = frozenset()
    for child in f.children:
        result |= free_vars(child)
    return result


def substitute(f: Formula, mapping: Mapping[str, Formula]) -> Formula:
    """Replace atoms named in mapping by the mapped formulas"""
    if f.op is Op.ATOM:
        return mapping.get(f.name, f)
    if not f.children:
        return f
    return Formula(f.op, tuple(substitute(c, mapping) for c in f.children), f.name, f.terms)


def neg(f: Formula) -> Formula:
    return node(Op.NOT, f)


def expand_defined(f: Formula, logic: Logic) -> Formula:
    """
    Replace every defined connective by its definition.

    The result uses only primitive connectives of the logic; the
    rewriting is idempotent and keeps the set of atoms.
    """
    op = f.op
    children = tuple(expand_defined(c, logic) for c in f.children)
    if op is Op.NOT:
        return node(Op.IMP, children[0], BOT)
    if op is Op.BOX:
        return expand_defined(neg(node(Op.DIAMOND, neg(f.children[0]))), logic)
    if op is Op.DIAMOND_SUB:
        guard, body = f.children
        return expand_defined(neg(node(Op.WAND, guard, neg(node(Op.DIAMOND, body)))), logic)
    if logic.name in (LogicName.DMBI, LogicName.CBI):
        if op is Op.MBOT:
            return node(Op.MNEG, MUNIT)
        if op is Op.MOR:
            left, right = children
            return node(Op.MNEG, node(Op.STAR, node(Op.MNEG, left), node(Op.MNEG, right)))
    if not children:
        return f
    return Formula(op, children, f.name, f.terms)


def signature_table() -> Dict[str, Dict[str, List[str]]]:
    """Admitted connectives per logic, split into primitive and defined"""
    table = {}
    for name in LogicName:
        table[name.value] = {
            "primitive": sorted(op.value for op in SIGNATURES[name]),
            "defined": sorted(op.value for op in SUGAR[name]),
        }
    return table
