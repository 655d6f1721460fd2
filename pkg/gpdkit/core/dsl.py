"""
Lenguaje de entrada `.gpd`: gramática (arpeggio), árbol sintáctico,
elaboración a objetos del núcleo, impresión y emisores.

Un documento es una secuencia de bloques `[tipo NOMBRE]` seguidos de
sentencias de una línea `clave args... = valores...`; `#` abre un comentario.
"""
import logging
import re
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from arpeggio import EOF, NoMatch, OneOrMore, Optional as Opt, ParserPython, PTNodeVisitor, Terminal, ZeroOrMore
from arpeggio import RegExMatch as _
from arpeggio import visit_parse_tree

from .deaconu import StarCommutingSystem
from .errors import (DslArityError, DslElaborationError, DslError, DslReferenceError, DslSyntaxError, GpdkitError,
                     StructureError)
from .fell import FellBundle, FellLeftAction, FellRightAction
from .groupoid import FiniteGroupoid
from .selfsimilar import LeftSelfSimilarAction, RightSelfSimilarAction

logger = logging.getLogger(__name__)

KINDS = ("groupoid", "left-action", "right-action", "fell-bundle", "fell-action", "dr-system")
NAME_PATTERN = r"[^\s=#\[\];]+"
_NAME_RE = re.compile(NAME_PATTERN)
_FLOAT = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"

# Ventana por defecto de los bloques dr-system
DEFAULT_WINDOW = 2


# Gramática

def comment():
    return _(r"#[^\n]*")


def name():
    return _(NAME_PATTERN)


def kind():
    return _(r"(?:groupoid|left-action|right-action|fell-bundle|fell-action|dr-system)(?=\s)")


def header():
    return "[", kind, name, "]"


def number():
    return _(rf"{_FLOAT}(?:,{_FLOAT})?")


def row():
    return OneOrMore(number)


def matrix():
    return "[", Opt(row, ZeroOrMore(";", row)), "]"


def matrices():
    return "[", Opt(matrix, ZeroOrMore(Opt(","), matrix)), "]"


def integer():
    return _(r"\d+")


def cycle():
    return "(", ZeroOrMore(integer), ")"


def cycles():
    return OneOrMore(cycle)


def value():
    return [matrices, matrix, cycles, name]


def statement():
    return OneOrMore(name), "=", ZeroOrMore(value)


def newline():
    return OneOrMore(_(r"\n"))


def block():
    return header, newline, ZeroOrMore(statement, newline)


def document():
    return Opt(newline), ZeroOrMore(block), EOF


# Árbol sintáctico

@dataclass(frozen=True)
class Matrix:
    rows: Tuple[Tuple[complex, ...], ...]

    def array(self) -> np.ndarray:
        if not self.rows:
            return np.zeros((0, 0), dtype=np.complex128)
        widths = {len(r) for r in self.rows}
        if len(widths) != 1:
            raise StructureError("las filas de la matriz tienen longitudes distintas")
        return np.array(self.rows, dtype=np.complex128)


@dataclass(frozen=True)
class MatrixList:
    items: Tuple[Matrix, ...]


@dataclass(frozen=True)
class Cycles:
    cycles: Tuple[Tuple[int, ...], ...]


Value = Union[str, Matrix, MatrixList, Cycles]


@dataclass(frozen=True)
class Statement:
    key: str
    args: Tuple[str, ...]
    values: Tuple[Value, ...]
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Block:
    kind: str
    name: str
    statements: Tuple[Statement, ...]
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Document:
    blocks: Tuple[Block, ...] = ()

    def block(self, name: str) -> Block:
        for b in self.blocks:
            if b.name == name:
                return b
        raise KeyError(name)


@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    col: int


@dataclass(frozen=True)
class _Value:
    value: Any


def _flat(items) -> List[Any]:
    out: List[Any] = []
    for it in items:
        if isinstance(it, list):
            out.extend(_flat(it))
        elif it is not None:
            out.append(it)
    return out


def _of(children, cls) -> List[Any]:
    return [c for c in _flat(children) if isinstance(c, cls)]


class _DocumentVisitor(PTNodeVisitor):
    """
    Convierte el árbol de arpeggio en el AST. Los nodos anónimos devuelven la
    lista de resultados de sus hijos y cada regla filtra por tipo.
    """

    def __init__(self, parser: ParserPython, **kwargs):
        super().__init__(**kwargs)
        self.parser = parser

    def visit__default__(self, node, children):
        if isinstance(node, Terminal):
            return None
        return list(children)

    def visit_name(self, node, children):
        line, col = self.parser.pos_to_linecol(node.position)
        return _Token(node.value, line, col)

    def visit_kind(self, node, children):
        return node.value

    def visit_integer(self, node, children):
        return int(node.value)

    def visit_number(self, node, children):
        re_part, _, im_part = node.value.partition(",")
        return complex(float(re_part), float(im_part) if im_part else 0.0)

    def visit_row(self, node, children):
        return tuple(_of(children, complex))

    def visit_matrix(self, node, children):
        return Matrix(tuple(_of(children, tuple)))

    def visit_matrices(self, node, children):
        return MatrixList(tuple(_of(children, Matrix)))

    def visit_cycle(self, node, children):
        return tuple(_of(children, int))

    def visit_cycles(self, node, children):
        return Cycles(tuple(_of(children, tuple)))

    def visit_value(self, node, children):
        inner = _flat(children)[0]
        return _Value(inner.text if isinstance(inner, _Token) else inner)

    def visit_header(self, node, children):
        return _of(children, str)[0], _of(children, _Token)[0]

    def visit_statement(self, node, children):
        names = _of(children, _Token)
        values = tuple(v.value for v in _of(children, _Value))
        return Statement(names[0].text, tuple(t.text for t in names[1:]), values, names[0].line, names[0].col)

    def visit_newline(self, node, children):
        return None

    def visit_block(self, node, children):
        kind_, token = _of(children, tuple)[0]
        return Block(kind_, token.text, tuple(_of(children, Statement)), token.line, token.col)

    def visit_document(self, node, children):
        return Document(tuple(_of(children, Block)))


_PARSER: Optional[ParserPython] = None


def _get_parser() -> ParserPython:
    global _PARSER
    if _PARSER is None:
        _PARSER = ParserPython(document, comment_def=comment, ws="\t \r", reduce_tree=False)
    return _PARSER


def parse(text: str) -> Document:
    """
    Analiza un documento. Los errores léxicos llevan línea y columna; los
    nombres de bloque repetidos se reportan en la segunda definición.
    """
    if not text.endswith("\n"):
        text += "\n"
    parser = _get_parser()
    try:
        tree = parser.parse(text)
    except NoMatch as e:
        line, col = parser.pos_to_linecol(e.position)
        raise DslSyntaxError(f"entrada inesperada ({e})", line, col)
    doc = visit_parse_tree(tree, _DocumentVisitor(parser))
    if not isinstance(doc, Document):
        doc = Document()
    seen = set()
    for b in doc.blocks:
        if b.name in seen:
            raise DslReferenceError(f"el nombre {b.name} ya está definido", b.line, b.col)
        seen.add(b.name)
    logger.debug(f"📄 Documento con {len(doc.blocks)} bloques")
    return doc


# Impresión

def _number(c: complex) -> str:
    c = complex(c)
    if c.imag == 0:
        return repr(float(c.real))
    return f"{float(c.real)!r},{float(c.imag)!r}"


def _print_matrix(m: Matrix) -> str:
    return "[" + "; ".join(" ".join(_number(c) for c in r) for r in m.rows) + "]"


def _print_value(v: Value) -> str:
    if isinstance(v, Matrix):
        return _print_matrix(v)
    if isinstance(v, MatrixList):
        return "[" + ",".join(_print_matrix(m) for m in v.items) + "]"
    if isinstance(v, Cycles):
        return "".join("(" + " ".join(str(i) for i in c) + ")" for c in v.cycles)
    return v


def print_document(doc: Document) -> str:
    out: List[str] = []
    for i, b in enumerate(doc.blocks):
        if i:
            out.append("")
        out.append(f"[{b.kind} {b.name}]")
        for s in b.statements:
            lhs = " ".join((s.key,) + s.args)
            rhs = " ".join(_print_value(v) for v in s.values)
            out.append(f"{lhs} = {rhs}".rstrip())
    return "\n".join(out) + "\n"


# Elaboración

@dataclass
class Workspace:
    """Objetos elaborados por nombre de bloque, en orden de aparición"""
    objects: Dict[str, Any] = field(default_factory=dict)
    kinds: Dict[str, str] = field(default_factory=dict)
    windows: Dict[str, int] = field(default_factory=dict)

    def names(self, kind_: Optional[str] = None) -> List[str]:
        return [n for n, k in self.kinds.items() if kind_ is None or k == kind_]

    def get(self, name_: str, *kinds: str) -> Any:
        if name_ not in self.objects:
            raise KeyError(name_)
        if kinds and self.kinds[name_] not in kinds:
            raise TypeError(f"{name_} es un bloque {self.kinds[name_]}, se esperaba {' o '.join(kinds)}")
        return self.objects[name_]


# clave -> (número de argumentos, forma de los valores)
_NAMES, _ONE, _MATRIX, _MATRICES, _PERM = "names", "one", "matrix", "matrices", "perm"
_SCHEMA: Dict[str, Dict[str, Tuple[int, str]]] = {
    "groupoid": {"elements": (0, _NAMES), "units": (0, _NAMES), "src": (1, _ONE), "rng": (1, _ONE),
                 "inv": (1, _ONE), "mul": (2, _ONE)},
    "left-action": {"H": (0, _ONE), "X": (0, _ONE), "rho0": (1, _ONE), "act": (2, _ONE), "restr": (2, _ONE)},
    "right-action": {"G": (0, _ONE), "X": (0, _ONE), "sigma0": (1, _ONE), "act": (2, _ONE),
                     "restr": (2, _ONE)},
    "fell-bundle": {"base": (0, _ONE), "dim": (1, _ONE), "basis": (1, _MATRICES)},
    "fell-action": {"action": (0, _ONE), "bundle": (0, _ONE), "map": (2, _MATRIX)},
    "dr-system": {"size": (0, _ONE), "perm": (1, _PERM), "window": (0, _ONE), "fill": (2, _ONE)},
}


class _BlockReader:
    """Acceso validado a las sentencias de un bloque"""

    def __init__(self, block_: Block, ws: Workspace):
        self.block = block_
        self.ws = ws
        self.schema = _SCHEMA[block_.kind]
        self.by_key: Dict[str, List[Statement]] = {}
        for s in block_.statements:
            self._check_shape(s)
            self.by_key.setdefault(s.key, []).append(s)

    def _check_shape(self, s: Statement) -> None:
        if s.key not in self.schema:
            raise DslReferenceError(f"clave desconocida {s.key!r} en un bloque {self.block.kind}", s.line, s.col)
        n_args, shape = self.schema[s.key]
        if len(s.args) != n_args:
            raise DslArityError(f"{s.key} espera {n_args} argumentos, hay {len(s.args)}", s.line, s.col)
        ok = {
            _NAMES: all(isinstance(v, str) for v in s.values),
            _ONE: len(s.values) == 1 and isinstance(s.values[0], str),
            _MATRIX: len(s.values) == 1 and isinstance(s.values[0], (Matrix, MatrixList)),
            _MATRICES: len(s.values) == 1 and isinstance(s.values[0], MatrixList),
            _PERM: (len(s.values) == 1 and isinstance(s.values[0], Cycles))
            or (bool(s.values) and all(isinstance(v, str) for v in s.values)),
        }[shape]
        if not ok:
            raise DslArityError(f"valores inválidos para {s.key}", s.line, s.col)

    def statements(self, key: str) -> List[Statement]:
        return self.by_key.get(key, [])

    def single(self, key: str, required: bool = True) -> Optional[Statement]:
        found = self.statements(key)
        if len(found) > 1:
            s = found[1]
            raise DslElaborationError(f"{key} declarado más de una vez", s.line, s.col)
        if not found:
            if required:
                raise DslElaborationError(f"falta la sentencia {key}", self.block.line, self.block.col)
            return None
        return found[0]

    def ref(self, key: str, *kinds: str) -> Tuple[str, Any]:
        s = self.single(key)
        target = s.values[0]
        try:
            return target, self.ws.get(target, *kinds)
        except KeyError:
            raise DslReferenceError(f"{target} no está definido antes de {self.block.name}", s.line, s.col)
        except TypeError as e:
            raise DslReferenceError(str(e), s.line, s.col)

    def integer(self, s: Statement, text: str) -> int:
        try:
            return int(text)
        except ValueError:
            raise DslElaborationError(f"se esperaba un entero, no {text!r}", s.line, s.col)

    def fail(self, message: str, s: Optional[Statement] = None) -> DslElaborationError:
        where = s or self.block
        return DslElaborationError(f"{self.block.name}: {message}", where.line, where.col)


def _lookup(g: FiniteGroupoid, label: str, s: Statement) -> int:
    try:
        return g.label_index[label]
    except KeyError:
        raise DslReferenceError(f"{label} no es un elemento de {g.name}", s.line, s.col)


def _table(r: _BlockReader, key: str, keys: Sequence[FiniteGroupoid], cod: FiniteGroupoid) -> Dict:
    out: Dict = {}
    for s in r.statements(key):
        k = tuple(_lookup(g, a, s) for g, a in zip(keys, s.args))
        k = k[0] if len(k) == 1 else k
        if k in out:
            raise r.fail(f"{key} {' '.join(s.args)} repetido", s)
        out[k] = _lookup(cod, s.values[0], s)
    return out


def _elaborate_groupoid(r: _BlockReader) -> FiniteGroupoid:
    elements = r.single("elements").values
    index: Dict[str, int] = {}
    for i, label in enumerate(elements):
        if label in index:
            raise r.fail(f"elemento {label} repetido", r.single("elements"))
        index[label] = i
    stub = FiniteGroupoid(r.block.name, (), (), (), (), {}, tuple(elements))
    units = [_lookup(stub, u, r.single("units")) for u in r.single("units").values]
    tables = {}
    for key in ("src", "rng", "inv"):
        table = _table(r, key, [stub], stub)
        missing = [e for e in elements if index[e] not in table]
        if missing:
            raise r.fail(f"falta {key} de {missing[0]}")
        tables[key] = [table[i] for i in range(len(elements))]
    mul = _table(r, "mul", [stub, stub], stub)
    return FiniteGroupoid.build(r.block.name, tables["src"], tables["rng"], tables["inv"], mul,
                                labels=list(elements), units=units)


def _elaborate_left(r: _BlockReader) -> LeftSelfSimilarAction:
    _, H = r.ref("H", "groupoid")
    _, X = r.ref("X", "groupoid")
    rho0 = _table(r, "rho0", [X], H)
    return LeftSelfSimilarAction.build(r.block.name, H, X, rho0,
                                       _table(r, "act", [H, X], X), _table(r, "restr", [H, X], H))


def _elaborate_right(r: _BlockReader) -> RightSelfSimilarAction:
    _, G = r.ref("G", "groupoid")
    _, X = r.ref("X", "groupoid")
    sigma0 = _table(r, "sigma0", [X], G)
    return RightSelfSimilarAction.build(r.block.name, G, X, sigma0,
                                        _table(r, "act", [X, G], X), _table(r, "restr", [X, G], G))


def _elaborate_bundle(r: _BlockReader) -> FellBundle:
    _, base = r.ref("base", "groupoid")
    dims = {}
    for s in r.statements("dim"):
        dims[_lookup(base, s.args[0], s)] = r.integer(s, s.values[0])
    bases: Dict[int, np.ndarray] = {}
    for s in r.statements("basis"):
        x = _lookup(base, s.args[0], s)
        if x in bases:
            raise r.fail(f"basis {s.args[0]} repetido", s)
        try:
            bases[x] = np.array([m.array() for m in s.values[0].items], dtype=np.complex128)
        except (StructureError, ValueError) as e:
            raise r.fail(str(e), s)
    missing = [x for x in base.elements if x not in bases]
    if missing:
        raise r.fail(f"falta la base de la fibra {base.label(missing[0])}")
    return FellBundle.build(r.block.name, base, dims, [bases[x] for x in base.elements])


def _elaborate_fell_action(r: _BlockReader) -> Union[FellLeftAction, FellRightAction]:
    _, action = r.ref("action", "left-action", "right-action")
    _, bundle = r.ref("bundle", "fell-bundle")
    left = isinstance(action, LeftSelfSimilarAction)
    acted = action.H if left else action.G
    keys = [acted, action.X] if left else [action.X, acted]
    declared: Dict[Tuple[int, int], np.ndarray] = {}
    for s in r.statements("map"):
        p = tuple(_lookup(g, a, s) for g, a in zip(keys, s.args))
        if p not in action.act:
            raise r.fail(f"map {' '.join(s.args)} está fuera del dominio de {action.name}", s)
        v = s.values[0]
        declared[p] = v.array() if isinstance(v, Matrix) else np.zeros((0, 0), dtype=np.complex128)
    maps = {}
    for p in action.domain:
        source = p[1] if left else p[0]
        target = action.act[p]
        shape = (bundle.rank(target), bundle.rank(source))
        m = declared.get(p)
        if m is None:
            if shape[0] != shape[1]:
                raise r.fail(f"falta map para {p}: las fibras tienen rangos distintos")
            m = np.eye(shape[0], dtype=np.complex128)
        elif m.size == 0 and 0 in shape:
            m = np.zeros(shape, dtype=np.complex128)
        if m.shape != shape:
            raise r.fail(f"map para {p} tiene forma {m.shape}, se esperaba {shape}")
        maps[p] = m
    cls = FellLeftAction if left else FellRightAction
    return cls(r.block.name, action, bundle, maps)


def _permutation(r: _BlockReader, s: Statement, n: int) -> Tuple[int, ...]:
    v = s.values
    if isinstance(v[0], Cycles):
        p = list(range(n))
        seen: set = set()
        for c in v[0].cycles:
            for i, x in enumerate(c):
                if not 0 <= x < n or x in seen:
                    raise r.fail(f"ciclo inválido en perm {s.args[0]}", s)
                seen.add(x)
                p[x] = c[(i + 1) % len(c)]
        return tuple(p)
    images = tuple(r.integer(s, t) for t in v)
    if len(images) != n:
        raise DslArityError(f"perm {s.args[0]} tiene {len(images)} imágenes, se esperaban {n}", s.line, s.col)
    return images


def _elaborate_dr(r: _BlockReader) -> StarCommutingSystem:
    size_stmt = r.single("size")
    n = r.integer(size_stmt, size_stmt.values[0])
    perms: Dict[str, Tuple[int, ...]] = {}
    for s in r.statements("perm"):
        if s.args[0] not in ("S", "T") or s.args[0] in perms:
            raise r.fail(f"perm {s.args[0]} inválido o repetido", s)
        perms[s.args[0]] = _permutation(r, s, n)
    if set(perms) != {"S", "T"}:
        raise r.fail("se requieren perm S y perm T")
    fill = None
    if r.statements("fill"):
        fill = {(r.integer(s, s.args[0]), r.integer(s, s.args[1])): r.integer(s, s.values[0])
                for s in r.statements("fill")}
    window = r.single("window", required=False)
    r.ws.windows[r.block.name] = r.integer(window, window.values[0]) if window else DEFAULT_WINDOW
    return StarCommutingSystem(r.block.name, perms["S"], perms["T"], fill)


_ELABORATORS: Dict[str, Callable[[_BlockReader], Any]] = {
    "groupoid": _elaborate_groupoid,
    "left-action": _elaborate_left,
    "right-action": _elaborate_right,
    "fell-bundle": _elaborate_bundle,
    "fell-action": _elaborate_fell_action,
    "dr-system": _elaborate_dr,
}


def elaborate(doc: Document) -> Workspace:
    """
    Construye los objetos del núcleo bloque a bloque; las referencias se
    resuelven contra bloques anteriores. Los errores del núcleo se envuelven
    en DslElaborationError con la posición del bloque.
    """
    ws = Workspace()
    for b in doc.blocks:
        reader = _BlockReader(b, ws)
        try:
            obj = _ELABORATORS[b.kind](reader)
        except DslError:
            raise
        except GpdkitError as e:
            raise DslElaborationError(f"{b.name}: {e}", b.line, b.col) from e
        ws.objects[b.name] = obj
        ws.kinds[b.name] = b.kind
        logger.debug(f"🧱 Bloque {b.kind} {b.name} elaborado")
    return ws


def load(text: str) -> Workspace:
    return elaborate(parse(text))


# Emisores

def _check_name(text: str) -> str:
    if not _NAME_RE.fullmatch(text) or text.startswith("("):
        raise StructureError(f"{text!r} no es un nombre válido en el lenguaje de entrada")
    return text


def _matrix_value(m: np.ndarray) -> Matrix:
    return Matrix(tuple(tuple(complex(c) for c in r) for r in np.asarray(m)))


def _emit_groupoid(name_: str, g: FiniteGroupoid, names: Mapping[int, str]) -> Block:
    lab = [_check_name(x) for x in g.labels]
    st = [Statement("elements", (), tuple(lab)), Statement("units", (), tuple(lab[u] for u in g.units))]
    for key, table in (("src", g.src), ("rng", g.rng), ("inv", g.inv)):
        st.extend(Statement(key, (lab[x],), (lab[table[x]],)) for x in g.elements)
    st.extend(Statement("mul", (lab[a], lab[b]), (lab[c],)) for (a, b), c in sorted(g.mul.items()))
    return Block("groupoid", name_, tuple(st))


def _emit_left(name_: str, a: LeftSelfSimilarAction, names: Mapping[int, str]) -> Block:
    H, X = a.H, a.X
    st = [Statement("H", (), (names[id(H)],)), Statement("X", (), (names[id(X)],))]
    st.extend(Statement("rho0", (X.label(u),), (H.label(a.rho0[u]),)) for u in X.units)
    st.extend(Statement("act", (H.label(h), X.label(x)), (X.label(a.act[(h, x)]),)) for h, x in a.domain)
    st.extend(Statement("restr", (H.label(h), X.label(x)), (H.label(a.restr[(h, x)]),)) for h, x in a.domain)
    return Block("left-action", name_, tuple(st))


def _emit_right(name_: str, a: RightSelfSimilarAction, names: Mapping[int, str]) -> Block:
    G, X = a.G, a.X
    st = [Statement("G", (), (names[id(G)],)), Statement("X", (), (names[id(X)],))]
    st.extend(Statement("sigma0", (X.label(u),), (G.label(a.sigma0[u]),)) for u in X.units)
    st.extend(Statement("act", (X.label(x), G.label(t)), (X.label(a.act[(x, t)]),)) for x, t in a.domain)
    st.extend(Statement("restr", (X.label(x), G.label(t)), (G.label(a.restr[(x, t)]),)) for x, t in a.domain)
    return Block("right-action", name_, tuple(st))


def _emit_bundle(name_: str, b: FellBundle, names: Mapping[int, str]) -> Block:
    g = b.base
    st = [Statement("base", (), (names[id(g)],))]
    st.extend(Statement("dim", (g.label(u),), (str(b.dims[u]),)) for u in g.units)
    st.extend(Statement("basis", (g.label(x),), (MatrixList(tuple(_matrix_value(m) for m in b.bases[x])),))
              for x in g.elements)
    return Block("fell-bundle", name_, tuple(st))


def _emit_fell_action(name_: str, fa: Union[FellLeftAction, FellRightAction], names: Mapping[int, str]) -> Block:
    a = fa.action
    left = isinstance(fa, FellLeftAction)
    first, second = (a.H, a.X) if left else (a.X, a.G)
    st = [Statement("action", (), (names[id(a)],)), Statement("bundle", (), (names[id(fa.bundle)],))]
    for p in a.domain:
        m = fa.maps[p]
        if m.shape[0] == m.shape[1] and np.array_equal(m, np.eye(m.shape[0])):
            continue
        st.append(Statement("map", (first.label(p[0]), second.label(p[1])),
                            (_matrix_value(m) if m.size else MatrixList(()),)))
    return Block("fell-action", name_, tuple(st))


def _cycles_of(p: Sequence[int]) -> Cycles:
    seen, out = set(), []
    for start in range(len(p)):
        if start in seen:
            continue
        c, x = [], start
        while x not in seen:
            seen.add(x)
            c.append(x)
            x = p[x]
        out.append(tuple(c))
    return Cycles(tuple(out))


def _emit_dr(name_: str, sys: StarCommutingSystem, window: int) -> Block:
    st = [Statement("size", (), (str(sys.size),)),
          Statement("perm", ("S",), (_cycles_of(sys.S),)),
          Statement("perm", ("T",), (_cycles_of(sys.T),)),
          Statement("window", (), (str(window),))]
    if sys.fill is not None:
        st.extend(Statement("fill", (str(x), str(y)), (str(z),)) for (x, y), z in sorted(sys.fill.items()))
    return Block("dr-system", name_, tuple(st))


def emit_document(named: Mapping[str, Any], windows: Optional[Mapping[str, int]] = None) -> Document:
    """
    Documento a partir de objetos del núcleo con nombre de bloque; las
    referencias deben apuntar a objetos emitidos antes
    """
    names: Dict[int, str] = {}
    blocks: List[Block] = []
    emitters = ((FiniteGroupoid, _emit_groupoid), (LeftSelfSimilarAction, _emit_left),
                (RightSelfSimilarAction, _emit_right), (FellBundle, _emit_bundle),
                (FellLeftAction, _emit_fell_action), (FellRightAction, _emit_fell_action))
    for name_, obj in named.items():
        _check_name(name_)
        if isinstance(obj, StarCommutingSystem):
            blocks.append(_emit_dr(name_, obj, (windows or {}).get(name_, DEFAULT_WINDOW)))
            continue
        for cls, emit in emitters:
            if isinstance(obj, cls):
                try:
                    blocks.append(emit(name_, obj, names))
                except KeyError:
                    raise StructureError(f"{name_} referencia un objeto que no se emitió antes")
                break
        else:
            raise StructureError(f"{name_}: no se puede emitir un {type(obj).__name__}")
        names[id(obj)] = name_
    return Document(tuple(blocks))
