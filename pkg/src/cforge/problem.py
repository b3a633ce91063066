"""Problem files: an algebra, named complexes, maps, diagonal complexes and
a list of commands, written in YAML.

Paths are lists of arrow names in traversal order; an entry of a matrix is
``[row, col, value]`` with ``value`` an integer (a multiple of the identity)
or a list of ``[coefficient, [arrow, ...]]`` pairs.
"""
from dataclasses import dataclass, field

import yaml

from .algebra import Algebra, ProjMorphism
from .complexes import ChainMap, Complex
from .enlargements import DiagonalComplex
from .errors import CforgeError, InvalidInput

COMMANDS = (
    "validate", "hom", "homotopy-hom", "decompose", "diagonalize", "enlarge",
    "summand-test", "indec-diagonal", "candidate-z0", "d0-shape", "classify-indec",
    "split-common", "classify-map", "check-f-shape", "refute-irreducible", "restrict",
    "type-agreement",
)


class ParseError(InvalidInput):
    def __init__(self, msg, line=None, column=None):
        super().__init__(msg)
        self.line, self.column = line, column


@dataclass
class Problem:
    alg: Algebra
    complexes: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    diagonals: dict = field(default_factory=dict)
    commands: list = field(default_factory=list)
    source: str = "<string>"


def _load_yaml(text, source):
    try:
        return yaml.safe_load(text)
    except yaml.MarkedYAMLError as e:
        mark = e.problem_mark or e.context_mark
        line, col = (mark.line + 1, mark.column + 1) if mark else (None, None)
        raise ParseError(f"{source}:{line}:{col}: {e.problem or e.context}", line, col) from None
    except yaml.YAMLError as e:  # pragma: no cover - generic scanner failures
        raise ParseError(f"{source}: {e}") from None


def _named(kind, name, fn):
    try:
        return fn()
    except CforgeError as e:
        raise InvalidInput(f"{kind} {name!r}: {e}") from None
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise InvalidInput(f"{kind} {name!r}: malformed ({type(e).__name__}: {e})") from None


def _get(table, name, kind):
    name = str(name)
    if name not in table:
        raise InvalidInput(f"unknown {kind} {name!r}")
    return table[name]


def morphism(alg, dom, cod, entries):
    return ProjMorphism.from_terms(alg, tuple(dom), tuple(cod), entries or [])


def chain_map(alg, X, Y, comps):
    lo, hi = min(X.lo, Y.lo), max(X.hi, Y.hi)
    out = {}
    for key, entries in (comps or {}).items():
        i = int(key)
        if not lo <= i <= hi:
            raise InvalidInput(f"degree {i} is outside [{lo},{hi}]")
        out[i] = morphism(alg, X.obj(i), Y.obj(i), entries)
    return ChainMap(X, Y, out, check=True)


def parse_problem(text, prime=None, source="<string>"):
    doc = _load_yaml(text, source)
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise ParseError(f"{source}: top level must be a mapping")
    unknown = set(doc) - {"algebra", "complexes", "maps", "diagonals", "commands"}
    if unknown:
        raise InvalidInput(f"unknown top-level key {sorted(unknown)[0]!r}")
    if "algebra" not in doc:
        raise InvalidInput("missing 'algebra' block")
    alg = _named("algebra", "algebra", lambda: Algebra.from_dict(doc["algebra"], p=prime))
    prob = Problem(alg, source=source)
    for name, d in (doc.get("complexes") or {}).items():
        prob.complexes[str(name)] = _named("complex", name, lambda d=d: Complex.from_dict(alg, d))
    for name, d in (doc.get("maps") or {}).items():
        def build(d=d):
            X, Y = _get(prob.complexes, d["from"], "complex"), _get(prob.complexes, d["to"], "complex")
            return chain_map(alg, X, Y, d.get("components"))
        prob.maps[str(name)] = _named("map", name, build)
    for name, d in (doc.get("diagonals") or {}).items():
        def buildd(d=d):
            z0 = alg.obj(*d["z0"])
            blocks = [_get(prob.complexes, b, "complex") for b in d["blocks"]]
            n = int(d.get("n", max([b.hi for b in blocks] + [1])))
            d0 = [morphism(alg, z0, B.restrict(1, n).obj(1), e) for B, e in zip(blocks, d["d0"])]
            return DiagonalComplex(alg, z0, blocks, d0, n=n)
        prob.diagonals[str(name)] = _named("diagonal", name, buildd)
    cmds = doc.get("commands") or []
    if not isinstance(cmds, list):
        raise InvalidInput("'commands' must be a list")
    for k, c in enumerate(cmds):
        if not isinstance(c, dict) or "op" not in c:
            raise InvalidInput(f"command {k}: expected a mapping with an 'op' key")
        if c["op"] not in COMMANDS:
            raise InvalidInput(f"command {k}: unknown op {c['op']!r}")
    prob.commands = cmds
    return prob


def load_problem(path, prime=None):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_problem(text, prime=prime, source=str(path))
