"""Line-oriented corpus files.

Grammar, one case per line (blank lines and ``#`` comments ignored)::

    case <name> d=<int> algebra=<spec> level=<labels> [expect_total=<int>]
                [expect_h_plus_divides=yes|no]

    <spec>   := unramified | ramified:<label>[,<label>...] | ab:<elt>;<elt>
    <elt>    := <int> | <x>,<y>            (x + y*sqrt(d))
    <labels> := 1 | <label>[,<label>...]   (prime labels such as 2, 3.1, 3.2)

d=1 means the rational field.
"""

from dataclasses import dataclass, field
from pathlib import Path

from .numberfield import InputError, is_squarefree, make_field
from .quatalg import (algebra_with_ramification, eichler_order, find_unramified_definite_algebra,
                      quaternion_algebra)

DEFAULT_CORPUS = Path(__file__).with_name("default_corpus.txt")


class CorpusParseError(InputError):
    def __init__(self, line, col, msg):
        self.line, self.col = line, col
        super().__init__("line %d, column %d: %s" % (line, col, msg))


@dataclass(frozen=True)
class CorpusCase:
    name: str
    d: int
    algebra: str
    level: tuple = ()
    expect: dict = field(default_factory=dict, hash=False, compare=False)

    def describe(self):
        return "%s: d=%d algebra=%s level=%s" % (self.name, self.d, self.algebra,
                                                  ",".join(self.level) or "1")


_KEYS = {"d", "algebra", "level", "expect_total", "expect_h_plus_divides"}


def parse_case_tokens(tokens, lineno=1, name="case"):
    """Parse ``key=value`` tokens; tokens are (column, text) pairs."""
    vals = {}
    for col, tok in tokens:
        if "=" not in tok:
            raise CorpusParseError(lineno, col, "expected key=value, got %r" % tok)
        k, v = tok.split("=", 1)
        if k not in _KEYS:
            raise CorpusParseError(lineno, col, "unknown key %r" % k)
        if k in vals:
            raise CorpusParseError(lineno, col, "duplicate key %r" % k)
        vals[k] = (col, v)
    for k in ("d", "algebra"):
        if k not in vals:
            raise CorpusParseError(lineno, 1, "missing %s=" % k)
    col, v = vals["d"]
    try:
        d = int(v)
    except ValueError:
        raise CorpusParseError(lineno, col, "d must be an integer") from None
    if d < 1 or not is_squarefree(d):
        raise CorpusParseError(lineno, col, "d must be a positive squarefree integer")
    col, alg_spec = vals["algebra"]
    if not (alg_spec == "unramified" or alg_spec.startswith("ramified:") or alg_spec.startswith("ab:")):
        raise CorpusParseError(lineno, col, "algebra must be unramified, ramified:..., or ab:...")
    level = ()
    if "level" in vals:
        col, v = vals["level"]
        if v not in ("", "1"):
            level = tuple(x for x in v.split(",") if x)
    expect = {}
    if "expect_total" in vals:
        col, v = vals["expect_total"]
        try:
            expect["total"] = int(v)
        except ValueError:
            raise CorpusParseError(lineno, col, "expect_total must be an integer") from None
    if "expect_h_plus_divides" in vals:
        col, v = vals["expect_h_plus_divides"]
        if v not in ("yes", "no"):
            raise CorpusParseError(lineno, col, "expect_h_plus_divides must be yes or no")
        expect["h_plus_divides"] = v == "yes"
    return CorpusCase(name, d, alg_spec, level, expect)


def _tokens(line):
    out, i = [], 0
    while i < len(line):
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < len(line) and not line[j].isspace():
            j += 1
        out.append((i + 1, line[i:j]))
        i = j
    return out


def parse_corpus(text):
    cases, names = [], set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        if toks[0][1] != "case":
            raise CorpusParseError(lineno, toks[0][0], "lines must start with 'case'")
        if len(toks) < 2 or "=" in toks[1][1]:
            raise CorpusParseError(lineno, toks[0][0] + 5, "missing case name")
        name = toks[1][1]
        if name in names:
            raise CorpusParseError(lineno, toks[1][0], "duplicate case name %r" % name)
        names.add(name)
        cases.append(parse_case_tokens(toks[2:], lineno, name))
    return cases


def load_corpus(path=None):
    path = Path(path) if path else DEFAULT_CORPUS
    return parse_corpus(path.read_text(encoding="utf-8"))


def _element(F, s):
    try:
        if "," in s:
            x, y = s.split(",")
            return F.from_coords(int(x), int(y))
        return F(int(s))
    except ValueError:
        raise InputError("bad algebra element %r" % s) from None


def build_algebra(F, spec):
    if spec == "unramified":
        return find_unramified_definite_algebra(F)
    if spec.startswith("ramified:"):
        labels = [x for x in spec[len("ramified:"):].split(",") if x]
        return algebra_with_ramification(F, [F.prime_from_label(x) for x in labels])
    if spec.startswith("ab:"):
        parts = spec[3:].split(";")
        if len(parts) != 2:
            raise InputError("ab: needs two elements separated by ';'")
        return quaternion_algebra(F, _element(F, parts[0]), _element(F, parts[1]))
    raise InputError("unknown algebra spec %r" % spec)


def build_order(case):
    F = make_field(case.d)
    A = build_algebra(F, case.algebra)
    return eichler_order(A, [F.prime_from_label(x) for x in case.level])
