"""The curated ring family: specs, parsing, and monomial arithmetic.

A ring spec names one of
    finite_field(f)            GF(p^f)
    poly(x_1..x_k)             GF(p^f)[x_1..x_k], quasi-homogeneous weights
    laurent(x)                 GF(p^f)[x, x^-1]   (one variable, so weight
                               components stay finite dimensional)
    quotient(vars, rels)       poly modulo quasi-homogeneous relations
    perfection of poly/laurent/finite_field

Elements are sparse dicts {exponent tuple: GF code}; exponents are ints,
or Fractions with p-power denominator for perfections.  Everything is
weight graded and all per-weight components are finite dimensional,
which is what makes the downstream lattice computations finite.

Text format (one spec per file):
    p = 3
    kind = poly | laurent | quotient | finite_field | perfection of <kind>
    vars = x:1, y:3          name:weight pairs
    rels = y^2 - x^3; ...    quotient only
    f = 2                    residue field extension degree (default 1)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import NonQuasiHomogeneous, ParseError, UnsupportedKind
from .exactcore import GF, gf_rref

KINDS = ("finite_field", "poly", "laurent", "quotient", "perfection")
PERFECTABLE = ("poly", "laurent", "finite_field")


def wkey(w):
    """Canonical weight key: plain int when integral."""
    if isinstance(w, Fraction) and w.denominator == 1:
        return int(w)
    return w


@dataclass(frozen=True)
class RingSpec:
    p: int
    kind: str
    variables: tuple[str, ...] = ()
    weights: tuple[int, ...] = ()
    relations: tuple = ()  # tuple of ((coeff, exps), ...) homogeneous polys
    f: int = 1
    base_kind: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UnsupportedKind(f"unknown ring kind {self.kind!r}")
        if self.kind == "perfection":
            if self.base_kind not in PERFECTABLE:
                raise UnsupportedKind("perfection only wraps poly, laurent or finite_field")
        if self.kind == "laurent" or (self.kind == "perfection" and self.base_kind == "laurent"):
            if len(self.variables) != 1:
                raise UnsupportedKind(
                    "laurent rings are restricted to one variable so weight "
                    "components stay finite dimensional"
                )
        if any(w <= 0 for w in self.weights):
            raise NonQuasiHomogeneous("variable weights must be positive")
        if self.kind == "quotient":
            for rel in self.relations:
                wts = {self.monomial_weight(exps) for _, exps in rel}
                if len(wts) > 1:
                    raise NonQuasiHomogeneous(
                        f"relation is not quasi-homogeneous for the declared weights: {wts}"
                    )

    # -- structure helpers ------------------------------------------------

    @property
    def effective_kind(self):
        return self.base_kind if self.kind == "perfection" else self.kind

    @property
    def is_perfection(self):
        return self.kind == "perfection"

    @property
    def is_laurent(self):
        return self.effective_kind == "laurent"

    @property
    def nvars(self):
        return len(self.variables)

    def gf(self) -> GF:
        return GF(self.p, self.f)

    def monomial_weight(self, exps):
        return sum((Fraction(e) * w for e, w in zip(exps, self.weights)), Fraction(0))

    def describe(self):
        fld = f"GF({self.p}^{self.f})" if self.f > 1 else f"GF({self.p})"
        base = {
            "finite_field": fld,
            "poly": "poly",
            "laurent": "laurent",
            "quotient": "quotient",
        }
        if self.kind == "perfection":
            return f"perfection of {base[self.base_kind]}({','.join(self.variables)})"
        if self.kind == "finite_field":
            return base["finite_field"]
        return f"{base[self.kind]}({','.join(self.variables)})"


# ---------------------------------------------------------------------------
# expression parsing (relations, CLI components)

def _tokenize(text, line_no=1):
    tokens = []
    i, col = 0, 1
    while i < len(text):
        c = text[i]
        if c in " \t":
            i += 1
            col += 1
            continue
        if c.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("INT", int(text[i:j]), col))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("NAME", text[i:j], col))
            col += j - i
            i = j
            continue
        if c in "+-*^()/":
            tokens.append((c, c, col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {c!r}", line_no, col)
    return tokens


def parse_poly(text, variables, K: GF, line_no=1, allow_fractional=False):
    """Parse a polynomial expression into ((coeff_code, exps), ...).

    Supports integer coefficients, the field generator `t` when f > 1,
    `name^exp` powers, and exponents `a/b` (parenthesised or bare) when
    allow_fractional is set.
    """
    tokens = _tokenize(text, line_no)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else ("END", None, None)

    def take(kind=None):
        nonlocal pos
        tok = peek()
        if kind and tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1]!r}", line_no, tok[2])
        pos += 1
        return tok

    def parse_exponent():
        neg = False
        if peek()[0] == "(":
            take("(")
            val = parse_exponent()
            take(")")
            return val
        if peek()[0] == "-":
            take("-")
            neg = True
        num = take("INT")[1]
        den = 1
        if peek()[0] == "/":
            take("/")
            den = take("INT")[1]
        val = Fraction(num, den)
        if den != 1 and not allow_fractional:
            raise ParseError("fractional exponents only allowed for perfections", line_no)
        return -val if neg else val

    nvar = len(variables)
    var_index = {v: i for i, v in enumerate(variables)}

    def parse_factor():
        tok = peek()
        if tok[0] == "INT":
            take()
            return (tok[1] % K.p, tuple(Fraction(0) for _ in range(nvar)))
        if tok[0] == "NAME":
            take()
            name = tok[1]
            exp = Fraction(1)
            if peek()[0] == "^":
                take("^")
                exp = parse_exponent()
            if name in var_index:
                exps = tuple(exp if i == var_index[name] else Fraction(0) for i in range(nvar))
                return (1, exps)
            if name == "t" and K.f > 1:
                if exp.denominator != 1 or exp < 0:
                    raise ParseError("field generator needs a nonnegative integer power", line_no)
                gen = K._encode([0, 1] + [0] * (K.f - 2))
                return (K.power(gen, int(exp)), tuple(Fraction(0) for _ in range(nvar)))
            raise ParseError(f"unknown variable {name!r}", line_no, tok[2])
        raise ParseError(f"unexpected token {tok[1]!r}", line_no, tok[2])

    def parse_term():
        coeff, exps = parse_factor()
        while peek()[0] == "*" or peek()[0] in ("NAME", "INT"):
            if peek()[0] == "*":
                take("*")
            c2, e2 = parse_factor()
            coeff = K.mul(coeff, c2)
            exps = tuple(a + b for a, b in zip(exps, e2))
        return coeff, exps

    terms = {}
    sign = 1
    if peek()[0] in ("+", "-"):
        sign = -1 if take()[0] == "-" else 1
    while True:
        coeff, exps = parse_term()
        if sign < 0:
            coeff = K.neg(coeff)
        key = tuple(wkey(e) for e in exps)
        terms[key] = K.add(terms.get(key, 0), coeff)
        tok = peek()
        if tok[0] == "END":
            break
        if tok[0] not in ("+", "-"):
            raise ParseError(f"expected + or -, found {tok[1]!r}", line_no, tok[2])
        sign = -1 if take()[0] == "-" else 1
    return tuple(sorted((c, e) for e, c in terms.items() if c))


def parse_ringspec(text: str) -> RingSpec:
    """Parse the ring-spec text format; errors carry line positions."""
    fields = {}
    order = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected `key = value`", ln)
        key, _, value = line.partition("=")
        key = key.strip()
        if key in fields:
            raise ParseError(f"duplicate field {key!r}", ln)
        fields[key] = (value.strip(), ln)
        order.append(key)
    if "p" not in fields:
        raise ParseError("missing `p = <prime>` line", 1)
    p_text, p_ln = fields.pop("p")
    try:
        p = int(p_text)
    except ValueError:
        raise ParseError(f"p must be an integer, found {p_text!r}", p_ln)
    if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
        raise ParseError(f"p = {p} is not prime", p_ln)
    if "kind" not in fields:
        raise ParseError("missing `kind = ...` line", 1)
    kind_text, kind_ln = fields.pop("kind")
    base_kind = None
    if kind_text.startswith("perfection"):
        kind = "perfection"
        rest = kind_text[len("perfection"):].strip()
        if rest.startswith("of"):
            base_kind = rest[2:].strip()
        elif "base" in fields:
            base_kind, _ = fields.pop("base")
        else:
            raise ParseError("perfection needs a base: `kind = perfection of poly`", kind_ln)
    else:
        kind = kind_text
    if kind not in KINDS:
        raise ParseError(f"unknown kind {kind_text!r}", kind_ln)

    variables, weights = (), ()
    if "vars" in fields:
        v_text, v_ln = fields.pop("vars")
        names, wts = [], []
        for part in v_text.split(","):
            part = part.strip()
            if not part:
                continue
            if ":" in part:
                name, _, w = part.partition(":")
                try:
                    wts.append(int(w))
                except ValueError:
                    raise ParseError(f"bad weight {w!r}", v_ln)
                names.append(name.strip())
            else:
                names.append(part)
                wts.append(1)
        variables, weights = tuple(names), tuple(wts)

    f = 1
    if "f" in fields:
        f_text, f_ln = fields.pop("f")
        try:
            f = int(f_text)
        except ValueError:
            raise ParseError(f"f must be an integer, found {f_text!r}", f_ln)
        if f < 1:
            raise ParseError("f must be >= 1", f_ln)

    relations = ()
    if "rels" in fields:
        r_text, r_ln = fields.pop("rels")
        if kind != "quotient":
            raise ParseError("rels only allowed for quotient kinds", r_ln)
        K = GF(p, f)
        rels = []
        for chunk in r_text.split(";"):
            chunk = chunk.strip()
            if chunk:
                rels.append(parse_poly(chunk, variables, K, r_ln))
        relations = tuple(rels)

    if fields:
        key = next(iter(fields))
        raise ParseError(f"unknown field {key!r}", fields[key][1])

    needs_vars = kind in ("poly", "laurent", "quotient") or (
        kind == "perfection" and base_kind in ("poly", "laurent")
    )
    if needs_vars and not variables:
        raise ParseError("this kind needs a `vars = name:weight, ...` line", 1)
    if kind == "finite_field" or (kind == "perfection" and base_kind == "finite_field"):
        variables, weights = (), ()

    return RingSpec(
        p=p,
        kind=kind,
        variables=variables,
        weights=weights,
        relations=relations,
        f=f,
        base_kind=base_kind,
    )


# ---------------------------------------------------------------------------
# monomial enumeration and the weight-graded algebra

def _knapsack(weights, target, prefix, out):
    if not weights:
        if target == 0:
            out.append(tuple(prefix))
        return
    w = weights[0]
    e = 0
    while e * w <= target:
        _knapsack(weights[1:], target - e * w, prefix + [e], out)
        e += 1


class MonomialAlgebra:
    """Weight-graded arithmetic for one RingSpec.

    Handles the free kinds exactly; quotient kinds are reduced per weight
    against the linear span of the relation multiples, so every element
    has a canonical normal form.  `den` scales the exponent lattice to
    (1/den)Z for perfection approximants (den a power of p).
    """

    def __init__(self, spec: RingSpec, den: int = 1):
        self.spec = spec
        self.K = spec.gf()
        self.den = den
        if spec.kind == "quotient" and den != 1:
            raise UnsupportedKind("fractional exponents are only for free kinds")

    # -- element helpers ---------------------------------------------------

    def zero(self):
        return {}

    def one(self):
        return {self._zero_exps(): 1}

    def _zero_exps(self):
        return tuple(0 for _ in self.spec.variables)

    def constant(self, code):
        return {self._zero_exps(): code} if code else {}

    def variable(self, i, power=1):
        exps = tuple(wkey(Fraction(power)) if j == i else 0 for j in range(self.spec.nvars))
        return self.reduce({exps: 1})

    def is_zero(self, el):
        return not el

    def equal(self, a, b):
        return self.reduce(a) == self.reduce(b)

    def add(self, a, b):
        out = dict(a)
        for exps, c in b.items():
            s = self.K.add(out.get(exps, 0), c)
            if s:
                out[exps] = s
            else:
                out.pop(exps, None)
        return self.reduce(out)

    def neg(self, a):
        return {e: self.K.neg(c) for e, c in a.items()}

    def scal(self, code, a):
        if not code:
            return {}
        return self.reduce({e: self.K.mul(code, c) for e, c in a.items()})

    def mul(self, a, b):
        out = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(wkey(Fraction(x) + Fraction(y)) for x, y in zip(e1, e2))
                s = self.K.add(out.get(e, 0), self.K.mul(c1, c2))
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return self.reduce(out)

    def frobenius(self, a):
        out = {}
        for e, c in a.items():
            ep = tuple(wkey(Fraction(x) * self.spec.p) for x in e)
            out[ep] = self.K.frob(c)
        return self.reduce(out)

    def weight(self, exps):
        return self.spec.monomial_weight(exps)

    def is_homogeneous(self, a):
        return len({self.weight(e) for e in a}) <= 1

    # -- quotient reduction -------------------------------------------------

    def reduce(self, el):
        if self.spec.kind != "quotient" or not el:
            return el
        buckets = {}
        for e, c in el.items():
            buckets.setdefault(wkey(self.weight(e)), {})[e] = c
        out = {}
        for w, part in buckets.items():
            basis, reducer = self._weight_data(w)
            vec = [0] * len(basis)
            index = {m: i for i, m in enumerate(basis)}
            extra = []
            for e, c in part.items():
                if e in index:
                    vec[index[e]] = self.K.add(vec[index[e]], c)
                else:
                    extra.append((e, c))
            if extra:
                # rewrite non-basis monomials through the reduction table
                for e, c in extra:
                    row = reducer[e]
                    for i, x in enumerate(row):
                        if x:
                            vec[i] = self.K.add(vec[i], self.K.mul(c, x))
            for i, c in enumerate(vec):
                if c:
                    out[basis[i]] = c
        return out

    @lru_cache(maxsize=None)
    def _weight_data(self, w):
        """(basis monomials, rewrite table) of the weight-w component."""
        monos = self.monomials(w, raw=True)
        idx = {m: i for i, m in enumerate(monos)}
        rows = []
        for rel in self.spec.relations:
            wr = self.spec.monomial_weight(rel[0][1])
            rem = Fraction(w) - wr
            if rem < 0:
                continue
            for m in self.monomials(rem, raw=True):
                row = [0] * len(monos)
                for c, exps in rel:
                    prod = tuple(wkey(Fraction(a) + Fraction(b)) for a, b in zip(m, exps))
                    row[idx[prod]] = self.K.add(row[idx[prod]], c)
                rows.append(row)
        H = gf_rref(self.K, rows, len(monos))
        pivots = {}
        for hrow in H:
            col = next(j for j, x in enumerate(hrow) if x)
            pivots[col] = hrow
        basis = [m for i, m in enumerate(monos) if i not in pivots]
        basis_pos = {m: i for i, m in enumerate(basis)}
        reducer = {}
        # reverse column order so any pivot hit in a tail is already expanded
        for col, hrow in sorted(pivots.items(), reverse=True):
            # pivot monomial == -(tail of its pivot row) on basis monomials
            row = [0] * len(basis)
            for j in range(col + 1, len(monos)):
                if hrow[j] and monos[j] in basis_pos:
                    row[basis_pos[monos[j]]] = self.K.neg(hrow[j])
                elif hrow[j]:
                    # tail hits another pivot monomial: expand recursively
                    sub = reducer[monos[j]]
                    for i2, x in enumerate(sub):
                        if x:
                            row[i2] = self.K.sub(row[i2], self.K.mul(hrow[j], x))
            reducer[monos[col]] = row
        return tuple(basis), reducer

    # -- monomial enumeration ----------------------------------------------

    def monomials(self, w, raw: bool = False):
        """Monomials of weight w, in a fixed deterministic order.

        For quotient kinds the default is the reduced basis; raw=True
        gives the full polynomial-ring list (used to build relations).
        """
        w = Fraction(w)
        if self.spec.kind == "quotient" and not raw:
            return list(self._weight_data(wkey(w))[0])
        return self._raw_monomials(wkey(w))

    @lru_cache(maxsize=None)
    def _raw_monomials(self, w):
        spec = self.spec
        w = Fraction(w)
        if spec.effective_kind == "finite_field" or spec.nvars == 0:
            return [()] if w == 0 else []
        if spec.is_laurent:
            ratio = w / spec.weights[0]
            scaled = ratio * self.den
            if scaled.denominator != 1:
                return []
            return [(wkey(ratio),)]
        target = w * self.den
        if target.denominator != 1 or target < 0:
            return []
        out = []
        _knapsack(list(spec.weights), int(target), [], out)
        result = []
        for scaled in sorted(out):
            result.append(tuple(wkey(Fraction(a, self.den)) for a in scaled))
        return result

    # -- formatting ----------------------------------------------------------

    def format_element(self, el):
        if not el:
            return "0"
        K = self.K
        parts = []
        for exps, c in sorted(el.items(), key=lambda kv: tuple(map(Fraction, kv[0]))):
            factors = []
            if self.spec.f > 1:
                digits = K._decode(c)
                terms = []
                for k, d in enumerate(digits):
                    if d:
                        if k == 0:
                            terms.append(str(d))
                        elif k == 1:
                            terms.append(f"{d}t" if d > 1 else "t")
                        else:
                            terms.append(f"{d}t^{k}" if d > 1 else f"t^{k}")
                cs = "+".join(terms)
                if len(terms) > 1:
                    cs = f"({cs})"
            else:
                cs = str(c)
            if any(Fraction(e) != 0 for e in exps):
                for name, e in zip(self.spec.variables, exps):
                    if Fraction(e) == 0:
                        continue
                    if Fraction(e) == 1:
                        factors.append(name)
                    elif isinstance(e, Fraction):
                        factors.append(f"{name}^({e.numerator}/{e.denominator})")
                    else:
                        factors.append(f"{name}^{e}")
                body = "*".join(factors)
                parts.append(body if cs == "1" else f"{cs}*{body}")
            else:
                parts.append(cs)
        return " + ".join(parts)

    def parse_element(self, text):
        poly = parse_poly(
            text,
            self.spec.variables,
            self.K,
            allow_fractional=self.spec.is_perfection or self.den > 1,
        )
        out = {}
        for c, exps in poly:
            key = tuple(wkey(Fraction(e)) for e in exps)
            if self.spec.effective_kind in ("poly", "quotient") and any(
                Fraction(e) < 0 for e in exps
            ):
                raise ParseError("negative exponents need a laurent kind")
            out[key] = self.K.add(out.get(key, 0), c)
        return self.reduce({e: c for e, c in out.items() if c})
