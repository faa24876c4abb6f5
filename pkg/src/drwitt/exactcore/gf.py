"""Arithmetic in GF(p^f) and its unramified p-adic lift.

Field elements are encoded as ints in [0, p^f): the base-p digits of the
code are the coefficients of the residue polynomial in t, reduced modulo
a fixed monic irreducible m(t) of degree f (the lexicographically least
one, so encodings are deterministic).

The lift ring is Z[t]/(m(t), p^B), the unramified extension of Z/p^B
with residue field GF(p^f); its Frobenius is the unique ring
automorphism congruent to t |-> t^p mod p, produced by Hensel lifting a
root of m.  Lift elements are coefficient tuples of length f.
"""

from __future__ import annotations

from functools import lru_cache


def _poly_mulmod(a, b, mod, p):
    """Product of coefficient lists a, b modulo (mod, p); mod is monic."""
    f = len(mod) - 1
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    for i in range(len(out) - 1, f - 1, -1):
        c = out[i]
        if c:
            for j in range(f + 1):
                out[i - f + j] = (out[i - f + j] - c * mod[j]) % p
    return [x % p for x in out[:f]]


def _is_irreducible(poly, p):
    """Trial division by all monic polynomials of degree <= deg/2."""
    f = len(poly) - 1
    if f == 1:
        return True
    for d in range(1, f // 2 + 1):
        for code in range(p**d):
            div = [0] * (d + 1)
            c = code
            for i in range(d):
                div[i] = c % p
                c //= p
            div[d] = 1
            # long division of poly by div
            rem = list(poly)
            for i in range(f, d - 1, -1):
                c = rem[i]
                if c:
                    for j in range(d + 1):
                        rem[i - d + j] = (rem[i - d + j] - c * div[j]) % p
            if not any(rem[:d]):
                return False
    return True


@lru_cache(maxsize=None)
def conway_like_modulus(p: int, f: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree f over F_p."""
    if f == 1:
        return (0, 1)
    for code in range(p**f):
        poly = [0] * (f + 1)
        c = code
        for i in range(f):
            poly[i] = c % p
            c //= p
        poly[f] = 1
        if poly[0] != 0 and _is_irreducible(poly, p):
            return tuple(poly)
    raise RuntimeError("no irreducible polynomial found")


class GF:
    """GF(p^f); elements are ints in [0, q)."""

    def __init__(self, p: int, f: int = 1):
        self.p = p
        self.f = f
        self.q = p**f
        self.modulus = conway_like_modulus(p, f)

    def __repr__(self):
        return f"GF({self.p}^{self.f})" if self.f > 1 else f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.f) == (other.p, other.f)

    def __hash__(self):
        return hash(("GF", self.p, self.f))

    def _decode(self, a):
        out = []
        for _ in range(self.f):
            out.append(a % self.p)
            a //= self.p
        return out

    def _encode(self, coeffs):
        a = 0
        for c in reversed(coeffs):
            a = a * self.p + (c % self.p)
        return a

    def add(self, a, b):
        return self._encode([x + y for x, y in zip(self._decode(a), self._decode(b))])

    def sub(self, a, b):
        return self._encode([x - y for x, y in zip(self._decode(a), self._decode(b))])

    def neg(self, a):
        return self._encode([-x for x in self._decode(a)])

    def mul(self, a, b):
        if self.f == 1:
            return (a * b) % self.p
        prod = _poly_mulmod(self._decode(a), self._decode(b), list(self.modulus), self.p)
        return self._encode(prod)

    def power(self, a, n):
        out, base = 1, a
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in GF")
        return self.power(a, self.q - 2)

    def frob(self, a):
        """x -> x^p, the absolute Frobenius."""
        return self.power(a, self.p)

    def elements(self):
        return range(self.q)

    def units(self):
        return range(1, self.q)

    def embed_prime_field(self, c):
        return c % self.p


def gf_rref(K: GF, rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Reduced row echelon form over GF; canonical for the row space."""
    work = [list(r) for r in rows if any(r)]
    placed = []
    for col in range(ncols):
        idx = next((i for i, r in enumerate(work) if r[col]), None)
        if idx is None:
            continue
        piv = work.pop(idx)
        inv = K.inv(piv[col])
        piv = [K.mul(inv, x) for x in piv]
        for r in work:
            if r[col]:
                c = r[col]
                for j in range(col, ncols):
                    r[j] = K.sub(r[j], K.mul(c, piv[j]))
        work = [r for r in work if any(r)]
        placed.append((col, piv))
    result = [piv for _, piv in placed]
    for idx, (col, piv) in enumerate(placed):
        for l in range(idx):
            c = result[l][col]
            if c:
                result[l] = [K.sub(x, K.mul(c, y)) for x, y in zip(result[l], piv)]
    return result


def gf_rank(K: GF, rows: list[list[int]], ncols: int) -> int:
    return len(gf_rref(K, rows, ncols))


def gf_reduce_vector(K: GF, H: list[list[int]], v: list[int]) -> list[int]:
    v = list(v)
    for row in H:
        col = next(j for j, x in enumerate(row) if x)
        if v[col]:
            c = v[col]
            v = [K.sub(x, K.mul(c, y)) for x, y in zip(v, row)]
    return v


def gf_kernel(K: GF, A: list[list[int]]) -> list[list[int]]:
    m = len(A)
    if m == 0:
        return []
    n = len(A[0])
    aug = [list(A[i]) + [1 if j == i else 0 for j in range(m)] for i in range(m)]
    H = gf_rref(K, aug, n + m)
    return [h[n:] for h in H if not any(h[:n])]


def gf_solve(K: GF, A: list[list[int]], b: list[int]) -> list[int] | None:
    m = len(A)
    n = len(b)
    if m == 0:
        return [] if not any(b) else None
    aug = [list(A[i]) + [1 if j == i else 0 for j in range(m)] for i in range(m)]
    H = gf_rref(K, aug, n + m)
    w = gf_reduce_vector(K, H, list(b) + [0] * m)
    if any(w[:n]):
        return None
    return [K.neg(t) for t in w[n:]]


def gf_preimage(K: GF, A: list[list[int]], B: list[list[int]]) -> list[list[int]]:
    m = len(A)
    if m == 0:
        return []
    n = len(A[0])
    aug = [list(A[i]) + [1 if j == i else 0 for j in range(m)] for i in range(m)]
    aug += [list(brow) + [0] * m for brow in B]
    H = gf_rref(K, aug, n + m)
    return [h[n:] for h in H if not any(h[:n])]


class Zq:
    """Z[t]/(m(t), p^B): the unramified lift of GF(p^f) at precision B.

    Elements are tuples of f ints in [0, p^B).  ``frobenius`` applies the
    canonical lift of x -> x^p, computed once by Hensel's lemma.
    """

    def __init__(self, p: int, f: int, B: int):
        self.p = p
        self.f = f
        self.B = B
        self.q = p**B
        self.residue = GF(p, f)
        self.modulus = [c % self.q for c in self.residue.modulus]
        self._frob_matrix = self._lift_frobenius()

    def zero(self):
        return (0,) * self.f

    def one(self):
        return (1,) + (0,) * (self.f - 1)

    def add(self, a, b):
        return tuple((x + y) % self.q for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.q for x, y in zip(a, b))

    def scal(self, c, a):
        return tuple((c * x) % self.q for x in a)

    def mul(self, a, b):
        f = self.f
        out = [0] * (2 * f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = (out[i + j] + x * y) % self.q
        for i in range(len(out) - 1, f - 1, -1):
            c = out[i]
            if c:
                for j in range(f + 1):
                    out[i - f + j] = (out[i - f + j] - c * self.modulus[j]) % self.q
        return tuple(x % self.q for x in out[:f])

    def _poly_eval(self, coeffs, x):
        acc = self.zero()
        for c in reversed(coeffs):
            acc = self.mul(acc, x)
            acc = self.add(acc, self.scal(c, self.one()))
        return acc

    def _lift_frobenius(self):
        # Hensel: find tau == t^p (mod p) with m(tau) == 0 (mod p^B)
        if self.f == 1:
            return [[1]]
        t = tuple(1 if i == 1 else 0 for i in range(self.f))
        tau = self.one()
        for _ in range(self.p):
            tau = self.mul(tau, t)  # tau = t^p
        mprime = [(i * self.modulus[i]) % self.q for i in range(1, self.f + 1)]
        prec = 1
        while prec < self.B:
            val = self._poly_eval(self.modulus, tau)
            der = self._poly_eval(mprime, tau)
            corr = self.mul(val, self._inv(der))
            tau = self.sub(tau, corr)
            prec *= 2
        assert self._poly_eval(self.modulus, tau) == self.zero()
        # matrix of the substitution t^i -> tau^i on coefficient rows
        rows = []
        power = self.one()
        for _ in range(self.f):
            rows.append(list(power))
            power = self.mul(power, tau)
        return rows

    def _inv(self, a):
        # invert a unit (residue invertible) by Newton iteration from the residue inverse
        K = self.residue
        res = K._encode([x % self.p for x in a])
        inv0 = K.inv(res)
        x = tuple(c % self.q for c in K._decode(inv0))
        prec = 1
        while prec < self.B:
            e = self.sub(self.scal(2, x), self.mul(a, self.mul(x, x)))
            x = e
            prec *= 2
        assert self.mul(a, x) == self.one()
        return x

    def frobenius(self, a):
        out = self.zero()
        for c, row in zip(a, self._frob_matrix):
            if c:
                out = self.add(out, self.scal(c, tuple(row)))
        return out

    def frobenius_inverse(self, a):
        x = a
        for _ in range(self.f - 1):
            x = self.frobenius(x)
        return x

    def teichmuller(self, c):
        """Multiplicative lift of a residue-field element (code c)."""
        K = self.residue
        x = tuple(v % self.q for v in K._decode(c))
        # iterate x -> x^q until stable; converges since x^q == x mod p
        for _ in range(self.B + 1):
            y = x
            for _ in range(self.f):
                yp = y
                y = self.one()
                acc = yp
                n = self.p
                while n:
                    if n & 1:
                        y = self.mul(y, acc)
                    acc = self.mul(acc, acc)
                    n >>= 1
            if y == x:
                break
            x = y
        return x

    def reduce_residue(self, a):
        return self.residue._encode([x % self.p for x in a])
