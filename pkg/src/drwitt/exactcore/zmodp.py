"""Exact linear algebra over Z/p^N.

Z/p^N is a local principal ideal ring: every nonzero element is a unit
times a power of p.  Row modules of matrices over it admit a unique
canonical generating set, the Howell normal form, which plays the role
the reduced row echelon form plays over a field.  Everything here works
on dense lists of Python ints reduced into [0, p^N); no floats, no
modular-inverse shortcuts that assume a field.

Conventions: vectors are rows, a matrix is a list of rows, and maps act
on the right (x |-> x @ A).
"""

from __future__ import annotations


class ZmodRing:
    """The coefficient ring Z/p^N."""

    __slots__ = ("p", "N", "q")

    def __init__(self, p: int, N: int):
        if N < 1:
            raise ValueError("precision exponent must be >= 1")
        self.p = p
        self.N = N
        self.q = p**N

    def __repr__(self):
        return f"ZmodRing({self.p}, {self.N})"

    def __eq__(self, other):
        return isinstance(other, ZmodRing) and (self.p, self.N) == (other.p, other.N)

    def __hash__(self):
        return hash(("ZmodRing", self.p, self.N))

    def val(self, a: int) -> int:
        """p-adic valuation of a mod p^N; the zero class gets valuation N."""
        a %= self.q
        if a == 0:
            return self.N
        v = 0
        while a % self.p == 0:
            a //= self.p
            v += 1
        return v

    def inv_unit(self, u: int) -> int:
        return pow(u, -1, self.q)


def zeros(n: int) -> list[int]:
    return [0] * n


def mat_mul(R: ZmodRing, A: list[list[int]], B: list[list[int]]) -> list[list[int]]:
    q = R.q
    if not A:
        return []
    nb = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = [0] * nb
        for a, brow in zip(row, B):
            if a:
                for j, b in enumerate(brow):
                    if b:
                        acc[j] += a * b
        out.append([x % q for x in acc])
    return out


def vec_mat(R: ZmodRing, v: list[int], A: list[list[int]]) -> list[int]:
    q = R.q
    n = len(A[0]) if A else 0
    acc = [0] * n
    for a, row in zip(v, A):
        if a:
            for j, b in enumerate(row):
                if b:
                    acc[j] += a * b
    return [x % q for x in acc]


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def howell(R: ZmodRing, rows: list[list[int]], ncols: int | None = None) -> list[list[int]]:
    """Howell normal form of the row module spanned by ``rows``.

    Canonical: two generating sets span the same submodule of (Z/p^N)^n
    iff their Howell forms are equal.  Each pivot is a pure power of p,
    pivot columns strictly increase, entries above a pivot p^a are
    reduced mod p^a, and the Howell property holds: every element of the
    span whose support starts at column j lies in the span of the rows
    with pivot column >= j.
    """
    p, q, N = R.p, R.q, R.N
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    work = [[x % q for x in r] for r in rows]
    work = [r for r in work if any(r)]
    placed: list[tuple[int, list[int]]] = []
    for col in range(ncols):
        cand = [i for i, r in enumerate(work) if r[col] != 0]
        if not cand:
            continue
        i0 = min(cand, key=lambda i: R.val(work[i][col]))
        piv = work.pop(i0)
        a = R.val(piv[col])
        pa = p**a
        uinv = R.inv_unit(piv[col] // pa)
        piv = [(x * uinv) % q for x in piv]
        for r in work:
            if r[col]:
                # minimality of a guarantees p^a | r[col]
                c = r[col] // pa
                for j in range(col, ncols):
                    if piv[j]:
                        r[j] = (r[j] - c * piv[j]) % q
        if a > 0:
            shadow = [(x * p ** (N - a)) % q for x in piv]
            if any(shadow):
                work.append(shadow)
        work = [r for r in work if any(r)]
        placed.append((col, piv))
    # reduce entries above each pivot into [0, p^a)
    result = [piv for _, piv in placed]
    for idx, (col, piv) in enumerate(placed):
        pa = p ** R.val(piv[col])
        for l in range(idx):
            c = result[l][col] // pa
            if c:
                row = result[l]
                for j in range(col, ncols):
                    if piv[j]:
                        row[j] = (row[j] - c * piv[j]) % q
    return result


def reduce_vector(R: ZmodRing, H: list[list[int]], v: list[int]) -> list[int]:
    """Residue of v modulo the row span given in Howell form H."""
    q, p = R.q, R.p
    v = [x % q for x in v]
    for row in H:
        col = next(j for j, x in enumerate(row) if x)
        if v[col]:
            pa = p ** R.val(row[col])
            if v[col] % pa == 0:
                c = v[col] // pa
                for j in range(col, len(v)):
                    if row[j]:
                        v[j] = (v[j] - c * row[j]) % q
    return v


def member(R: ZmodRing, H: list[list[int]], v: list[int]) -> bool:
    return not any(reduce_vector(R, H, v))


def span_equal(R: ZmodRing, A: list[list[int]], B: list[list[int]], ncols: int) -> bool:
    return howell(R, A, ncols) == howell(R, B, ncols)


def kernel(R: ZmodRing, A: list[list[int]]) -> list[list[int]]:
    """Generators of {x : x @ A = 0} for A with len(A) rows."""
    m = len(A)
    if m == 0:
        return []
    n = len(A[0])
    aug = [list(A[i]) + [1 if j == i else 0 for j in range(m)] for i in range(m)]
    H = howell(R, aug, n + m)
    return [h[n:] for h in H if not any(h[:n])]


def solve(R: ZmodRing, A: list[list[int]], b: list[int]) -> list[int] | None:
    """One solution x of x @ A = b, or None if b is not in the row span."""
    m = len(A)
    n = len(b)
    if m == 0:
        return [] if not any(x % R.q for x in b) else None
    aug = [list(A[i]) + [1 if j == i else 0 for j in range(m)] for i in range(m)]
    H = howell(R, aug, n + m)
    w = reduce_vector(R, H, list(b) + [0] * m)
    if any(w[:n]):
        return None
    return [(-t) % R.q for t in w[n:]]


def preimage(R: ZmodRing, A: list[list[int]], B: list[list[int]]) -> list[list[int]]:
    """Generators of {x : x @ A in rowspan(B)}."""
    m = len(A)
    if m == 0:
        return []
    n = len(A[0])
    aug = [list(A[i]) + [1 if j == i else 0 for j in range(m)] for i in range(m)]
    aug += [list(brow) + [0] * m for brow in B]
    H = howell(R, aug, n + m)
    return [h[n:] for h in H if not any(h[:n])]


def intersect(R: ZmodRing, A: list[list[int]], B: list[list[int]], ncols: int) -> list[list[int]]:
    """Generators of rowspan(A) & rowspan(B)."""
    aug = [list(r) + list(r) for r in A]
    aug += [list(r) + [0] * ncols for r in B]
    H = howell(R, aug, 2 * ncols)
    return [h[ncols:] for h in H if not any(h[:ncols])]


def span_order(R: ZmodRing, rows: list[list[int]], ncols: int) -> int:
    """Number of elements of the row span."""
    H = howell(R, rows, ncols)
    order = 1
    for row in H:
        col = next(j for j, x in enumerate(row) if x)
        order *= R.p ** (R.N - R.val(row[col]))
    return order


def quotient_divisor_exponents(R: ZmodRing, rows: list[list[int]], ncols: int) -> list[int]:
    """Exponents a_i with (Z/p^N)^ncols / rowspan ~= (+) Z/p^{a_i}.

    Local Smith form: repeatedly pull an entry of minimal valuation into
    pivot position and clear its row and column.  Generators that never
    meet a pivot contribute a_i = N.
    """
    p, q, N = R.p, R.q, R.N
    M = [[x % q for x in r] for r in rows]
    m, n = len(M), ncols
    exponents = []
    r0 = c0 = 0
    while r0 < m and c0 < n:
        best = None
        for i in range(r0, m):
            for j in range(c0, n):
                if M[i][j]:
                    v = R.val(M[i][j])
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        a, i, j = best
        M[r0], M[i] = M[i], M[r0]
        for row in M:
            row[c0], row[j] = row[j], row[c0]
        pa = p**a
        uinv = R.inv_unit(M[r0][c0] // pa)
        M[r0] = [(x * uinv) % q for x in M[r0]]
        for i in range(r0 + 1, m):
            if M[i][c0]:
                c = M[i][c0] // pa
                for j2 in range(c0, n):
                    M[i][j2] = (M[i][j2] - c * M[r0][j2]) % q
        for j2 in range(c0 + 1, n):
            if M[r0][j2]:
                c = M[r0][j2] // pa
                for i in range(r0, m):
                    M[i][j2] = (M[i][j2] - c * M[i][c0]) % q
        exponents.append(a)
        r0 += 1
        c0 += 1
    exponents += [N] * (n - len(exponents))
    return exponents
