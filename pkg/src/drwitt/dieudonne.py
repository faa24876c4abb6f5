"""De Rham-Witt complexes via saturation of lifted de Rham complexes.

The pipeline, per curated ring S of characteristic p:

1. `lift_with_frobenius` builds the de Rham complex M of the standard
   p-torsion-free lift (monomial Z_p-span; the unramified extension for
   finite fields), with the Frobenius F acting as phi/p^n in degree n,
   where phi is the multiplicative lift x -> x^p.  Then dF = pFd.

2. `eta_p` is the decalage subcomplex
       (eta_p M)^n = {x in p^n M^n : dx in p^(n+1) M^(n+1)},
   and saturation is the colimit along x |-> p^n F x.  Rescaling degree n
   by p^n turns the s-th stage into the sublattice
       E_s^n = {x in M^n : dx in p^s M^(n+1)}
   with differential d/p^s and transition maps given by F itself, so the
   whole saturation is finite lattice arithmetic.  The weight-u piece of
   the saturated complex is the stabilized E_s piece at source weight
   u p^s; fractional weights (denominator up to the configured cap) are
   exactly the Verschiebung-type generators.

3. `strict_truncate` forms W_r = W/(V^r W + d V^r W) with the induced
   F, V, d and restriction maps; V is F^{-1} composed with p, which is
   well defined by the saturation criterion and solved exactly.

Stabilization of the E_s chain per weight is certified empirically (one
transition step past the working stage must be an isomorphism); it is a
checked hypothesis of the model, not a proved bound.

All lattices live at finite precision p^B with B comfortably above the
reported precision; maps between lattice coordinate systems are exact
modulo the reported modulus, and every division by p is checked.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .errors import InexactDivision, PrecisionExhausted, UnsupportedKind
from .exactcore import (
    InvariantFactors,
    SubQuot,
    Zq,
    ZmodRing,
    howell,
    mat_mul,
    member,
    normal_form,
    preimage,
    solve,
)
from .rings import MonomialAlgebra, RingSpec, wkey

DEFAULT_GUARD = 2


def precision_guard():
    env = os.environ.get("DRWITT_PRECISION_GUARD")
    return int(env) if env else DEFAULT_GUARD


def internal_precision(r: int, i_max: int) -> int:
    """Working precision exponent: level + top twist + guard band."""
    return r + i_max + precision_guard()


def _sign_insert(j, J):
    if j in J:
        return None, None
    before = sum(1 for l in J if l < j)
    return (-1) ** before, tuple(sorted(J + (j,)))


# ---------------------------------------------------------------------------
# the lifted de Rham complex

class LiftComplex:
    """De Rham complex of the standard lift, weight graded, mod p^B.

    Exponents are integers in y-units where y_j = x_j^(1/den); den > 1
    realizes the stage-m approximants used for perfections.  Coefficients
    are Z/p^B for f = 1 and the unramified lift Z_q for f > 1, so a
    坐标 slot is (monomial form, coefficient digit).
    """

    def __init__(self, spec: RingSpec, B: int, den: int = 1):
        if spec.kind == "quotient":
            raise UnsupportedKind("no torsion-free monomial lift for quotient kinds")
        self.spec = spec
        self.p = spec.p
        self.B = B
        self.q = spec.p**B
        self.den = den
        self.f = spec.f
        self.ring = ZmodRing(spec.p, B)
        self.W = Zq(spec.p, spec.f, B) if spec.f > 1 else None
        kind = spec.effective_kind
        self.nvars = spec.nvars if kind != "finite_field" else 0
        self.top = self.nvars
        self.var_weights = tuple(Fraction(w, den) for w in spec.weights)

    def frobenius_coeff_matrix(self):
        if self.f == 1:
            return [[1]]
        return [list(row) for row in self.W._frob_matrix]

    def frobenius_inverse_coeff_matrix(self):
        if self.f == 1:
            return [[1]]
        # sigma^{-1} = sigma^{f-1}
        M = self.frobenius_coeff_matrix()
        out = M
        for _ in range(self.f - 2):
            out = mat_mul(self.ring, out, M)
        return out

    @lru_cache(maxsize=None)
    def forms(self, n, w):
        """Monomial n-forms of weight w (a Fraction key via wkey)."""
        w = Fraction(w)
        if self.nvars == 0:
            return [((), ())] if (n == 0 and w == 0) else []
        if n > self.top or n < 0:
            return []
        spec = self.spec
        out = []
        laurent = spec.is_laurent
        for J in combinations(range(self.nvars), n):
            wJ = sum(self.var_weights[j] for j in J)
            target = w - wJ
            scaled = target * self.den
            if laurent:
                ratio = scaled / spec.weights[0]
                if ratio.denominator == 1:
                    out.append(((int(ratio),), J))
                continue
            if scaled.denominator != 1 or scaled < 0:
                continue
            monos = []
            self._knapsack(list(spec.weights), int(scaled), [], monos)
            for m in sorted(monos):
                out.append((m, J))
        return out

    @staticmethod
    def _knapsack(weights, target, acc, out):
        if not weights:
            if target == 0:
                out.append(tuple(acc))
            return
        e = 0
        while e * weights[0] <= target:
            LiftComplex._knapsack(weights[1:], target - e * weights[0], acc + [e], out)
            e += 1

    def rank(self, n, w):
        return len(self.forms(n, wkey(Fraction(w)))) * self.f

    def _coords(self, n, w):
        return {form: k for k, form in enumerate(self.forms(n, wkey(Fraction(w))))}

    @lru_cache(maxsize=None)
    def d_matrix(self, n, w):
        """d: (n, w) -> (n+1, w); slots are form x coefficient-digit."""
        w = Fraction(w)
        src = self.forms(n, wkey(w))
        tgt = self._coords(n + 1, w)
        ncols = len(tgt) * self.f
        rows = []
        for m, J in src:
            base = [0] * len(tgt)
            for j in range(self.nvars):
                e = m[j]
                if e == 0:
                    continue
                sign, newJ = _sign_insert(j, J)
                if sign is None:
                    continue
                shifted = tuple(a - (1 if l == j else 0) for l, a in enumerate(m))
                k = tgt[(shifted, newJ)]
                base[k] = (base[k] + sign * e) % self.q
            for digit in range(self.f):
                row = [0] * ncols
                for k, c in enumerate(base):
                    if c:
                        row[k * self.f + digit] = c
                rows.append(row)
        return rows

    @lru_cache(maxsize=None)
    def f_matrix(self, n, w):
        """F = phi/p^n: (n, w) -> (n, p*w); monomial part has coefficient 1."""
        w = Fraction(w)
        src = self.forms(n, wkey(w))
        tgt = self._coords(n, p_times(w, self.p))
        ncols = len(tgt) * self.f
        sigma = self.frobenius_coeff_matrix()
        rows = []
        for m, J in src:
            # phi(y^a) = y^{pa} and F(dy) = y^{p-1} dy in the y-unit exponents
            timg = tuple(
                self.p * a + (self.p - 1 if j in J else 0) for j, a in enumerate(m)
            )
            k = tgt[(timg, J)]
            for digit in range(self.f):
                row = [0] * ncols
                for digit2 in range(self.f):
                    c = sigma[digit][digit2] if self.f > 1 else 1
                    if c:
                        row[k * self.f + digit2] = c % self.q
                rows.append(row)
        return rows

    def check_dieudonne_relations(self, weights):
        """dF = pFd on generators, spot check for the given weights."""
        for n in range(0, self.top):
            for w in weights:
                src = self.rank(n, wkey(Fraction(w)))
                tgt = self.rank(n + 1, wkey(Fraction(w) * self.p))
                A = mat_mul(self.ring, self.f_matrix(n, wkey(Fraction(w))), self.d_matrix(n, wkey(Fraction(w) * self.p)))
                B = mat_mul(self.ring, self.d_matrix(n, wkey(Fraction(w))), self.f_matrix(n + 1, wkey(Fraction(w))))
                pB = [[(self.p * x) % self.q for x in row] for row in B]

                def pad(M):
                    # empty intermediate spaces collapse products to zero
                    # width; both paths are maps into the (n+1, p w) forms
                    return [list(row) + [0] * (tgt - len(row)) for row in M] or [
                        [0] * tgt for _ in range(src)
                    ]

                if pad(A) != pad(pB):
                    raise AssertionError("dF != pFd on the lift")


def p_times(w, p):
    return wkey(Fraction(w) * p)


def p_div(w, p):
    return wkey(Fraction(w) / p)


def lift_with_frobenius(spec: RingSpec, B: int, stage: int = 0) -> LiftComplex:
    """The lifted de Rham complex; `stage` gives perfection approximants."""
    if spec.kind == "perfection":
        base = RingSpec(
            p=spec.p,
            kind=spec.base_kind,
            variables=spec.variables,
            weights=spec.weights,
            f=spec.f,
        )
        return LiftComplex(base, B, den=spec.p**stage)
    if stage:
        return LiftComplex(spec, B, den=spec.p**stage)
    return LiftComplex(spec, B)


# ---------------------------------------------------------------------------
# eta_p (decalage), unrescaled form

def eta_p_lattice(lift: LiftComplex, n: int, w) -> list[list[int]]:
    """Basis of (eta_p M)^n at weight w: {x in p^n M^n : dx in p^(n+1) M^(n+1)}.

    Rows are ambient coordinates mod p^B.  Raises PrecisionExhausted when
    the divisibility conditions eat too far into the working modulus.
    """
    if n + 1 >= lift.B:
        raise PrecisionExhausted("eta_p needs precision above the degree")
    ring = lift.ring
    k = lift.rank(n, w)
    if k == 0:
        return []
    D = lift.d_matrix(n, wkey(Fraction(w)))
    kt = lift.rank(n + 1, w)
    pn = lift.p**n
    if kt == 0:
        rows = [[pn if i == j else 0 for j in range(k)] for i in range(k)]
        return howell(ring, rows, k)
    # x with dx divisible by p^(n+1), then scaled into p^n M
    cond = preimage(ring, D, _scaled_identity(ring, kt, lift.p ** (n + 1)))
    rows = [[(pn * x) % ring.q for x in row] for row in cond]
    return howell(ring, rows, k)


def _scaled_identity(ring, k, c):
    return [[c % ring.q if i == j else 0 for j in range(k)] for i in range(k)]


def eta_p_differential(lift: LiftComplex, n: int, w, basis, next_basis):
    """The restricted differential of eta_p: basis rows mapped into the
    degree-(n+1) sublattice, expressed in its coordinates."""
    ring = lift.ring
    if not basis:
        return []
    D = lift.d_matrix(n, wkey(Fraction(w)))
    out = []
    for row in basis:
        img = [0] * (len(D[0]) if D else 0)
        for c, drow in zip(row, D):
            if c:
                for j, x in enumerate(drow):
                    if x:
                        img[j] = (img[j] + c * x) % ring.q
        if not next_basis:
            if any(img):
                raise PrecisionExhausted("eta_p differential leaves the sublattice")
            out.append([])
            continue
        coords = solve(ring, next_basis, img)
        if coords is None:
            raise PrecisionExhausted("eta_p differential leaves the sublattice")
        out.append(coords)
    return out


# ---------------------------------------------------------------------------
# saturation

class SaturatedModel:
    """The saturated de Rham-Witt complex of a curated ring, per weight.

    Weight-u components (denominator up to p^s_star) are lattices with
    exact matrices for d, F and V; everything is computed lazily per
    weight and certified to have stabilized one eta_p stage beyond the
    working stage.
    """

    def __init__(self, spec: RingSpec, r_level: int, i_max: int, R: int | None = None):
        if spec.kind != "perfection" and spec.nvars > 1:
            # weight components of the saturation colimit have unbounded rank
            # once there are two variables (V-images need ever deeper eta_p
            # stages), so the single-stage lattice model cannot represent
            # them; a level-aware stage-per-depth model is the follow-up
            raise UnsupportedKind(
                "the saturation model covers one-variable poly/laurent kinds, "
                "finite fields and their perfections"
            )
        self.spec = spec
        self.p = spec.p
        self.is_perfection = spec.kind == "perfection"
        self.s_star = r_level + 1
        self.R = R if R is not None else internal_precision(r_level, i_max)
        self.B = self.R + 2 * self.s_star + 2
        self.ring = ZmodRing(self.p, self.R)
        self._amb = ZmodRing(self.p, self.B)
        self.lift = lift_with_frobenius(
            RingSpec(
                p=spec.p,
                kind=spec.effective_kind,
                variables=spec.variables,
                weights=spec.weights,
                f=spec.f,
            ),
            self.B,
        )
        self.f = spec.f
        self.top = 0 if self.is_perfection else self.lift.top

    # -- lattice bases -------------------------------------------------------

    def den_ok(self, u) -> bool:
        return Fraction(u).denominator <= self.p**self.s_star

    def _stage_lattice(self, n, u, s):
        """E_s basis at source weight u p^s, in ambient lift coordinates."""
        w = wkey(Fraction(u) * self.p**s)
        if Fraction(w).denominator != 1 and self.lift.den == 1:
            return None, w  # not representable at this stage
        k = self.lift.rank(n, w)
        if k == 0:
            return [], w
        kt = self.lift.rank(n + 1, w)
        if kt == 0:
            return _scaled_identity(self._amb, k, 1), w
        D = self.lift.d_matrix(n, w)
        rows = preimage(self._amb, D, _scaled_identity(self._amb, kt, self.p**s))
        return howell(self._amb, rows, k), w

    @lru_cache(maxsize=None)
    def lattice(self, n, u):
        """Howell basis of the weight-u degree-n component (ambient coords)."""
        u = wkey(Fraction(u))
        if self.is_perfection:
            if n != 0 or not self.den_ok(u):
                return []
            # rank-f free lattice on the Teichmuller monomials of weight u
            count = len(self._perf_monomials(u))
            return _scaled_identity(self._amb, count * self.f, 1) if count else []
        if not self.den_ok(u):
            return []
        basis, _ = self._stage_lattice(n, u, self.s_star)
        if basis is None:
            return []
        if basis:
            self._certify(n, u)
        return basis

    @lru_cache(maxsize=None)
    def _perf_monomials(self, u):
        alg = MonomialAlgebra(
            RingSpec(
                p=self.p,
                kind=self.spec.effective_kind,
                variables=self.spec.variables,
                weights=self.spec.weights,
                f=self.f,
            ),
            den=self.p**self.s_star,
        )
        scaled = [
            tuple(wkey(Fraction(e, self.p**self.s_star)) for e in m)
            for m in alg.monomials(Fraction(u) * self.p**self.s_star, raw=True)
        ]
        return scaled

    @lru_cache(maxsize=None)
    def _certify(self, n, u):
        """Stabilization certificate: F is iso one stage beyond s_star."""
        cur, w_cur = self._stage_lattice(n, u, self.s_star)
        nxt, _ = self._stage_lattice(n, u, self.s_star + 1)
        if cur is None or nxt is None:
            raise PrecisionExhausted("stage weights not representable")
        F = self.lift.f_matrix(n, w_cur)
        img = mat_mul(self._amb, cur, F) if cur else []
        if len(cur) != len(nxt):
            raise PrecisionExhausted(
                f"saturation not stabilized at degree {n} weight {u}: "
                f"ranks {len(cur)} -> {len(nxt)}"
            )
        coordM = self._express(img, nxt)
        if coordM is None:
            raise PrecisionExhausted("transition image escapes the next stage")
        # invertibility mod p of the square coordinate matrix
        if coordM:
            Fp = ZmodRing(self.p, 1)
            red = [[x % self.p for x in row] for row in coordM]
            H = howell(Fp, red, len(coordM))
            if len(H) != len(coordM) or any(Fp.val(H[i][i]) != 0 for i in range(len(H))):
                raise PrecisionExhausted(
                    f"saturation transition not bijective at degree {n} weight {u}"
                )
        return True

    def _express(self, rows, basis):
        """Coordinates of ambient rows in the given lattice basis."""
        out = []
        for row in rows:
            sol = solve(self._amb, basis, row) if basis else ([] if not any(row) else None)
            if sol is None:
                return None
            out.append([x % self.ring.q for x in sol])
        return out

    def rank(self, n, u):
        return len(self.lattice(n, u))

    # -- structure maps (matrices over Z/p^R in lattice coordinates) ---------

    @lru_cache(maxsize=None)
    def d(self, n, u):
        """d: (n, u) -> (n+1, u)."""
        u = wkey(Fraction(u))
        src = self.lattice(n, u)
        tgt = self.lattice(n + 1, u)
        if not src or not tgt:
            return [[0] * len(tgt) for _ in src]
        if self.is_perfection:
            return [[0] * len(tgt) for _ in src]
        w = wkey(Fraction(u) * self.p**self.s_star)
        D = self.lift.d_matrix(n, w)
        ps = self.p**self.s_star
        img = []
        for row in src:
            h = [0] * (len(D[0]) if D else 0)
            for c, drow in zip(row, D):
                if c:
                    for j, x in enumerate(drow):
                        if x:
                            h[j] = (h[j] + c * x) % self._amb.q
            div = []
            for x in h:
                if x % ps:
                    raise InexactDivision("saturated differential not divisible")
                div.append(x // ps)
            img.append(div)
        out = self._express(img, tgt)
        if out is None:
            raise PrecisionExhausted("d image escapes the target lattice")
        return out

    @lru_cache(maxsize=None)
    def frob(self, n, u):
        """F: (n, u) -> (n, p u)."""
        u = wkey(Fraction(u))
        src = self.lattice(n, u)
        tgt = self.lattice(n, p_times(u, self.p))
        if not src or not tgt:
            return [[0] * len(tgt) for _ in src]
        if self.is_perfection:
            sigma = self.lift.frobenius_coeff_matrix()
            return self._perf_blockmap(n, u, p_times(u, self.p), sigma, 1)
        w = wkey(Fraction(u) * self.p**self.s_star)
        F = self.lift.f_matrix(n, w)
        img = mat_mul(self._amb, src, F)
        out = self._express(img, tgt)
        if out is None:
            raise PrecisionExhausted("F image escapes the target lattice")
        return out

    @lru_cache(maxsize=None)
    def versch(self, n, u):
        """V = F^{-1} p: (n, u) -> (n, u/p); None when the denominator cap truncates."""
        u = wkey(Fraction(u))
        src = self.lattice(n, u)
        down = p_div(u, self.p)
        if not self.den_ok(down):
            return None
        tgt = self.lattice(n, down)
        if not src or not tgt:
            return [[0] * len(tgt) for _ in src]
        if self.is_perfection:
            sigma_inv = self.lift.frobenius_inverse_coeff_matrix()
            return self._perf_blockmap(n, u, down, sigma_inv, self.p)
        # solve F z = p y for each basis row y
        w_down = wkey(Fraction(down) * self.p**self.s_star)
        F = self.lift.f_matrix(n, w_down)
        out = []
        for row in src:
            py = [(self.p * x) % self._amb.q for x in row]
            # z in ambient coords at weight u p^{s*-1}: solve z . F = py
            z = solve(self._amb, F, py)
            if z is None:
                raise PrecisionExhausted("Verschiebung solve failed (not in F image)")
            if not member(self._amb, howell(self._amb, tgt, len(z)), z):
                raise PrecisionExhausted("Verschiebung image not in the lattice")
            coords = solve(self._amb, tgt, z)
            if coords is None:
                raise PrecisionExhausted("Verschiebung coordinates failed")
            out.append([x % self.ring.q for x in coords])
        return out

    def _perf_blockmap(self, n, u, target_u, coeff_matrix, scalar):
        """Monomial correspondence m -> m^(p or 1/p) tensored with a coeff map."""
        src_monos = self._perf_monomials(u)
        tgt_monos = self._perf_monomials(wkey(Fraction(target_u)))
        idx = {m: k for k, m in enumerate(tgt_monos)}
        factor = self.p if Fraction(target_u) == Fraction(u) * self.p else Fraction(1, self.p)
        rows = []
        for m in src_monos:
            timg = tuple(wkey(Fraction(e) * factor) for e in m)
            k = idx[timg]
            for digit in range(self.f):
                row = [0] * (len(tgt_monos) * self.f)
                for digit2 in range(self.f):
                    c = coeff_matrix[digit][digit2] if self.f > 1 else 1
                    row[k * self.f + digit2] = (scalar * c) % self.ring.q
                rows.append(row)
        return rows

    # -- Teichmuller / dlog helpers ------------------------------------------

    def teichmuller_vector(self, n_=0):
        """Coordinates of [1] in the weight-0 degree-0 lattice."""
        basis = self.lattice(0, 0)
        amb = self._one_ambient()
        coords = solve(self._amb, basis, amb)
        if coords is None:
            raise PrecisionExhausted("unit 1 not in the weight-0 lattice")
        return [x % self.ring.q for x in coords]

    def _one_ambient(self):
        if self.is_perfection:
            monos = self._perf_monomials(0)
            k = monos.index(tuple(0 for _ in range(self.spec.nvars)))
            vec = [0] * (len(monos) * self.f)
            vec[k * self.f] = 1
            return vec
        forms = self.lift.forms(0, 0)
        k = forms.index((tuple(0 for _ in range(self.lift.nvars)), ()))
        vec = [0] * (len(forms) * self.f)
        vec[k * self.f] = 1
        return vec

    def dlog_vector(self, var_index):
        """Coordinates of dlog x_j = x_j^{-1} dx_j in the (1, 0) lattice.

        Only exists for laurent kinds (where x_j is a unit); None when the
        degree-1 weight-0 component vanishes (perfections, poly kinds).
        """
        if self.is_perfection or not self.spec.is_laurent:
            return None
        basis = self.lattice(1, 0)
        if not basis:
            return None
        forms = self.lift.forms(1, 0)
        target = (tuple(-self.lift.den if j == var_index else 0 for j in range(self.lift.nvars)), (var_index,))
        k = forms.index(target)
        vec = [0] * (len(forms) * self.f)
        vec[k * self.f] = 1
        coords = solve(self._amb, basis, vec)
        if coords is None:
            return None
        return [x % self.ring.q for x in coords]


def saturate(spec: RingSpec, r_level: int, i_max: int, R: int | None = None) -> SaturatedModel:
    """Saturated de Rham-Witt model (perfections get the direct W(S) model)."""
    return SaturatedModel(spec, r_level, i_max, R)


# ---------------------------------------------------------------------------
# strict levels W_r = W/(V^r + d V^r)

class StrictLevel:
    """Level-r truncation with induced F, V, d, R maps."""

    def __init__(self, model: SaturatedModel, r: int):
        if model.s_star < r:
            raise PrecisionExhausted("model denominator cap below the requested level")
        self.model = model
        self.r = r
        self.p = model.p
        self.ring = model.ring

    def weights(self, weight_cap):
        cap = Fraction(weight_cap)
        den_max = self.p ** (self.r - 1)
        out = []
        lo = -cap if self.model.spec.is_laurent else Fraction(0)
        num = int(lo * den_max)
        while Fraction(num, den_max) <= cap:
            u = wkey(Fraction(num, den_max))
            if Fraction(u).denominator <= den_max:
                out.append(u)
            num += 1
        return out

    @lru_cache(maxsize=None)
    def _relations(self, n, u):
        """Generators of V^r W^n_u + d V^r W^(n-1)_u in lattice coordinates."""
        model, r, p = self.model, self.r, self.p
        u = wkey(Fraction(u))
        k = model.rank(n, u)
        rows = []

        def v_iterated(nn, start_u):
            """Matrix of V^r from (nn, start_u p^r) into (nn, start_u)."""
            cur_u = wkey(Fraction(start_u) * p**r)
            mat = None
            for _ in range(r):
                V = model.versch(nn, cur_u)
                if V is None:
                    raise PrecisionExhausted("V^r source weight escapes the denominator cap")
                mat = V if mat is None else mat_mul(self.ring, mat, V)
                cur_u = p_div(cur_u, p)
            return mat

        Vr = v_iterated(n, u)
        if Vr:
            rows += Vr
        if n >= 1:
            Vr1 = v_iterated(n - 1, u)
            if Vr1:
                D = model.d(n - 1, u)
                rows += mat_mul(self.ring, Vr1, D)
        # p^r times everything is V^r F^r, but include it explicitly so the
        # quotient is visibly killed by p^r at this precision
        rows += _scaled_identity(self.ring, k, p**r)
        return normal_form(self.ring, rows, k)

    def group(self, n, u) -> SubQuot:
        k = self.model.rank(n, u)
        z = _scaled_identity(self.ring, k, 1)
        return SubQuot(self.ring, k, z, self._relations(n, u))

    def invariants(self, n, u) -> InvariantFactors:
        return self.group(n, u).invariants()

    def d_map(self, n, u):
        return self.group(n, u).induced_map(self.group(n + 1, u), self.model.d(n, u))

    def frob_to_lower(self, other: "StrictLevel", n, u):
        """F: W_r(n, u) -> W_{r-1}(n, p u)."""
        return self.group(n, u).induced_map(other.group(n, p_times(u, self.p)), self.model.frob(n, u))

    def versch_to_higher(self, other: "StrictLevel", n, u):
        V = self.model.versch(n, u)
        if V is None:
            return None
        return self.group(n, u).induced_map(other.group(n, p_div(u, self.p)), V)

    def restriction_from(self, higher: "StrictLevel", n, u):
        """R: W_{r+1}(n, u) -> W_r(n, u), identity on coordinates."""
        k = self.model.rank(n, u)
        eye = _scaled_identity(self.ring, k, 1)
        return higher.group(n, u).induced_map(self.group(n, u), eye)


def strict_truncate(model: SaturatedModel, r: int) -> StrictLevel:
    return StrictLevel(model, r)


# ---------------------------------------------------------------------------
# mod-p^r comparison: W/p^r versus W_r, per weight

def mod_p_compatibility(spec: RingSpec, r: int, i_max: int, weight_cap) -> bool:
    """Cohomology of (saturated model)/p^r equals that of W_r, per weight."""
    from .exactcore import FinComplex, FinModPresentation, homology

    model = saturate(spec, r, i_max)
    level = strict_truncate(model, r)
    ring_r = ZmodRing(spec.p, r)
    for u in level.weights(weight_cap):
        ranks = [model.rank(n, u) for n in range(model.top + 2)]
        if not any(ranks):
            continue
        # mod p^r complex on the free lattices
        mods = {n: FinModPresentation.free(ring_r, ranks[n]) for n in range(model.top + 2)}
        diffs = {
            n: [[x % ring_r.q for x in row] for row in model.d(n, u)]
            for n in range(model.top + 1)
        }
        Cfree = FinComplex(ring_r, mods, diffs, check=False)
        # strict level complex of presented modules
        lmods = {}
        ldiffs = {}
        for n in range(model.top + 2):
            lmods[n] = level.group(n, u).presentation()
        for n in range(model.top + 1):
            m = level.d_map(n, u)
            if m is None:
                return False
            ldiffs[n] = m
        Clevel = FinComplex(model.ring, lmods, ldiffs, check=False)
        for n in range(model.top + 2):
            if homology(Cfree, n) != homology(Clevel, n):
                return False
    return True


# ---------------------------------------------------------------------------
# perfection consistency: bypass model versus honest stage saturation

def perfection_consistency_check(spec: RingSpec, r: int, weight_cap) -> bool:
    """Tiny-cap check that the direct W(S) model matches stage saturation.

    Stage-m approximants are genuinely saturated; their strict level r
    must agree with the direct model at weights of denominator <= p^m,
    and the r-fold composite of the tower transition maps must vanish on
    degree >= 1 (the colimit kills positive-degree forms).
    """
    if spec.kind != "perfection":
        raise UnsupportedKind("consistency check applies to perfection kinds")
    base = RingSpec(
        p=spec.p,
        kind=spec.base_kind,
        variables=spec.variables,
        weights=spec.weights,
        f=spec.f,
    )
    direct = saturate(spec, r, 1)
    dlevel = strict_truncate(direct, r)
    p = spec.p
    for m in (0, 1):
        if base.kind == "finite_field" and m > 0:
            break
        stage_spec = base
        smodel = SaturatedModel(stage_spec, r, 1)
        # stage-m lattice weights scale by 1/p^m relative to the base ring
        slevel = strict_truncate(smodel, r)
        for u in dlevel.weights(weight_cap):
            target_den = Fraction(u).denominator
            if target_den > p**m:
                continue
            scaled = wkey(Fraction(u) * p**m)
            got = slevel.invariants(0, scaled)
            want = dlevel.invariants(0, u)
            if got != want:
                return False
    # the tower transition stage m -> m+1 sends a degree-n form to p^n times
    # a relabelled monomial form (dx = p y^{p-1} dy for y = x^{1/p}); on the
    # base model the relabelling is the monomial part of F, so the r-fold
    # composite in degree >= 1 is p^r F^r and must vanish at level r
    if base.kind != "finite_field":
        smodel = SaturatedModel(base, r, 1)
        slevel = strict_truncate(smodel, r)
        for u in [w for w in slevel.weights(weight_cap) if Fraction(w) != 0][:4]:
            n = 1
            if not smodel.rank(n, u):
                continue
            mat = _scaled_identity(smodel.ring, smodel.rank(n, u), 1)
            cur = u
            for _ in range(r):
                step = [
                    [(p**n * x) % smodel.ring.q for x in row]
                    for row in smodel.frob(n, cur)
                ]
                mat = mat_mul(smodel.ring, mat, step)
                cur = p_times(cur, p)
            target = slevel.group(n, cur)
            for row in mat:
                coords = target.coords(row)
                if coords is None or not target.presentation().is_zero_element(coords):
                    return False
    return True
