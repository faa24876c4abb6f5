"""Shared fixture generators: random complexes and filtrations over Z/p^N."""

from drwitt.exactcore import (
    FinComplex,
    FinModPresentation,
    ZmodRing,
    kernel,
    mat_mul,
    normal_form,
    solve,
)
from drwitt.filtspec import FilteredComplex


def random_complex(rng, ring: ZmodRing, length=3, max_rank=3) -> FinComplex:
    """A random cochain complex of free modules with d o d = 0.

    Differentials are built degree by degree: each new one has columns
    drawn from the right kernel of the previous one.
    """
    q = ring.q
    ranks = [rng.randint(0, max_rank) for _ in range(length + 1)]
    if not any(ranks):
        ranks[0] = 1
    mods = {m: FinModPresentation.free(ring, k) for m, k in enumerate(ranks)}
    diffs = {}
    prev = None
    for m in range(length):
        k1, k2 = ranks[m], ranks[m + 1]
        if k1 == 0 or k2 == 0:
            prev = None
            continue
        if prev is None:
            D = [[rng.randrange(q) for _ in range(k2)] for _ in range(k1)]
        else:
            # columns from the right kernel of prev: prev . D = 0
            transpose = [[prev[a][b] for a in range(len(prev))] for b in range(k1)]
            rk = kernel(ring, transpose)  # rows v with v . prev^T = 0, i.e. prev . v^T = 0
            D = [[0] * k2 for _ in range(k1)]
            for j in range(k2):
                col = [0] * k1
                for krow in rk:
                    c = rng.randrange(q)
                    col = [(x + c * y) % q for x, y in zip(col, krow)]
                for a in range(k1):
                    D[a][j] = col[a]
        diffs[m] = D
        prev = D
    return FinComplex(ring, mods, diffs, check=True)


def _close_under_d(ring, C: FinComplex, picked):
    """Smallest degreewise submodule containing picked and stable under d."""
    spans = {m: list(rows) for m, rows in picked.items()}
    changed = True
    while changed:
        changed = False
        for m in sorted(C.degrees()):
            rows = spans.get(m, [])
            tgt = C.module(m + 1)
            if not rows or not tgt.ngens:
                continue
            img = mat_mul(ring, rows, C.diff(m))
            cur = spans.setdefault(m + 1, [])
            before = normal_form(ring, cur, tgt.ngens)
            after = normal_form(ring, cur + img, tgt.ngens)
            if before != after:
                spans[m + 1] = after
                changed = True
    return {m: normal_form(ring, rows, C.module(m).ngens) for m, rows in spans.items() if rows}


def random_filtered_complex(rng, ring: ZmodRing, window=2, length=3, max_rank=3):
    """A random filtration by subcomplexes of a random ambient complex.

    Returns a FilteredComplex on [0, window] whose level complexes are
    abstract presentations of genuine subcomplexes, so transitions are
    injective and the brute-force homology-filtration oracle applies.
    """
    C = random_complex(rng, ring, length, max_rank)
    q = ring.q
    chains = []
    current = {}
    # build ascending spans from the deepest level down to the full complex
    for _ in range(window):
        picked = {}
        for m in C.degrees():
            k = C.module(m).ngens
            if k and rng.random() < 0.8:
                picked.setdefault(m, []).append([rng.randrange(q) for _ in range(k)])
        for m, rows in current.items():
            picked.setdefault(m, []).extend(rows)
        current = _close_under_d(ring, C, picked)
        chains.append(current)
    # chains[0] is the deepest (smallest) span; F^{>= n} uses chains[window - n]
    levels = {}
    gens = {}
    for n in range(window + 1):
        if n == 0:
            levels[0] = C
            gens[0] = {m: [[1 if a == b else 0 for b in range(C.module(m).ngens)] for a in range(C.module(m).ngens)] for m in C.degrees()}
            continue
        spans = chains[window - n]
        mods, diffs = {}, {}
        g = {}
        for m in C.degrees():
            rows = spans.get(m, [])
            g[m] = rows
            rels = kernel(ring, rows) if rows else []
            mods[m] = FinModPresentation(ring, len(rows), rels)
        for m in C.degrees():
            rows = g.get(m, [])
            nxt = g.get(m + 1, [])
            if not rows:
                continue
            D = []
            for row in rows:
                img = [sum(c * C.diff(m)[a][b] for a, c in enumerate(row)) % q for b in range(C.module(m + 1).ngens)] if C.module(m + 1).ngens else []
                if not nxt:
                    D.append([])
                    continue
                sol = solve(ring, nxt, img)
                assert sol is not None, "closure failed"
                D.append(sol)
            diffs[m] = D
        levels[n] = FinComplex(ring, mods, diffs, check=False)
        gens[n] = g
    maps = {}
    for n in range(window):
        f = {}
        for m in C.degrees():
            src_rows = gens[n + 1].get(m, [])
            tgt_rows = gens[n].get(m, [])
            if not src_rows:
                continue
            mat = []
            for row in src_rows:
                if n == 0:
                    mat.append(list(row))
                else:
                    sol = solve(ring, tgt_rows, row) if tgt_rows else None
                    assert sol is not None, "chain not nested"
                    mat.append(sol)
            f[m] = mat
        maps[n] = f
    return FilteredComplex(ring, 0, window, levels, maps, check=True)
