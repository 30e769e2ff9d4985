"""Finitely presented groups: Tietze simplification, abelian invariants and
Todd-Coxeter coset enumeration.

Generators are ``0..ngens-1``; a relator is a sequence of nonzero ints,
``g+1`` for a generator and ``-(g+1)`` for its inverse.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

Relator = tuple[int, ...]


@dataclass
class Presentation:
    ngens: int
    relators: list[Relator] = field(default_factory=list)


class EnumerationLimit(Exception):
    pass


def free_reduce(w: Sequence[int]) -> list[int]:
    out: list[int] = []
    for a in w:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return out


def cyclic_reduce(w: Sequence[int]) -> list[int]:
    w = free_reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def _invert(w: Sequence[int]) -> list[int]:
    return [-a for a in reversed(w)]


def simplify(p: Presentation) -> Presentation:
    """Eliminate generators that occur exactly once in some relator.

    Each elimination is a Tietze move, so the group is unchanged.
    """
    rels = [cyclic_reduce(r) for r in p.relators]
    rels = [r for r in rels if r]
    alive = set(range(1, p.ngens + 1))
    changed = True
    while changed:
        changed = False
        for idx, r in enumerate(rels):
            counts: dict[int, int] = {}
            for a in r:
                counts[abs(a)] = counts.get(abs(a), 0) + 1
            single = [g for g, k in counts.items() if k == 1]
            if not single:
                continue
            g = min(single, key=lambda s: (len(r), s))
            pos = next(i for i, a in enumerate(r) if abs(a) == g)
            # r = A g^e B  =>  g^e = A^-1 B^-1, so g = (B A)^-e
            rot = r[pos + 1 :] + r[:pos]
            value = _invert(rot) if r[pos] > 0 else rot
            inv_value = _invert(value)
            new_rels = []
            for k, s in enumerate(rels):
                if k == idx:
                    continue
                t: list[int] = []
                for a in s:
                    if a == g:
                        t.extend(value)
                    elif a == -g:
                        t.extend(inv_value)
                    else:
                        t.append(a)
                t = cyclic_reduce(t)
                if t:
                    new_rels.append(t)
            rels = new_rels
            alive.discard(g)
            changed = True
            break
    # renumber survivors densely
    order = sorted(alive)
    remap = {g: i + 1 for i, g in enumerate(order)}
    out = [tuple(remap[abs(a)] * (1 if a > 0 else -1) for a in r) for r in rels]
    return Presentation(len(order), sorted(set(out), key=lambda r: (len(r), r)))


def abelian_invariants(p: Presentation) -> list[int]:
    """Invariant factors of the abelianisation; 0 marks a free Z summand.

    Factors equal to 1 are dropped, so the group is trivial iff the list is empty.
    """
    n = p.ngens
    m = []
    for r in p.relators:
        row = [0] * n
        for a in r:
            row[abs(a) - 1] += 1 if a > 0 else -1
        if any(row):
            m.append(row)
    diag = _smith_diagonal(m, n)
    return [d for d in diag if d != 1]


def _smith_diagonal(m: list[list[int]], ncols: int) -> list[int]:
    rows = [r[:] for r in m]
    diag: list[int] = []
    cols = list(range(ncols))
    while cols:
        entries = [(abs(r[c]), i, c) for i, r in enumerate(rows) for c in cols if r[c]]
        if not entries:
            diag.extend(0 for _ in cols)
            break
        _, pi, pc = min(entries)
        while True:
            piv = rows[pi][pc]
            done = True
            for i, r in enumerate(rows):
                if i != pi and r[pc]:
                    q = r[pc] // piv
                    for c in cols:
                        r[c] -= q * rows[pi][c]
                    if r[pc]:
                        done = False
            for c in cols:
                if c != pc and rows[pi][c]:
                    q = rows[pi][c] // piv
                    for r in rows:
                        r[c] -= q * r[pc]
                    if rows[pi][c]:
                        done = False
            if done:
                break
            entries = [(abs(r[c]), i, c) for i, r in enumerate(rows) for c in cols if r[c]]
            _, pi, pc = min(entries)
        diag.append(abs(rows[pi][pc]))
        rows.pop(pi)
        cols.remove(pc)
        rows = [r for r in rows if any(r[c] for c in cols)]
    # normalise to a divisibility chain; zeros are free summands
    nonzero = [v for v in diag if v]
    for i in range(len(nonzero)):
        for j in range(i + 1, len(nonzero)):
            a, b = nonzero[i], nonzero[j]
            g = gcd(a, b)
            nonzero[i], nonzero[j] = g, a * b // g
    return sorted(nonzero) + [0] * (len(diag) - len(nonzero))


def coset_enumeration(p: Presentation, subgroup: Sequence[Relator] = (), limit: int = 100_000) -> int:
    """Index of the subgroup generated by ``subgroup`` (HLT strategy).

    Raises EnumerationLimit when more than ``limit`` cosets are defined.
    """
    ng = p.ngens
    if ng == 0:
        return 1
    ncols = 2 * ng

    def col(a: int) -> int:
        return 2 * (a - 1) if a > 0 else 2 * (-a - 1) + 1

    inv_col = [c ^ 1 for c in range(ncols)]
    rels = [[col(a) for a in r] for r in p.relators]
    subs = [[col(a) for a in cyclic_reduce(s)] for s in subgroup]
    table: list[list[int]] = [[-1] * ncols]
    forward = [0]  # union-find style live pointer
    live = [True]

    def rep(c: int) -> int:
        while forward[c] != c:
            forward[c] = forward[forward[c]]
            c = forward[c]
        return c

    def new_coset(c: int, x: int) -> int:
        if len(table) >= limit:
            raise EnumerationLimit(f"more than {limit} cosets")
        d = len(table)
        table.append([-1] * ncols)
        forward.append(d)
        live.append(True)
        table[c][x] = d
        table[d][inv_col[x]] = c
        return d

    def merge(a: int, b: int, dead: list[int]) -> None:
        a, b = rep(a), rep(b)
        if a == b:
            return
        if b < a:
            a, b = b, a
        forward[b] = a
        live[b] = False
        dead.append(b)

    def coincidence(a: int, b: int) -> None:
        dead: list[int] = []
        merge(a, b, dead)
        i = 0
        while i < len(dead):
            g = dead[i]
            i += 1
            for x in range(ncols):
                d = table[g][x]
                if d < 0:
                    continue
                ix = inv_col[x]
                table[d][ix] = -1
                mu, nu = rep(g), rep(d)
                if table[mu][x] >= 0:
                    merge(nu, table[mu][x], dead)
                elif table[nu][ix] >= 0:
                    merge(mu, table[nu][ix], dead)
                else:
                    table[mu][x] = nu
                    table[nu][ix] = mu

    def lookup(c: int, x: int) -> int:
        t = table[c][x]
        return -1 if t < 0 else rep(t)

    def scan_and_fill(c: int, word: list[int]) -> None:
        n = len(word)
        while True:
            c = rep(c)
            f, i = c, 0
            b, j = c, n - 1
            while i <= j:
                nf = lookup(f, word[i])
                if nf < 0:
                    break
                f, i = nf, i + 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i:
                nb = lookup(b, inv_col[word[j]])
                if nb < 0:
                    break
                b, j = nb, j - 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                table[f][word[i]] = b
                table[b][inv_col[word[i]]] = f
                return
            new_coset(f, word[i])

    for s in subs:
        if s:
            scan_and_fill(0, s)
    c = 0
    while c < len(table):
        if live[c]:
            for r in rels:
                if not live[c]:
                    break
                scan_and_fill(c, r)
            if live[c]:
                for x in range(ncols):
                    if table[c][x] < 0:
                        new_coset(c, x)
        c += 1
    return sum(live)


def is_trivial(p: Presentation, limit: int = 100_000) -> bool | None:
    """True/False when decided, None when the enumeration hit ``limit``."""
    q = simplify(p)
    if q.ngens == 0:
        return True
    if abelian_invariants(q):
        return False
    try:
        return coset_enumeration(q, limit=limit) == 1
    except EnumerationLimit:
        return None
