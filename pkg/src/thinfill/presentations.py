"""Finitely presented groups: presentations, abelianization, coset enumeration.

Words are tuples of nonzero ints: +k is generator k-1, -k its inverse.
Coset enumeration is HLT-style Todd-Coxeter with a hard step budget; it
either closes (exact order) or reports nothing.  It never guesses
"infinite": a non-closing enumeration is undecidable from the outside, so
the caller only ever sees "inconclusive".
"""

from __future__ import annotations

from dataclasses import dataclass

from .chain import FGAbelianGroup, cokernel_invariants
from .intlinalg import IntMatrix


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple
    relators: tuple  # tuples of signed 1-based generator indices

    def __post_init__(self):
        ng = len(self.generators)
        for w in self.relators:
            for c in w:
                if c == 0 or abs(c) > ng:
                    raise ValueError(f"relator letter {c} out of range")

    def __str__(self):
        names = self.generators

        def show(w):
            if not w:
                return "1"
            return ".".join(names[abs(c) - 1] + ("'" if c < 0 else "") for c in w)

        return "< " + ", ".join(names) + " | " + ", ".join(show(w) for w in self.relators) + " >"


def abelianization(P: GroupPresentation) -> FGAbelianGroup:
    """Invariant factors of the abelianized group (exponent-sum matrix)."""
    ng = len(P.generators)
    cols = []
    for w in P.relators:
        col = [0] * ng
        for c in w:
            col[abs(c) - 1] += 1 if c > 0 else -1
        cols.append(col)
    return cokernel_invariants(ng, IntMatrix.from_columns(cols, ng))


@dataclass
class CosetTable:
    """Closed coset table on the trivial subgroup.

    Rows are cosets (0 is the subgroup itself), columns are the 2g letters
    (2i = generator i, 2i+1 = its inverse); entries give the right action.
    ``words`` holds, for each coset, a letter word carrying coset 0 there.
    """

    order: int
    table: list
    words: list

    def act_letter(self, coset: int, letter: int) -> int:
        return self.table[coset][letter]

    def act_word(self, coset: int, word) -> int:
        for letter in word:
            coset = self.table[coset][letter]
        return coset

    def act_signed(self, coset: int, signed_word) -> int:
        for c in signed_word:
            letter = 2 * (abs(c) - 1) + (0 if c > 0 else 1)
            coset = self.table[coset][letter]
        return coset


class _Budget(Exception):
    pass


def todd_coxeter(P: GroupPresentation, budget: int):
    """Enumerate cosets of the trivial subgroup; None when out of budget.

    The budget bounds elementary steps (coset definitions, relator scans and
    coincidence merges).  A returned table is always exact.
    """
    ng = len(P.generators)
    nl = 2 * ng
    rels = [tuple(2 * (abs(c) - 1) + (0 if c > 0 else 1) for c in w) for w in P.relators]

    table = [[-1] * nl] if nl else [[]]
    parent = [0]
    steps = 0

    def spend(k=1):
        nonlocal steps
        steps += k
        if steps > budget:
            raise _Budget

    def find(c):
        root = c
        while parent[root] != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    def define(c, x):
        spend()
        d = len(table)
        table.append([-1] * nl)
        parent.append(d)
        table[c][x] = d
        table[d][x ^ 1] = c
        return d

    merge_queue = []

    def merge(a, b):
        a, b = find(a), find(b)
        if a == b:
            return
        spend()
        a, b = (a, b) if a < b else (b, a)
        parent[b] = a
        merge_queue.append(b)

    def coincidence(a, b):
        merge(a, b)
        while merge_queue:
            gamma = merge_queue.pop()
            row = table[gamma]
            for x in range(nl):
                delta = row[x]
                if delta == -1:
                    continue
                table[delta][x ^ 1] = -1 if table[delta][x ^ 1] == gamma else table[delta][x ^ 1]
                mu, nu = find(gamma), find(delta)
                if table[mu][x] != -1:
                    merge(table[mu][x], nu)
                elif table[nu][x ^ 1] != -1:
                    merge(table[nu][x ^ 1], mu)
                else:
                    table[mu][x] = nu
                    table[nu][x ^ 1] = mu

    def scan_and_fill(alpha, word):
        spend()
        while True:
            f, i = alpha, 0
            while i < len(word) and table[f][word[i]] != -1:
                f = find(table[f][word[i]])
                i += 1
            if i == len(word):
                if f != alpha:
                    coincidence(f, alpha)
                return
            b, j = alpha, len(word) - 1
            while j >= i and table[b][word[j] ^ 1] != -1:
                b = find(table[b][word[j] ^ 1])
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if j == i:
                table[f][word[i]] = b
                table[b][word[i] ^ 1] = f
                return
            define(f, word[i])

    try:
        alpha = 0
        while alpha < len(table):
            if find(alpha) != alpha:
                alpha += 1
                continue
            for w in rels:
                scan_and_fill(alpha, w)
                if find(alpha) != alpha:
                    break
            if find(alpha) == alpha:
                for x in range(nl):
                    if table[alpha][x] == -1:
                        define(alpha, x)
            alpha += 1
    except _Budget:
        return None

    live = [c for c in range(len(table)) if find(c) == c]
    renum = {c: i for i, c in enumerate(live)}
    compressed = [[renum[find(table[c][x])] for x in range(nl)] for c in live]

    # canonical renumbering: breadth-first from coset 0 over letters in order
    order = len(live)
    bfs = {0: 0}
    queue = [0]
    words = {0: ()}
    while queue:
        c = queue.pop(0)
        for x in range(nl):
            d = compressed[c][x]
            if d not in bfs:
                bfs[d] = len(bfs)
                words[d] = words[c] + (x,)
                queue.append(d)
    if len(bfs) != order:
        # trivial-subgroup tables are transitive, so this cannot happen
        raise AssertionError("coset table not transitive")
    final = [[bfs[compressed[c][x]] for x in range(nl)]
             for c in sorted(bfs, key=lambda c: bfs[c])]
    final_words = [words[c] for c in sorted(bfs, key=lambda c: bfs[c])]
    return CosetTable(order=order, table=final, words=final_words)


def group_order_bounded(P: GroupPresentation, budget: int):
    """Exact order if coset enumeration closes within budget, else None.

    None means inconclusive, never "infinite".
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    result = todd_coxeter(P, budget)
    return None if result is None else result.order


def presentation_from_table(elements, mul, identity, names=None) -> GroupPresentation:
    """Presentation of a finite group from its multiplication table.

    Generators are the non-identity elements; each product x*y = z becomes
    the relator x y z^-1 (or x y when z is the identity).
    """
    elems = [e for e in elements if e != identity]
    idx = {e: i + 1 for i, e in enumerate(elems)}
    gens = tuple(names[e] if names else f"g{idx[e]}" for e in elems)
    relators = []
    for x in elems:
        for y in elems:
            z = mul(x, y)
            w = (idx[x], idx[y]) if z == identity else (idx[x], idx[y], -idx[z])
            relators.append(w)
    return GroupPresentation(gens, tuple(relators))
