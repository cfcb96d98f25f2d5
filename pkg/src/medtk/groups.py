"""Finitely presented groups: coset enumeration and the dihedral-witness test.

Words are tuples of non-zero signed 1-based generator indices.  All linear
algebra is exact (integers and Fractions); no floating point anywhere.

The central decision procedure is `fwn_virtually_abelian`: a finitely
generated virtually abelian group fixes a point in every action on a median
graph of cubical dimension n exactly when no subgroup of index <= n admits a
homomorphism onto an infinite subgroup of the infinite dihedral group
Z >< Z/2.  The witness search runs over sign characters sigma and solves the
cocycle condition lambda(gh) = lambda(g) + sigma(g) lambda(h) on relators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .topology import smith_normal_form

LOW_INDEX_CAP = 12
SIGMA_CAP = 4096


def free_reduce(word):
    out = []
    for s in word:
        if s == 0:
            raise ValueError("zero letter")
        if out and out[-1] == -s:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


def invert_word(word):
    return tuple(-s for s in reversed(word))


@dataclass(frozen=True)
class Presentation:
    generator_count: int
    relators: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "relators", tuple(free_reduce(r) for r in self.relators)
        )
        for r in self.relators:
            for s in r:
                if not (1 <= abs(s) <= self.generator_count):
                    raise ValueError(f"letter {s} out of range")

    def to_json(self):
        return {"generators": self.generator_count, "relators": [list(r) for r in self.relators]}

    @staticmethod
    def from_json(data):
        return Presentation(data["generators"], tuple(tuple(r) for r in data["relators"]))


class LimitExceeded(Exception):
    """Coset or search cap hit; explicitly inconclusive, not a proof."""


def _col(s):
    return 2 * (s - 1) if s > 0 else 2 * (-s - 1) + 1


def _inv_col(c):
    return c ^ 1


@dataclass(frozen=True)
class CosetTable:
    """Complete coset table: row 0 is the subgroup, columns alternate g, g^-1."""

    generator_count: int
    rows: tuple  # tuple of tuples, length 2 * generator_count each

    @property
    def coset_count(self):
        return len(self.rows)

    def apply(self, coset, s):
        return self.rows[coset][_col(s)]

    def trace(self, coset, word):
        for s in word:
            coset = self.apply(coset, s)
        return coset

    def is_closed_under(self, relators):
        return all(
            self.trace(c, r) == c for c in range(self.coset_count) for r in relators
        )

    def standardized(self, root=0):
        """Renumber cosets in BFS order from root, scanning columns in order."""
        order = [root]
        index = {root: 0}
        i = 0
        while i < len(order):
            c = order[i]
            for col in range(2 * self.generator_count):
                d = self.rows[c][col]
                if d not in index:
                    index[d] = len(order)
                    order.append(d)
            i += 1
        rows = tuple(
            tuple(index[self.rows[c][col]] for col in range(2 * self.generator_count))
            for c in order
        )
        return CosetTable(self.generator_count, rows)

    def conjugacy_key(self):
        """Canonical form up to rebasing: lexicographically least standardization."""
        return min(self.standardized(r).rows for r in range(self.coset_count))


def todd_coxeter(pres, subgroup_gens=(), coset_limit=10000):
    """HLT coset enumeration.  Returns a closed CosetTable or raises LimitExceeded.

    Hitting the limit is not evidence of infiniteness.
    """
    ngens = pres.generator_count
    ncols = 2 * ngens
    table = [[None] * ncols]
    parent = [0]
    coinc = []

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    def get(c, col):
        d = table[c][col]
        return None if d is None else find(d)

    def set_entry(c, col, d):
        table[c][col] = d
        table[d][_inv_col(col)] = c

    def new_coset(c, col):
        if len(table) >= coset_limit:
            raise LimitExceeded(f"coset limit {coset_limit} reached")
        table.append([None] * ncols)
        parent.append(len(table) - 1)
        d = len(table) - 1
        set_entry(c, col, d)
        return d

    def coincidence(a, b):
        coinc.append((a, b))
        while coinc:
            x, y = coinc.pop()
            x, y = find(x), find(y)
            if x == y:
                continue
            if x > y:
                x, y = y, x
            parent[y] = x
            for col in range(ncols):
                d = table[y][col]
                if d is None:
                    continue
                d = find(d)
                e = get(x, col)
                if e is None:
                    # d's reverse slot may point at another live coset; that
                    # forces a further coincidence rather than a silent overwrite
                    dinv = get(d, _inv_col(col))
                    set_entry(x, col, d)
                    if dinv is not None and dinv != x:
                        coinc.append((dinv, x))
                elif e != d:
                    coinc.append((e, d))

    def scan_and_fill(alpha, word):
        f = find(alpha)
        b = f
        i, r = 0, len(word) - 1
        while True:
            while i <= r:
                d = get(f, _col(word[i]))
                if d is None:
                    break
                f = d
                i += 1
            if i > r:
                if f != b:
                    coincidence(f, b)
                return
            while r >= i:
                d = get(b, _inv_col(_col(word[r])))
                if d is None:
                    break
                b = d
                r -= 1
            if r < i:
                coincidence(f, b)
                return
            if r == i:
                set_entry(f, _col(word[i]), b)
                return
            new_coset(f, _col(word[i]))

    for w in subgroup_gens:
        scan_and_fill(0, free_reduce(w))
    alpha = 0
    while alpha < len(table):
        if find(alpha) != alpha:
            alpha += 1
            continue
        for rel in pres.relators:
            if find(alpha) != alpha:
                break
            scan_and_fill(alpha, rel)
        if find(alpha) == alpha:
            for col in range(ncols):
                if find(alpha) != alpha:
                    break
                if get(alpha, col) is None:
                    new_coset(alpha, col)
        alpha += 1

    live = sorted(c for c in range(len(table)) if find(c) == c)
    index = {c: i for i, c in enumerate(live)}
    rows = tuple(
        tuple(index[find(table[c][col])] for col in range(ncols)) for c in live
    )
    out = CosetTable(ngens, rows)
    assert out.is_closed_under(pres.relators)
    return out.standardized()


def low_index_subgroups(pres, n, node_cap=2_000_000):
    """All subgroups of index <= n up to conjugacy, as standardized coset tables.

    Backtracking over partial tables with relator-deduction propagation;
    conjugacy classes deduplicated by canonical rebased form.
    """
    if n > LOW_INDEX_CAP:
        raise LimitExceeded(f"low-index search capped at index {LOW_INDEX_CAP}")
    ngens = pres.generator_count
    ncols = 2 * ngens
    results = {}
    nodes = 0

    def scan(table, alpha, word):
        """Deduction-only scan.  Returns False on contradiction, else records
        deductions into table and returns True."""
        f, b = alpha, alpha
        i, r = 0, len(word) - 1
        while True:
            while i <= r and table[f][_col(word[i])] is not None:
                f = table[f][_col(word[i])]
                i += 1
            if i > r:
                return f == b
            while r >= i and table[b][_inv_col(_col(word[r]))] is not None:
                b = table[b][_inv_col(_col(word[r]))]
                r -= 1
            if r < i:
                return f == b
            if r == i:
                col = _col(word[i])
                if table[f][col] is None and table[b][_inv_col(col)] is None:
                    table[f][col] = b
                    table[b][_inv_col(col)] = f
                    return True
                return table[f][col] == b
            return True  # gap >= 2: nothing to deduce yet

    def propagate(table):
        while True:
            changed = False
            before = sum(row.count(None) for row in table)
            for alpha in range(len(table)):
                for rel in pres.relators:
                    if not scan(table, alpha, rel):
                        return False
            after = sum(row.count(None) for row in table)
            changed = after != before
            if not changed:
                return True

    def first_hole(table):
        for c, row in enumerate(table):
            for col in range(ncols):
                if row[col] is None:
                    return c, col
        return None

    def rec(table):
        nonlocal nodes
        nodes += 1
        if nodes > node_cap:
            raise LimitExceeded("low-index search node cap")
        if not propagate(table):
            return
        hole = first_hole(table)
        if hole is None:
            rows = tuple(tuple(row) for row in table)
            ct = CosetTable(ngens, rows)
            if ct.is_closed_under(pres.relators):
                key = ct.conjugacy_key()
                results.setdefault(key, ct.standardized())
            return
        c, col = hole
        candidates = [d for d in range(len(table)) if table[d][_inv_col(col)] is None]
        if len(table) < n:
            candidates.append(len(table))
        for d in candidates:
            t2 = [row[:] for row in table]
            if d == len(table):
                t2.append([None] * ncols)
            t2[c][col] = d
            t2[d][_inv_col(col)] = c
            rec(t2)

    rec([[None] * ncols])
    ordered = sorted(results.items(), key=lambda kv: (len(kv[0]), kv[0]))
    return [ct for _, ct in ordered]


@dataclass(frozen=True)
class SchreierData:
    presentation: Presentation
    generator_words: tuple  # Schreier generator index -> word in the ambient group
    transversal: tuple  # coset -> representative word


def reidemeister_schreier(pres, table):
    """Presentation of the subgroup at row 0 of a closed coset table."""
    ngens = pres.generator_count
    k = table.coset_count
    # BFS Schreier transversal
    rep = [None] * k
    rep[0] = ()
    tree = set()
    queue = [0]
    while queue:
        c = queue.pop(0)
        for s in itertools.chain(range(1, ngens + 1), range(-1, -ngens - 1, -1)):
            d = table.apply(c, s)
            if rep[d] is None:
                rep[d] = rep[c] + (s,)
                tree.add((c, s) if s > 0 else (d, -s))
                queue.append(d)
    # Schreier generators: one per non-tree (coset, positive generator) pair
    sgen_index = {}
    sgen_words = []
    for c in range(k):
        for g in range(1, ngens + 1):
            if (c, g) in tree:
                continue
            sgen_index[(c, g)] = len(sgen_words) + 1
            word = free_reduce(rep[c] + (g,) + invert_word(rep[table.apply(c, g)]))
            sgen_words.append(word)

    def rewrite(start, word):
        out = []
        c = start
        for s in word:
            if s > 0:
                if (c, s) in sgen_index:
                    out.append(sgen_index[(c, s)])
                c = table.apply(c, s)
            else:
                g = -s
                d = table.apply(c, s)
                if (d, g) in sgen_index:
                    out.append(-sgen_index[(d, g)])
                c = d
        return free_reduce(tuple(out))

    relators = []
    for c in range(k):
        for rel in pres.relators:
            w = rewrite(c, rel)
            if w:
                relators.append(w)
    sub = Presentation(len(sgen_words), tuple(relators))
    return SchreierData(
        presentation=sub,
        generator_words=tuple(sgen_words),
        transversal=tuple(rep),
    )


def abelian_invariants(pres):
    """Invariant factors of the abelianization: d1 | d2 | ..., 0 per free factor."""
    rows = []
    for rel in pres.relators:
        row = [0] * pres.generator_count
        for s in rel:
            row[abs(s) - 1] += 1 if s > 0 else -1
        rows.append(row)
    if not rows:
        return tuple([0] * pres.generator_count)
    divisors = smith_normal_form(rows)
    free_rank = pres.generator_count - len(divisors)
    return tuple([d for d in divisors if d > 1] + [0] * free_rank)


@dataclass(frozen=True)
class DinftyWitness:
    """Certificate of a homomorphism onto an infinite subgroup of Z >< Z/2."""

    sigma: tuple  # +1/-1 per generator
    lam: tuple  # Fraction per generator
    word: tuple  # element of ker(sigma) with non-zero lambda value
    value: Fraction


def _gf2_nullspace(rows, ncols):
    """Basis of the kernel of a matrix over GF(2), rows as bitmasks."""
    pivots = []  # (column, reduced row)
    for row in rows:
        for col, red in pivots:
            if (row >> col) & 1:
                row ^= red
        if row:
            col = row.bit_length() - 1
            pivots.append((col, row))
    pivot_cols = {c for c, _ in pivots}
    basis = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        vec = 1 << free
        # back-substitute pivot variables
        for col, red in reversed(pivots):
            parity = bin(vec & red & ~(1 << col)).count("1") & 1
            if parity:
                vec |= 1 << col
        basis.append(vec)
    return basis


def _sigma_characters(pres):
    """All homomorphisms to {+1,-1}, in deterministic order.

    The characters form the GF(2) nullspace of the relators' exponent
    sums, so only that subspace gets enumerated."""
    ngens = pres.generator_count
    rows = []
    for rel in pres.relators:
        mask = 0
        for s in rel:
            mask ^= 1 << (abs(s) - 1)
        if mask:
            rows.append(mask)
    basis = _gf2_nullspace(rows, ngens)
    if 1 << len(basis) > SIGMA_CAP:
        raise LimitExceeded("too many sign characters")
    seen = []
    for combo in range(1 << len(basis)):
        bits = 0
        for i, vec in enumerate(basis):
            if (combo >> i) & 1:
                bits ^= vec
        seen.append(bits)
    out = []
    for bits in sorted(seen):
        sigma = tuple(-1 if (bits >> i) & 1 else 1 for i in range(ngens))
        out.append(sigma)
    return out


def _lambda_row(sigma, word, ngens):
    """Coefficients of lambda(word) as a linear form in lambda(generators)."""
    row = [0] * ngens
    prefix = 1
    for s in word:
        g = abs(s) - 1
        if s > 0:
            row[g] += prefix
        else:
            row[g] -= prefix * sigma[g]
        prefix *= sigma[g]
    return row


def lambda_value(sigma, lam, word):
    """lambda of a word given generator values, by the cocycle expansion."""
    row = _lambda_row(sigma, word, len(lam))
    return sum(Fraction(c) * v for c, v in zip(row, lam))


def _nullspace(rows, ncols):
    """Rational nullspace basis of an integer matrix, deterministic."""
    m = [[Fraction(x) for x in row] for row in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(tuple(v))
    return basis


def _sigma_kernel_words(pres, sigma):
    """Schreier generator words for ker(sigma), via its 2-coset table."""
    ngens = pres.generator_count
    rows = []
    for c in (0, 1):
        row = []
        for g in range(1, ngens + 1):
            d = c ^ (1 if sigma[g - 1] == -1 else 0)
            row.extend([d, d])  # g and g^-1 act identically on 2 cosets
        rows.append(tuple(row))
    table = CosetTable(ngens, tuple(rows))
    return reidemeister_schreier(pres, table).generator_words


def dinfty_witness(pres):
    """Search for a homomorphism to the infinite dihedral group with infinite image.

    Returns a DinftyWitness or None.  Sound: the witness pair (sigma, lambda)
    satisfies the cocycle relation on every relator, hence defines a genuine
    homomorphism; the certificate word lies in ker(sigma) and has non-zero
    translation part, so the image is infinite.
    """
    ngens = pres.generator_count
    for sigma in _sigma_characters(pres):
        rows = [_lambda_row(sigma, rel, ngens) for rel in pres.relators]
        basis = _nullspace(rows, ngens)
        if not basis:
            continue
        if all(s == 1 for s in sigma):
            kernel_words = tuple((g,) for g in range(1, ngens + 1))
        else:
            kernel_words = _sigma_kernel_words(pres, sigma)
        for lam in basis:
            for w in kernel_words:
                val = lambda_value(sigma, lam, w)
                if val != 0:
                    witness = DinftyWitness(sigma=sigma, lam=tuple(lam), word=w, value=val)
                    verify_dinfty_witness(pres, witness)
                    return witness
    return None


def verify_dinfty_witness(pres, witness):
    """Exact re-check: cocycle on relators, certificate in ker with value != 0."""
    sigma, lam = witness.sigma, witness.lam
    for rel in pres.relators:
        prod = 1
        for s in rel:
            prod *= sigma[abs(s) - 1]
        if prod != 1 or lambda_value(sigma, lam, rel) != 0:
            raise AssertionError("witness fails on a relator")
    sprod = 1
    for s in witness.word:
        sprod *= sigma[abs(s) - 1]
    if sprod != 1:
        raise AssertionError("certificate word not in ker(sigma)")
    if lambda_value(sigma, lam, witness.word) != witness.value or witness.value == 0:
        raise AssertionError("certificate value mismatch")
    # homomorphism law on all generator pairs, exact in D-infinity coordinates
    vals = {}
    for g in range(1, pres.generator_count + 1):
        vals[g] = (lam[g - 1], sigma[g - 1])
        vals[-g] = (-lam[g - 1] * sigma[g - 1], sigma[g - 1])
    for a in vals:
        for b in vals:
            ta, ea = vals[a]
            tb, eb = vals[b]
            prod = (ta + ea * tb, ea * eb)
            expect = (lambda_value(sigma, lam, free_reduce((a, b))), ea * eb)
            if free_reduce((a, b)) == ():
                expect = (Fraction(0), 1)
            if prod != expect:
                raise AssertionError("cocycle fails on a generator pair")


@dataclass(frozen=True)
class FWnVerdict:
    holds: bool
    n: int
    subgroup_index: int | None = None
    subgroup_table: CosetTable | None = None
    witness: DinftyWitness | None = None
    note: str = "virtually-abelian hypothesis asserted by caller, not machine-checked"


def fwn_virtually_abelian(pres, n):
    """Fixed-point verdict for a (caller-asserted) virtually abelian group.

    Holds iff no subgroup of index <= n rewrites to a presentation with a
    dihedral witness.
    """
    for table in low_index_subgroups(pres, n):
        data = reidemeister_schreier(pres, table)
        w = dinfty_witness(data.presentation)
        if w is not None:
            return FWnVerdict(
                holds=False,
                n=n,
                subgroup_index=table.coset_count,
                subgroup_table=table,
                witness=w,
            )
    return FWnVerdict(holds=True, n=n)


def fw_plus_cyclic(q, n):
    """Z/q has the strong fixed-point property in dimension n iff no divisor of q lies in [2, n]."""
    if q < 2:
        raise ValueError("need q >= 2")
    return all(q % d != 0 for d in range(2, n + 1))


def build_affine_coxeter(n, cap=5):
    """Presentation of the rank-n affine Coxeter group of type A.

    Generators: t_1..t_n, a basis of the sum-zero sublattice of Z^{n+1}
    (t_i = e_i - e_{i+1}), then s_1..s_n, the adjacent transpositions of
    the symmetric group permuting coordinates.
    """
    if n > cap or n < 1:
        raise ValueError(f"supported range 1..{cap}")
    t = lambda i: i  # 1-based
    s = lambda j: n + j
    relators = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            relators.append((t(i), t(j), -t(i), -t(j)))
    for j in range(1, n + 1):
        relators.append((s(j), s(j)))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if j == i + 1:
                relators.append((s(i), s(j)) * 3)
            else:
                relators.append((s(i), s(j)) * 2)
    # conjugation of the lattice basis by adjacent transpositions
    for j in range(1, n + 1):
        for i in range(1, n + 1):
            if i == j:
                image = (-t(j),)
            elif i == j - 1:
                image = (t(j - 1), t(j))
            elif i == j + 1:
                image = (t(j), t(j + 1))
            else:
                image = (t(i),)
            relators.append(free_reduce((s(j), t(i), -s(j)) + invert_word(image)))
    return Presentation(2 * n, tuple(relators))


def lambda0_d4_presentation():
    """The rank-3 sum-zero lattice extended by the dihedral group of the square.

    Generators a,b,c (lattice) = 1,2,3 and x,y,z (dihedral) = 4,5,6, with the
    dihedral group acting on lattice labellings of a 4-cycle.
    """
    a, b, c, x, y, z = 1, 2, 3, 4, 5, 6
    rel = [
        (a, b, -a, -b), (b, c, -b, -c), (a, c, -a, -c),
        (x, x), (y, y), (z, z), (x, y, -x, -y),
        (z, x, -z, -y), (z, y, -z, -x),
        (x, a, -x, a), (y, a, -y, a), (z, a, -z, -a),
        (x, b, -x, b), (y, b, -y, -b, a), (z, b, -z, -c),
        (x, c, -x, -c, a), (y, c, -y, c), (z, c, -z, -b),
    ]
    return Presentation(6, tuple(free_reduce(r) for r in rel))


def verify_d4_quotients(coset_limit=10000):
    """Enumerate the three quotients killing each index-two dihedral part.

    Returns a dict case -> {"finite": bool | None, "order": int | None,
    "witness": dict | None}.  A hit coset limit alone is not evidence, so
    an unfinished enumeration reports finite=None unless a verified
    infinite-dihedral witness proves the quotient infinite (finite=False).
    """
    base = lambda0_d4_presentation()
    x, y, z = 4, 5, 6
    cases = {
        "x=y=1": ((x,), (y,)),
        "z=1": ((z,),),
        "x=yz": ((x, -z, -y),),
    }
    out = {}
    for name, extra in cases.items():
        pres = Presentation(6, base.relators + tuple(extra))
        try:
            table = todd_coxeter(pres, (), coset_limit=coset_limit)
            out[name] = {"finite": True, "order": table.coset_count, "witness": None}
        except LimitExceeded:
            w = dinfty_witness(pres)
            if w is not None:
                verify_dinfty_witness(pres, w)
                wdata = {
                    "sigma": list(w.sigma),
                    "lam": [str(x_) for x_ in w.lam],
                    "word": list(w.word),
                    "value": str(w.value),
                }
                out[name] = {"finite": False, "order": None, "witness": wdata}
            else:
                out[name] = {"finite": None, "order": None, "witness": None}
    return out
