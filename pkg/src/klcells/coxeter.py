"""Finite Coxeter systems: enumeration, lengths, Bruhat order, classes.

A system is specified by its Coxeter matrix (optionally via a named
preset).  Elements are enumerated exactly, with no floating point:

* connected rank-2 components are handled combinatorially as dihedral
  groups (any bond order m);
* components whose bonds lie in {2,3,4,6} act faithfully on the root
  lattice through an integer (symmetrizable-Cartan) reflection
  representation;
* components whose bonds lie in {2,3,5} act through the same
  representation with entries a + b*phi in the golden-ratio ring
  (2*cos(pi/5) = phi, phi^2 = phi + 1).

By the classification of finite Coxeter groups, any other connected
shape of rank >= 3 is infinite and is rejected up front.  Reducible
diagrams are built componentwise and assembled as direct products.

Elements are indexed 0..|W|-1, breadth-first by length and then
lexicographically by the canonical (lexicographically minimal) reduced
word; index 0 is the identity.  A built system is immutable and safe to
share between threads.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field


class CoxeterError(ValueError):
    """Invalid Coxeter matrix or preset."""


class EnumerationCapError(CoxeterError):
    """Group enumeration exceeded the configured element cap."""


DEFAULT_CAP = 20000


# ---------------------------------------------------------------------------
# presets

_PRESET_RE = re.compile(r"^([A-Za-z]+)\s*[_]?\s*(\d+)?(?:[:(]\s*(\d+)\s*\)?)?$")


def coxeter_matrix_for_preset(name):
    """Coxeter matrix and scan metadata for a single preset factor.

    Returns ``(matrix, numerator_gen)`` where ``numerator_gen`` is the
    generator index whose weight plays the numerator role in ratio
    scans (None when there is no distinguished two-class convention).
    """
    m = _PRESET_RE.match(name.strip())
    if not m:
        raise CoxeterError(f"cannot parse Coxeter type {name!r}")
    fam = m.group(1).upper()
    n = int(m.group(2)) if m.group(2) else None
    extra = int(m.group(3)) if m.group(3) else None

    def chain(n, bonds):
        mat = [[2] * n for _ in range(n)]
        for i in range(n):
            mat[i][i] = 1
        for i, b in enumerate(bonds):
            mat[i][i + 1] = mat[i + 1][i] = b
        return mat

    if fam == "A":
        if not n or n < 1:
            raise CoxeterError("A_n needs n >= 1")
        return chain(n, [3] * (n - 1)), None
    if fam in ("B", "C"):
        if not n or n < 2:
            raise CoxeterError("B_n needs n >= 2")
        # generator 0 is the short-bond end carrying the independent weight
        return chain(n, [4] + [3] * (n - 2)), 0
    if fam == "D":
        if not n or n < 3:
            raise CoxeterError("D_n needs n >= 3")
        mat = chain(n, [3] * (n - 1))
        mat[n - 1][n - 2] = mat[n - 2][n - 1] = 2
        mat[n - 1][n - 3] = mat[n - 3][n - 1] = 3
        return mat, None
    if fam == "E":
        if n not in (6, 7, 8):
            raise CoxeterError("E_n needs n in {6,7,8}")
        mat = chain(n, [3] * (n - 1))
        # branch node: relocate the last generator onto position 2
        mat[n - 1][n - 2] = mat[n - 2][n - 1] = 2
        mat[n - 1][2] = mat[2][n - 1] = 3
        return mat, None
    if fam == "F":
        if n not in (None, 4):
            raise CoxeterError("only F_4 exists")
        return chain(4, [3, 4, 3]), 2
    if fam == "G":
        if n not in (None, 2):
            raise CoxeterError("only G_2 exists")
        return chain(2, [6]), 1
    if fam == "H":
        if n not in (3, 4):
            raise CoxeterError("H_n needs n in {3,4}")
        return chain(n, [5] + [3] * (n - 2)), None
    if fam == "I":
        order = extra
        if order is None or order < 2:
            raise CoxeterError("I_2(m) needs m >= 2, written I2:m or I_2(m)")
        return chain(2, [order]), 1
    raise CoxeterError(f"unknown Coxeter family {fam!r}")


def parse_type(text):
    """Parse a type string like ``F4``, ``I2:6``, ``B4`` or ``A2xA1``."""
    factors = [f for f in re.split(r"[xX*]", text) if f.strip()]
    mats, nums = [], []
    for f in factors:
        mat, num = coxeter_matrix_for_preset(f)
        nums.append(num if num is None else num + sum(len(m) for m in mats))
        mats.append(mat)
    total = sum(len(m) for m in mats)
    big = [[2] * total for _ in range(total)]
    off = 0
    for mat in mats:
        k = len(mat)
        for i in range(k):
            for j in range(k):
                big[off + i][off + j] = mat[i][j]
        off += k
    numerator = next((x for x in nums if x is not None), None)
    return CoxeterSpec(matrix=tuple(tuple(r) for r in big), name=text,
                       numerator_gen=numerator)


@dataclass(frozen=True)
class CoxeterSpec:
    """Coxeter matrix plus bookkeeping for a (hopefully finite) system."""

    matrix: tuple
    name: str = ""
    numerator_gen: int | None = None

    def __post_init__(self):
        mat = self.matrix
        n = len(mat)
        if n == 0:
            raise CoxeterError("empty generator set")
        for i in range(n):
            if len(mat[i]) != n:
                raise CoxeterError("Coxeter matrix is not square")
            if mat[i][i] != 1:
                raise CoxeterError("diagonal entries must be 1")
            for j in range(n):
                if i != j:
                    mij = mat[i][j]
                    if mij != mat[j][i]:
                        raise CoxeterError("Coxeter matrix must be symmetric")
                    if not isinstance(mij, int) or mij < 2:
                        raise CoxeterError("off-diagonal orders must be ints >= 2")

    @property
    def rank(self):
        return len(self.matrix)


# ---------------------------------------------------------------------------
# exact faithful actions per connected component


class _DihedralSeed:
    """Order-2m dihedral group on two generators; elements are (rot, flip)."""

    def __init__(self, m):
        self.m = m
        self.identity = (0, 0)
        # s = pure flip; t = flip composed with one rotation (so st = rot)
        self.gens = [(0, 1), (m - 1, 1)]

    def mul(self, a, b):
        r1, f1 = a
        r2, f2 = b
        if f1 == 0:
            return ((r1 + r2) % self.m, f2)
        return ((r1 - r2) % self.m, 1 - f2)


class _IntMatrixSeed:
    """Integer reflection representation for bonds within {2,3,4,6}.

    Paired Cartan entries multiply to 4*cos(pi/m)^2; on a tree diagram
    any per-edge orientation is symmetrizable, so the smaller generator
    index always takes the entry 1.
    """

    _FULL = {2: 0, 3: 1, 4: 2, 6: 3}

    def __init__(self, mat):
        n = len(mat)
        self.identity = tuple(tuple(1 if i == j else 0 for j in range(n))
                              for i in range(n))
        gens = []
        for s in range(n):
            rows = [list(r) for r in self.identity]
            for t in range(n):
                if t == s:
                    rows[s][s] = -1
                    continue
                c = self._FULL[mat[s][t]]
                if c == 0:
                    rows[s][t] = 0
                else:
                    rows[s][t] = 1 if s < t else c
            gens.append(tuple(tuple(r) for r in rows))
        self.gens = gens

    def mul(self, a, b):
        return tuple(
            tuple(sum(ra[k] * b[k][j] for k in range(len(b))) for j in range(len(b)))
            for ra in a
        )


class _GoldenMatrixSeed:
    """Reflection representation over Z[phi] for bonds within {2,3,5}.

    Matrix entries are pairs (a, b) meaning a + b*phi with phi^2 = phi + 1;
    2*cos(pi/5) = phi and 2*cos(pi/3) = 1.
    """

    ZERO = (0, 0)
    ONE = (1, 0)
    PHI = (0, 1)

    def __init__(self, mat):
        n = len(mat)
        self.identity = tuple(
            tuple(self.ONE if i == j else self.ZERO for j in range(n))
            for i in range(n)
        )
        coeff = {2: self.ZERO, 3: self.ONE, 5: self.PHI}
        gens = []
        for s in range(n):
            rows = [list(r) for r in self.identity]
            for t in range(n):
                rows[s][t] = (-1, 0) if t == s else coeff[mat[s][t]]
            gens.append(tuple(tuple(r) for r in rows))
        self.gens = gens

    @staticmethod
    def _gmul(x, y):
        a, b = x
        c, d = y
        return (a * c + b * d, a * d + b * c + b * d)

    def mul(self, a, b):
        n = len(b)
        gmul = self._gmul
        out = []
        for ra in a:
            row = []
            for j in range(n):
                acc0 = acc1 = 0
                for k in range(n):
                    p, q = gmul(ra[k], b[k][j])
                    acc0 += p
                    acc1 += q
                row.append((acc0, acc1))
            out.append(tuple(row))
        return tuple(out)


def _component_seeds(mat):
    """Split the diagram into connected components and pick exact actions."""
    n = len(mat)
    seen = [False] * n
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        comp = []
        stack = [start]
        seen[start] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if not seen[j] and mat[i][j] >= 3:
                    seen[j] = True
                    stack.append(j)
        comps.append(sorted(comp))
    seeds = []
    for comp in comps:
        k = len(comp)
        sub = [[mat[i][j] for j in comp] for i in comp]
        edges = sum(1 for i in range(k) for j in range(i) if sub[i][j] >= 3)
        bonds = {sub[i][j] for i in range(k) for j in range(i)} - {2}
        if k == 1:
            seeds.append((comp, _IntMatrixSeed(sub)))
        elif k == 2:
            seeds.append((comp, _DihedralSeed(sub[0][1])))
        elif edges >= k:
            raise CoxeterError(
                f"connected component {comp} contains a diagram cycle; "
                "finite Coxeter diagrams are trees, so the group is infinite"
            )
        elif bonds <= {3, 4, 6}:
            seeds.append((comp, _IntMatrixSeed(sub)))
        elif bonds <= {3, 5}:
            seeds.append((comp, _GoldenMatrixSeed(sub)))
        else:
            raise CoxeterError(
                f"connected component {comp} with bond orders {sorted(bonds)} is "
                "infinite (no finite Coxeter group of rank >= 3 has such bonds)"
            )
    return seeds


# ---------------------------------------------------------------------------
# the enumerated system


@dataclass
class CoxeterSystem:
    """Fully enumerated finite Coxeter system.

    Immutable after construction; all tables are index-based.
    """

    spec: CoxeterSpec
    size: int
    rank: int
    length: list
    words: list                 # canonical reduced word per element
    cayley_right: list          # cayley_right[s][w] = index of w*s
    cayley_left: list           # cayley_left[s][w]  = index of s*w
    inverse: list
    longest: int
    gen_classes: list           # partition of generators by odd-bond connectivity
    class_of_gen: list
    _bruhat_memo: dict = field(default_factory=dict, repr=False)
    _conj_classes: list | None = field(default=None, repr=False)

    # -- basic accessors ----------------------------------------------------

    def reduced_word(self, w):
        return self.words[w]

    def word_to_element(self, word):
        w = 0
        for s in word:
            w = self.cayley_right[s][w]
        return w

    def left_descents(self, w):
        lw = self.length[w]
        return [s for s in range(self.rank)
                if self.length[self.cayley_left[s][w]] < lw]

    def right_descents(self, w):
        lw = self.length[w]
        return [s for s in range(self.rank)
                if self.length[self.cayley_right[s][w]] < lw]

    def first_left_descent(self, w):
        lw = self.length[w]
        for s in range(self.rank):
            if self.length[self.cayley_left[s][w]] < lw:
                return s
        return None

    def mult(self, a, b):
        for s in self.words[b]:
            a = self.cayley_right[s][a]
        return a

    def word_text(self, w):
        return "".join(str(s + 1) for s in self.words[w]) or "e"

    def element_order(self, w):
        k, x = 1, w
        while x != 0:
            x = self.mult(x, w)
            k += 1
        return k

    # -- Bruhat order ---------------------------------------------------------

    def bruhat_leq(self, y, w):
        """Bruhat-Chevalley order via the descent recursion, memoized."""
        if y == w:
            return True
        if self.length[y] >= self.length[w]:
            return False
        memo = self._bruhat_memo
        key = (y, w)
        val = memo.get(key)
        if val is not None:
            return val
        s = self.first_left_descent(w)
        sw = self.cayley_left[s][w]
        sy = self.cayley_left[s][y]
        if self.length[sy] < self.length[y]:
            val = self.bruhat_leq(sy, sw)
        else:
            val = self.bruhat_leq(y, sw)
        memo[key] = val
        return val

    def bruhat_below(self, w):
        """Sorted list of all y <= w."""
        return [y for y in range(self.size) if self.bruhat_leq(y, w)]

    # -- conjugacy ------------------------------------------------------------

    def conjugacy_classes(self):
        """Conjugacy classes as (representative, sorted element tuple).

        Classes are sorted by (length of representative, representative
        index); representatives are minimal in that key.  The identity
        class always comes first.
        """
        if self._conj_classes is not None:
            return self._conj_classes
        assigned = [False] * self.size
        classes = []
        for start in range(self.size):
            if assigned[start]:
                continue
            orbit = {start}
            stack = [start]
            assigned[start] = True
            while stack:
                x = stack.pop()
                for s in range(self.rank):
                    y = self.cayley_left[s][self.cayley_right[s][x]]
                    if not assigned[y]:
                        assigned[y] = True
                        orbit.add(y)
                        stack.append(y)
            members = tuple(sorted(orbit))
            rep = min(members, key=lambda e: (self.length[e], e))
            classes.append((rep, members))
        classes.sort(key=lambda c: (self.length[c[0]], c[0]))
        self._conj_classes = classes
        return classes

    def class_index_of(self):
        """List mapping element -> index of its conjugacy class."""
        classes = self.conjugacy_classes()
        out = [0] * self.size
        for i, (_, members) in enumerate(classes):
            for e in members:
                out[e] = i
        return out

    # -- diagram automorphisms --------------------------------------------------

    def diagram_automorphisms(self):
        """All permutations of the generators preserving the Coxeter matrix."""
        mat = self.spec.matrix
        n = self.rank
        autos = []
        for perm in itertools.permutations(range(n)):
            if all(mat[perm[i]][perm[j]] == mat[i][j]
                   for i in range(n) for j in range(n)):
                autos.append(perm)
        return autos

    def element_map_for_auto(self, perm):
        """Element permutation induced by a diagram automorphism."""
        out = [0] * self.size
        for w in range(self.size):
            x = 0
            for s in self.words[w]:
                x = self.cayley_right[perm[s]][x]
            out[w] = x
        return out

    def summary(self):
        hist = {}
        for l in self.length:
            hist[l] = hist.get(l, 0) + 1
        return {
            "name": self.spec.name or "custom",
            "size": self.size,
            "rank": self.rank,
            "longest_length": self.length[self.longest],
            "length_histogram": [hist[k] for k in sorted(hist)],
            "generator_classes": [list(c) for c in self.gen_classes],
            "conjugacy_class_count": len(self.conjugacy_classes()),
        }


def generator_classes(matrix):
    """Partition generators by connectivity through odd finite bonds."""
    n = len(matrix)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        for j in range(i):
            if matrix[i][j] % 2 == 1:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def build_system(spec, cap=DEFAULT_CAP):
    """Enumerate the group and build all tables.

    Raises :class:`EnumerationCapError` when more than ``cap`` elements
    are found (the default cap fails fast on infinite specs).
    """
    if isinstance(spec, str):
        spec = parse_type(spec)
    mat = spec.matrix
    n = spec.rank
    seeds = _component_seeds(mat)
    comp_of_gen = {}
    gen_local = {}
    for ci, (comp, seed) in enumerate(seeds):
        for li, g in enumerate(comp):
            comp_of_gen[g] = ci
            gen_local[g] = li
    identity = tuple(seed.identity for _, seed in seeds)

    def right_mul(elem, g):
        ci = comp_of_gen[g]
        seed = seeds[ci][1]
        parts = list(elem)
        parts[ci] = seed.mul(parts[ci], seed.gens[gen_local[g]])
        return tuple(parts)

    # BFS by length; canonical word = min over (canonical word of
    # predecessor, appended letter), which yields the lex-least reduced word.
    index_of = {identity: 0}
    words = [()]
    lengths = [0]
    level = [(identity, ())]
    while level:
        nxt = {}
        for elem, word in level:
            for g in range(n):
                new = right_mul(elem, g)
                if new in index_of:
                    continue
                cand = word + (g,)
                old = nxt.get(new)
                if old is None or cand < old:
                    nxt[new] = cand
        if not nxt:
            break
        if len(index_of) + len(nxt) > cap:
            raise EnumerationCapError(
                f"more than {cap} elements; group is infinite or cap too low"
            )
        level = sorted(nxt.items(), key=lambda kv: kv[1])
        L = len(level[0][1])
        for elem, word in level:
            index_of[elem] = len(words)
            words.append(word)
            lengths.append(L)

    size = len(words)
    # dense element list for table building
    elems = [None] * size
    for e, i in index_of.items():
        elems[i] = e
    cayley_right = [[0] * size for _ in range(n)]
    cayley_left = [[0] * size for _ in range(n)]
    for w in range(size):
        for g in range(n):
            cayley_right[g][w] = index_of[right_mul(elems[w], g)]
    # left multiplication: s*w = (w^-1 * s)^-1; build via words instead
    for w in range(size):
        word = words[w]
        for g in range(n):
            x = cayley_right[g][0]
            for s in word:
                x = cayley_right[s][x]
            cayley_left[g][w] = x
    inverse = [0] * size
    for w in range(size):
        x = 0
        for s in reversed(words[w]):
            x = cayley_right[s][x]
        inverse[w] = x

    maxlen = max(lengths)
    longest_candidates = [w for w in range(size) if lengths[w] == maxlen]
    if len(longest_candidates) != 1:
        raise CoxeterError("no unique longest element; group not finite?")
    classes = generator_classes(mat)
    class_of_gen = [0] * n
    for i, cl in enumerate(classes):
        for g in cl:
            class_of_gen[g] = i

    return CoxeterSystem(
        spec=spec,
        size=size,
        rank=n,
        length=lengths,
        words=words,
        cayley_right=cayley_right,
        cayley_left=cayley_left,
        inverse=inverse,
        longest=longest_candidates[0],
        gen_classes=classes,
        class_of_gen=class_of_gen,
    )
