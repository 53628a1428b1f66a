"""Generators for concrete finite EI-categories.

Two families, each truncated at a level N so all hom sets stay finite:

* fi_g_truncation: objects 0..N are finite sets, morphisms are pairs
  (injection, coloring of the source by a fixed finite group G).  The
  trivial group gives plain injections.
* viq_truncation: objects 0..N are F_q-vector space dimensions, morphisms
  are injective linear maps, stored as column tuples over GF(q).

Plus small hand-built fixture categories used throughout the test suites.
Hom-set sizes are computed in closed form before enumeration and checked
against a hard cap, so a too-large request fails fast instead of grinding.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .eicat import FiniteEICategory

_RESERVED = set(">|.;,")


class FiniteGroup:
    """A finite group as a multiplication table over named elements.

    Args:
        names: element names; must avoid the id separator characters.
        table: table[i][j] = index of names[i] * names[j].

    The constructor checks the full group axioms and locates the identity
    and inverses; a bad table raises ValueError.
    """

    def __init__(self, names, table):
        self.names = list(names)
        n = len(self.names)
        if n == 0:
            raise ValueError("group must be nonempty")
        if len(set(self.names)) != n:
            raise ValueError("duplicate element names")
        for nm in self.names:
            if not nm or _RESERVED & set(nm):
                raise ValueError("element name %r is empty or uses reserved characters" % nm)
        self.table = [list(row) for row in table]
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise ValueError("multiplication table is not %dx%d" % (n, n))
        for row in self.table:
            for v in row:
                if not isinstance(v, int) or not 0 <= v < n:
                    raise ValueError("table entry %r is not an element index" % (v,))
        ident = None
        for e in range(n):
            if all(self.table[e][x] == x and self.table[x][e] == x for x in range(n)):
                ident = e
                break
        if ident is None:
            raise ValueError("table has no identity element")
        self.identity = ident
        self.inverse = [None] * n
        for x in range(n):
            for y in range(n):
                if self.table[x][y] == ident and self.table[y][x] == ident:
                    self.inverse[x] = y
                    break
            if self.inverse[x] is None:
                raise ValueError("element %r has no inverse" % self.names[x])
        for a in range(n):
            for b in range(n):
                ab = self.table[a][b]
                for c in range(n):
                    if self.table[ab][c] != self.table[a][self.table[b][c]]:
                        raise ValueError(
                            "associativity fails on (%s, %s, %s)"
                            % (self.names[a], self.names[b], self.names[c])
                        )

    @property
    def order(self) -> int:
        return len(self.names)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def __repr__(self):
        return "FiniteGroup(order=%d)" % self.order


def group_from_table(names, table) -> FiniteGroup:
    """Validate a raw multiplication table and wrap it as a FiniteGroup."""
    return FiniteGroup(names, table)


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic group order must be positive")
    return FiniteGroup([str(i) for i in range(n)], [[(i + j) % n for j in range(n)] for i in range(n)])


def trivial_group() -> FiniteGroup:
    return cyclic_group(1)


# -- GF(q) arithmetic for prime powers ------------------------------------


def _factor_prime_power(q: int):
    if q < 2:
        raise ValueError("q must be at least 2")
    p = None
    for d in range(2, q + 1):
        if q % d == 0:
            p = d
            break
    k = 0
    m = q
    while m % p == 0:
        m //= p
        k += 1
    if m != 1:
        raise ValueError("q = %d is not a prime power" % q)
    return p, k


def _poly_divmod(a, b, p):
    """Remainder of polynomial a by b over Z/p; coefficients ascending."""
    a = list(a)
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p) if p > 2 else b[-1]
    while len(a) - 1 >= db and any(a):
        if a[-1]:
            f = (a[-1] * inv_lead) % p
            off = len(a) - 1 - db
            for i, c in enumerate(b):
                a[off + i] = (a[off + i] - f * c) % p
        a.pop()
    return a


def _find_irreducible(p: int, k: int):
    """First monic degree-k polynomial over Z/p with no proper monic divisor."""
    lower = []
    for deg in range(1, k // 2 + 1):
        for tail in itertools.product(range(p), repeat=deg):
            lower.append(list(tail) + [1])
    for tail in itertools.product(range(p), repeat=k):
        cand = list(tail) + [1]
        if all(any(_poly_divmod(cand, d, p)) for d in lower):
            return cand
    raise AssertionError("no irreducible polynomial found")  # cannot happen


class GaloisField:
    """GF(q) for a prime power q, elements encoded as ints 0..q-1.

    The encoding is base-p digits of the polynomial representative in a
    fixed quotient ring, so 0 and 1 are the additive and multiplicative
    units.  Addition and multiplication are table lookups.
    """

    def __init__(self, q: int):
        p, k = _factor_prime_power(q)
        self.q = q
        self.p = p
        self.k = k
        digits = [self._digits(x) for x in range(q)]
        self.add_table = [
            [self._undigits([(a + b) % p for a, b in zip(digits[x], digits[y])]) for y in range(q)]
            for x in range(q)
        ]
        if k == 1:
            self.mul_table = [[(x * y) % p for y in range(q)] for x in range(q)]
        else:
            mod = _find_irreducible(p, k)
            self.mul_table = []
            for x in range(q):
                row = []
                for y in range(q):
                    prod = [0] * (2 * k - 1)
                    for i, a in enumerate(digits[x]):
                        if a:
                            for j, b in enumerate(digits[y]):
                                if b:
                                    prod[i + j] = (prod[i + j] + a * b) % p
                    rem = _poly_divmod(prod, mod, p)
                    rem += [0] * (k - len(rem))
                    row.append(self._undigits(rem[:k]))
                self.mul_table.append(row)
        self.neg_table = [self._undigits([(-a) % p for a in digits[x]]) for x in range(q)]
        self.inv_table = [None] * q
        for x in range(1, q):
            for y in range(1, q):
                if self.mul_table[x][y] == 1:
                    self.inv_table[x] = y
                    break

    def _digits(self, x: int):
        out = []
        for _ in range(self.k):
            out.append(x % self.p)
            x //= self.p
        return out

    def _undigits(self, ds):
        x = 0
        for d in reversed(ds):
            x = x * self.p + d
        return x

    def add(self, a, b):
        return self.add_table[a][b]

    def mul(self, a, b):
        return self.mul_table[a][b]

    def neg(self, a):
        return self.neg_table[a]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in GF(%d)" % self.q)
        return self.inv_table[a]


def _gf_reduce(field, basis, vec):
    """Reduce vec against pivot-normalized echelon basis; return residual."""
    v = list(vec)
    for piv, bv in basis:
        c = v[piv]
        if c:
            v = [field.add(a, field.mul(field.neg(c), b)) for a, b in zip(v, bv)]
    return v


def _gf_extend_basis(field, basis, vec):
    """Try to add vec to the echelon basis; return True if independent."""
    res = _gf_reduce(field, basis, vec)
    for i, c in enumerate(res):
        if c:
            inv = field.inv(c)
            basis.append((i, [field.mul(inv, a) for a in res]))
            return True
    return False


# -- instance specs ---------------------------------------------------------


@dataclass
class InstanceSpec:
    """What to generate: a family, a truncation level, and family data.

    family is "FI_G" (finite sets with G-colored injections, group in
    `group`, default trivial) or "VI_q" (F_q linear injections, prime power
    in `q`).  hom_cap bounds every single hom-set size; generation refuses
    to start when the closed-form count for any pair exceeds it.
    """

    family: str
    level: int
    group: FiniteGroup | None = None
    q: int | None = None
    hom_cap: int = 1000

    def __post_init__(self):
        if self.family == "FI":
            self.family = "FI_G"
        elif self.family == "VI":
            self.family = "VI_q"

    def generate(self) -> FiniteEICategory:
        if self.family == "FI_G":
            return fi_g_truncation(self)
        if self.family == "VI_q":
            return viq_truncation(self)
        raise ValueError("unknown family %r" % self.family)

    @classmethod
    def from_dict(cls, d: dict) -> "InstanceSpec":
        fam = d.get("family")
        if fam in ("FI", "FI_G"):
            gspec = d.get("group")
            if gspec is None:
                group = None
            elif isinstance(gspec, dict) and "cyclic" in gspec:
                group = cyclic_group(int(gspec["cyclic"]))
            elif isinstance(gspec, dict) and "table" in gspec:
                group = group_from_table(gspec["names"], gspec["table"])
            else:
                raise ValueError("group spec must give 'cyclic' or 'names'+'table'")
            return cls("FI_G", _level_of(d), group=group, hom_cap=_cap_of(d))
        if fam in ("VI", "VI_q"):
            if "q" not in d:
                raise ValueError("VI_q spec needs q")
            return cls("VI_q", _level_of(d), q=int(d["q"]), hom_cap=_cap_of(d))
        raise ValueError("unknown family %r" % fam)


def _level_of(d):
    if "level" not in d:
        raise ValueError("instance spec needs a level")
    lv = int(d["level"])
    if lv < 0:
        raise ValueError("level must be nonnegative")
    return lv


def _cap_of(d):
    cap = int(d.get("cap", 1000))
    if cap < 1:
        raise ValueError("cap must be positive")
    return cap


def _falling(n: int, m: int) -> int:
    out = 1
    for i in range(m):
        out *= n - i
    return out


def fi_hom_size(group_order: int, m: int, n: int) -> int:
    """Closed-form |hom(m, n)| for colored injections: |G|^m * n!/(n-m)!."""
    if m > n:
        return 0
    return group_order**m * _falling(n, m)


def viq_hom_size(q: int, m: int, n: int) -> int:
    """Closed-form count of injective linear maps F_q^m -> F_q^n."""
    if m > n:
        return 0
    out = 1
    for i in range(m):
        out *= q**n - q**i
    return out


def _check_cap(sizes, cap):
    for (m, n), size in sizes:
        if size > cap:
            raise ValueError(
                "hom set (%d -> %d) would have %d morphisms, over the cap %d"
                % (m, n, size, cap)
            )


def fi_g_truncation(spec: InstanceSpec) -> FiniteEICategory:
    """The category of sets 0..level with G-colored injections.

    A morphism m -> n is (t, c): t an injection encoded by its image tuple,
    c a G-coloring of the source.  Composition composes injections and
    multiplies colors along the map: the composite coloring at x is
    c2[t(x)] * c1[x].
    """
    group = spec.group or trivial_group()
    N = spec.level
    _check_cap(
        (((m, n), fi_hom_size(group.order, m, n)) for n in range(N + 1) for m in range(n + 1)),
        spec.hom_cap,
    )
    names = group.names

    def enc(m, n, t, c):
        return "%d>%d|%s|%s" % (m, n, ".".join(map(str, t)), ".".join(names[x] for x in c))

    morphs = {}
    data = {}
    by_src = {m: [] for m in range(N + 1)}
    for n in range(N + 1):
        for m in range(n + 1):
            for t in itertools.permutations(range(n), m):
                for c in itertools.product(range(group.order), repeat=m):
                    mid = enc(m, n, t, c)
                    morphs[mid] = (str(m), str(n))
                    data[mid] = (m, n, t, c)
                    by_src[m].append(mid)
    identity = {
        str(n): enc(n, n, tuple(range(n)), (group.identity,) * n) for n in range(N + 1)
    }
    compose = {}
    for fid, (m, n, t, c) in data.items():
        for gid in by_src[n]:
            m2, p, t2, c2 = data[gid]
            tt = tuple(t2[x] for x in t)
            cc = tuple(group.mul(c2[t[i]], c[i]) for i in range(m))
            compose[(gid, fid)] = enc(m, p, tt, cc)
    prov = {
        "family": "FI_G",
        "level": N,
        "group_names": list(names),
        "group_table": [row[:] for row in group.table],
        "hom_cap": spec.hom_cap,
    }
    return FiniteEICategory(
        [str(n) for n in range(N + 1)],
        morphs,
        identity,
        compose,
        levels={str(n): n for n in range(N + 1)},
        provenance=prov,
    )


def viq_truncation(spec: InstanceSpec) -> FiniteEICategory:
    """The category of F_q-dimensions 0..level with injective linear maps.

    A morphism m -> n is an n x m matrix of full column rank over GF(q),
    stored as the tuple of its columns; composition is matrix product.
    """
    if spec.q is None:
        raise ValueError("VI_q spec needs q")
    field = GaloisField(spec.q)
    q = spec.q
    N = spec.level
    _check_cap(
        (((m, n), viq_hom_size(q, m, n)) for n in range(N + 1) for m in range(n + 1)),
        spec.hom_cap,
    )

    def enc(m, n, cols):
        return "%d>%d|%s" % (m, n, ";".join(",".join(map(str, col)) for col in cols))

    def injective_tuples(n, m):
        vectors = list(itertools.product(range(q), repeat=n))
        out = []

        def grow(cols, basis):
            if len(cols) == m:
                out.append(tuple(cols))
                return
            for v in vectors:
                basis2 = list(basis)
                if _gf_extend_basis(field, basis2, v):
                    grow(cols + [v], basis2)

        grow([], [])
        return out

    morphs = {}
    data = {}
    by_src = {m: [] for m in range(N + 1)}
    for n in range(N + 1):
        for m in range(n + 1):
            for cols in injective_tuples(n, m):
                mid = enc(m, n, cols)
                morphs[mid] = (str(m), str(n))
                data[mid] = (m, n, cols)
                by_src[m].append(mid)
    identity = {}
    for n in range(N + 1):
        cols = tuple(tuple(1 if i == j else 0 for i in range(n)) for j in range(n))
        identity[str(n)] = enc(n, n, cols)
    compose = {}
    for fid, (m, n, cols_f) in data.items():
        for gid in by_src[n]:
            _, p, cols_g = data[gid]
            comp_cols = []
            for col in cols_f:
                acc = [0] * p
                for k, a in enumerate(col):
                    if a:
                        gc = cols_g[k]
                        acc = [field.add(x, field.mul(a, y)) for x, y in zip(acc, gc)]
                comp_cols.append(tuple(acc))
            compose[(gid, fid)] = enc(m, p, tuple(comp_cols))
    prov = {"family": "VI_q", "level": N, "q": q, "hom_cap": spec.hom_cap}
    return FiniteEICategory(
        [str(n) for n in range(N + 1)],
        morphs,
        identity,
        compose,
        levels={str(n): n for n in range(N + 1)},
        provenance=prov,
    )


# -- fixture categories ------------------------------------------------------


def group_category(group: FiniteGroup) -> FiniteEICategory:
    """One object whose endomorphisms are the given group."""
    morphs = {"g:" + nm: ("0", "0") for nm in group.names}
    compose = {}
    for a, an in enumerate(group.names):
        for b, bn in enumerate(group.names):
            compose[("g:" + an, "g:" + bn)] = "g:" + group.names[group.mul(a, b)]
    return FiniteEICategory(
        ["0"],
        morphs,
        {"0": "g:" + group.names[group.identity]},
        compose,
        levels={"0": 0},
        provenance={"family": "group", "group_names": list(group.names)},
    )


def arrow_category() -> FiniteEICategory:
    """The poset category 0 -> 1 with a single non-identity arrow."""
    morphs = {"e0": ("0", "0"), "e1": ("1", "1"), "a": ("0", "1")}
    compose = {
        ("e0", "e0"): "e0",
        ("e1", "e1"): "e1",
        ("a", "e0"): "a",
        ("e1", "a"): "a",
    }
    return FiniteEICategory(["0", "1"], morphs, {"0": "e0", "1": "e1"}, compose)


def non_mono_category() -> FiniteEICategory:
    """Three objects with parallel u, v: 0 -> 1 collapsed by f: 1 -> 2.

    f after u equals f after v while u != v, so f is not a monomorphism.
    Every endomorphism is an identity, so this is still an EI-category.
    """
    morphs = {
        "e0": ("0", "0"),
        "e1": ("1", "1"),
        "e2": ("2", "2"),
        "u": ("0", "1"),
        "v": ("0", "1"),
        "f": ("1", "2"),
        "w": ("0", "2"),
    }
    compose = {
        ("e0", "e0"): "e0",
        ("e1", "e1"): "e1",
        ("e2", "e2"): "e2",
        ("u", "e0"): "u",
        ("e1", "u"): "u",
        ("v", "e0"): "v",
        ("e1", "v"): "v",
        ("f", "e1"): "f",
        ("e2", "f"): "f",
        ("w", "e0"): "w",
        ("e2", "w"): "w",
        ("f", "u"): "w",
        ("f", "v"): "w",
    }
    return FiniteEICategory(
        ["0", "1", "2"], morphs, {"0": "e0", "1": "e1", "2": "e2"}, compose
    )


def discrete_category(n: int) -> FiniteEICategory:
    """n objects and only identity morphisms; every object is maximal."""
    morphs = {"e%d" % i: (str(i), str(i)) for i in range(n)}
    compose = {("e%d" % i, "e%d" % i): "e%d" % i for i in range(n)}
    return FiniteEICategory(
        [str(i) for i in range(n)], morphs, {str(i): "e%d" % i for i in range(n)}, compose
    )
