"""Finite EI-categories as explicit composition tables.

Objects and morphisms are identified by strings; composition is a dense
table over interned integer indices.  Object and morphism lists are kept
sorted by id, which fixes every basis ordering downstream.

EI means every endomorphism is invertible.  Together with antisymmetry of
the reachability order this makes the category skeletal: hom(i, j) and
hom(j, i) are never both nonempty for distinct i, j, and i <= j defined by
hom(i, j) != {} is a partial order on objects.
"""

from __future__ import annotations


class FiniteEICategory:
    """A finite category given by objects, morphisms and a composition table.

    Args:
        objects: iterable of object ids (strings).
        morphisms: dict morphism id -> (src object id, dst object id).
        identity: dict object id -> id of its identity morphism.
        compose: dict (g id, f id) -> id of g after f, for dst(f) == src(g).
        levels: optional dict object id -> int, reporting label only.
        provenance: optional dict describing how the category was generated.

    The constructor rejects dangling ids (structure that cannot be indexed);
    law violations (unit, associativity, EI, antisymmetry, missing or bogus
    table entries) are reported by validate() as strings.
    """

    def __init__(self, objects, morphisms, identity, compose, levels=None, provenance=None):
        self.objects = sorted(objects)
        if len(set(self.objects)) != len(self.objects):
            raise ValueError("duplicate object ids")
        self._oidx = {o: k for k, o in enumerate(self.objects)}
        self.morphisms = sorted(morphisms)
        if len(set(self.morphisms)) != len(self.morphisms):
            raise ValueError("duplicate morphism ids")
        self._midx = {m: k for k, m in enumerate(self.morphisms)}
        n = len(self.morphisms)
        self._src = [0] * n
        self._dst = [0] * n
        for m, (s, d) in morphisms.items():
            if s not in self._oidx or d not in self._oidx:
                raise ValueError("morphism %r has unknown endpoint" % m)
            k = self._midx[m]
            self._src[k] = self._oidx[s]
            self._dst[k] = self._oidx[d]
        self._identity = [None] * len(self.objects)
        self._identity_set = set()
        for o, m in identity.items():
            if o not in self._oidx:
                raise ValueError("identity for unknown object %r" % o)
            if m not in self._midx:
                raise ValueError("unknown identity morphism %r" % m)
            self._identity[self._oidx[o]] = self._midx[m]
            self._identity_set.add(self._midx[m])
        self._table = [[None] * n for _ in range(n)]
        self._bogus_compose = []
        for (g, f), gf in compose.items():
            if g not in self._midx or f not in self._midx or gf not in self._midx:
                raise ValueError("compose entry (%r, %r) -> %r has unknown id" % (g, f, gf))
            gi, fi = self._midx[g], self._midx[f]
            if self._dst[fi] != self._src[gi]:
                self._bogus_compose.append((g, f))
            else:
                self._table[gi][fi] = self._midx[gf]
        self._hom = {}
        for k in range(n):
            self._hom.setdefault((self._src[k], self._dst[k]), []).append(k)
        self.levels = dict(levels) if levels else None
        self.provenance = dict(provenance) if provenance else None
        self._gen_cache = None

    # -- basic lookups ----------------------------------------------------

    def src_of(self, m: str) -> str:
        return self.objects[self._src[self._midx[m]]]

    def dst_of(self, m: str) -> str:
        return self.objects[self._dst[self._midx[m]]]

    def hom(self, i: str, j: str):
        """Morphism ids from i to j, in id order."""
        if i not in self._oidx or j not in self._oidx:
            raise ValueError("unknown object in hom(%r, %r)" % (i, j))
        ids = self._hom.get((self._oidx[i], self._oidx[j]), [])
        return [self.morphisms[k] for k in ids]

    def aut(self, i: str):
        return self.hom(i, i)

    def identity_of(self, i: str) -> str:
        k = self._identity[self._oidx[i]]
        if k is None:
            raise ValueError("object %r has no identity morphism" % i)
        return self.morphisms[k]

    def is_identity(self, m: str) -> bool:
        return self._midx[m] in self._identity_set

    def compose(self, g: str, f: str) -> str:
        """The composite g after f; raises on non-composable pairs."""
        k = self._table[self._midx[g]][self._midx[f]]
        if k is None:
            raise ValueError("morphisms %r after %r are not composable" % (g, f))
        return self.morphisms[k]

    # -- validation -------------------------------------------------------

    def validate(self):
        """Check all category and EI laws; return a list of violations."""
        bad = []
        n = len(self.morphisms)
        for o, k in zip(self.objects, self._identity):
            if k is None:
                bad.append("object %r has no identity" % o)
            elif self._src[k] != self._oidx[o] or self._dst[k] != self._oidx[o]:
                bad.append("identity of %r is not an endomorphism of it" % o)
        for g, f in self._bogus_compose:
            bad.append("compose table entry (%r, %r) is not composable" % (g, f))
        table = self._table
        for gi in range(n):
            sg = self._src[gi]
            for fi in range(n):
                if self._dst[fi] == sg:
                    c = table[gi][fi]
                    if c is None:
                        bad.append(
                            "missing composite %r after %r"
                            % (self.morphisms[gi], self.morphisms[fi])
                        )
                    elif self._src[c] != self._src[fi] or self._dst[c] != self._dst[gi]:
                        bad.append(
                            "composite %r after %r has wrong endpoints"
                            % (self.morphisms[gi], self.morphisms[fi])
                        )
        if bad:
            return bad  # unit/associativity need a complete table
        for fi in range(n):
            es = self._identity[self._src[fi]]
            ed = self._identity[self._dst[fi]]
            if table[fi][es] != fi:
                bad.append("%r after identity is not itself" % self.morphisms[fi])
            if table[ed][fi] != fi:
                bad.append("identity after %r is not itself" % self.morphisms[fi])
        # associativity over all composable triples h after g after f
        by_dst = {}
        by_src = {}
        for fi in range(n):
            by_dst.setdefault(self._dst[fi], []).append(fi)
            by_src.setdefault(self._src[fi], []).append(fi)
        for gi in range(n):
            row_g = table[gi]
            fs = by_dst.get(self._src[gi], [])
            hs = by_src.get(self._dst[gi], [])
            for hi in hs:
                row_h = table[hi]
                hg = row_h[gi]
                row_hg = table[hg]
                for fi in fs:
                    if row_h[row_g[fi]] != row_hg[fi]:
                        bad.append(
                            "associativity fails on (%r, %r, %r)"
                            % (self.morphisms[hi], self.morphisms[gi], self.morphisms[fi])
                        )
        for oi, o in enumerate(self.objects):
            endos = self._hom.get((oi, oi), [])
            e = self._identity[oi]
            for fi in endos:
                if not any(
                    table[gi][fi] == e and table[fi][gi] == e for gi in endos
                ):
                    bad.append(
                        "endomorphism %r of %r is not invertible" % (self.morphisms[fi], o)
                    )
        for (si, di), ms in self._hom.items():
            if si < di and ms and self._hom.get((di, si)):
                bad.append(
                    "objects %r and %r reach each other (order is not antisymmetric)"
                    % (self.objects[si], self.objects[di])
                )
        return bad

    # -- order and structure ----------------------------------------------

    def leq(self, i: str, j: str) -> bool:
        """True when hom(i, j) is nonempty; a partial order on objects."""
        if i == j:
            return True
        return bool(self._hom.get((self._oidx[i], self._oidx[j])))

    def is_monomorphism(self, m: str) -> bool:
        """True when m composes injectively with every hom set into src(m)."""
        mi = self._midx[m]
        row = self._table[mi]
        si = self._src[mi]
        for (a, b), us in self._hom.items():
            if b != si:
                continue
            seen = set()
            for u in us:
                c = row[u]
                if c in seen:
                    return False
                seen.add(c)
        return True

    def all_monomorphisms(self) -> bool:
        return all(self.is_monomorphism(m) for m in self.morphisms)

    def maximal_objects(self, objs=None):
        """Objects in objs (default all) with nothing strictly above them in objs."""
        pool = self.objects if objs is None else sorted(objs)
        for o in pool:
            if o not in self._oidx:
                raise ValueError("unknown object %r" % o)
        out = []
        for i in pool:
            if all(j == i or not self.leq(i, j) for j in pool):
                out.append(i)
        return out

    def downward_closure(self, objs):
        for o in objs:
            if o not in self._oidx:
                raise ValueError("unknown object %r" % o)
        objs = set(objs)
        return [i for i in self.objects if any(self.leq(i, s) for s in objs)]

    def right_closed_subcategory(self, objs) -> "FiniteEICategory":
        """Full subcategory on the downward closure of objs; ids are kept,
        so the inclusion back into this category is the identity on ids."""
        keep = set(self.downward_closure(objs))
        kidx = {self._oidx[o] for o in keep}
        morphs = {
            m: (self.objects[self._src[k]], self.objects[self._dst[k]])
            for m, k in self._midx.items()
            if self._src[k] in kidx and self._dst[k] in kidx
        }
        ident = {o: self.identity_of(o) for o in keep}
        comp = {}
        for g, gi in self._midx.items():
            if self._src[gi] not in kidx or self._dst[gi] not in kidx:
                continue
            row = self._table[gi]
            for f, fi in self._midx.items():
                if row[fi] is not None and self._src[fi] in kidx and self._dst[fi] in kidx:
                    comp[(g, f)] = self.morphisms[row[fi]]
        levels = {o: l for o, l in (self.levels or {}).items() if o in keep} or None
        prov = self.provenance if keep == set(self.objects) else None
        return FiniteEICategory(keep, morphs, ident, comp, levels=levels, provenance=prov)

    # -- generators ---------------------------------------------------------

    def _generation(self):
        """Greedy generating set plus a derivation plan.

        Returns (generators, plan): generators is a list of morphism indices;
        plan is a list of (m, g, f) with m = g after f, ordered so that every
        g, f is an identity, a generator, or an earlier plan entry.  Every
        morphism is reachable this way, which lets callers impose naturality
        constraints only at generators and derive induced maps along the plan.
        """
        if self._gen_cache is not None:
            return self._gen_cache
        n = len(self.morphisms)
        avail = [k for k in self._identity if k is not None]
        in_avail = [False] * n
        for k in avail:
            in_avail[k] = True
        gens = []
        plan = []
        table = self._table
        # endomorphisms first, then cross-object morphisms by distance: with
        # automorphisms available, one step morphism per object pair usually
        # generates its whole hom set, keeping the generating set small
        order = sorted(
            range(n),
            key=lambda m: (
                self._src[m] != self._dst[m],
                self._dst[m] - self._src[m],
                m,
            ),
        )
        for m in order:
            if in_avail[m]:
                continue
            gens.append(m)
            in_avail[m] = True
            avail.append(m)
            queue = [m]
            while queue:
                x = queue.pop()
                k = 0
                while k < len(avail):
                    y = avail[k]
                    for a, b in ((x, y), (y, x)):
                        c = table[a][b]
                        if c is not None and not in_avail[c]:
                            in_avail[c] = True
                            avail.append(c)
                            plan.append((c, a, b))
                            queue.append(c)
                    k += 1
        self._gen_cache = (gens, plan)
        return self._gen_cache

    def generating_morphisms(self):
        """A small set of morphism ids generating all others under composition."""
        gens, _ = self._generation()
        return [self.morphisms[k] for k in gens]

    def composition_plan(self):
        """Derivations (m, g, f) with m = g after f, in dependency order, ids."""
        _, plan = self._generation()
        ms = self.morphisms
        return [(ms[c], ms[a], ms[b]) for c, a, b in plan]

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        morphs = [
            {"id": m, "src": self.src_of(m), "dst": self.dst_of(m)}
            for m in self.morphisms
        ]
        comp = []
        for gi, g in enumerate(self.morphisms):
            row = self._table[gi]
            for fi, f in enumerate(self.morphisms):
                if row[fi] is not None:
                    comp.append([g, f, self.morphisms[row[fi]]])
        comp.sort()
        out = {
            "objects": list(self.objects),
            "morphisms": morphs,
            "identity": {o: self.identity_of(o) for o in self.objects},
            "compose": comp,
        }
        if self.levels:
            out["levels"] = dict(self.levels)
        if self.provenance:
            out["provenance"] = dict(self.provenance)
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "FiniteEICategory":
        try:
            objects = list(d["objects"])
            morphisms = {m["id"]: (m["src"], m["dst"]) for m in d["morphisms"]}
            identity = dict(d["identity"])
            compose = {(g, f): gf for g, f, gf in d["compose"]}
        except (KeyError, TypeError) as exc:
            raise ValueError("malformed category data: %s" % exc) from None
        return cls(
            objects,
            morphisms,
            identity,
            compose,
            levels=d.get("levels"),
            provenance=d.get("provenance"),
        )

    def __repr__(self):
        return "FiniteEICategory(%d objects, %d morphisms)" % (
            len(self.objects),
            len(self.morphisms),
        )
