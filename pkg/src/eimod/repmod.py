"""Graded modules over the algebra of a finite EI-category.

A module assigns to each object i a rational vector space k^dims[i] and to
each morphism a matrix:

* left module, f: i -> j:  act(f) has shape (dims[j], dims[i]), acts
  V(i) -> V(j), and act(g after f) = act(g) @ act(f);
* right module, f: i -> j: act(f) has shape (dims[i], dims[j]), acts
  V(j) -> V(i), and act(g after f) = act(f) @ act(g).

This is exactly a functor (covariant or contravariant) to vector spaces,
and simultaneously a graded module over the category algebra.  The basis
of a free module at an object is the relevant hom set in id order, so all
constructions here are canonical: rerunning them yields identical matrices.

Duality transposes every action matrix and flips the side; on these
representations it is a strict involution, not just one up to isomorphism.
"""

from __future__ import annotations

from .eicat import FiniteEICategory
from .exactla import (
    ExactMatrix,
    Q,
    Q0,
    Q1,
    _rref,
    block_diag,
    hstack,
    kernel_of_rows,
    solve,
)

SIDES = ("left", "right")


class CatModule:
    """A finite-dimensional graded module over a category algebra.

    Args:
        cat: the category.
        side: "left" or "right".
        dims: dict object id -> dimension; missing objects mean 0.
        action: dict morphism id -> ExactMatrix, one entry per morphism,
            with the shape dictated by side and dims (checked here).

    Use build() to fill in zero-shaped actions and identity actions
    automatically.  validate() checks the functor laws exhaustively.
    """

    def __init__(self, cat: FiniteEICategory, side: str, dims, action):
        if side not in SIDES:
            raise ValueError("side must be 'left' or 'right'")
        self.cat = cat
        self.side = side
        self.dims = {o: 0 for o in cat.objects}
        for o, d in dims.items():
            if o not in self.dims:
                raise ValueError("dimension given for unknown object %r" % o)
            if not isinstance(d, int) or d < 0:
                raise ValueError("dimension of %r must be a nonnegative int" % o)
            self.dims[o] = d
        self.action = {}
        for m in cat.morphisms:
            if m not in action:
                raise ValueError("no action matrix for morphism %r" % m)
            mat = action[m]
            rows, cols = self._shape(m)
            if (mat.rows, mat.cols) != (rows, cols):
                raise ValueError(
                    "action for %r has shape %dx%d, expected %dx%d"
                    % (m, mat.rows, mat.cols, rows, cols)
                )
            self.action[m] = mat
        for m in action:
            if m not in self.action:
                raise ValueError("action given for unknown morphism %r" % m)

    def _shape(self, m):
        s, d = self.cat.src_of(m), self.cat.dst_of(m)
        if self.side == "left":
            return self.dims[d], self.dims[s]
        return self.dims[s], self.dims[d]

    @classmethod
    def build(cls, cat, side, dims, action=None) -> "CatModule":
        """Construct with omitted actions filled in as zero matrices and
        omitted identity actions as identities."""
        dims_full = {o: int(dims.get(o, 0)) for o in cat.objects}
        act = dict(action or {})
        for o in cat.objects:
            e = cat.identity_of(o)
            if e not in act:
                act[e] = ExactMatrix.identity(dims_full[o])
        for m in cat.morphisms:
            if m not in act:
                s, d = cat.src_of(m), cat.dst_of(m)
                if side == "left":
                    act[m] = ExactMatrix.zeros(dims_full[d], dims_full[s])
                else:
                    act[m] = ExactMatrix.zeros(dims_full[s], dims_full[d])
        return cls(cat, side, dims_full, act)

    def act(self, m: str) -> ExactMatrix:
        return self.action[m]

    def dim(self, i: str) -> int:
        return self.dims[i]

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return all(d == 0 for d in self.dims.values())

    def support(self):
        """Objects with a nonzero graded piece, sorted."""
        return [o for o in self.cat.objects if self.dims[o] > 0]

    def validate(self):
        """Check identity and composition laws; return a list of violations."""
        bad = []
        cat = self.cat
        for o in cat.objects:
            if self.action[cat.identity_of(o)] != ExactMatrix.identity(self.dims[o]):
                bad.append("identity of %r does not act as the identity matrix" % o)
        for g in cat.morphisms:
            for f in cat.morphisms:
                if cat.dst_of(f) != cat.src_of(g):
                    continue
                gf = cat.compose(g, f)
                if self.side == "left":
                    expect = self.action[g] @ self.action[f]
                else:
                    expect = self.action[f] @ self.action[g]
                if self.action[gf] != expect:
                    bad.append("action is not functorial on (%r, %r)" % (g, f))
        return bad

    def dualize(self) -> "CatModule":
        """The standard dual: same dimensions, transposed actions, other side."""
        other = "right" if self.side == "left" else "left"
        return CatModule(
            self.cat,
            other,
            dict(self.dims),
            {m: mat.transpose() for m, mat in self.action.items()},
        )

    def __eq__(self, other):
        if not isinstance(other, CatModule):
            return NotImplemented
        return (
            self.cat.objects == other.cat.objects
            and self.cat.morphisms == other.cat.morphisms
            and self.side == other.side
            and self.dims == other.dims
            and self.action == other.action
        )

    def __repr__(self):
        return "CatModule(%s, dims=%r)" % (self.side, {o: d for o, d in self.dims.items() if d})

    def to_dict(self, category="inline") -> dict:
        """Serialize; category is the inline dict or a reference string."""
        act = {}
        for m, mat in self.action.items():
            if mat.rows and mat.cols:
                act[m] = mat.to_strings()
            else:
                act[m] = {"shape": [mat.rows, mat.cols]}
        return {
            "category": self.cat.to_dict() if category == "inline" else category,
            "side": self.side,
            "dims": {o: self.dims[o] for o in self.cat.objects},
            "action": act,
        }

    @classmethod
    def from_dict(cls, d: dict, cat: FiniteEICategory | None = None) -> "CatModule":
        if cat is None:
            embedded = d.get("category")
            if not isinstance(embedded, dict):
                raise ValueError("module data has no inline category; pass one explicitly")
            cat = FiniteEICategory.from_dict(embedded)
        elif isinstance(d.get("category"), dict):
            emb = d["category"]
            emb_objects = sorted(emb.get("objects", []))
            emb_morphs = sorted(m["id"] for m in emb.get("morphisms", []))
            if emb_objects != cat.objects or emb_morphs != cat.morphisms:
                raise ValueError("module's embedded category disagrees with the given one")
        side = d.get("side")
        dims = {o: int(v) for o, v in d.get("dims", {}).items()}
        action = {}
        for m, spec in d.get("action", {}).items():
            if m not in cat._midx:
                raise ValueError("action for unknown morphism %r" % m)
            s, dst = cat.src_of(m), cat.dst_of(m)
            if side == "left":
                shape = (dims.get(dst, 0), dims.get(s, 0))
            else:
                shape = (dims.get(s, 0), dims.get(dst, 0))
            if isinstance(spec, dict):
                got = tuple(spec.get("shape", ()))
                if got != shape:
                    raise ValueError("explicit shape for %r disagrees with dims" % m)
                action[m] = ExactMatrix.zeros(*shape)
            else:
                action[m] = ExactMatrix.from_strings(shape[0], shape[1], spec)
        return cls(cat, side, dims, action)


def zero_module(cat, side) -> CatModule:
    return CatModule.build(cat, side, {})


def support(v: CatModule):
    return v.support()


def validate_module(v: CatModule):
    return v.validate()


def dualize(v: CatModule) -> CatModule:
    return v.dualize()


def derive_actions(cat, side, dims, gen_actions):
    """Fill a full action dict from matrices on the generating morphisms.

    Identities act as identity matrices; every other morphism is a planned
    composite of generators, so its action is forced by functoriality.  The
    result is exactly functorial provided the generator matrices are
    mutually consistent (which holds for all callers here, where they come
    from solved naturality systems or restrictions of valid modules).
    """
    action = {}
    for o in cat.objects:
        action[cat.identity_of(o)] = ExactMatrix.identity(dims.get(o, 0))
    for m in cat.generating_morphisms():
        action[m] = gen_actions[m]
    for m, g, f in cat.composition_plan():
        if side == "left":
            action[m] = action[g] @ action[f]
        else:
            action[m] = action[f] @ action[g]
    return action


def concentrated_module(cat, side, i, rep=None) -> CatModule:
    """A module living at a single object, given by an action of its
    endomorphisms.

    rep maps each endomorphism id at i to a matrix; omitted it means the
    one-dimensional trivial action.  All other actions are zero, which is
    functorial because a composite landing back at i must factor entirely
    through endomorphisms of i (endpoints sandwich every intermediate
    object between i and i).  For a right module the rep must satisfy
    rep(g after f) = rep(f) @ rep(g); for a left one the usual order.
    """
    if rep is None:
        rep = {g: ExactMatrix.identity(1) for g in cat.aut(i)}
    d = rep[cat.identity_of(i)].rows
    action = {g: rep[g] for g in cat.aut(i)}
    return CatModule.build(cat, side, {i: d}, action)


def free_module(cat: FiniteEICategory, side: str, i: str) -> CatModule:
    """The representable module at object i.

    Left: graded piece at j is spanned by hom(i, j), morphisms acting by
    postcomposition.  Right: piece at j is hom(j, i), acting by
    precomposition.  Actions are 0/1 matrices in the id-ordered bases.
    """
    if i not in cat._oidx:
        raise ValueError("unknown object %r" % i)
    if side == "left":
        bases = {j: cat.hom(i, j) for j in cat.objects}
    else:
        bases = {j: cat.hom(j, i) for j in cat.objects}
    pos = {j: {m: k for k, m in enumerate(b)} for j, b in bases.items()}
    dims = {j: len(b) for j, b in bases.items()}
    action = {}
    for f in cat.morphisms:
        a, b = cat.src_of(f), cat.dst_of(f)
        if side == "left":
            mat = ExactMatrix.zeros(dims[b], dims[a])
            for c, u in enumerate(bases[a]):
                mat.data[pos[b][cat.compose(f, u)]][c] = Q1
        else:
            mat = ExactMatrix.zeros(dims[a], dims[b])
            for c, u in enumerate(bases[b]):
                mat.data[pos[a][cat.compose(u, f)]][c] = Q1
        action[f] = mat
    return CatModule(cat, side, dims, action)


class ModuleHom:
    """A natural transformation between modules on the same side.

    blocks[i] maps source(i) -> target(i); shape (target.dims[i],
    source.dims[i]).  Naturality on every morphism follows from naturality
    on a generating set, which is what validate() checks by default.
    """

    def __init__(self, source: CatModule, target: CatModule, blocks):
        if source.cat is not target.cat and source.cat.morphisms != target.cat.morphisms:
            raise ValueError("source and target live over different categories")
        if source.side != target.side:
            raise ValueError("source and target are on different sides")
        self.source = source
        self.target = target
        self.blocks = {}
        for o in source.cat.objects:
            mat = blocks.get(o)
            if mat is None:
                mat = ExactMatrix.zeros(target.dims[o], source.dims[o])
            if (mat.rows, mat.cols) != (target.dims[o], source.dims[o]):
                raise ValueError("block at %r has the wrong shape" % o)
            self.blocks[o] = mat

    @classmethod
    def identity(cls, v: CatModule) -> "ModuleHom":
        return cls(v, v, {o: ExactMatrix.identity(v.dims[o]) for o in v.cat.objects})

    @classmethod
    def zero(cls, source: CatModule, target: CatModule) -> "ModuleHom":
        return cls(source, target, {})

    def block(self, i: str) -> ExactMatrix:
        return self.blocks[i]

    def validate(self, exhaustive=False):
        """Check naturality; on generators by default, all morphisms if asked."""
        bad = []
        cat = self.source.cat
        morphs = cat.morphisms if exhaustive else cat.generating_morphisms()
        for f in morphs:
            a, b = cat.src_of(f), cat.dst_of(f)
            if self.source.side == "left":
                lhs = self.target.act(f) @ self.blocks[a]
                rhs = self.blocks[b] @ self.source.act(f)
            else:
                lhs = self.blocks[a] @ self.source.act(f)
                rhs = self.target.act(f) @ self.blocks[b]
            if lhs != rhs:
                bad.append("naturality fails at %r" % f)
        return bad

    def compose(self, other: "ModuleHom") -> "ModuleHom":
        """self after other."""
        if other.target is not self.source and other.target != self.source:
            raise ValueError("composition endpoint mismatch")
        return ModuleHom(
            other.source,
            self.target,
            {o: self.blocks[o] @ other.blocks[o] for o in self.blocks},
        )

    def __add__(self, other: "ModuleHom") -> "ModuleHom":
        return ModuleHom(
            self.source, self.target, {o: self.blocks[o] + other.blocks[o] for o in self.blocks}
        )

    def __sub__(self, other: "ModuleHom") -> "ModuleHom":
        return ModuleHom(
            self.source, self.target, {o: self.blocks[o] - other.blocks[o] for o in self.blocks}
        )

    def scale(self, s) -> "ModuleHom":
        return ModuleHom(self.source, self.target, {o: m.scale(s) for o, m in self.blocks.items()})

    def __eq__(self, other):
        if not isinstance(other, ModuleHom):
            return NotImplemented
        return self.blocks == other.blocks

    def dualize(self) -> "ModuleHom":
        """The transposed map between the dual modules (direction reverses)."""
        return ModuleHom(
            self.target.dualize(),
            self.source.dualize(),
            {o: m.transpose() for o, m in self.blocks.items()},
        )

    def rank_at(self, i: str) -> int:
        return self.blocks[i].rank()

    def is_mono(self) -> bool:
        return all(m.rank() == m.cols for m in self.blocks.values())

    def is_epi(self) -> bool:
        return all(m.rank() == m.rows for m in self.blocks.values())

    def is_iso(self) -> bool:
        return all(m.rows == m.cols and m.rank() == m.rows for m in self.blocks.values())

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.blocks.values())

    def to_dict(self) -> dict:
        out = {}
        for o, mat in self.blocks.items():
            if mat.rows and mat.cols:
                out[o] = mat.to_strings()
            else:
                out[o] = {"shape": [mat.rows, mat.cols]}
        return {"blocks": out}

    @classmethod
    def from_dict(cls, d: dict, source: CatModule, target: CatModule) -> "ModuleHom":
        blocks = {}
        for o, spec in d.get("blocks", {}).items():
            shape = (target.dims[o], source.dims[o])
            if isinstance(spec, dict):
                if tuple(spec.get("shape", ())) != shape:
                    raise ValueError("block shape at %r disagrees with dims" % o)
                blocks[o] = ExactMatrix.zeros(*shape)
            else:
                blocks[o] = ExactMatrix.from_strings(shape[0], shape[1], spec)
        return cls(source, target, blocks)

    def __repr__(self):
        return "ModuleHom(%r -> %r)" % (self.source, self.target)


# -- hom spaces --------------------------------------------------------------


def _hom_layout(source: CatModule, target: CatModule):
    """Flattening plan for maps source -> target: (object, rows, cols,
    offset) per object where both sides are nonzero, in object order,
    blocks row major."""
    layout = []
    total = 0
    for o in source.cat.objects:
        r, c = target.dims[o], source.dims[o]
        if r > 0 and c > 0:
            layout.append((o, r, c, total))
            total += r * c
    return layout, total


def _flatten_hom(hom: ModuleHom, layout, total):
    vec = [Q0] * total
    for o, rows, cols, off in layout:
        data = hom.blocks[o].data
        k = off
        for r in range(rows):
            row = data[r]
            for c in range(cols):
                vec[k] = row[c]
                k += 1
    return vec


class HomSpace:
    """All natural transformations source -> target, as explicit data.

    basis is a canonical list of ModuleHoms.  Internally a hom is flattened
    to a vector laid out object by object (in object order, blocks row
    major, objects where either side is 0-dimensional skipped).  The basis
    comes from the reduced echelon kernel of the naturality constraints, so
    each basis vector is 1 at "its" free coordinate and 0 at the others;
    coords() therefore just reads those coordinates off (and verifies
    membership unless told not to).
    """

    def __init__(self, source: CatModule, target: CatModule, kernel, free_cols, layout, total):
        self.source = source
        self.target = target
        self.kernel = kernel
        self.free_cols = free_cols
        self.layout = layout
        self.total = total
        self.basis = [self.unflatten(kernel.column(k)) for k in range(kernel.cols)]

    @property
    def dim(self) -> int:
        return self.kernel.cols

    def flatten(self, hom: ModuleHom):
        return _flatten_hom(hom, self.layout, self.total)

    def unflatten(self, vec) -> ModuleHom:
        blocks = {}
        for o, rows, cols, off in self.layout:
            blocks[o] = ExactMatrix(
                rows, cols, [list(vec[off + r * cols : off + (r + 1) * cols]) for r in range(rows)]
            )
        return ModuleHom(self.source, self.target, blocks)

    def coords(self, hom: ModuleHom, verify=True):
        """Coordinates of hom in the canonical basis."""
        vec = self.flatten(hom)
        cs = [vec[c] for c in self.free_cols]
        if verify:
            recon = self.kernel.apply(cs)
            if recon != vec:
                raise ValueError("map is not in the hom space")
        return cs

    def from_coords(self, cs) -> ModuleHom:
        if len(cs) != self.dim:
            raise ValueError("coordinate length mismatch")
        return self.unflatten(self.kernel.apply([Q(c) for c in cs]))


def hom_space(v: CatModule, w: CatModule) -> HomSpace:
    """Solve the naturality system for maps v -> w.

    Constraints are imposed for a generating set of morphisms only; squares
    for composites follow from squares for their factors, so the solution
    set is the full hom space whenever both modules are valid.
    """
    if v.cat.morphisms != w.cat.morphisms or v.cat.objects != w.cat.objects:
        raise ValueError("modules live over different categories")
    if v.side != w.side:
        raise ValueError("modules are on different sides")
    cat = v.cat
    layout, total = _hom_layout(v, w)
    offsets = {o: off for o, _, _, off in layout}
    left = v.side == "left"

    def rows():
        for f in cat.generating_morphisms():
            a, b = cat.src_of(f), cat.dst_of(f)
            wf = w.act(f).data
            vf = v.act(f).data
            if left:
                # w(f) @ block_a - block_b @ v(f) = 0, shape (w[b], v[a])
                if w.dims[b] == 0 or v.dims[a] == 0:
                    continue
                off_a = offsets.get(a)
                off_b = offsets.get(b)
                va, vb = v.dims[a], v.dims[b]
                for r in range(w.dims[b]):
                    for c in range(v.dims[a]):
                        row = {}
                        if off_a is not None:
                            base = off_a + c
                            wrow = wf[r]
                            for k in range(w.dims[a]):
                                x = wrow[k]
                                if x:
                                    row[base + k * va] = x
                        if off_b is not None:
                            base = off_b + r * vb
                            for k in range(vb):
                                x = vf[k][c]
                                if x:
                                    j = base + k
                                    nv = row.get(j, Q0) - x
                                    if nv:
                                        row[j] = nv
                                    else:
                                        row.pop(j, None)
                        if row:
                            yield row
            else:
                # block_a @ v(f) - w(f) @ block_b = 0, shape (w[a], v[b])
                if w.dims[a] == 0 or v.dims[b] == 0:
                    continue
                off_a = offsets.get(a)
                off_b = offsets.get(b)
                va, vb = v.dims[a], v.dims[b]
                for r in range(w.dims[a]):
                    for c in range(v.dims[b]):
                        row = {}
                        if off_a is not None:
                            base = off_a + r * va
                            for k in range(va):
                                x = vf[k][c]
                                if x:
                                    row[base + k] = x
                        if off_b is not None:
                            base = off_b + c
                            wrow = wf[r]
                            for k in range(w.dims[b]):
                                x = wrow[k]
                                if x:
                                    j = base + k * vb
                                    nv = row.get(j, Q0) - x
                                    if nv:
                                        row[j] = nv
                                    else:
                                        row.pop(j, None)
                        if row:
                            yield row

    kernel, _, free_cols = kernel_of_rows(rows(), total)
    return HomSpace(v, w, kernel, free_cols, layout, total)


def hom_basis(v: CatModule, w: CatModule):
    """Canonical basis of the space of maps v -> w."""
    return hom_space(v, w).basis


# -- submodules, quotients, sums ---------------------------------------------


def direct_sum(cat, side, mods):
    """Direct sum with its canonical inclusions and projections."""
    if not mods:
        return zero_module(cat, side), [], []
    for m in mods:
        if m.cat.morphisms != cat.morphisms or m.side != side:
            raise ValueError("direct sum of incompatible modules")
    dims = {o: sum(m.dims[o] for m in mods) for o in cat.objects}
    action = {f: block_diag([m.act(f) for m in mods]) for f in cat.morphisms}
    total = CatModule(cat, side, dims, action)
    incls = []
    projs = []
    for k, m in enumerate(mods):
        inc_blocks = {}
        proj_blocks = {}
        for o in cat.objects:
            before = sum(mm.dims[o] for mm in mods[:k])
            inc = ExactMatrix.zeros(dims[o], m.dims[o])
            prj = ExactMatrix.zeros(m.dims[o], dims[o])
            for t in range(m.dims[o]):
                inc.data[before + t][t] = Q1
                prj.data[t][before + t] = Q1
            inc_blocks[o] = inc
            proj_blocks[o] = prj
        incls.append(ModuleHom(m, total, inc_blocks))
        projs.append(ModuleHom(total, m, proj_blocks))
    return total, incls, projs


def _complement_coords(span_rows, dim):
    """Projection/section pair for the quotient of k^dim by a spanned subspace.

    span_rows: list of vectors (lists) spanning the subspace.  Returns
    (proj, sect) with proj @ sect = identity on the quotient coordinates,
    which are the reduced-echelon free coordinates of the span.
    """
    data = [list(r) for r in span_rows]
    pivots = _rref(data, len(data), dim)
    pivset = set(pivots)
    free = [c for c in range(dim) if c not in pivset]
    proj = ExactMatrix.zeros(len(free), dim)
    for k, fc in enumerate(free):
        proj.data[k][fc] = Q1
        for t, pc in enumerate(pivots):
            v = data[t][fc]
            if v:
                proj.data[k][pc] = -v
    sect = ExactMatrix.zeros(dim, len(free))
    for k, fc in enumerate(free):
        sect.data[fc][k] = Q1
    return proj, sect


def submodule_spanned(v: CatModule, seeds):
    """The submodule generated by seed vectors.

    seeds: list of (object id, vector) pairs, each vector of length
    dims[object].  The span closure applies every morphism's action once,
    which suffices because actions compose.  Returns (submodule, inclusion).
    """
    cat = v.cat
    vectors = {o: [] for o in cat.objects}
    for o, vec in seeds:
        if len(vec) != v.dims[o]:
            raise ValueError("seed at %r has the wrong length" % o)
        vec = [Q(x) for x in vec]
        vectors[o].append(vec)
        for f in cat.morphisms:
            a, b = cat.src_of(f), cat.dst_of(f)
            if v.side == "left" and a == o:
                vectors[b].append(v.act(f).apply(vec))
            elif v.side == "right" and b == o:
                vectors[a].append(v.act(f).apply(vec))
    bases = {}
    for o in cat.objects:
        data = [vec[:] for vec in vectors[o]]
        pivots = _rref(data, len(data), v.dims[o])
        bases[o] = ExactMatrix(
            v.dims[o],
            len(pivots),
            [[data[t][r] for t in range(len(pivots))] for r in range(v.dims[o])],
        )
    dims = {o: bases[o].cols for o in cat.objects}
    gen_actions = {}
    for f in cat.generating_morphisms():
        a, b = cat.src_of(f), cat.dst_of(f)
        if v.side == "left":
            sol = solve(bases[b], v.act(f) @ bases[a])
        else:
            sol = solve(bases[a], v.act(f) @ bases[b])
        if sol is None:
            raise AssertionError("span closure is not action stable")
        gen_actions[f] = sol.particular
    sub = CatModule(cat, v.side, dims, derive_actions(cat, v.side, dims, gen_actions))
    incl = ModuleHom(sub, v, bases)
    return sub, incl


def quotient_by_subspaces(v: CatModule, span_rows):
    """Quotient of v by an action-stable family of subspaces.

    span_rows: dict object -> list of vectors spanning the subspace there.
    Returns (quotient, projection).  The caller guarantees stability; the
    induced actions are then forced and exactly functorial.
    """
    cat = v.cat
    projs = {}
    sects = {}
    for o in cat.objects:
        proj, sect = _complement_coords(span_rows.get(o, []), v.dims[o])
        projs[o] = proj
        sects[o] = sect
    dims = {o: projs[o].rows for o in cat.objects}
    gen_actions = {}
    for f in cat.generating_morphisms():
        a, b = cat.src_of(f), cat.dst_of(f)
        if v.side == "left":
            gen_actions[f] = projs[b] @ (v.act(f) @ sects[a])
        else:
            gen_actions[f] = projs[a] @ (v.act(f) @ sects[b])
    quot = CatModule(cat, v.side, dims, derive_actions(cat, v.side, dims, gen_actions))
    proj_hom = ModuleHom(v, quot, projs)
    return quot, proj_hom


def kernel_module(h: ModuleHom):
    """The kernel of a module map, with its inclusion."""
    v = h.source
    cat = v.cat
    bases = {o: h.blocks[o].kernel_basis() for o in cat.objects}
    dims = {o: bases[o].cols for o in cat.objects}
    gen_actions = {}
    for f in cat.generating_morphisms():
        a, b = cat.src_of(f), cat.dst_of(f)
        if v.side == "left":
            sol = solve(bases[b], v.act(f) @ bases[a])
        else:
            sol = solve(bases[a], v.act(f) @ bases[b])
        if sol is None:
            raise AssertionError("kernel is not action stable; map is not natural")
        gen_actions[f] = sol.particular
    ker = CatModule(cat, v.side, dims, derive_actions(cat, v.side, dims, gen_actions))
    incl = ModuleHom(ker, v, bases)
    return ker, incl


# -- restriction and extension ------------------------------------------------


def _check_full_subcategory(sub: FiniteEICategory, cat: FiniteEICategory):
    for o in sub.objects:
        if o not in cat._oidx:
            raise ValueError("subcategory object %r is not in the category" % o)
    for i in sub.objects:
        for j in sub.objects:
            if sub.hom(i, j) != cat.hom(i, j):
                raise ValueError(
                    "subcategory is not the full subcategory on its objects (hom %r -> %r)"
                    % (i, j)
                )


def restrict(v: CatModule, subcat: FiniteEICategory) -> CatModule:
    """Restrict a module to a full subcategory (same ids)."""
    _check_full_subcategory(subcat, v.cat)
    dims = {o: v.dims[o] for o in subcat.objects}
    action = {m: v.action[m] for m in subcat.morphisms}
    return CatModule(subcat, v.side, dims, action)


def extend_by_zero(v: CatModule, cat: FiniteEICategory) -> CatModule:
    """Extend a module on a full subcategory by zero to the whole category.

    Well-defined when no composite of two morphisms with endpoints inside
    the subcategory passes through an object outside it; a right-closed
    subcategory always qualifies, as does a single maximal object.
    """
    sub = v.cat
    _check_full_subcategory(sub, cat)
    inside = set(sub.objects)
    for b in cat.objects:
        if b in inside:
            continue
        srcs = [a for a in inside if cat.hom(a, b)]
        dsts = [c for c in inside if cat.hom(b, c)]
        if srcs and dsts:
            raise ValueError(
                "zero extension is ill-defined: composites pass through %r" % b
            )
    dims = {o: v.dims.get(o, 0) for o in cat.objects}
    action = {}
    for m in cat.morphisms:
        if m in v.action:
            action[m] = v.action[m]
        else:
            a, b = cat.src_of(m), cat.dst_of(m)
            if v.side == "left":
                action[m] = ExactMatrix.zeros(dims[b], dims[a])
            else:
                action[m] = ExactMatrix.zeros(dims[a], dims[b])
    return CatModule(cat, v.side, dims, action)


# -- induction and covers ------------------------------------------------------


def tensor_induce(w: CatModule, i: str):
    """Induce from the endomorphism algebra at i: the graded piece w(i),
    tensored over the group algebra of aut(i) with the representable at i.

    For a right module the result at j is w(i) (x) span hom(j, i) modulo
    the relations (x.g (x) a) - (x (x) g.a) for g in aut(i); morphisms act
    by precomposition on the second leg.  For a left module the mirrored
    construction applies.  Returns (induced module, multiplication map to w),
    the multiplication map sending x (x) a to x.a.
    """
    cat = w.cat
    if i not in cat._oidx:
        raise ValueError("unknown object %r" % i)
    d = w.dims[i]
    right = w.side == "right"
    hom_to = {j: (cat.hom(j, i) if right else cat.hom(i, j)) for j in cat.objects}
    pos = {j: {m: k for k, m in enumerate(b)} for j, b in hom_to.items()}
    raw_dims = {j: d * len(hom_to[j]) for j in cat.objects}

    def raw_index(j, x, a_pos):
        # basis pairs (x, a): x over w(i), a over the hom set at j
        return x * len(hom_to[j]) + a_pos

    aut_gens = [g for g in cat.generating_morphisms() if cat.src_of(g) == cat.dst_of(g) == i]
    rel_rows = {j: [] for j in cat.objects}
    for j in cat.objects:
        hs = hom_to[j]
        if not hs or d == 0:
            continue
        for g in aut_gens:
            wg = w.act(g).data  # aut action on w(i), both sides map w(i) -> w(i)
            for x in range(d):
                for ap, a in enumerate(hs):
                    row = [Q0] * raw_dims[j]
                    # the action of g on w(i) is an endo block on either side
                    for y in range(d):
                        c = wg[y][x]
                        if c:
                            row[raw_index(j, y, ap)] = row[raw_index(j, y, ap)] + c
                    # minus x (x) (g composed into the hom leg)
                    ga = cat.compose(g, a) if right else cat.compose(a, g)
                    row[raw_index(j, x, pos[j][ga])] = row[raw_index(j, x, pos[j][ga])] - Q1
                    rel_rows[j].append(row)
    projs = {}
    sects = {}
    for j in cat.objects:
        proj, sect = _complement_coords(rel_rows[j], raw_dims[j])
        projs[j] = proj
        sects[j] = sect
    dims = {j: projs[j].rows for j in cat.objects}

    def raw_action(f):
        a, b = cat.src_of(f), cat.dst_of(f)
        if right:
            # raw(b) -> raw(a): (x, u) -> (x, u after f)
            mat = ExactMatrix.zeros(raw_dims[a], raw_dims[b])
            for x in range(d):
                for up, u in enumerate(hom_to[b]):
                    mat.data[raw_index(a, x, pos[a][cat.compose(u, f)])][raw_index(b, x, up)] = Q1
        else:
            # raw(a) -> raw(b): (u, x)... pairs are (x, u): (x, f after u)
            mat = ExactMatrix.zeros(raw_dims[b], raw_dims[a])
            for x in range(d):
                for up, u in enumerate(hom_to[a]):
                    mat.data[raw_index(b, x, pos[b][cat.compose(f, u)])][raw_index(a, x, up)] = Q1
        return mat

    gen_actions = {}
    for f in cat.generating_morphisms():
        a, b = cat.src_of(f), cat.dst_of(f)
        if right:
            gen_actions[f] = projs[a] @ (raw_action(f) @ sects[b])
        else:
            gen_actions[f] = projs[b] @ (raw_action(f) @ sects[a])
    induced = CatModule(cat, w.side, dims, derive_actions(cat, w.side, dims, gen_actions))
    mult_blocks = {}
    for j in cat.objects:
        raw_mult = ExactMatrix.zeros(w.dims[j], raw_dims[j])
        for ap, a in enumerate(hom_to[j]):
            wa = w.act(a)  # w(i) -> w(j) on either side
            for x in range(d):
                col = raw_index(j, x, ap)
                for r in range(w.dims[j]):
                    val = wa.data[r][x]
                    if val:
                        raw_mult.data[r][col] = val
        mult_blocks[j] = raw_mult @ sects[j]
    mult = ModuleHom(induced, w, mult_blocks)
    return induced, mult


def canonical_cover(v: CatModule):
    """The standard surjection onto v from a sum of induced modules.

    One induced summand per support object; the map is the sum of the
    multiplication maps.  Returns (P, pi).
    """
    cat = v.cat
    parts = [tensor_induce(v, i) for i in v.support()]
    total, incls, _ = direct_sum(cat, v.side, [t for t, _ in parts])
    blocks = {}
    for o in cat.objects:
        mats = [mult.blocks[o] for _, mult in parts]
        blocks[o] = hstack(mats) if mats else ExactMatrix.zeros(v.dims[o], 0)
    pi = ModuleHom(total, v, blocks)
    return total, pi


def find_isomorphism(v: CatModule, w: CatModule, seed=0, tries=25):
    """Search the hom space for an invertible element.

    Basis elements are tried first, then seeded random small-integer
    combinations.  Returns the isomorphism or None; None is an answer
    (no iso found), not an error.  A dimension mismatch short-circuits.
    """
    import random

    if any(v.dims[o] != w.dims[o] for o in v.cat.objects):
        return None
    if v.is_zero():
        return ModuleHom.zero(v, w)
    hs = hom_space(v, w)
    if hs.dim == 0:
        return None
    for h in hs.basis:
        if h.is_iso():
            return h
    rng = random.Random(seed)
    for _ in range(tries):
        cs = [Q(rng.randint(-3, 3)) for _ in range(hs.dim)]
        h = hs.from_coords(cs)
        if h.is_iso():
            return h
    return None


def is_torsion_free(v: CatModule):
    """Check that every morphism acts injectively.

    Returns (flag, witness morphism id or None); the witness is the first
    morphism in id order whose action matrix has a nontrivial kernel.
    """
    for m in v.cat.morphisms:
        mat = v.act(m)
        if mat.rank() < mat.cols:
            return False, m
    return True, None


def is_projective(v: CatModule):
    """Split test against the canonical cover.

    Returns (flag, section): section satisfies pi after section = identity
    when the flag is True, else None.
    """
    if v.is_zero():
        return True, ModuleHom.identity(v)
    p, pi = canonical_cover(v)
    hs = hom_space(v, p)
    if hs.dim == 0:
        return False, None
    # pi after sigma is linear in sigma: solve for coefficients on the basis
    layout, total = _hom_layout(v, v)
    cols = [_flatten_hom(pi.compose(h), layout, total) for h in hs.basis]
    target_vec = _flatten_hom(ModuleHom.identity(v), layout, total)
    a = ExactMatrix(total, len(cols), [[col[r] for col in cols] for r in range(total)])
    b = ExactMatrix(total, 1, [[x] for x in target_vec])
    sol = solve(a, b)
    if sol is None:
        return False, None
    section = hs.from_coords([sol.particular.data[k][0] for k in range(hs.dim)])
    return True, section


def is_injective(v: CatModule):
    """Injectivity via duality: v is injective iff its dual is projective.

    Returns (flag, witness); the witness is the dualized section, a
    retraction of the dual of the canonical cover of the dual.
    """
    flag, section = is_projective(v.dualize())
    if not flag:
        return False, None
    return True, section.dualize()


# -- chain complexes -----------------------------------------------------------


class ChainComplex:
    """A finite complex: terms[0] -> terms[1] -> ... with maps[s] from
    terms[s] to terms[s+1].  Degree s is the position in the list."""

    def __init__(self, side, terms, maps):
        if len(maps) != max(len(terms) - 1, 0):
            raise ValueError("a complex on %d terms needs %d maps" % (len(terms), len(terms) - 1))
        for t in terms:
            if t.side != side:
                raise ValueError("terms on mixed sides")
        for s, h in enumerate(maps):
            if h.source is not terms[s] and h.source != terms[s]:
                raise ValueError("map %d has the wrong source" % s)
            if h.target is not terms[s + 1] and h.target != terms[s + 1]:
                raise ValueError("map %d has the wrong target" % s)
        self.side = side
        self.terms = list(terms)
        self.maps = list(maps)

    def validate(self, exhaustive=False):
        """Naturality of the maps plus d after d = 0; list of violations."""
        bad = []
        for s, h in enumerate(self.maps):
            for msg in h.validate(exhaustive=exhaustive):
                bad.append("map %d: %s" % (s, msg))
        for s in range(len(self.maps) - 1):
            comp = self.maps[s + 1].compose(self.maps[s])
            if not comp.is_zero():
                bad.append("composite of maps %d and %d is nonzero" % (s, s + 1))
        return bad

    def to_dict(self) -> dict:
        cat = self.terms[0].cat if self.terms else None
        return {
            "side": self.side,
            "category": cat.to_dict() if cat else None,
            "degrees": list(range(len(self.terms))),
            "terms": [
                {"dims": dict(t.dims), "action": t.to_dict(category="shared")["action"]}
                for t in self.terms
            ],
            "maps": [h.to_dict() for h in self.maps],
        }

    @classmethod
    def from_dict(cls, d: dict, cat: FiniteEICategory | None = None) -> "ChainComplex":
        if cat is None:
            cat = FiniteEICategory.from_dict(d["category"])
        side = d["side"]
        terms = [
            CatModule.from_dict(
                {"category": None, "side": side, "dims": td["dims"], "action": td["action"]},
                cat=cat,
            )
            for td in d["terms"]
        ]
        maps = [
            ModuleHom.from_dict(hd, terms[s], terms[s + 1]) for s, hd in enumerate(d["maps"])
        ]
        return cls(side, terms, maps)


class ExactnessReport:
    """Homology dimensions of a complex, per position and object.

    The complex is padded with zero maps at both ends, so position 0 checks
    injectivity of the first map and the last position checks surjectivity
    of the last.  exact is True when every requested homology vanishes.
    """

    def __init__(self, homology):
        self.homology = homology  # position -> {object: dim}

    @property
    def exact(self) -> bool:
        return all(d == 0 for h in self.homology.values() for d in h.values())

    def to_dict(self) -> dict:
        return {
            "exact": self.exact,
            "homology": {str(s): dict(h) for s, h in self.homology.items()},
        }


def sequence_is_exact(cplx: ChainComplex, positions=None) -> ExactnessReport:
    """Homology of the complex at the given positions (default: all).

    At position s the homology dimension at an object equals
    dim ker(maps[s]) - rank(maps[s-1]) there, with zero maps off the ends.
    Assumes d after d = 0 (see ChainComplex.validate).
    """
    n = len(cplx.terms)
    if positions is None:
        positions = range(n)
    homology = {}
    objects = cplx.terms[0].cat.objects if cplx.terms else []
    for s in positions:
        if not 0 <= s < n:
            raise ValueError("position %d out of range" % s)
        h = {}
        for o in objects:
            dim_here = cplx.terms[s].dims[o]
            rank_out = cplx.maps[s].blocks[o].rank() if s < n - 1 else 0
            rank_in = cplx.maps[s - 1].blocks[o].rank() if s > 0 else 0
            h[o] = dim_here - rank_out - rank_in
        homology[s] = h
    return ExactnessReport(homology)
