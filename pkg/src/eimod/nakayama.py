"""The Nakayama functor for modules over a finite EI-category algebra.

For a left module V the construction runs in two moves: collect the maps
from V into each representable left module, then dualize.  The value at an
object i is the dual of the space of module maps V -> (free left module at
i); morphisms act by right multiplication on the free target, transposed.
The inverse functor runs the mirror route: dualize first, then collect
maps from the dual into the representable right modules, no transpose.

On projectives and injectives the two functors invert each other, and
together they form an adjoint pair.  The unit, counit, and the adjunction
bijection are produced as explicit block matrices by reshuffling one
3-index pairing; all bases are the canonical ones fixed by the hom-space
solver, so every output is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exactla import ExactMatrix, Q, Q0
from .repmod import (
    CatModule,
    ModuleHom,
    derive_actions,
    direct_sum,
    free_module,
    hom_space,
    is_injective,
    quotient_by_subspaces,
    submodule_spanned,
)


class NakayamaResult:
    """The output of one functor application, with its working data.

    input/output are the modules; spaces[i] is the solved space of maps
    whose dual (or not, for the inverse) gives output(i).  on_hom extends
    the construction to module maps; every image is recorded in hom_images
    so functoriality can be audited after the fact.
    """

    def __init__(self, input, output, spaces, inverse, dual_input=None):
        self.input = input
        self.output = output
        self.spaces = spaces
        self.inverse = inverse
        self.dual_input = dual_input
        self.hom_images = []

    def on_hom(self, phi: ModuleHom, target_result: "NakayamaResult") -> ModuleHom:
        """The induced map output -> target_result.output for phi between
        the two inputs.  Covariant on both routes."""
        if self.inverse != target_result.inverse:
            raise ValueError("cannot mix the functor and its inverse")
        if phi.source != self.input or phi.target != target_result.input:
            raise ValueError("map endpoints do not match the two results")
        cat = self.input.cat
        blocks = {}
        if not self.inverse:
            # precompose with phi: maps(V', free_i) -> maps(V, free_i), transposed
            for i in cat.objects:
                src_sp, dst_sp = self.spaces[i], target_result.spaces[i]
                cols = [
                    src_sp.coords(psi.compose(phi), verify=False) for psi in dst_sp.basis
                ]
                mat = ExactMatrix(
                    src_sp.dim, dst_sp.dim, [[col[r] for col in cols] for r in range(src_sp.dim)]
                )
                blocks[i] = mat.transpose()
        else:
            # precompose with the dual of phi, no transpose
            dphi = phi.dualize()
            for i in cat.objects:
                src_sp, dst_sp = self.spaces[i], target_result.spaces[i]
                cols = [
                    dst_sp.coords(psi.compose(dphi), verify=False) for psi in src_sp.basis
                ]
                blocks[i] = ExactMatrix(
                    dst_sp.dim, src_sp.dim, [[col[r] for col in cols] for r in range(dst_sp.dim)]
                )
        out = ModuleHom(self.output, target_result.output, blocks)
        self.hom_images.append((phi, out))
        return out


def _right_mult_hom(frees, cat, f) -> ModuleHom:
    """Right multiplication by f: i -> j as a map of free left modules,
    from the one at j to the one at i (basis element b goes to b after f)."""
    i, j = cat.src_of(f), cat.dst_of(f)
    blocks = {}
    for t in cat.objects:
        rows = cat.hom(i, t)
        cols = cat.hom(j, t)
        pos = {m: k for k, m in enumerate(rows)}
        mat = ExactMatrix.zeros(len(rows), len(cols))
        for c, b in enumerate(cols):
            mat.data[pos[cat.compose(b, f)]][c] = Q(1)
        blocks[t] = mat
    return ModuleHom(frees[j], frees[i], blocks)


def _left_mult_hom(frees, cat, f) -> ModuleHom:
    """Left multiplication by f: i -> j as a map of free right modules,
    from the one at i to the one at j (basis element a goes to f after a)."""
    i, j = cat.src_of(f), cat.dst_of(f)
    blocks = {}
    for t in cat.objects:
        rows = cat.hom(t, j)
        cols = cat.hom(t, i)
        pos = {m: k for k, m in enumerate(rows)}
        mat = ExactMatrix.zeros(len(rows), len(cols))
        for c, a in enumerate(cols):
            mat.data[pos[cat.compose(f, a)]][c] = Q(1)
        blocks[t] = mat
    return ModuleHom(frees[i], frees[j], blocks)


def nakayama(v: CatModule) -> NakayamaResult:
    """Apply the functor to a left module.

    output(i) = dual of the space of maps v -> (free left at i); for a
    generator f: i -> j the action is the transpose of the matrix of
    "postcompose with right multiplication by f" in the canonical bases.
    Composites are filled in along the category's composition plan, which
    is exact because the defining assignment is itself functorial.
    """
    if v.side != "left":
        raise ValueError("the functor takes left modules; dualize first if needed")
    cat = v.cat
    frees = {i: free_module(cat, "left", i) for i in cat.objects}
    spaces = {i: hom_space(v, frees[i]) for i in cat.objects}
    dims = {i: spaces[i].dim for i in cat.objects}
    gen_actions = {}
    for f in cat.generating_morphisms():
        i, j = cat.src_of(f), cat.dst_of(f)
        rf = _right_mult_hom(frees, cat, f)
        cols = [spaces[i].coords(rf.compose(psi), verify=False) for psi in spaces[j].basis]
        mat = ExactMatrix(dims[i], dims[j], [[col[r] for col in cols] for r in range(dims[i])])
        gen_actions[f] = mat.transpose()
    out = CatModule(cat, "left", dims, derive_actions(cat, "left", dims, gen_actions))
    return NakayamaResult(v, out, spaces, inverse=False)


def inverse_nakayama(u: CatModule) -> NakayamaResult:
    """Apply the inverse functor to a left module.

    output(i) = space of right-module maps (dual of u) -> (free right at
    i); for a generator f: i -> j the action is the matrix of "postcompose
    with left multiplication by f", untransposed.
    """
    if u.side != "left":
        raise ValueError("the inverse functor takes left modules; dualize first if needed")
    cat = u.cat
    du = u.dualize()
    frees = {i: free_module(cat, "right", i) for i in cat.objects}
    spaces = {i: hom_space(du, frees[i]) for i in cat.objects}
    dims = {i: spaces[i].dim for i in cat.objects}
    gen_actions = {}
    for f in cat.generating_morphisms():
        i, j = cat.src_of(f), cat.dst_of(f)
        lf = _left_mult_hom(frees, cat, f)
        cols = [spaces[j].coords(lf.compose(psi), verify=False) for psi in spaces[i].basis]
        gen_actions[f] = ExactMatrix(
            dims[j], dims[i], [[col[r] for col in cols] for r in range(dims[j])]
        )
    out = CatModule(cat, "left", dims, derive_actions(cat, "left", dims, gen_actions))
    return NakayamaResult(u, out, spaces, inverse=True, dual_input=du)


# -- the adjunction ----------------------------------------------------------
#
# Both directions reshuffle one pairing.  A map theta out of the image of
# the functor transposes objectwise into maps (dual of U)(i) -> maps(V,
# free_i); evaluating those at a vector of V(j) and reading the block at j
# produces, for each i, a block of a right-module map (dual of U) -> (free
# right at j).  Expressing that map in the canonical basis of the inverse
# route gives the transferred map V -> inverse(U).  The backward direction
# reads the same 3-index array in the other grouping.


def adjunction_forward(
    theta: ModuleHom, nu_res: NakayamaResult, inv_res: NakayamaResult
) -> ModuleHom:
    """Transfer theta: nu(V) -> U to the map V -> inverse(U)."""
    v = nu_res.input
    u = inv_res.input
    cat = v.cat
    if theta.source != nu_res.output or theta.target != u:
        raise ValueError("theta must run from the functor image of V to U")
    du = inv_res.dual_input
    blocks = {}
    for j in cat.objects:
        cols = []
        for c in range(v.dims[j]):
            chi_blocks = {}
            for i in cat.objects:
                nrows = len(cat.hom(i, j))
                bl = ExactMatrix.zeros(nrows, u.dims[i])
                th = theta.blocks[i].data
                for k, psi in enumerate(nu_res.spaces[i].basis):
                    pb = psi.block(j)
                    for a in range(nrows):
                        pv = pb.data[a][c]
                        if pv:
                            row = bl.data[a]
                            for xi in range(u.dims[i]):
                                t = th[xi][k]
                                if t:
                                    row[xi] = row[xi] + t * pv
                chi_blocks[i] = bl
            chi = ModuleHom(du, inv_res.spaces[j].target, chi_blocks)
            cols.append(inv_res.spaces[j].coords(chi, verify=False))
        blocks[j] = ExactMatrix(
            inv_res.output.dims[j], v.dims[j], [[col[r] for col in cols] for r in range(inv_res.output.dims[j])]
        )
    return ModuleHom(v, inv_res.output, blocks)


def adjunction_backward(
    eta: ModuleHom, nu_res: NakayamaResult, inv_res: NakayamaResult
) -> ModuleHom:
    """Transfer eta: V -> inverse(U) to the map nu(V) -> U."""
    v = nu_res.input
    u = inv_res.input
    cat = v.cat
    if eta.source != v or eta.target != inv_res.output:
        raise ValueError("eta must run from V to the inverse image of U")
    blocks = {}
    for i in cat.objects:
        cols = []
        for xi in range(u.dims[i]):
            t_blocks = {}
            for j in cat.objects:
                nrows = len(cat.hom(i, j))
                bl = ExactMatrix.zeros(nrows, v.dims[j])
                et = eta.blocks[j].data
                for m, psi in enumerate(inv_res.spaces[j].basis):
                    pb = psi.block(i)
                    for a in range(nrows):
                        pv = pb.data[a][xi]
                        if pv:
                            row = bl.data[a]
                            for c in range(v.dims[j]):
                                e = et[m][c]
                                if e:
                                    row[c] = row[c] + e * pv
                t_blocks[j] = bl
            tj = ModuleHom(v, nu_res.spaces[i].target, t_blocks)
            cols.append(nu_res.spaces[i].coords(tj, verify=False))
        mat = ExactMatrix(
            nu_res.output.dims[i], u.dims[i], [[col[r] for col in cols] for r in range(nu_res.output.dims[i])]
        )
        blocks[i] = mat.transpose()
    return ModuleHom(nu_res.output, u, blocks)


def unit(v: CatModule):
    """The canonical map V -> inverse(nu(V)).

    Returns (map, result for V, inverse result for nu(V)); the map is the
    forward transfer of the identity.
    """
    nu_res = nakayama(v)
    inv_res = inverse_nakayama(nu_res.output)
    eta = adjunction_forward(ModuleHom.identity(nu_res.output), nu_res, inv_res)
    return eta, nu_res, inv_res


def counit(u: CatModule):
    """The canonical map nu(inverse(U)) -> U.

    Returns (map, inverse result for U, result for inverse(U)); the map is
    the backward transfer of the identity.
    """
    inv_res = inverse_nakayama(u)
    nu_res = nakayama(inv_res.output)
    eps = adjunction_backward(ModuleHom.identity(inv_res.output), nu_res, inv_res)
    return eps, inv_res, nu_res


@dataclass
class AdjunctionReport:
    """Outcome of one adjunction comparison.

    lhs_dim counts maps nu(V) -> U, rhs_dim counts maps V -> inverse(U);
    matrix is the forward transfer written in the two canonical bases,
    bijective says whether it is invertible, and round_trip says whether
    transferring back recovers every basis element exactly.
    """

    lhs_dim: int
    rhs_dim: int
    matrix: ExactMatrix
    bijective: bool
    round_trip: bool

    @property
    def ok(self) -> bool:
        return self.lhs_dim == self.rhs_dim and self.bijective and self.round_trip

    def to_dict(self) -> dict:
        return {
            "lhs_dim": self.lhs_dim,
            "rhs_dim": self.rhs_dim,
            "matrix": self.matrix.to_strings(),
            "bijective": self.bijective,
            "round_trip": self.round_trip,
            "ok": self.ok,
        }


def adjunction_check(v: CatModule, u: CatModule) -> AdjunctionReport:
    """Compare the two hom-spaces of the adjunction and build the explicit
    bijection between them on the canonical bases."""
    nu_res = nakayama(v)
    inv_res = inverse_nakayama(u)
    lhs = hom_space(nu_res.output, u)
    rhs = hom_space(v, inv_res.output)
    cols = []
    round_trip = True
    for theta in lhs.basis:
        eta = adjunction_forward(theta, nu_res, inv_res)
        cols.append(rhs.coords(eta))
        back = adjunction_backward(eta, nu_res, inv_res)
        if back != theta:
            round_trip = False
    mat = ExactMatrix(rhs.dim, lhs.dim, [[col[r] for col in cols] for r in range(rhs.dim)])
    bijective = lhs.dim == rhs.dim and mat.rank() == lhs.dim
    return AdjunctionReport(lhs.dim, rhs.dim, mat, bijective, round_trip)


def triangle_identities(v: CatModule, u: CatModule):
    """Both triangle identities as exact matrix equations.

    First: the composite nu(V) -> nu(inverse(nu(V))) -> nu(V), built from
    the unit of V and the counit at nu(V), must be the identity.  Second:
    the composite inverse(U) -> inverse(nu(inverse(U))) -> inverse(U) from
    the unit at inverse(U) and the inverse image of the counit of U.
    Returns (first holds, second holds).
    """
    # first triangle, around v
    eta, nu_res, inv_res = unit(v)
    res2 = nakayama(inv_res.output)
    nu_eta = nu_res.on_hom(eta, res2)
    eps_at_nu = adjunction_backward(ModuleHom.identity(inv_res.output), res2, inv_res)
    first = eps_at_nu.compose(nu_eta) == ModuleHom.identity(nu_res.output)
    # second triangle, around u
    inv_res_u = inverse_nakayama(u)
    nu_res_u = nakayama(inv_res_u.output)
    eps_u = adjunction_backward(ModuleHom.identity(inv_res_u.output), nu_res_u, inv_res_u)
    inv_of_nu = inverse_nakayama(nu_res_u.output)
    eta2 = adjunction_forward(ModuleHom.identity(nu_res_u.output), nu_res_u, inv_of_nu)
    inv_eps = inv_of_nu.on_hom(eps_u, inv_res_u)
    second = inv_eps.compose(eta2) == ModuleHom.identity(inv_res_u.output)
    return first, second


def in_kernel(v: CatModule) -> bool:
    """True when the functor sends v to zero, that is when v admits no
    nonzero map to any representable left module."""
    if v.side != "left":
        raise ValueError("kernel membership is a left-module question here")
    cat = v.cat
    for i in cat.objects:
        if hom_space(v, free_module(cat, "left", i)).dim != 0:
            return False
    return True


def locally_self_injective_audit(cat) -> dict:
    """Check, object by object, whether the free left module there is
    injective; the overall verdict is the conjunction.

    Categories built from a single group pass (group algebras are
    self-injective); truncations of the injection families fail at the
    boundary, and the failing objects are listed as witnesses.
    """
    per = {}
    witnesses = []
    for i in cat.objects:
        ok, _ = is_injective(free_module(cat, "left", i))
        per[i] = ok
        if not ok:
            witnesses.append({"object": i, "module": "free left module at %s" % i})
    return {"verdict": all(per.values()), "objects": per, "witnesses": witnesses}


# -- finitely presented modules across truncation levels ---------------------


@dataclass
class Presentation:
    """A finitely presented left module given by free generators and
    relation vectors, portable across truncation levels.

    generators lists the level of each free generator.  Each relation
    lives at one level and is a linear combination of basis paths: a term
    names a generator index, a morphism id from that generator's level to
    the relation's level, and a rational coefficient.  Morphism ids in the
    generated families do not depend on the truncation level, so the same
    presentation builds a compatible module at every level at or above
    max_level().
    """

    family: str
    generators: list
    relations: list = field(default_factory=list)
    group: object = None
    q: int | None = None
    hom_cap: int = 1000

    def max_level(self) -> int:
        top = 0
        for g in self.generators:
            top = max(top, int(g))
        for rel in self.relations:
            top = max(top, int(rel["at"]))
        return top

    def instance_spec(self, level: int):
        from .instances import InstanceSpec

        return InstanceSpec(
            self.family, level, group=self.group, q=self.q, hom_cap=self.hom_cap
        )

    def module_at_level(self, level: int) -> CatModule:
        """Build the presented module over the truncation at the level."""
        if level < self.max_level():
            raise ValueError(
                "level %d is below the presentation's top level %d"
                % (level, self.max_level())
            )
        cat = self.instance_spec(level).generate()
        frees = [free_module(cat, "left", str(int(g))) for g in self.generators]
        total, incls, _ = direct_sum(cat, "left", frees)
        seeds = []
        for rel in self.relations:
            at = str(int(rel["at"]))
            vec = [Q0] * total.dims[at]
            for term in rel.get("terms", []):
                k = int(term["gen"])
                path = term["path"]
                if cat.src_of(path) != str(int(self.generators[k])) or cat.dst_of(path) != at:
                    raise ValueError("relation path %r has the wrong endpoints" % path)
                basis = cat.hom(cat.src_of(path), at)
                offset = sum(fr.dims[at] for fr in frees[:k])
                vec[offset + basis.index(path)] = vec[
                    offset + basis.index(path)
                ] + Q(term.get("coeff", "1"))
            seeds.append((at, vec))
        if not seeds:
            return total
        sub, sincl = submodule_spanned(total, seeds)
        span = {
            o: [sincl.blocks[o].column(k) for k in range(sincl.blocks[o].cols)]
            for o in cat.objects
        }
        quot, _ = quotient_by_subspaces(total, span)
        return quot


def stabilized_nakayama(pres: Presentation, level: int):
    """Apply the functor to a presented module at the given level and
    compare against level + 1.

    Returns (module at the given level, report).  The report's "stable"
    flag says whether every graded dimension of the answer agrees with the
    next level's answer across the support of the level answer; when it is
    false the caller should raise the level.
    """
    m_here = pres.module_at_level(level)
    m_next = pres.module_at_level(level + 1)
    nu_here = nakayama(m_here).output
    nu_next = nakayama(m_next).output
    supp = nu_here.support()
    stable = all(nu_here.dims[o] == nu_next.dims[o] for o in supp)
    report = {
        "level": level,
        "next_level": level + 1,
        "support": supp,
        "dims": {o: nu_here.dims[o] for o in nu_here.cat.objects},
        "next_dims": {o: nu_next.dims[o] for o in supp},
        "stable": stable,
    }
    return nu_here, report
