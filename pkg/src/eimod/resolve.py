"""Finite injective resolutions over a finite EI-category algebra.

The engine is a single cover step for right modules: over a right-closed
object scope, sum the induced modules from the automorphism-group values
and map them onto the module by multiplication.  The map is onto, it is
bijective at every maximal object of the scope, and its kernel therefore
lives strictly below the maximal objects.  Iterating shrinks the scope at
every round, so the chain of covers stops after fewer rounds than the
scope has objects.  Dualizing the resulting chain of projective covers of
the dual turns it into an injective resolution of the original module.
"""

from __future__ import annotations

from dataclasses import dataclass

from .repmod import (
    CatModule,
    ChainComplex,
    ModuleHom,
    direct_sum,
    dualize,
    hstack,
    is_injective,
    kernel_module,
    sequence_is_exact,
    tensor_induce,
)


@dataclass
class ResolutionStep:
    """One cover step 0 -> kernel -> induced -> module -> 0.

    scope is the right-closed object set the step works inside;
    next_scope is scope minus its maximal objects, and the kernel's
    support always lands inside it.  sequence packages the three modules
    with the inclusion and the onto map, already certified exact.
    """

    module: CatModule
    scope: list
    next_scope: list
    induced: CatModule
    onto: ModuleHom
    kernel: CatModule
    kernel_inclusion: ModuleHom
    sequence: ChainComplex


def resolution_step(w: CatModule, scope=None) -> ResolutionStep:
    """Cover a right module by induced modules over a right-closed scope.

    scope defaults to the downward closure of the support.  A scope that
    is not downward closed, or one missing part of the support, is
    rejected before any computation.
    """
    if w.side != "right":
        raise ValueError("the cover step runs on right modules; dualize first")
    cat = w.cat
    if scope is None:
        scope = cat.downward_closure(w.support())
    scope = sorted(set(scope))
    for o in scope:
        if o not in cat._oidx:
            raise ValueError("scope object %r is not in the category" % o)
    if cat.downward_closure(scope) != scope:
        raise ValueError("scope is not downward closed")
    missing = [o for o in w.support() if o not in set(scope)]
    if missing:
        raise ValueError("support leaks outside the scope at %r" % missing[0])
    maximal = set(cat.maximal_objects(scope))
    next_scope = [o for o in scope if o not in maximal]
    parts = [tensor_induce(w, i) for i in scope]
    induced, _, _ = direct_sum(cat, "right", [p for p, _ in parts])
    blocks = {}
    for o in cat.objects:
        mats = [mult.blocks[o] for _, mult in parts]
        blocks[o] = hstack(mats) if mats else None
    onto = ModuleHom(induced, w, {o: b for o, b in blocks.items() if b is not None})
    if not onto.is_epi():
        raise AssertionError("multiplication map failed to be onto")
    for i in maximal:
        if induced.dims[i] != w.dims[i] or onto.blocks[i].rank() != w.dims[i]:
            raise AssertionError("cover is not bijective at maximal object %r" % i)
    kernel, incl = kernel_module(onto)
    bad = [o for o in kernel.support() if o not in set(next_scope)]
    if bad:
        raise AssertionError("kernel support escaped below the maximal objects: %r" % bad)
    seq = ChainComplex("right", [kernel, induced, w], [incl, onto])
    if not sequence_is_exact(seq).exact:
        raise AssertionError("cover step sequence is not exact")
    return ResolutionStep(w, scope, next_scope, induced, onto, kernel, incl, seq)


def injective_resolution(u: CatModule) -> ChainComplex:
    """A finite injective resolution of a left module: the complex
    u -> term_1 -> ... -> term_n, exact, with every term past the first
    injective, of length strictly less than the scope size.

    An already injective input returns the identity complex u -> u.  The
    general case dualizes, iterates the cover step with a strictly
    shrinking scope, then dualizes the whole chain back.
    """
    if u.side != "left":
        raise ValueError("injective resolutions are built for left modules here")
    if u.is_zero():
        return ChainComplex("left", [u], [])
    flag, _ = is_injective(u)
    if flag:
        return ChainComplex("left", [u, u], [ModuleHom.identity(u)])
    cat = u.cat
    w = dualize(u)
    scope = cat.downward_closure(w.support())
    steps = []
    current = w
    while not current.is_zero():
        step = resolution_step(current, scope)
        steps.append(step)
        current = step.kernel
        if not current.is_zero() and len(step.next_scope) >= len(step.scope):
            raise AssertionError("scope failed to shrink")
        scope = step.next_scope
    descents = [steps[0].onto]
    for s in range(1, len(steps)):
        descents.append(steps[s - 1].kernel_inclusion.compose(steps[s].onto))
    duals = [d.dualize() for d in descents]
    terms = [u] + [m.target for m in duals]
    return ChainComplex("left", terms, duals)


def verify_resolution(cplx: ChainComplex) -> dict:
    """Certificate for an injective resolution candidate.

    Clauses: the maps are natural and compose to zero; the complex is
    exact at every position (with zero maps off both ends); every term
    past the first is injective; and the length stays under the size of
    the downward closure of the first term's support.  Failed clauses are
    itemized; a zero first term certifies vacuously.
    """
    failures = []
    complex_problems = cplx.validate()
    if complex_problems:
        failures.extend(complex_problems)
    report = sequence_is_exact(cplx)
    if not report.exact:
        failures.append("homology does not vanish everywhere")
    terms_injective = {}
    for s in range(1, len(cplx.terms)):
        ok, _ = is_injective(cplx.terms[s])
        terms_injective[s] = ok
        if not ok:
            failures.append("term %d is not injective" % s)
    head = cplx.terms[0] if cplx.terms else None
    length = len(cplx.terms) - 2
    if head is None or head.is_zero():
        scope_size = 0
        length_ok = True
    else:
        scope_size = len(head.cat.downward_closure(head.support()))
        length_ok = length < scope_size
        if not length_ok:
            failures.append(
                "length %d is not under the scope size %d" % (length, scope_size)
            )
    return {
        "pass": not failures,
        "failures": failures,
        "exact": report.exact,
        "homology": report.to_dict()["homology"],
        "terms_injective": {str(s): ok for s, ok in terms_injective.items()},
        "length": length,
        "scope_size": scope_size,
    }
