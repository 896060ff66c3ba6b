"""Computable strictification: models up to weak equivalence, and invariants.

The strictification of a simplicial set is not finitely presentable as a
colimit, but its homotopy type is: for 1-reduced input the nerve of the
crossed complex of the reduced chains is a model up to weak equivalence, and
in general the homotopy groups of the strictification are the fundamental
group, plus reduced homology of the universal cover from dimension 2 up.
Everything returned here is labeled as a model or an invariant, never as the
strictification on the nose.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chain import FGAbelianGroup, direct_sum, concentrated, homology, normalized_chains
from .crossed import CrossedComplex, u_cr
from .doldkan import gamma_is_coskeletal
from .errors import EnumerabilityError, InfiniteOrUnknownFundamentalGroup
from .presentations import GroupPresentation, abelianization, group_order_bounded
from .sset import (
    SimplicialSet,
    component_subcomplex,
    components,
    is_coskeletal,
    is_one_reduced,
    pi1_presentation,
    universal_cover,
)
from .tcomplex import TComplex, ndk_build, u_st


MODEL_LABEL = "weak-equivalence model of the strictification"


def strict_model_1reduced(X: SimplicialSet, dmax: int) -> TComplex:
    """Nerve of the crossed complex of the reduced chains of X.

    For finite coefficient data the nerve is materialized outright; when the
    chain groups are infinite the model is kept symbolic (the isomorphic
    abelian form), with the chain backend carrying all invariants.
    """
    if not is_one_reduced(X):
        raise ValueError("strict models require a 1-reduced input")
    A = normalized_chains(X, reduced=True)
    try:
        C = u_cr(A)
        if not isinstance(C, CrossedComplex):
            raise EnumerabilityError("bottom degrees not enumerable")
        model = ndk_build(C, dmax)
        model.chain_backend = A
        model.label = MODEL_LABEL
        return model
    except EnumerabilityError:
        model = u_st(A, dmax)
        model.label = MODEL_LABEL + " (symbolic)"
        return model


def model_homotopy_group(model: TComplex, n: int) -> FGAbelianGroup:
    """pi_n of an abelian-backed model = H_n of its chain backend."""
    if model.chain_backend is None:
        raise ValueError("model carries no chain backend")
    return homology(model.chain_backend, n)


def model_is_coskeletal(model: TComplex, m: int, dmax: int):
    """Unique sphere extensions above level m, by exact linear algebra."""
    if model.chain_backend is None:
        raise ValueError("model carries no chain backend")
    return gamma_is_coskeletal(model.chain_backend, m, dmax)


def plant_free_cell(model: TComplex, dim: int) -> TComplex:
    """The model with one extra nonthin nondegenerate cell in a dimension:
    a free generator with zero boundary added to the chain backend."""
    if model.chain_backend is None:
        raise ValueError("model carries no chain backend")
    planted = direct_sum(model.chain_backend,
                         concentrated(FGAbelianGroup(1), dim))
    out = TComplex(label=model.label + " + planted cell", chain_backend=planted)
    return out


def coskeletal_theorem_check(X: SimplicialSet, n_skeletal: int, dmax: int) -> bool:
    """For n-skeletal 1-reduced X, the strict model is (n+1)-coskeletal."""
    if any(d > n_skeletal and X.cells.get(d) for d in X.cells):
        raise ValueError(f"input is not {n_skeletal}-skeletal")
    if dmax <= n_skeletal + 1:
        raise ValueError("dmax must exceed the coskeletal level")
    model = strict_model_1reduced(X, min(dmax, n_skeletal + 2))
    ok, _ = model_is_coskeletal(model, n_skeletal + 1, dmax)
    return ok


@dataclass
class ComponentInvariants:
    basepoint: str
    pi1: GroupPresentation
    pi1_order: int | None
    pin: dict | None          # n -> FGAbelianGroup
    provenance: str


@dataclass
class StrictInvariants:
    pi0: int
    components: tuple

    def component_at(self, vertex: str) -> ComponentInvariants:
        for c in self.components:
            if c.basepoint == vertex:
                return c
        raise KeyError(vertex)


def strict_invariants(X: SimplicialSet, budget: int, degree_bound: int | None = None,
                      higher: bool = True) -> StrictInvariants:
    """pi_0 and pi_1 directly; from dimension 2 up, reduced homology of the
    input (1-reduced components) or of the universal cover (finite pi_1).

    Disconnected input is handled componentwise.  When ``higher`` is set and
    a cover cannot be certified, the error propagates.
    """
    from .errors import TruncationError

    comps = components(X)
    data_bound = X.data_bound()
    if degree_bound is None:
        bound = X.max_cell_dim() if data_bound is None else data_bound - 1
    else:
        bound = degree_bound
        # homology in degree n needs cells through n+1
        if data_bound is not None and bound > data_bound - 1:
            raise TruncationError(
                f"degree {bound} invariants need cells above the bound {data_bound}")
    out = []
    for comp in comps:
        v = comp[0]
        sub = component_subcomplex(X, v)
        pres = pi1_presentation(sub, v)
        order = group_order_bounded(pres, budget)
        pin = None
        provenance = ""
        if higher:
            if is_one_reduced(sub):
                A = normalized_chains(sub, reduced=True)
                pin = {n: homology(A, n) for n in range(2, bound + 1)}
                provenance = "reduced homology of input"
            else:
                cover = universal_cover(sub, budget)
                A = normalized_chains(cover.cover, reduced=True)
                pin = {n: homology(A, n) for n in range(2, bound + 1)}
                provenance = "homology of universal cover"
        out.append(ComponentInvariants(v, pres, order, pin, provenance))
    return StrictInvariants(len(comps), tuple(out))


@dataclass
class HigherHomotopyEntry:
    degree: int
    supplied: object
    strict: object
    kernel: object      # FGAbelianGroup, "supplied", or "undetermined"
    note: str


def higher_homotopy_report(X: SimplicialSet, known_pi: dict, bound: int,
                           budget: int = 100_000) -> list:
    """Per-degree comparison of caller-supplied homotopy groups with the
    strict invariants.

    Degrees 0 and 1 compare isomorphically (the unit is 1-connected).  From
    degree 2 up the two groups are reported side by side; the kernel is the
    whole supplied group when the strict side vanishes, and is undetermined
    without a supplied comparison map otherwise.
    """
    for n in range(bound + 1):
        if n not in known_pi:
            raise ValueError(f"missing supplied homotopy group in degree {n}")
    inv = strict_invariants(X, budget, degree_bound=bound)
    if inv.pi0 != 1:
        raise ValueError("higher homotopy reports are per connected component")
    comp = inv.components[0]
    report = [
        HigherHomotopyEntry(0, known_pi[0], inv.pi0, FGAbelianGroup(0),
                            "pi_0 is preserved"),
        HigherHomotopyEntry(1, known_pi[1], comp.pi1_order,
                            "trivial", "pi_1 maps isomorphically"),
    ]
    for n in range(2, bound + 1):
        strict = comp.pin[n]
        supplied = known_pi[n]
        if strict.is_trivial():
            kernel = supplied
            note = "strict side vanishes: kernel is the whole supplied group"
        else:
            kernel = "undetermined"
            note = "kernel needs a supplied comparison map"
        report.append(HigherHomotopyEntry(n, supplied, strict, kernel, note))
    return report


@dataclass
class UnitComparison:
    pi0_count: int
    ab_pi1: FGAbelianGroup
    h1: FGAbelianGroup
    ab_match: bool
    order: int | None
    verdict: str


def unit_comparison(X: SimplicialSet, budget: int = 100_000) -> UnitComparison:
    """Decidable proxies for the 1-connectedness of the unit.

    The fundamental group presentation is compared against the degree-1
    homology computed independently through the chain module (abelianization
    equality), plus a bounded order computation.  A full presentation
    isomorphism check is undecidable, so the verdict is "proxy-verified",
    never more.
    """
    comps = components(X)
    if len(comps) != 1:
        raise ValueError("unit comparison expects a connected complex")
    pres = pi1_presentation(X, comps[0][0])
    ab = abelianization(pres)
    h1 = homology(normalized_chains(X), 1)
    order = group_order_bounded(pres, budget)
    match = ab == h1
    return UnitComparison(
        pi0_count=1, ab_pi1=ab, h1=h1, ab_match=match, order=order,
        verdict="proxy-verified" if match else "mismatch")
