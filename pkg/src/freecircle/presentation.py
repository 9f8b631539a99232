"""Orbit-space cohomology read off the stable page.

For a free circle action the homotopy quotient is the orbit space, so the
stable page computes H*(X/G; Q) additively, and its multiplicative structure
gives the associated graded ring.  Products of representatives determine the
ring exactly at the graded level; anything below the leading filtration is an
undetermined rational parameter, which is why relations are emitted as
skeletons with parameter slots.  A slot is feasible iff its x-power is a
non-negative integer and its bidegree is supported on the stable page;
infeasible slots are forced to zero and say why.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .fiber import SpaceSignature, monomials_of_degree
from .linalg import Vec, ZERO, is_zero_vec
from .pages import EngineError, Page, certified_band, class_solver, vec_product
from .schedules import FreenessVerdict, check_freeness


class NotFreeError(EngineError):
    """Raised when an operation requires a free-consistent stable page."""


def betti_table(stable: Page) -> dict[int, int]:
    """dim H^k(X/G) = sum of stable dimensions along the anti-diagonal."""
    verdict = check_freeness(stable)
    if not verdict.free_consistent:
        raise NotFreeError(
            f"stable page is not free-consistent; witness bidegree "
            f"{verdict.witness}"
        )
    sig = stable.sig
    table = stable.total_dims(max_total=sig.top_degree - 1)
    return dict(sorted(table.items()))


def poincare_coefficients(table: dict[int, int]) -> list[int]:
    """Dense coefficient list of the Poincare polynomial."""
    if not table:
        return [0]
    top = max(table)
    return [table.get(k, 0) for k in range(top + 1)]


@dataclass(frozen=True)
class Generator:
    """A ring generator with its stable-page representative."""

    name: str
    degree: int  # cohomological degree; fiber degree for column-0 classes
    rep: Vec  # coordinates over monomials_of_degree(sig, degree) at column 0


@dataclass
class GeneratorSet:
    """x (the base class, degree 2) plus the column-0 survivors.

    x is the image of the base generator under the edge homomorphism; each
    fiber generator restricts to its representative under the fiber edge map
    by construction, since the representative is the (0, q) lift itself.
    Fiber generators are named y, w, z, then g4, g5, ... by increasing
    (degree, basis position).
    """

    sig: SpaceSignature
    x_exponent: int  # least e with x^e = 0; the annihilator polynomial Q(x)
    fiber: list[Generator]

    def by_name(self, name: str) -> Generator:
        for g in self.fiber:
            if g.name == name:
                return g
        raise KeyError(name)


_FIBER_NAMES = ("y", "w", "z")


def extract_generators(stable: Page) -> GeneratorSet:
    verdict = check_freeness(stable)
    if not verdict.free_consistent:
        raise NotFreeError("generators are extracted from free-consistent pages only")
    sig = stable.sig
    band = certified_band(sig, stable.window)
    e = 1 + max(
        (p // 2 for (p, q), vs in stable.basis.items() if q == 0 and p <= band and vs),
        default=0,
    )
    fiber = []
    idx = 0
    for (p, q) in sorted(stable.basis.keys(), key=lambda bd: (bd[1], bd[0])):
        if p != 0 or q == 0:
            continue
        for v in stable.basis[(p, q)]:
            name = _FIBER_NAMES[idx] if idx < len(_FIBER_NAMES) else f"g{idx + 1}"
            fiber.append(Generator(name, q, v))
            idx += 1
    return GeneratorSet(sig, e, fiber)


def line_truncation(stable: Page, gen: Generator) -> int:
    """Least k with x^k * gen dead on the stable page (within the band)."""
    band = certified_band(stable.sig, stable.window)
    for k in range(1, band // 2 + 1):
        solver = class_solver(stable, 2 * k, gen.degree)
        pc = solver.page_coords(gen.rep)
        if pc is None:
            raise EngineError(
                f"representative of {gen.name} is not a class at column {2 * k}"
            )
        if all(c == 0 for c in pc):
            return k
    raise EngineError(
        f"truncation of {gen.name} escapes the certified band; enlarge the window"
    )


def structure_constants(
    stable: Page, gens: GeneratorSet
) -> dict[tuple[str, str], dict[str, Fraction]]:
    """Graded-level products of generator representatives.

    The product of two column-0 survivors is again a surviving class (or
    zero) and decomposes over the generators of the product degree; the
    coefficients are exact.  Products whose degree escapes the certified
    band are rejected.
    """
    sig = stable.sig
    band = certified_band(sig, stable.window)
    out: dict[tuple[str, str], dict[str, Fraction]] = {}
    for i, gi in enumerate(gens.fiber):
        for gj in gens.fiber[i:]:
            q = gi.degree + gj.degree
            if q > band + sig.top_degree:
                raise EngineError("representative product escapes the certified band")
            _, prod = vec_product(sig, gi.degree, gi.rep, gj.degree, gj.rep)
            coeffs: dict[str, Fraction] = {}
            if q <= sig.top_degree and not is_zero_vec(prod):
                solver = class_solver(stable, 0, q)
                pc = solver.page_coords(prod)
                if pc is None:
                    raise EngineError(
                        f"product {gi.name}*{gj.name} is not a class at (0,{q})"
                    )
                same_degree = [g for g in gens.fiber if g.degree == q]
                if any(c != 0 for c in pc):
                    # express over the generators of that degree
                    from .linalg import Span

                    span = Span(len(prod))
                    for g in same_degree:
                        span.add(g.rep)
                    coords = span.coords(prod)
                    if coords is None:
                        raise EngineError(
                            f"product {gi.name}*{gj.name} does not decompose "
                            f"over the generators of degree {q}"
                        )
                    for k, c in coords.items():
                        if c != 0:
                            coeffs[same_degree[k].name] = c
            out[(gi.name, gj.name)] = coeffs
    return out


@dataclass(frozen=True)
class TermSlot:
    """One candidate lower term x^alpha * gen inside a relation."""

    gen: str  # generator name, or "1" for a pure x-power
    x_power: Optional[int]  # None when fractional
    feasible: bool
    reason: Optional[str]  # why the parameter is forced to zero
    gr_coeff: Fraction  # graded-level coefficient (alpha = 0 terms only)
    parameter: Optional[str]  # slot name when feasible


@dataclass
class Relation:
    lead: tuple[str, str]
    total_degree: int
    slots: list[TermSlot]


@dataclass
class PresentationSketch:
    sig: SpaceSignature
    x_exponent: int
    generators: list[tuple[str, int]]  # (name, degree), x first
    annihilators: list[tuple[int, str]]  # x^k * gen = 0 with k < x_exponent
    relations: list[Relation]
    complete: bool  # x-powers of generators span every Betti dimension
    betti: dict[int, int]


def term_feasible(
    stable: Page,
    gens: GeneratorSet,
    total_degree: int,
    gen_name: str,
) -> TermSlot:
    """Feasibility of the term x^((total-deg)/2) * gen in degree total_degree.

    Feasible iff the x-power is a non-negative integer and the term's
    bidegree is supported on the stable page.
    """
    if gen_name == "1":
        q = 0
    else:
        q = gens.by_name(gen_name).degree
    num = total_degree - q
    if num < 0:
        return TermSlot(gen_name, None, False, "negative x-power", ZERO, None)
    if num % 2 != 0:
        return TermSlot(gen_name, None, False, "fractional x-power", ZERO, None)
    alpha = num // 2
    band = certified_band(stable.sig, stable.window)
    if num > band:
        return TermSlot(gen_name, alpha, False, "outside certified band", ZERO, None)
    if stable.dim(num, q) == 0:
        return TermSlot(gen_name, alpha, False, "bidegree unsupported", ZERO, None)
    return TermSlot(gen_name, alpha, True, None, ZERO, None)


def presentation_sketch(stable: Page, gens: Optional[GeneratorSet] = None) -> PresentationSketch:
    sig = stable.sig
    if gens is None:
        gens = extract_generators(stable)
    betti = betti_table(stable)
    consts = structure_constants(stable, gens)

    annihilators = []
    spanned: dict[int, int] = {}
    for k in range(gens.x_exponent):
        spanned[2 * k] = spanned.get(2 * k, 0) + 1
    for g in gens.fiber:
        trunc = line_truncation(stable, g)
        if trunc < gens.x_exponent:
            annihilators.append((trunc, g.name))
        for k in range(trunc):
            d = g.degree + 2 * k
            spanned[d] = spanned.get(d, 0) + 1
    complete = all(spanned.get(k, 0) == v for k, v in betti.items()) and all(
        betti.get(k, 0) == v for k, v in spanned.items()
    )

    relations = []
    param = 0
    pairs = sorted(
        consts.keys(),
        key=lambda pr: (
            gens.by_name(pr[0]).degree + gens.by_name(pr[1]).degree,
            pr,
        ),
    )
    for pair in pairs:
        total = gens.by_name(pair[0]).degree + gens.by_name(pair[1]).degree
        gr = consts[pair]
        slots = []
        candidates = ["1"] + [g.name for g in gens.fiber]
        for cand in candidates:
            slot = term_feasible(stable, gens, total, cand)
            coeff = gr.get(cand, ZERO)
            name = None
            if slot.feasible:
                param += 1
                name = f"a{param}"
            slots.append(
                TermSlot(slot.gen, slot.x_power, slot.feasible, slot.reason, coeff, name)
            )
        relations.append(Relation(pair, total, slots))

    generators = [("x", 2)] + [(g.name, g.degree) for g in gens.fiber]
    return PresentationSketch(
        sig=sig,
        x_exponent=gens.x_exponent,
        generators=generators,
        annihilators=sorted(annihilators, key=lambda t: (t[1], t[0])),
        relations=relations,
        complete=complete,
        betti=betti,
    )


def _term_text(x_power: int, gen: str) -> str:
    parts = []
    if x_power == 1:
        parts.append("x")
    elif x_power > 1:
        parts.append(f"x^{x_power}")
    if gen != "1":
        parts.append(gen)
    if not parts:
        return "1"
    return "*".join(parts)


def render_presentation(sketch: PresentationSketch) -> str:
    """Deterministic text form Q[x,y,...]/<...> with sorted relations."""
    gens = ",".join(name for name, _ in sketch.generators)
    items = [f"x^{sketch.x_exponent}"]
    for k, gname in sketch.annihilators:
        items.append(_term_text(k, gname))
    for rel in sketch.relations:
        lead = (
            f"{rel.lead[0]}^2" if rel.lead[0] == rel.lead[1] else f"{rel.lead[0]}*{rel.lead[1]}"
        )
        terms = [lead]
        for slot in rel.slots:
            if slot.feasible:
                terms.append(f"{slot.parameter}*{_term_text(slot.x_power, slot.gen)}")
        items.append("+".join(terms))
    return f"Q[{gens}]/<{', '.join(items)}>"


def sketch_to_dict(sketch: PresentationSketch) -> dict:
    """JSON-ready form with explicit parameter-slot records."""
    return {
        "signature": [sketch.sig.n, sketch.sig.m, sketch.sig.l],
        "x_exponent": sketch.x_exponent,
        "generators": [{"name": n, "degree": d} for n, d in sketch.generators],
        "annihilators": [
            {"x_power": k, "gen": g} for k, g in sketch.annihilators
        ],
        "relations": [
            {
                "lead": list(rel.lead),
                "total_degree": rel.total_degree,
                "slots": [
                    {
                        "gen": s.gen,
                        "x_power": s.x_power,
                        "feasible": s.feasible,
                        "reason": s.reason,
                        "graded_coefficient": str(s.gr_coeff),
                        "parameter": s.parameter,
                    }
                    for s in rel.slots
                ],
            }
            for rel in sketch.relations
        ],
        "complete": sketch.complete,
        "betti": {str(k): v for k, v in sketch.betti.items()},
        "text": render_presentation(sketch),
    }
