"""Differential schedules: patterns, admissibility, freeness, enumeration.

A schedule is the list of free choices the spectral sequence makes: on which
(even) page each surviving indecomposable class transgresses, and to what.
Everything else is forced by t-linearity and the Leibniz rule.  Freeness of
the action is the filter: the stable page of a free action must vanish in
total degrees >= n+m+l, and branches that fail are rejected.

Text encoding (bit-exact, used by the CLI):

    r=<even page>:<source>-><target> [; more events]

where source/target are signed rational combinations of the monomial names
1, a, b, ab, c, ac, bc, abc, e.g. ``r=4:a->1`` or ``r=2:c->a-b`` or
``r=2:b->2/3*a``.  The t-power of a target is implicit in the bidegree.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .fiber import (
    SpaceSignature,
    fiber_degrees,
    mono_degree,
    mono_from_name,
    mono_name,
    monomials_of_degree,
)
from .linalg import ONE, Vec, ZERO, is_zero_vec
from .pages import (
    Bidegree,
    DifferentialSet,
    EngineError,
    InconsistentDifferential,
    Page,
    Run,
    ScheduleRejected,
    assemble_differential,
    build_e2,
    certified_band,
    indecomposables,
    run_to_infinity,
    turn_page,
)


@dataclass(frozen=True)
class ScheduleEvent:
    """One assigned differential: d_page(source) = t^(page/2) (x) target."""

    page: int
    source_q: int
    source: Vec  # coordinates over monomials_of_degree(sig, source_q)
    target: Vec  # coordinates over monomials_of_degree(sig, source_q - page + 1)

    @property
    def target_q(self) -> int:
        return self.source_q - self.page + 1

    @property
    def canonical_coefficients(self) -> bool:
        """True when every coefficient is 0 or +-1 (the default convention)."""
        return all(abs(c) in (0, 1) for c in self.source + self.target)


Schedule = tuple[ScheduleEvent, ...]


def sort_events(events: Iterable[ScheduleEvent]) -> Schedule:
    return tuple(sorted(events, key=lambda e: (e.page, e.source_q, e.source)))


def events_by_page(events: Iterable[ScheduleEvent]) -> dict[int, list[tuple[int, Vec, Vec]]]:
    out: dict[int, list[tuple[int, Vec, Vec]]] = {}
    for e in sort_events(events):
        out.setdefault(e.page, []).append((e.source_q, e.source, e.target))
    return out


def run_schedule(
    sig: SpaceSignature, schedule: Sequence[ScheduleEvent], window: Optional[int] = None
) -> Run:
    return run_to_infinity(sig, window, events_by_page(schedule))


# ---------------------------------------------------------------------------
# text encoding


_TERM_RE = re.compile(r"([+-]?)(\d+(?:/\d+)?)?\*?(abc|ab|ac|bc|a|b|c|1)")


def _parse_combo(sig: SpaceSignature, text: str) -> tuple[int, Vec]:
    """Parse a signed monomial combination; returns (fiber degree, coords)."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty class expression")
    pos = 0
    coeffs: dict[int, Fraction] = {}
    degree: Optional[int] = None
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if m is None or (pos > 0 and m.group(1) == ""):
            raise ValueError(f"cannot parse class expression {text!r} at {s[pos:]!r}")
        sign, coeff, name = m.groups()
        c = Fraction(coeff) if coeff else ONE
        if sign == "-":
            c = -c
        mono = mono_from_name(name)
        d = mono_degree(sig, mono)
        if degree is None:
            degree = d
        elif d != degree:
            raise ValueError(
                f"mixed degrees in {text!r}: {name} has degree {d}, expected {degree}"
            )
        coeffs[mono] = coeffs.get(mono, ZERO) + c
        pos = m.end()
    assert degree is not None
    monos = monomials_of_degree(sig, degree)
    vec = tuple(coeffs.get(m, ZERO) for m in monos)
    if is_zero_vec(vec):
        raise ValueError(f"class expression {text!r} is zero")
    return degree, vec


def _render_combo(sig: SpaceSignature, q: int, vec: Vec) -> str:
    monos = monomials_of_degree(sig, q)
    parts = []
    for mono, c in zip(monos, vec):
        if c == 0:
            continue
        name = mono_name(mono)
        mag = abs(c)
        body = name if mag == 1 else f"{mag}*{name}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+" if c > 0 else "-") + body)
    return "".join(parts)


def parse_schedule(sig: SpaceSignature, text: str) -> Schedule:
    """Parse the ``;``-joined event list; raises ValueError on bad syntax."""
    events = []
    text = text.strip()
    if not text:
        return ()
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        m = re.fullmatch(r"r=(\d+):(.+?)->(.+)", chunk)
        if m is None:
            raise ValueError(f"cannot parse schedule event {chunk!r}")
        page = int(m.group(1))
        q_src, src = _parse_combo(sig, m.group(2))
        q_tgt, tgt = _parse_combo(sig, m.group(3))
        if q_tgt != q_src - page + 1:
            raise ValueError(
                f"event {chunk!r}: target degree {q_tgt} does not match "
                f"source degree {q_src} minus page shift (expected "
                f"{q_src - page + 1})"
            )
        events.append(ScheduleEvent(page, q_src, src, tgt))
    return sort_events(events)


def render_schedule(sig: SpaceSignature, schedule: Sequence[ScheduleEvent]) -> str:
    return ";".join(
        f"r={e.page}:{_render_combo(sig, e.source_q, e.source)}"
        f"->{_render_combo(sig, e.target_q, e.target)}"
        for e in sort_events(schedule)
    )


# ---------------------------------------------------------------------------
# admissibility


@dataclass(frozen=True)
class AdmissiblePage:
    page: int
    target_q: int
    target_names: tuple[str, ...]


def admissible_pages(sig: SpaceSignature, gen: str) -> list[AdmissiblePage]:
    """Pages where the given generator can support a nonzero differential.

    Re-derived from the bidegree structure rather than hard-coded: the page
    must be even (targets land in even columns), at least 2, and the target
    fiber degree must carry monomials.
    """
    if gen not in ("a", "b", "c"):
        raise ValueError(f"generator must be one of a, b, c, got {gen!r}")
    q = mono_degree(sig, mono_from_name(gen))
    out = []
    for q_t in fiber_degrees(sig):
        r = q - q_t + 1
        if r < 2 or r % 2 != 0:
            continue
        names = tuple(mono_name(m) for m in monomials_of_degree(sig, q_t))
        out.append(AdmissiblePage(r, q_t, names))
    return sorted(out, key=lambda ap: ap.page)


def paper_bullet_pages(sig: SpaceSignature, gen: str) -> list[tuple[int, str]]:
    """The classical admissibility bullets, kept only as a cross-check."""
    n, m, l = sig.n, sig.m, sig.l
    out = []
    if gen == "a":
        if n % 2 == 1:
            out.append((n + 1, "1"))
    elif gen == "b":
        if (m - n) % 2 == 1:
            out.append((m - n + 1, "a"))
        if m % 2 == 1:
            out.append((m + 1, "1"))
    elif gen == "c":
        if (l - m - n) % 2 == 1 and l - m - n >= 1:
            out.append((l - m - n + 1, "ab"))
        if (l - m) % 2 == 1:
            out.append((l - m + 1, "b"))
        if (l - n) % 2 == 1:
            out.append((l - n + 1, "a"))
        if l % 2 == 1:
            out.append((l + 1, "1"))
    else:
        raise ValueError(gen)
    return sorted(out)


# ---------------------------------------------------------------------------
# freeness


@dataclass(frozen=True)
class FreenessVerdict:
    free_consistent: bool
    top_nonzero_total_degree: Optional[int]
    witness: Optional[Bidegree]


def check_freeness(stable: Page) -> FreenessVerdict:
    """A free action forces the stable page to vanish in totals >= n+m+l.

    Checked inside the certified band; t-linearity extends the bottom-row
    conclusion beyond it.  The witness prefers the bottom row, which is
    where a surviving base class directly contradicts freeness.
    """
    sig = stable.sig
    band = certified_band(sig, stable.window)
    top = sig.top_degree
    witness: Optional[Bidegree] = None
    top_nonzero: Optional[int] = None
    violations = []
    for (p, q), vecs in stable.basis.items():
        if not vecs or p > band:
            continue
        k = p + q
        if k <= band and (top_nonzero is None or k > top_nonzero):
            top_nonzero = k
        if k >= top:
            violations.append((p, q))
    if violations:
        bottom = sorted(v for v in violations if v[1] == 0)
        if bottom:
            witness = bottom[0]
        else:
            witness = min(violations, key=lambda bd: (bd[0] + bd[1], bd[0]))
        return FreenessVerdict(False, top_nonzero, witness)
    return FreenessVerdict(True, top_nonzero, None)


# ---------------------------------------------------------------------------
# enumeration


def _canonical_targets(dim: int) -> list[tuple[int, ...]]:
    """Nonzero {0,1,-1} coefficient vectors up to overall sign."""
    out = []
    for tup in itertools.product((0, 1, -1), repeat=dim):
        nz = next((x for x in tup if x != 0), None)
        if nz == 1:
            out.append(tup)
    return out


@dataclass
class ScheduleRecord:
    schedule: Schedule
    verdict: FreenessVerdict
    betti: dict[int, int]
    einf_dims: dict[Bidegree, int]
    char_exponent: int
    volovikov: Optional[int]


@dataclass
class EnumerationResult:
    sig: SpaceSignature
    window: int
    records: list[ScheduleRecord]  # free-consistent only, sorted by encoding
    rejected: int            # stable pages that failed the freeness criterion
    inconsistent: int        # assignment sets obstructed by the Leibniz rule
    no_admissible: bool

    def betti_classes(self) -> list[tuple[tuple[tuple[int, int], ...], list[ScheduleRecord]]]:
        """Records grouped by Betti table, deterministic order."""
        groups: dict[tuple[tuple[int, int], ...], list[ScheduleRecord]] = {}
        for rec in self.records:
            key = tuple(sorted(rec.betti.items()))
            groups.setdefault(key, []).append(rec)
        return sorted(groups.items())


@dataclass
class _Branch:
    page: Page
    events: Schedule
    first_bottom_hit: Optional[int]


def enumerate_schedules(
    sig: SpaceSignature, window: Optional[int] = None
) -> EnumerationResult:
    """Depth-first over even pages; branch on every surviving indecomposable.

    At each page every indecomposable class either stays (zero differential)
    or maps to one of the canonical {0,1,-1} combinations of the target
    basis, up to overall scale.  Branches whose next pages have identical
    bidegree dimensions are merged; the stable pages are filtered through
    the freeness criterion.
    """
    start = build_e2(sig, window)
    stop = sig.top_degree + 1
    frontier: list[_Branch] = [_Branch(start, (), None)]
    any_option = False
    inconsistent = 0
    for r in range(2, stop + 1, 2):
        nxt: list[_Branch] = []
        seen: set = set()
        for branch in frontier:
            page = branch.page.with_index(r)
            choices: list[list[Optional[ScheduleEvent]]] = []
            for (p0, q), src in indecomposables(page):
                q_t = q - r + 1
                tbasis = page.basis.get((r, q_t), ()) if q_t >= 0 else ()
                opts: list[Optional[ScheduleEvent]] = [None]
                if tbasis:
                    any_option = True
                    for coeffs in _canonical_targets(len(tbasis)):
                        tgt = tuple(
                            sum(
                                (Fraction(c) * v[i] for c, v in zip(coeffs, tbasis)),
                                ZERO,
                            )
                            for i in range(len(tbasis[0]))
                        )
                        opts.append(ScheduleEvent(r, q, src, tgt))
                choices.append(opts)
            for combo in itertools.product(*choices) if choices else [()]:
                events = [e for e in combo if e is not None]
                if not events:
                    child_page = page.with_index(r + 2)
                    hit = branch.first_bottom_hit
                else:
                    try:
                        dset = assemble_differential(page, [
                            (e.source_q, e.source, e.target) for e in events
                        ])
                    except InconsistentDifferential:
                        # no actual differential extends this assignment set;
                        # the Leibniz rule obstructs it
                        inconsistent += 1
                        continue
                    hit = branch.first_bottom_hit
                    if hit is None and dset.hits_bottom_row():
                        hit = r
                    child_page = turn_page(page, dset).with_index(r + 2)
                key = tuple(sorted(child_page.dims().items()))
                if key in seen:
                    continue
                seen.add(key)
                nxt.append(
                    _Branch(child_page, branch.events + tuple(events), hit)
                )
        frontier = nxt

    records: list[ScheduleRecord] = []
    rejected = 0
    band = certified_band(sig, start.window)
    for branch in frontier:
        stable = branch.page.with_index(stop + 1)
        verdict = check_freeness(stable)
        if not verdict.free_consistent:
            rejected += 1
            continue
        betti = stable.total_dims(max_total=sig.top_degree - 1)
        einf = {
            bd: d for bd, d in stable.dims().items() if bd[0] <= band
        }
        s = max((p // 2 for (p, q) in einf if q == 0), default=0)
        records.append(
            ScheduleRecord(
                schedule=sort_events(branch.events),
                verdict=verdict,
                betti=dict(sorted(betti.items())),
                einf_dims=dict(sorted(einf.items())),
                char_exponent=s,
                volovikov=branch.first_bottom_hit,
            )
        )
    records.sort(key=lambda rec: render_schedule(sig, rec.schedule))
    return EnumerationResult(
        sig=sig,
        window=start.window,
        records=records,
        rejected=rejected,
        inconsistent=inconsistent,
        no_admissible=not any_option,
    )
