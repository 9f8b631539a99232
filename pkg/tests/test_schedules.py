"""Schedules: encoding, admissibility, freeness, enumeration."""

import random
from fractions import Fraction

import pytest

from freecircle.fiber import SpaceSignature
from freecircle.schedules import (
    ScheduleEvent,
    admissible_pages,
    check_freeness,
    enumerate_schedules,
    paper_bullet_pages,
    parse_schedule,
    render_schedule,
    run_schedule,
)

F = Fraction


# ---------------------------------------------------------------------------
# text encoding


def test_parse_render_round_trip():
    sig = SpaceSignature(3, 4, 8)
    for text in ("r=4:a->1", "r=2:c->ab;r=2:b->a", "r=2:b->2/3*a"):
        sched = parse_schedule(sig, text)
        again = parse_schedule(sig, render_schedule(sig, sched))
        assert again == sched


def test_render_is_sorted_and_canonical():
    sig = SpaceSignature(3, 4, 8)
    sched = parse_schedule(sig, "r=16:abc->1;r=2:c->ab")
    assert render_schedule(sig, sched) == "r=2:c->ab;r=16:abc->1"


def test_parse_signed_combination():
    sig = SpaceSignature(2, 2, 3)
    (event,) = parse_schedule(sig, "r=2:c->a-b")
    assert event.target == (F(1), F(-1))
    assert render_schedule(sig, (event,)) == "r=2:c->a-b"


def test_parse_errors():
    sig = SpaceSignature(3, 4, 8)
    with pytest.raises(ValueError):
        parse_schedule(sig, "r=4:a=>1")
    with pytest.raises(ValueError):
        parse_schedule(sig, "r=4:a->b")  # wrong target degree for the shift
    with pytest.raises(ValueError):
        parse_schedule(sig, "r=2:a+c->1")  # mixed degrees in the source
    with pytest.raises(ValueError):
        parse_schedule(sig, "r=4:a-a->1")  # zero class


def test_explicit_coefficients_flagged():
    sig = SpaceSignature(3, 4, 8)
    (canonical,) = parse_schedule(sig, "r=4:a->1")
    (explicit,) = parse_schedule(sig, "r=4:a->3*1")
    assert canonical.canonical_coefficients
    assert not explicit.canonical_coefficients


# ---------------------------------------------------------------------------
# admissibility


def test_admissible_pages_348():
    sig = SpaceSignature(3, 4, 8)
    assert [ap.page for ap in admissible_pages(sig, "a")] == [4]
    # c can move at page 2 (to ab) and page 6 (to a); the degree-4 and
    # degree-0 targets fail parity
    cpages = {(ap.page, ap.target_names) for ap in admissible_pages(sig, "c")}
    assert cpages == {(2, ("ab",)), (6, ("a",))}


def test_admissible_pages_parity_blocked():
    sig = SpaceSignature(2, 4, 6)
    for gen in ("a", "b", "c"):
        assert admissible_pages(sig, gen) == []


def test_admissible_pages_match_classical_bullets_on_grid():
    # the derived pages must agree with the hard-coded bullet list wherever
    # both speak; bullets are per-generator (page, one target name)
    for n in range(1, 7):
        for m in range(n, 7):
            for l in range(m, 7):
                sig = SpaceSignature(n, m, l)
                for gen in ("a", "b", "c"):
                    derived = {ap.page for ap in admissible_pages(sig, gen)}
                    bullets = {page for page, _ in paper_bullet_pages(sig, gen)}
                    assert derived == bullets, (sig, gen, derived, bullets)


# ---------------------------------------------------------------------------
# freeness


def test_freeness_348_single_transgression():
    sig = SpaceSignature(3, 4, 8)
    run = run_schedule(sig, parse_schedule(sig, "r=4:a->1"))
    verdict = check_freeness(run.stable)
    assert verdict.free_consistent
    assert verdict.top_nonzero_total_degree == 14  # n + m + l - 1


def test_freeness_empty_schedule_fails_with_bottom_row_witness():
    sig = SpaceSignature(3, 4, 8)
    run = run_schedule(sig, ())
    verdict = check_freeness(run.stable)
    assert not verdict.free_consistent
    assert verdict.witness is not None and verdict.witness[1] == 0


def test_freeness_223_top_degree():
    sig = SpaceSignature(2, 2, 3)
    run = run_schedule(sig, parse_schedule(sig, "r=4:c->1"))
    verdict = check_freeness(run.stable)
    assert verdict.free_consistent
    assert verdict.top_nonzero_total_degree == 6


# ---------------------------------------------------------------------------
# enumeration


def test_enumerate_348_contains_single_transgression():
    sig = SpaceSignature(3, 4, 8)
    result = enumerate_schedules(sig)
    rendered = [render_schedule(sig, rec.schedule) for rec in result.records]
    assert "r=4:a->1" in rendered
    assert result.rejected > 0


def test_enumerate_246_no_admissible_pattern():
    result = enumerate_schedules(SpaceSignature(2, 4, 6))
    assert result.records == []
    assert result.no_admissible


def test_enumerate_247_has_patterns_but_all_even_generators():
    # all three generators have even degree, yet c can transgress onto ab;
    # the class a can never die, so every branch fails freeness only when
    # a stays alive -- the four classical patterns survive
    result = enumerate_schedules(SpaceSignature(2, 4, 7))
    assert len(result.records) == 8
    assert not result.no_admissible


def test_enumerate_111_deterministic_with_one_class():
    sig = SpaceSignature(1, 1, 1)
    r1 = enumerate_schedules(sig)
    r2 = enumerate_schedules(sig)
    assert [render_schedule(sig, rec.schedule) for rec in r1.records] == [
        render_schedule(sig, rec.schedule) for rec in r2.records
    ]
    classes = r1.betti_classes()
    assert len(classes) >= 1
    assert classes[0][0] == ((0, 1), (1, 2), (2, 1))


def test_enumerate_parity_soundness():
    for nml in [(3, 4, 8), (1, 2, 5), (2, 2, 3)]:
        result = enumerate_schedules(SpaceSignature(*nml))
        for rec in result.records:
            for event in rec.schedule:
                assert event.page % 2 == 0


def test_enumerate_replay_reproduces_summary():
    sig = SpaceSignature(2, 3, 6)
    result = enumerate_schedules(sig)
    for rec in result.records[:4]:
        run = run_schedule(sig, rec.schedule)
        verdict = check_freeness(run.stable)
        assert verdict.free_consistent
        betti = dict(
            sorted(run.stable.total_dims(max_total=sig.top_degree - 1).items())
        )
        assert betti == rec.betti


def test_scale_invariance_of_betti_tables():
    rng = random.Random(4711)
    sig = SpaceSignature(3, 4, 8)
    result = enumerate_schedules(sig)
    for rec in result.records[:3]:
        for _ in range(5):
            scaled = []
            for e in rec.schedule:
                c = F(0)
                while c == 0:
                    c = F(rng.randrange(-9, 10), rng.randrange(1, 10))
                scaled.append(
                    ScheduleEvent(
                        e.page,
                        e.source_q,
                        e.source,
                        tuple(c * x for x in e.target),
                    )
                )
            run = run_schedule(sig, scaled)
            betti = dict(
                sorted(run.stable.total_dims(max_total=sig.top_degree - 1).items())
            )
            assert betti == rec.betti
