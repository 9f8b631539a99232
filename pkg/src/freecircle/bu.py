"""Index invariants and equivariant-map non-existence statements.

Two integers come out of a free-consistent run: the nilpotency bound of the
degree-2 characteristic class of the principal circle bundle (the largest s
with kappa^s != 0, read off the bottom row of the stable page), and the
smallest page whose differential hits the bottom row at all (computed from
the assembled differential matrices, so transgressions forced by the Leibniz
rule count even when no event names them).  Each bounds a family of
equivariant maps to or from odd spheres with the standard circle action.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .fiber import SpaceSignature
from .linalg import is_zero_vec
from .pages import Page, Run, certified_band


def char_class_exponent(stable: Page) -> int:
    """Largest s with kappa^s != 0: the last surviving bottom-row column."""
    band = certified_band(stable.sig, stable.window)
    return max(
        (p // 2 for (p, q), vs in stable.basis.items() if q == 0 and vs and p <= band),
        default=0,
    )


def volovikov_index(run: Run) -> Optional[int]:
    """Smallest page whose differential lands in the bottom row, or None.

    Scans the assembled differential sets of the run history, so hits forced
    by the Leibniz rule count, not only scheduled events.  None means no
    differential ever reaches the bottom row (the run cannot then be
    free-consistent).
    """
    for entry in run.history:
        r = entry.page_index
        for (p, q), vecs in entry.differentials.image_vecs.items():
            if q - r + 1 == 0 and any(not is_zero_vec(v) for v in vecs):
                return r
    return None


PAPER_R_LIST = ("n", "m", "l", "n+m", "2n+l", "n+l", "m+l", "n+m+l")
PAPER_I_LIST = ("n+1", "m+1", "l+1", "m-n+1", "l-m+1", "l-n+1", "l-m-n+1")


def _r_list_values(sig: SpaceSignature) -> dict[str, int]:
    n, m, l = sig.n, sig.m, sig.l
    return {
        "n": n,
        "m": m,
        "l": l,
        "n+m": n + m,
        "2n+l": 2 * n + l,
        "n+l": n + l,
        "m+l": m + l,
        "n+m+l": n + m + l,
    }


def _i_list_values(sig: SpaceSignature) -> dict[str, int]:
    n, m, l = sig.n, sig.m, sig.l
    return {
        "n+1": n + 1,
        "m+1": m + 1,
        "l+1": l + 1,
        "m-n+1": m - n + 1,
        "l-m+1": l - m + 1,
        "l-n+1": l - n + 1,
        "l-m-n+1": l - m - n + 1,
    }


@dataclass
class IndexReport:
    sig: SpaceSignature
    s: int  # largest exponent with kappa^s != 0
    r_of_s: int  # the classical parameter r with s = (r-1)/2
    volovikov: Optional[int]
    in_paper_r_list: bool
    r_list_matches: list[str]
    in_paper_i_list: bool
    i_list_matches: list[str]
    statements: list[str]

    def to_dict(self) -> dict:
        return {
            "signature": [self.sig.n, self.sig.m, self.sig.l],
            "char_class_exponent": self.s,
            "r_of_s": self.r_of_s,
            "volovikov_index": self.volovikov,
            "in_classical_r_list": self.in_paper_r_list,
            "r_list_matches": self.r_list_matches,
            "in_classical_i_list": self.in_paper_i_list,
            "i_list_matches": self.i_list_matches,
            "statements": self.statements,
        }


def equivariant_map_report(
    sig: SpaceSignature, s: int, volovikov: Optional[int]
) -> IndexReport:
    """Render the non-existence statements implied by s and the index.

    (a) No equivariant map from S^(2k+1) into the space for any k > s.
    (b) No equivariant map from the space to S^(2k+1) for k >= 1 with
        2k+1 < i - 1, i.e. for 1 <= k <= floor((i-3)/2).
    """
    statements = [
        f"no G-equivariant map S^(2k+1) -> X for any k > {s}",
    ]
    if volovikov is not None:
        kmax = (volovikov - 3) // 2
        if kmax >= 1:
            statements.append(
                f"no G-equivariant map X -> S^(2k+1) for any 1 <= k <= {kmax}"
            )
        else:
            statements.append(
                "no G-equivariant map X -> S^(2k+1): no k >= 1 satisfies "
                f"2k+1 < {volovikov} - 1 (statement empty)"
            )
    r_of_s = 2 * s + 1
    r_matches = sorted(
        name for name, v in _r_list_values(sig).items() if v == r_of_s
    )
    i_matches = (
        sorted(name for name, v in _i_list_values(sig).items() if v == volovikov)
        if volovikov is not None
        else []
    )
    return IndexReport(
        sig=sig,
        s=s,
        r_of_s=r_of_s,
        volovikov=volovikov,
        in_paper_r_list=bool(r_matches),
        r_list_matches=r_matches,
        in_paper_i_list=bool(i_matches),
        i_list_matches=i_matches,
        statements=statements,
    )


def index_report(run: Run) -> IndexReport:
    return equivariant_map_report(
        run.sig, char_class_exponent(run.stable), volovikov_index(run)
    )


def render_index_report(report: IndexReport) -> str:
    lines = [
        f"characteristic class exponent s = {report.s} "
        f"(kappa^{report.s} != 0, kappa^{report.s + 1} = 0)",
        f"2s+1 = {report.r_of_s}; classical r-list matches: "
        + (", ".join(report.r_list_matches) if report.r_list_matches else "none"),
        f"Volovikov index i(X) = {report.volovikov}; classical i-list matches: "
        + (", ".join(report.i_list_matches) if report.i_list_matches else "none"),
    ]
    lines.extend(report.statements)
    return "\n".join(lines)
