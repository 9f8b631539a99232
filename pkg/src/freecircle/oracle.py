"""Closed-form cross-checks: case tables and the product-space anchor.

Each classification case carries two independently printed tables:

* the stable-page support ("einf"): per fiber line, the even columns that
  survive; summed over anti-diagonals this gives a Betti table;
* where one is printed, the per-degree piecewise display ("hk"), transcribed
  literally, misprints included.  A display is evaluated as a piecewise
  function: the first matching row decides the dimension.

Several printed displays are internally inconsistent with the stable-page
support of the same case (strict bounds that drop endpoint degrees, parity
gates that erase whole rows).  The transcription policy is to encode them
exactly as printed and let ``reconcile`` surface the difference; the
annotation file marks the displays with known misprints so sweeps can
classify those mismatches as paper-side.  Annotated mismatch degrees are
computed, not hand-listed: they are the degrees where the two literal
transcriptions of the same case disagree.

The one anchor that does not depend on any possibly-misprinted display is
the product-space model: when only the first generator transgresses, the
orbit space has the rational cohomology of CP^((n-1)/2) x S^m x S^l, whose
Poincare polynomial is an exact polynomial product.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .fiber import SpaceSignature

try:  # Python 3.9+: importlib.resources.files
    from importlib import resources as _resources
except ImportError:  # pragma: no cover
    _resources = None


# ---------------------------------------------------------------------------
# Poincare polynomial of CP^((n-1)/2) x S^m x S^l


def kunneth_product(sig: SpaceSignature) -> list[int]:
    """Coefficients of (1 + x^2 + ... + x^(n-1)) (1 + x^m) (1 + x^l).

    Requires n odd (the first factor is a complex projective space).
    """
    n, m, l = sig.n, sig.m, sig.l
    if n % 2 == 0:
        raise ValueError("the product-space anchor needs n odd")
    poly = [0] * ((n - 1) + m + l + 1)
    for i in range(0, n, 2):
        for j in (0, m):
            for k in (0, l):
                poly[i + j + k] += 1
    return poly


def poly_to_table(poly: list[int]) -> dict[int, int]:
    return {k: c for k, c in enumerate(poly) if c}


# ---------------------------------------------------------------------------
# case registry


@dataclass(frozen=True)
class CaseLabel:
    theorem: str  # da | db | dc  (which generator transgresses first)
    case: int  # possibility number in that classification
    branch: str

    @property
    def id(self) -> str:
        return f"{self.theorem}/{self.case}/{self.branch}"


@dataclass
class CaseSpec:
    label: CaseLabel
    applies: Callable[[SpaceSignature], bool]
    # stable-page support rows: (fiber degree, max even column, multiplicity)
    einf_rows: Callable[[SpaceSignature], list[tuple[int, int, int]]]
    # literal piecewise display rows: (dim, predicate(k, n, m, l)); None when
    # the source only prints the stable-page support (or a vague referral)
    hk_rows: Optional[list[tuple[int, Callable[[int, int, int, int], bool]]]]
    note: str = ""


def einf_table(spec: CaseSpec, sig: SpaceSignature) -> dict[int, int]:
    table: dict[int, int] = {}
    for q, pmax, mult in spec.einf_rows(sig):
        for p in range(0, pmax + 1, 2):
            table[p + q] = table.get(p + q, 0) + mult
    return dict(sorted(table.items()))


def hk_table(spec: CaseSpec, sig: SpaceSignature) -> Optional[dict[int, int]]:
    if spec.hk_rows is None:
        return None
    n, m, l = sig.n, sig.m, sig.l
    table: dict[int, int] = {}
    for k in range(0, n + m + l + 1):
        for dim, pred in spec.hk_rows:
            if pred(k, n, m, l):
                if dim:
                    table[k] = dim
                break
    return table


def theorem_table(spec: CaseSpec, sig: SpaceSignature) -> dict[int, int]:
    """The case's printed Betti table, literal transcription.

    The piecewise per-degree display where the source prints one for this
    case, otherwise the stable-page support summed over anti-diagonals.
    """
    if not spec.applies(sig):
        raise ValueError(f"case {spec.label.id} does not apply to {sig}")
    hk = hk_table(spec, sig)
    if hk is not None:
        return hk
    return einf_table(spec, sig)


def _odd(x: int) -> bool:
    return x % 2 == 1


def _even(x: int) -> bool:
    return x % 2 == 0


def _registry() -> list[CaseSpec]:
    specs: list[CaseSpec] = []

    def add(theorem, case, branch, applies, einf, hk=None, note=""):
        specs.append(
            CaseSpec(CaseLabel(theorem, case, branch), applies, einf, hk, note)
        )

    # ----- first generator transgresses (n odd) ---------------------------
    def einf_da1(s):
        n, m, l = s.n, s.m, s.l
        return [(0, n - 1, 1), (m, n - 1, 1), (l, n - 1, 1), (m + l, n - 1, 1)]

    hk_A1 = [
        (
            1,
            lambda k, n, m, l: any(
                j <= k <= n + j - 1 and _even(k - j) for j in (0, m, l, m + l)
            ),
        ),
    ]
    add(
        "da", 1, "l>=m+n",
        lambda s: _odd(s.n) and s.m < s.l and s.l >= s.m + s.n,
        einf_da1, hk_A1,
    )
    hk_A2 = [
        (
            1,
            lambda k, n, m, l: any(
                j <= k < n + j - 1 and _even(k - j) for j in (0, m + l)
            ),
        ),
        (
            1,
            lambda k, n, m, l: (m <= k < l and _even(k - m))
            or (m + n - 1 < k <= n + l - 1 and _even(k - l)),
        ),
        (
            2,
            lambda k, n, m, l: l <= k <= m + n - 1
            and _even(k - m)
            and _even(k - l),
        ),
    ]
    add(
        "da", 1, "l<m+n",
        lambda s: _odd(s.n) and s.m < s.l and s.l < s.m + s.n,
        einf_da1, hk_A2,
    )
    add("da", 1, "m=l", lambda s: _odd(s.n) and s.m == s.l, einf_da1)

    def einf_da2(s):
        n, m, l = s.n, s.m, s.l
        return [
            (0, n - 1, 1),
            (m + l, n - 1, 1),
            (m, l - m - 1, 1),
            (n + m, l - m - 1, 1),
        ]

    hk_DA2 = [
        (
            1,
            lambda k, n, m, l: any(
                j <= k <= n + j - 1 and _even(k - j) for j in (0, m + l)
            ),
        ),
        (
            1,
            lambda k, n, m, l: any(
                m + j <= k <= l + j - 1 and _even(k - m - j) for j in (0, n)
            ),
        ),
    ]
    add(
        "da", 2, "l<m+n",
        lambda s: _odd(s.n)
        and _odd(s.l - s.m)
        and s.m < s.l
        and s.l < s.m + s.n,
        einf_da2, hk_DA2,
    )

    # ----- second generator transgresses first ----------------------------
    def einf_db1_jl(s):
        n, m, l = s.n, s.m, s.l
        return [
            (l, n + m - l - 1, 1),
            (n, m - n - 1, 1),
            (n + l, m - n - 1, 1),
            (0, n + m + l - 1, 1),
        ]

    hk_B1 = [
        (
            1,
            lambda k, n, m, l: _even(k)
            and any(j <= k < n + j for j in (0, m + l)),
        ),
        (
            1,
            lambda k, n, m, l: _even(k)
            and any(m + j <= k < l + j for j in (0, n)),
        ),
        (2, lambda k, n, m, l: l <= k < n + m and _even(k - l)),
        (
            2,
            lambda k, n, m, l: any(
                n + j <= k < m + j and _even(k - n - j) for j in (0, l)
            ),
        ),
    ]
    add(
        "db", 1, "j'=l",
        lambda s: _odd(s.m - s.n)
        and s.n < s.m <= s.l
        and s.l < s.m + s.n
        and _even(s.l),
        einf_db1_jl, hk_B1,
    )

    def einf_db1_j0(s):
        n, m, l = s.n, s.m, s.l
        return [
            (0, n + m - 1, 1),
            (l, n + m - 1, 1),
            (n, m - n - 1, 1),
            (n + l, m - n - 1, 1),
        ]

    hk_B2 = [
        (
            1,
            lambda k, n, m, l: (_even(k) and 0 <= k < n)
            or (_even(k) and m <= k < l)
            or (n + m < k < n + l and _even(k - l)),
        ),
        (1, lambda k, n, m, l: m + l < k <= n + m + l - 1 and _even(k - l)),
        (
            2,
            lambda k, n, m, l: (n <= k < m and _even(k - n))
            or (l <= k <= n + m - 1 and _even(k - l)),
        ),
        (2, lambda k, n, m, l: n + l <= k <= m + l - 1 and _even(k - n - l)),
    ]
    add(
        "db", 1, "j'=0;l<=m+n",
        lambda s: _odd(s.m - s.n) and s.n < s.m <= s.l <= s.m + s.n,
        einf_db1_j0, hk_B2,
    )
    hk_B3 = [
        (
            1,
            lambda k, n, m, l: (_even(k) and 0 <= k < n)
            or any(j < k < n + j and _even(k - j) for j in (m, l)),
        ),
        (1, lambda k, n, m, l: m + l < k <= m + n + l - 1 and _even(k - l)),
        (
            2,
            lambda k, n, m, l: (n <= k < m and _even(k) and _even(n))
            or (n + l <= k < m + l and _even(k - n - l)),
        ),
    ]
    add(
        "db", 1, "j'=0;l>m+n",
        lambda s: _odd(s.m - s.n) and s.n < s.m < s.l and s.l > s.m + s.n,
        einf_db1_j0, hk_B3,
    )

    def einf_db2(s):
        n, m, l = s.n, s.m, s.l
        return [
            (0, m - 1, 1),
            (n, m - 1, 1),
            (l, m - 1, 1),
            (n + l, m - 1, 1),
        ]

    hk_B4 = [
        (
            1,
            lambda k, n, m, l: (_even(k) and 0 <= k < n)
            or (m <= k < l and _even(k - n)),
        ),
        (1, lambda k, n, m, l: n + m < k < n + l and _even(k - l)),
        (
            1,
            lambda k, n, m, l: m + l - 1 < k < m + n + l - 1
            and _even(k - n - l),
        ),
        (
            2,
            lambda k, n, m, l: (n <= k < m and _even(k - n))
            or (l <= k <= n + m - 1 and _even(k - l) and _even(k - n)),
        ),
        (2, lambda k, n, m, l: n + l <= k <= m + l - 1 and _even(k - n - l)),
    ]
    add(
        "db", 2, "l<m+n",
        lambda s: _odd(s.m) and s.l < s.m + s.n,
        einf_db2, hk_B4,
    )
    hk_B5 = [
        (
            1,
            lambda k, n, m, l: (_even(k) and 0 <= k < n)
            or (m <= k <= n + m - 1 and _even(k - n)),
        ),
        (1, lambda k, n, m, l: l <= k < n + l and _even(k - l)),
        (1, lambda k, n, m, l: m + l < k < n + m + l and _even(k - n - l)),
        (2, lambda k, n, m, l: n <= k < m and _even(k - n)),
        (
            2,
            lambda k, n, m, l: n + l <= k <= m + l - 1
            and _even(k - l)
            and _even(k - n - l),
        ),
        (2, lambda k, n, m, l: n + l <= k <= m + l - 1 and _even(k - n - l)),
    ]
    add(
        "db", 2, "l>m+n",
        lambda s: _odd(s.m) and s.m < s.l and s.l > s.m + s.n,
        einf_db2, hk_B5,
    )
    add(
        "db", 2, "l=m+n",
        lambda s: _odd(s.m) and s.l == s.m + s.n,
        einf_db2,
        note="no printed per-degree display for l = m+n",
    )

    def einf_db3_j0(s):
        n, m, l = s.n, s.m, s.l
        return [
            (n, m - n - 1, 1),
            (n + l, m - n - 1, 1),
            (0, l - 1, 1),
            (n + m, l - 1, 1),
        ]

    hk_B6 = [
        (
            1,
            lambda k, n, m, l: (_even(k) and 0 <= k < n)
            or (m - 1 < k <= l - 1 and _even(k)),
        ),
        (1, lambda k, n, m, l: m + n <= k < n + l and _even(k - n - m)),
        (1, lambda k, n, m, l: m + l < k < m + n + l and _even(k - n - m)),
        (2, lambda k, n, m, l: n <= k <= m - 1 and _even(k)),
        (
            2,
            lambda k, n, m, l: n + l <= k <= m + l - 1
            and _even(k - n - l)
            and _even(k - n - m),
        ),
    ]
    add(
        "db", 3, "j'=0;l<m+n",
        lambda s: _odd(s.m - s.n)
        and _odd(s.l)
        and s.n < s.m < s.l
        and s.l < s.m + s.n,
        einf_db3_j0, hk_B6,
    )
    hk_B7 = [
        (
            1,
            lambda k, n, m, l: (_even(k) and 0 <= k < n)
            or (m < k < n + m and _even(k)),
        ),
        (
            1,
            lambda k, n, m, l: any(
                j < k < n + j and _even(k - n - m) for j in (l, m + l - 1)
            ),
        ),
        (
            2,
            lambda k, n, m, l: (n <= k <= m and _even(n))
            or (m + n <= k <= l - 1 and _even(k) and _even(k - n - m)),
        ),
        (2, lambda k, n, m, l: n + l <= k <= m + l - 1 and _even(k - n - l)),
    ]
    add(
        "db", 3, "j'=0;l>=m+n",
        lambda s: _odd(s.m - s.n)
        and _odd(s.l)
        and s.n < s.m < s.l
        and s.l >= s.m + s.n,
        einf_db3_j0, hk_B7,
    )
    hk_B8 = [
        (
            1,
            lambda k, n, m, l: (_even(k) and 0 <= k < n)
            or (2 * m - 1 < k <= 2 * m + n - 1 and _even(k - n - m)),
        ),
        (
            2,
            lambda k, n, m, l: (n <= k <= m - 1 and _even(n))
            or (n + m <= k <= 2 * m - 1 and _even(k - n - m)),
        ),
    ]
    add(
        "db", 3, "j'=0;m=l",
        lambda s: _odd(s.m - s.n) and _odd(s.l) and s.n < s.m == s.l,
        einf_db3_j0, hk_B8,
    )

    def einf_db3_jnm(s):
        n, m, l = s.n, s.m, s.l
        return [
            (0, n + m + l - 1, 1),
            (n, m - n - 1, 1),
            (n + l, m - n - 1, 1),
            (n + m, l - m - n - 1, 1),
        ]

    hk_B9 = [
        (
            1,
            lambda k, n, m, l: (_even(k) and 0 <= k < n)
            or any(l + j <= k <= n + j - 1 and _even(k) for j in (0, m)),
        ),
        (
            2,
            lambda k, n, m, l: any(
                n + j <= k <= m + j - 1 and _even(k) and _even(k - j)
                for j in (0, l)
            ),
        ),
        (
            2,
            lambda k, n, m, l: n + m <= k <= l - 1
            and _even(k)
            and _even(k - n - m),
        ),
    ]
    add(
        "db", 3, "j'=n+m",
        lambda s: _odd(s.m - s.n)
        and _odd(s.l - s.m - s.n)
        and s.l > s.m + s.n,
        einf_db3_jnm, hk_B9,
    )

    def einf_db4(s):
        n, m, l = s.n, s.m, s.l
        return [
            (0, m - 1, 1),
            (n + l, m - 1, 1),
            (n, l - n - 1, 1),
            (n + m, l - n - 1, 1),
        ]

    hk_B10 = [
        (
            1,
            lambda k, n, m, l: (_even(k) and 0 <= k < n)
            or (m < k <= l - 1 and _even(k - n)),
        ),
        (1, lambda k, n, m, l: m + n <= k < n + l and _even(k - n - m)),
        (1, lambda k, n, m, l: m + l <= k < m + n + l and _even(k - n - l)),
        (
            2,
            lambda k, n, m, l: (n <= k <= m - 1 and _even(n))
            or (n + l <= k <= m + l - 1 and _even(k - n - m)),
        ),
    ]
    add(
        "db", 4, "l<m+n",
        lambda s: _odd(s.m)
        and _odd(s.l - s.n)
        and s.n <= s.m < s.l
        and s.l < s.m + s.n,
        einf_db4, hk_B10,
    )

    # ----- third generator transgresses first ------------------------------
    hk_C1 = [
        (
            1,
            lambda k, n, m, l: (_even(k) and 0 <= k < n)
            or (m + l < k < m + n + l and _even(k)),
        ),
        (
            2,
            lambda k, n, m, l: _even(n)
            and ((n <= k < m) or (n + l < k < m + l)),
        ),
        (
            3,
            lambda k, n, m, l: _even(m)
            and ((m <= k < m + n) or (l < k <= n + l - 1)),
        ),
        (
            4,
            lambda k, n, m, l: _even(n) and _even(m) and m + n <= k <= l - 1,
        ),
    ]
    hk_C1p = [
        (
            1,
            lambda k, n, m, l: (0 <= k < n)
            or (n + l < k <= 2 * n + l and _even(k)),
        ),
        (
            3,
            lambda k, n, m, l: _even(k)
            and _even(n)
            and ((n <= k < 2 * n) or (l < k <= n + l)),
        ),
        (
            4,
            lambda k, n, m, l: _even(k) and _even(n) and 2 * n <= k <= l,
        ),
    ]

    def _hk_c1(s):
        return hk_C1p if s.n == s.m else hk_C1

    def einf_dc1a(s):
        n, m, l = s.n, s.m, s.l
        return [
            (0, n + m + l - 1, 1),
            (n, m + l - n - 1, 1),
            (m, n + l - m - 1, 1),
            (n + m, l - m - n - 1, 1),
        ]

    def einf_dc1b(s):
        n, m, l = s.n, s.m, s.l
        return [
            (0, m + l - 1, 1),
            (n, m + l - 1, 1),
            (m, n + l - m - 1, 1),
            (n + m, l - m - n - 1, 1),
        ]

    def einf_dc1c(s):
        n, m, l = s.n, s.m, s.l
        return [
            (0, n + m + l - 1, 1),
            (n, l - 1, 1),
            (m, l - 1, 1),
            (n + m, l - m - n - 1, 1),
        ]

    def einf_dc1d(s):
        n, m, l = s.n, s.m, s.l
        return [
            (0, n + l - 1, 1),
            (m, n + l - 1, 1),
            (n, m + l - n - 1, 1),
            (n + m, l - m - n - 1, 1),
        ]

    def dc1_applies(s):
        return _odd(s.l - s.m - s.n) and s.l > s.m + s.n

    for br, einf, extra in (
        ("full", einf_dc1a, lambda s: True),
        ("bottom-late", einf_dc1b, lambda s: _even(s.n)),
        ("pairs-at-l+1", einf_dc1c, lambda s: _odd(s.l)),
        ("bottom-mid", einf_dc1d, lambda s: _even(s.m)),
    ):
        add(
            "dc", 1, br,
            (lambda ex: lambda s: dc1_applies(s) and ex(s))(extra),
            einf,
            None,
            note="per-degree display printed once for the whole case; see dc/1/display labels",
        )

    def einf_dc2a(s):
        n, m, l = s.n, s.m, s.l
        return [
            (0, n + m + l - 1, 1),
            (n, m + l - n - 1, 1),
            (m, l - m - 1, 1),
            (n + m, l - m - 1, 1),
        ]

    def einf_dc2b(s):
        n, m, l = s.n, s.m, s.l
        return [
            (0, m + l - 1, 1),
            (n, m + l - 1, 1),
            (m, l - m - 1, 1),
            (n + m, l - m - 1, 1),
        ]

    add(
        "dc", 2, "full",
        lambda s: _odd(s.l - s.m) and s.n <= s.m < s.l and _odd(s.m + s.l - s.n),
        einf_dc2a,
    )
    add(
        "dc", 2, "bottom-late",
        lambda s: _odd(s.l - s.m) and s.n <= s.m < s.l,
        einf_dc2b,
    )

    def einf_dc3a(s):
        n, m, l = s.n, s.m, s.l
        return [
            (0, n + m + l - 1, 1),
            (n, l - n - 1, 1),
            (n + m, l - n - 1, 1),
            (m, n + l - m - 1, 1),
        ]

    def einf_dc3b(s):
        n, m, l = s.n, s.m, s.l
        return [
            (0, n + l - 1, 1),
            (m, n + l - 1, 1),
            (n, l - n - 1, 1),
            (n + m, l - n - 1, 1),
        ]

    add(
        "dc", 3, "full",
        lambda s: _odd(s.l - s.n) and s.n < s.l and _odd(s.n + s.l - s.m),
        einf_dc3a,
    )
    add(
        "dc", 3, "bottom-late",
        lambda s: _odd(s.l - s.n) and s.n < s.l,
        einf_dc3b,
    )

    def einf_dc4(s):
        n, m, l = s.n, s.m, s.l
        return [
            (0, l - 1, 1),
            (n, l - 1, 1),
            (m, l - 1, 1),
            (n + m, l - 1, 1),
        ]

    add("dc", 4, "all", lambda s: _odd(s.l), einf_dc4)

    # the printed case-(i) and case-(ii) displays as reconcile-only labels
    hk_C2 = [
        (
            1,
            lambda k, n, m, l: (0 <= k < n) or (m + l <= k <= m + n + l),
        ),
        (
            2,
            lambda k, n, m, l: (n <= k < m)
            or (l - 1 < k < n + m - 1)
            or (n + l - 1 < k <= m + l - 1),
        ),
        (
            3,
            lambda k, n, m, l: any(m + j <= k <= l + j - 1 for j in (0, n)),
        ),
    ]
    hk_C2p = [
        (
            1,
            lambda k, n, m, l: (0 <= k < n) or (n + l <= k <= 2 * n + l),
        ),
        (2, lambda k, n, m, l: l <= k < 2 * n),
        (
            3,
            lambda k, n, m, l: any(n + j <= k <= l + j - 1 for j in (0, n)),
        ),
    ]
    add(
        "dc", 1, "display;n<m",
        lambda s: dc1_applies(s) and s.n < s.m,
        einf_dc1a, hk_C1,
        note="printed per-degree display for the whole case, first sub-branch support",
    )
    add(
        "dc", 1, "display;n=m",
        lambda s: dc1_applies(s) and s.n == s.m,
        einf_dc1a, hk_C1p,
        note="printed per-degree display for the whole case, first sub-branch support",
    )
    add(
        "dc", 2, "display;n<m",
        lambda s: _odd(s.l - s.m)
        and s.n < s.m < s.l < s.n + s.m
        and _odd(s.m + s.l - s.n),
        einf_dc2a, hk_C2,
        note="printed per-degree display for l < n+m, first sub-branch support",
    )
    add(
        "dc", 2, "display;n=m",
        lambda s: _odd(s.l - s.m)
        and s.n == s.m
        and s.m < s.l < 2 * s.n
        and _odd(s.m + s.l - s.n),
        einf_dc2a, hk_C2p,
        note="printed per-degree display for l < 2n, first sub-branch support",
    )

    return specs


_REGISTRY: Optional[list[CaseSpec]] = None


def registry() -> list[CaseSpec]:
    global _REGISTRY
    if _REGISTRY is None:
        _REGISTRY = _registry()
    return _REGISTRY


def labels_for(sig: SpaceSignature) -> list[CaseSpec]:
    return [spec for spec in registry() if spec.applies(sig)]


def find_label(label_id: str) -> CaseSpec:
    for spec in registry():
        if spec.label.id == label_id:
            return spec
    raise KeyError(label_id)


# ---------------------------------------------------------------------------
# reconciliation


@dataclass
class ReconcileReport:
    verdict: str  # "match" | "mismatch"
    mismatch_degrees: list[int]
    diff: dict[int, tuple[int, int]]  # degree -> (engine, oracle)


def reconcile(engine: dict[int, int], oracle: dict[int, int]) -> ReconcileReport:
    """Per-degree comparison; mismatches are collected, never raised."""
    degrees = sorted(set(engine) | set(oracle))
    diff = {}
    for k in degrees:
        e, o = engine.get(k, 0), oracle.get(k, 0)
        if e != o:
            diff[k] = (e, o)
    if diff:
        return ReconcileReport("mismatch", sorted(diff), diff)
    return ReconcileReport("match", [], {})


# ---------------------------------------------------------------------------
# annotation file


DEFAULT_ANNOTATIONS_RESOURCE = "annotations.txt"


def parse_annotations(text: str) -> dict[str, str]:
    """Line-oriented: ``<theorem-id>/<case>/<branch>: note``; # comments."""
    out: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise ValueError(f"annotation line {lineno}: missing ':'")
        label, note = line.split(":", 1)
        out[label.strip()] = note.strip()
    return out


def load_annotations(path: Optional[str] = None) -> dict[str, str]:
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_annotations(fh.read())
    data = (
        _resources.files("freecircle")
        .joinpath("data")
        .joinpath(DEFAULT_ANNOTATIONS_RESOURCE)
        .read_text(encoding="utf-8")
    )
    return parse_annotations(data)


def annotated_degrees(
    spec: CaseSpec, sig: SpaceSignature, annotations: dict[str, str]
) -> Optional[set[int]]:
    """Degrees where the annotated printed display may legitimately disagree.

    Computed, not hand-listed: the difference between the case's two literal
    transcriptions (per-degree display vs stable-page support).  None when
    the label is not annotated.
    """
    if spec.label.id not in annotations:
        return None
    hk = hk_table(spec, sig)
    if hk is None:
        return set()
    einf = einf_table(spec, sig)
    return {
        k
        for k in set(hk) | set(einf)
        if hk.get(k, 0) != einf.get(k, 0)
    }
