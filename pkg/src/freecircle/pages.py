"""Spectral-sequence page engine for the Borel fibration of a circle action.

The base of the fibration is CP^infinity with cohomology Q[t], deg t = 2, so
the second page is Q[t] (x) H*(fiber) and every odd column vanishes.  A class
in bidegree (p, q) is stored as a coefficient vector over the fiber monomials
of degree q; the t-power p/2 is implicit in the column, which makes
multiplication by t the identity on coordinates.

A page is a subquotient of the second page, represented per bidegree by

  * ``basis``      -- lifted representatives of the surviving classes, and
  * ``boundaries`` -- the accumulated image subspace,

both in second-page coordinates.  Differentials live on even pages only:
a differential of page r maps column p to column p + r, and both columns
must be even for anything to survive.

Differentials are not free-form matrices: they are generated by assignments
on the indecomposable column-0 classes of the current page and extended to
every bidegree by t-linearity and the graded Leibniz rule, exactly the way
the transgression arguments run.  ``assemble_differential`` performs that
extension and verifies d o d = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .fiber import (
    SpaceSignature,
    UNIT,
    fiber_degrees,
    mono_index,
    mono_product,
    monomials_of_degree,
)
from .linalg import (
    ONE,
    Span,
    Vec,
    ZERO,
    is_zero_vec,
    kernel_of_rows,
    vec_add,
    vec_scale,
    zero_vec,
)

Bidegree = tuple[int, int]  # (p, q), p even


class EngineError(Exception):
    """Malformed input to the page engine (bad window, bad class, ...)."""


class ScheduleRejected(EngineError):
    """A schedule event failed validation against its page."""

    def __init__(self, message: str, page_index: Optional[int] = None):
        super().__init__(message)
        self.page_index = page_index


class InconsistentDifferential(EngineError):
    """Assignments violate the Leibniz rule or d o d = 0."""


def default_window(sig: SpaceSignature) -> int:
    # Largest page with a possible nonzero differential is n+m+l+1; sources
    # and targets in columns p <= n+m+l+1 then never cross the boundary.
    return 2 * (sig.top_degree + 1)


def certified_band(sig: SpaceSignature, window: int) -> int:
    """Columns p <= band carry certified stable-page values."""
    return window - (sig.top_degree + 1)


class Page:
    """One page of the spectral sequence, restricted to columns <= window."""

    __slots__ = ("sig", "window", "index", "basis", "boundaries")

    def __init__(
        self,
        sig: SpaceSignature,
        window: int,
        index: int,
        basis: dict[Bidegree, tuple[Vec, ...]],
        boundaries: dict[Bidegree, tuple[Vec, ...]],
    ):
        self.sig = sig
        self.window = window
        self.index = index
        self.basis = basis
        self.boundaries = boundaries

    def dim(self, p: int, q: int) -> int:
        return len(self.basis.get((p, q), ()))

    def dims(self) -> dict[Bidegree, int]:
        return {bd: len(vs) for bd, vs in self.basis.items() if vs}

    def bidegrees(self) -> list[Bidegree]:
        return sorted(self.basis.keys())

    def with_index(self, index: int) -> "Page":
        return Page(self.sig, self.window, index, self.basis, self.boundaries)

    def total_dims(self, max_total: Optional[int] = None) -> dict[int, int]:
        out: dict[int, int] = {}
        for (p, q), vs in self.basis.items():
            k = p + q
            if max_total is not None and k > max_total:
                continue
            if vs:
                out[k] = out.get(k, 0) + len(vs)
        return out


def build_e2(sig: SpaceSignature, window: Optional[int] = None) -> Page:
    """The second page: one basis label t^(p/2) (x) mono per bidegree."""
    need = default_window(sig)
    if window is None:
        window = need
    if window % 2 != 0:
        raise EngineError(f"window must be even, got {window}")
    if window < need:
        raise EngineError(
            f"window {window} too small: transgression of the top class needs "
            f"window >= {need} for a certified stable page"
        )
    basis: dict[Bidegree, tuple[Vec, ...]] = {}
    for q in fiber_degrees(sig):
        monos = monomials_of_degree(sig, q)
        dim = len(monos)
        units = tuple(
            tuple(ONE if j == i else ZERO for j in range(dim)) for i in range(dim)
        )
        for p in range(0, window + 1, 2):
            basis[(p, q)] = units
    return Page(sig, window, 2, basis, {})


def vec_product(
    sig: SpaceSignature, qa: int, va: Vec, qb: int, vb: Vec
) -> tuple[int, Vec]:
    """Product of fiber-coefficient vectors; result lives in degree qa+qb."""
    q_out = qa + qb
    monos_a = monomials_of_degree(sig, qa)
    monos_b = monomials_of_degree(sig, qb)
    idx_out = mono_index(sig, q_out)
    out = [ZERO] * len(idx_out)
    for i, ca in enumerate(va):
        if ca == 0:
            continue
        ma = monos_a[i]
        for j, cb in enumerate(vb):
            if cb == 0:
                continue
            pr = mono_product(sig, ma, monos_b[j])
            if pr is None:
                continue
            sign, mono = pr
            out[idx_out[mono]] += sign * ca * cb
    return q_out, tuple(out)


class _ClassSolver:
    """Expresses vectors at one bidegree in page coordinates mod boundaries."""

    def __init__(self, basis: Sequence[Vec], boundaries: Sequence[Vec], dim: int):
        self.basis = list(basis)
        self.span = Span(dim)
        self.n_basis = len(self.basis)
        for v in self.basis:
            self.span.add(v)
        for v in boundaries:
            self.span.add(v)

    def page_coords(self, v: Vec) -> Optional[list[Fraction]]:
        """Coefficients over the page basis (boundary part dropped)."""
        c = self.span.coords(v)
        if c is None:
            return None
        return [c.get(i, ZERO) for i in range(self.n_basis)]


def class_solver(page: Page, p: int, q: int) -> _ClassSolver:
    dim = len(monomials_of_degree(page.sig, q))
    return _ClassSolver(
        page.basis.get((p, q), ()), page.boundaries.get((p, q), ()), dim
    )


def column0_products(page: Page, q: int) -> list[tuple[Vec, tuple[int, int, int, int]]]:
    """All products u*v of positive-degree column-0 basis classes landing in
    fiber degree q, with (q1, i, q2, j) provenance; zero products skipped."""
    sig = page.sig
    out = []
    for q1 in fiber_degrees(sig):
        if q1 <= 0 or q1 > q - 1:
            continue
        q2 = q - q1
        if q2 <= 0 or q2 not in fiber_degrees(sig):
            continue
        for i, u in enumerate(page.basis.get((0, q1), ())):
            for j, v in enumerate(page.basis.get((0, q2), ())):
                _, w = vec_product(sig, q1, u, q2, v)
                if not is_zero_vec(w):
                    out.append((w, (q1, i, q2, j)))
    return out


def indecomposables(page: Page) -> list[tuple[Bidegree, Vec]]:
    """Column-0 basis classes modulo products of positive-degree survivors.

    The unit (fiber degree 0) is excluded: its differential always vanishes,
    so it is never a schedule source.  Returned representatives are the
    page's own basis vectors that complete the decomposable subspace, in
    ascending (q, position) order.
    """
    out = []
    for q in fiber_degrees(page.sig):
        if q == 0:
            continue
        basis = page.basis.get((0, q), ())
        if not basis:
            continue
        solver = class_solver(page, 0, q)
        dec = Span(len(basis))
        for w, _ in column0_products(page, q):
            pc = solver.page_coords(w)
            if pc is None:
                raise EngineError(
                    f"product of surviving classes is not a class at (0,{q})"
                )
            dec.add(tuple(pc))
        for i, v in enumerate(basis):
            unit = tuple(ONE if j == i else ZERO for j in range(len(basis)))
            if dec.add(unit):
                out.append(((0, q), v))
    return out


@dataclass
class DifferentialSet:
    """The page-r differential, one matrix per bidegree.

    ``matrices[(p, q)]`` holds, per source basis vector, its coefficients
    over the target page basis at (p+r, q-r+1); ``image_vecs`` holds the
    same images as second-page coordinate vectors (used to push boundaries
    when turning the page).  Bidegrees with zero differential are omitted.
    Columns with p + r > window are uncertified and never populated.
    """

    page_index: int
    matrices: dict[Bidegree, list[list[Fraction]]]
    image_vecs: dict[Bidegree, list[Vec]]

    def is_zero(self) -> bool:
        return not self.matrices

    def hits_bottom_row(self) -> bool:
        r = self.page_index
        for (p, q), vecs in self.image_vecs.items():
            if q - r + 1 == 0 and any(not is_zero_vec(v) for v in vecs):
                return True
        return False


def assemble_differential(
    page: Page, assignments: Sequence[tuple[int, Vec, Vec]]
) -> DifferentialSet:
    """Extend column-0 assignments to the whole page.

    Each assignment is (q, source, target): ``source`` is a class at (0, q)
    in second-page coordinates, ``target`` a class at (r, q - r + 1).  The
    extension is forced: products of surviving column-0 classes obey the
    graded Leibniz rule, every class is t-linear in its column, unassigned
    indecomposables (including any class not generated by column 0) get
    zero.  Raises when a source is decomposable or dead, a target is not a
    live class, or the extension violates d o d = 0.
    """
    sig = page.sig
    r = page.index
    if r % 2 != 0:
        if assignments:
            raise ScheduleRejected(
                f"page {r} is odd; its targets land in odd columns, which vanish",
                page_index=r,
            )
        return DifferentialSet(r, {}, {})
    degrees = fiber_degrees(sig)
    deg_set = set(degrees)

    solvers: dict[Bidegree, _ClassSolver] = {}

    def solver_at(p: int, q: int) -> _ClassSolver:
        key = (p, q)
        if key not in solvers:
            solvers[key] = class_solver(page, p, q)
        return solvers[key]

    # -- validate assignments ------------------------------------------------
    by_degree: dict[int, list[tuple[Vec, Vec]]] = {}
    for q, src, tgt in assignments:
        q_t = q - r + 1
        if q_t < 0 or q_t not in deg_set or not page.basis.get((r, q_t)):
            raise ScheduleRejected(
                f"page {r}: source at fiber degree {q} targets empty bidegree "
                f"({r},{q_t})",
                page_index=r,
            )
        src_pc = solver_at(0, q).page_coords(src)
        if src_pc is None or all(c == 0 for c in src_pc):
            raise ScheduleRejected(
                f"page {r}: source at (0,{q}) is not a surviving class",
                page_index=r,
            )
        tgt_pc = solver_at(r, q_t).page_coords(tgt)
        if tgt_pc is None:
            raise ScheduleRejected(
                f"page {r}: target at ({r},{q_t}) is not a class on this page",
                page_index=r,
            )
        if all(c == 0 for c in tgt_pc):
            raise ScheduleRejected(
                f"page {r}: target at ({r},{q_t}) is zero on this page "
                f"(already a boundary)",
                page_index=r,
            )
        by_degree.setdefault(q, []).append((src, tgt))

    # -- column-0 differentials, degree by degree ----------------------------
    # d_col0[q][i] = image of the i-th basis vector of (0, q), as a vector in
    # the coordinates of fiber degree q - r + 1 (empty tuple = zero target).
    d_col0: dict[int, list[Vec]] = {}

    def target_dim(q: int) -> int:
        q_t = q - r + 1
        if q_t < 0 or q_t not in deg_set:
            return 0
        return len(monomials_of_degree(sig, q_t))

    for q in degrees:
        basis = page.basis.get((0, q), ())
        if not basis:
            d_col0[q] = []
            continue
        tdim = target_dim(q)
        q_t = q - r + 1
        solver = solver_at(0, q)
        known = Span(len(basis))  # in page coordinates
        known_d: list[Vec] = []  # canonical image vectors aligned with rows

        def canonical_image(img: Vec) -> Vec:
            """Project a raw image onto the page class at the target bidegree.

            Images are only well-defined modulo boundaries, so both the
            consistency comparison and the propagation into further Leibniz
            products use one canonical representative per class.
            """
            if tdim == 0 or is_zero_vec(img):
                return zero_vec(tdim)
            tsolver = solver_at(r, q_t)
            pc = tsolver.page_coords(img)
            if pc is None:
                raise InconsistentDifferential(
                    f"page {r}: image of a class at (0,{q}) is not a class at "
                    f"({r},{q_t})"
                )
            out = zero_vec(tdim)
            tbasis = page.basis.get((r, q_t), ())
            for c, bvec in zip(pc, tbasis):
                if c != 0:
                    out = vec_add(out, vec_scale(c, bvec))
            return out

        def determined(pc: Vec) -> Optional[Vec]:
            coords = known.coords(pc)
            if coords is None:
                return None
            have = zero_vec(tdim)
            for k, c in coords.items():
                have = vec_add(have, vec_scale(c, known_d[k]))
            return have

        # 1. products of lower-degree survivors: Leibniz-forced values; any
        #    linear dependence among them must carry consistent images.
        if q > 0:
            for w, (q1, i, q2, j) in column0_products(page, q):
                pc = solver.page_coords(w)
                if pc is None:
                    raise EngineError(
                        f"product of survivors is not a class at (0,{q})"
                    )
                du = d_col0[q1][i]
                dv = d_col0[q2][j]
                img: Vec = zero_vec(tdim)
                if du and not is_zero_vec(du):
                    _, left = vec_product(
                        sig, q1 - r + 1, du, q2, page.basis[(0, q2)][j]
                    )
                    img = vec_add(img, left)
                if dv and not is_zero_vec(dv):
                    _, right = vec_product(
                        sig, q1, page.basis[(0, q1)][i], q2 - r + 1, dv
                    )
                    sign = -1 if q1 % 2 else 1
                    img = vec_add(img, vec_scale(Fraction(sign), right))
                img = canonical_image(img)
                have = determined(tuple(pc))
                if have is None:
                    known.add(tuple(pc))
                    known_d.append(img)
                elif have != img:
                    raise InconsistentDifferential(
                        f"page {r}: Leibniz rule gives conflicting values for "
                        f"a product at (0,{q}); no differential extends these "
                        f"assignments"
                    )
        # 2. scheduled sources: must be indecomposable, i.e. independent of
        #    the products and of the earlier sources.
        for src, tgt in by_degree.get(q, ()):
            pc = solver.page_coords(src)
            assert pc is not None
            if determined(tuple(pc)) is not None:
                raise ScheduleRejected(
                    f"page {r}: source at (0,{q}) is not a surviving "
                    f"indecomposable (its differential is already determined)",
                    page_index=r,
                )
            known.add(tuple(pc))
            known_d.append(canonical_image(tgt))
        # 3. unassigned remainder survives untouched.
        for i in range(len(basis)):
            unit = tuple(ONE if j == i else ZERO for j in range(len(basis)))
            if not known.contains(unit):
                known.add(unit)
                known_d.append(zero_vec(tdim))
        # resolve the page basis through the known span
        images = []
        for i in range(len(basis)):
            unit = tuple(ONE if j == i else ZERO for j in range(len(basis)))
            img = determined(unit)
            assert img is not None
            images.append(img)
        d_col0[q] = images

    # -- t-linearity well-definedness -----------------------------------------
    # The differential is a map of Q[t]-modules: whenever a combination
    # t^(p/2) sum_i beta_i w_i of column-0 classes is dead at column p, its
    # image t^(p/2) sum_i beta_i d(w_i) must already be dead at column p + r,
    # otherwise no differential extends the assignments.
    for q in degrees:
        imgs = d_col0.get(q, [])
        if not imgs or all(is_zero_vec(v) for v in imgs):
            continue
        q_t = q - r + 1
        col0 = page.basis.get((0, q), ())
        for p in range(2, page.window - r + 1, 2):
            bounds = page.boundaries.get((p, q), ())
            alive = page.basis.get((p, q), ())
            if not bounds and len(alive) == len(col0):
                continue  # nothing dead yet in this column
            bspan = Span(len(col0[0]))
            for v in bounds:
                bspan.add(v)
            residuals = [bspan.residual(w) for w in col0]
            ncols = len(residuals)
            nrows = len(col0[0])
            rows = [tuple(res[j] for res in residuals) for j in range(nrows)]
            for beta in kernel_of_rows(rows, ncols):
                img = zero_vec(len(imgs[0]))
                for c, iv in zip(beta, imgs):
                    if c != 0:
                        img = vec_add(img, vec_scale(c, iv))
                if is_zero_vec(img):
                    continue
                tsolver = solver_at(p + r, q_t)
                pc = tsolver.page_coords(img)
                if pc is None or any(c != 0 for c in pc):
                    raise InconsistentDifferential(
                        f"page {r}: t-linearity fails at column {p}, fiber "
                        f"degree {q}: a dead class would map to a live one"
                    )

    # -- extend to all bidegrees ---------------------------------------------
    matrices: dict[Bidegree, list[list[Fraction]]] = {}
    image_vecs: dict[Bidegree, list[Vec]] = {}
    for (p, q), basis in page.basis.items():
        if not basis or p + r > page.window:
            continue
        q_t = q - r + 1
        if q_t < 0 or q_t not in deg_set:
            continue
        col0 = d_col0.get(q, [])
        if not col0 or all(is_zero_vec(v) for v in col0):
            continue
        if p == 0:
            imgs = list(col0)
        else:
            # multiplication by t^(p/2) is the identity on coordinates, so a
            # class decomposes over the column-0 basis plus boundaries; any
            # leftover piece is a torsion-created class with zero assignment.
            col0_basis = page.basis.get((0, q), ())
            hom = _ClassSolver(col0_basis, page.boundaries.get((p, q), ()), len(monomials_of_degree(sig, q)))
            imgs = []
            for v in basis:
                pc = hom.page_coords(v)
                if pc is None:
                    imgs.append(zero_vec(len(monomials_of_degree(sig, q_t))))
                    continue
                img = zero_vec(len(monomials_of_degree(sig, q_t)))
                for i, c in enumerate(pc):
                    if c != 0:
                        img = vec_add(img, vec_scale(c, col0[i]))
                imgs.append(img)
        if all(is_zero_vec(v) for v in imgs):
            continue
        tsolver = solver_at(p + r, q_t)
        cols = []
        for v, img in zip(basis, imgs):
            pc = tsolver.page_coords(img)
            if pc is None:
                raise InconsistentDifferential(
                    f"page {r}: image of a class at ({p},{q}) is not a class "
                    f"at ({p + r},{q_t})"
                )
            cols.append(pc)
        matrices[(p, q)] = cols
        image_vecs[(p, q)] = imgs

    dset = DifferentialSet(r, matrices, image_vecs)
    _check_d_squared(page, dset)
    return dset


def _check_d_squared(page: Page, dset: DifferentialSet) -> None:
    r = dset.page_index
    for (p, q), cols in dset.matrices.items():
        nxt = (p + r, q - r + 1)
        cols2 = dset.matrices.get(nxt)
        if cols2 is None:
            continue
        tdim = len(cols2[0]) if cols2 else 0
        for j, col in enumerate(cols):
            acc = [ZERO] * tdim
            for i, c in enumerate(col):
                if c != 0:
                    for k in range(tdim):
                        acc[k] += c * cols2[i][k]
            if any(x != 0 for x in acc):
                raise InconsistentDifferential(
                    f"page {r}: d o d != 0 starting at bidegree ({p},{q})"
                )


def turn_page(page: Page, dset: DifferentialSet) -> Page:
    """Homology with respect to the assembled differential; index + 1."""
    r = page.index
    assert dset.page_index == r
    new_basis: dict[Bidegree, tuple[Vec, ...]] = {}
    new_bounds: dict[Bidegree, tuple[Vec, ...]] = {}
    touched = set(dset.matrices.keys())
    incoming_at = {}
    for (p, q), vecs in dset.image_vecs.items():
        tgt = (p + r, q - r + 1)
        incoming_at[tgt] = vecs
        touched.add(tgt)

    for key in set(page.basis) | set(page.boundaries):
        p, q = key
        basis = page.basis.get(key, ())
        bounds = page.boundaries.get(key, ())
        if key not in touched:
            if basis or bounds:
                if basis:
                    new_basis[key] = basis
                if bounds:
                    new_bounds[key] = bounds
            continue
        # kernel of the outgoing matrix, in page coordinates
        cols = dset.matrices.get(key)
        if cols is None:
            kernel_reps = list(basis)
        else:
            tdim = len(cols[0]) if cols else 0
            rows = [tuple(cols[j][i] for j in range(len(cols))) for i in range(tdim)]
            kernel_reps = []
            for lam in kernel_of_rows(rows, len(basis)):
                vdim = len(basis[0])
                v = zero_vec(vdim)
                for j, c in enumerate(lam):
                    if c != 0:
                        v = vec_add(v, vec_scale(c, basis[j]))
                kernel_reps.append(v)
        dim = len(monomials_of_degree(page.sig, q))
        span = Span(dim)
        bounds_list = list(bounds)
        for v in bounds_list:
            span.add(v)
        for v in incoming_at.get(key, ()):
            if not is_zero_vec(v) and span.add(v):
                bounds_list.append(v)
        keep = []
        for v in kernel_reps:
            if span.add(v):
                keep.append(v)
        if keep:
            new_basis[key] = tuple(keep)
        if bounds_list:
            new_bounds[key] = tuple(bounds_list)
    return Page(page.sig, page.window, r + 1, new_basis, new_bounds)


@dataclass
class HistoryEntry:
    page_index: int
    page: Page  # the page the differential acted on
    differentials: DifferentialSet


@dataclass
class Run:
    """Result of iterating a schedule out to the stable page."""

    sig: SpaceSignature
    window: int
    stable: Page
    history: list[HistoryEntry]

    @property
    def band(self) -> int:
        return certified_band(self.sig, self.window)


def run_to_infinity(
    sig: SpaceSignature,
    window: Optional[int],
    events_by_page: dict[int, list[tuple[int, Vec, Vec]]],
) -> Run:
    """Apply schedule events page by page and return the stable page.

    ``events_by_page`` maps an (even) page index to its assignments in the
    ``assemble_differential`` format.  Pages without events carry the zero
    differential and are skipped wholesale; the iteration stops after page
    n+m+l+1, beyond which every differential vanishes.
    """
    page = build_e2(sig, window)
    stop = sig.top_degree + 1
    history: list[HistoryEntry] = []
    for r in sorted(events_by_page):
        if r % 2 != 0 or r < 2 or r > stop:
            raise ScheduleRejected(
                f"events at page {r}: differentials live on even pages "
                f"2 <= r <= {stop}",
                page_index=r,
            )
    for r in sorted(events_by_page):
        events = events_by_page[r]
        if not events:
            continue
        page = page.with_index(r)
        dset = assemble_differential(page, events)
        history.append(HistoryEntry(r, page, dset))
        page = turn_page(page, dset)
    stable = page.with_index(stop + 1)
    return Run(sig, stable.window, stable, history)
