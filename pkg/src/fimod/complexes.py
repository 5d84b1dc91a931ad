"""Negative-shift complexes, homology, poset colimits, inductive checks.

Everything here works against a "slice source": any object with a `ring`
attribute, a `slice_module(n) -> PresentedModule` method and an
`induced_matrix(f: Injection) -> Matrix` method, functorial in f. Finitely
presented FI-modules provide one; so does the configuration-space witness.

The degree-n slice of the signed complex has, at level a, one summand for
each subset T of [n] of size n - a, realized as the degree-(n-a) slice
through the order-preserving bijection with T. The distinguished ordered
representative of the summand T is the increasing enumeration of its
complement; with that convention the descended differential out of T is an
alternating sum over the complement, the sign of each target being the
1-based rank of the inserted point.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .injections import Injection, standard_inclusion
from .matrix import Matrix, block_diagonal, hstack
from .modules import (Invariants, ModuleMap, PresentedModule, is_isomorphism)
from .rings import IntegerRing
from .smith import IntegerSolver, integer_kernel_basis


def subsets_of_size(n: int, k: int) -> list[tuple[int, ...]]:
    return [tuple(s) for s in combinations(range(1, n + 1), k)]


def position_injection(small: tuple[int, ...], big: tuple[int, ...]) -> Injection:
    """The injection [|small|] -> [|big|] of positions induced by an
    inclusion of sorted subsets."""
    pos = {v: k + 1 for k, v in enumerate(big)}
    return Injection(len(small), len(big), tuple(pos[v] for v in small))


# ---------------------------------------------------------------------------
# signed slices and differentials

@dataclass
class SignedShiftSlice:
    level: int
    degree: int
    subsets: list[tuple[int, ...]]     # summand labels, |T| = degree - level
    summand: PresentedModule           # the shared degree-(n-a) slice
    module: PresentedModule            # block sum over the subsets

    @property
    def summand_ambient(self) -> int:
        return self.summand.ambient

    def offset(self, idx: int) -> int:
        return idx * self.summand.ambient

    def subset_index(self, t: tuple[int, ...]) -> int:
        return self.subsets.index(t)


def signed_shift_slice(src, a: int, n: int) -> SignedShiftSlice:
    """Level-a piece of the signed complex at degree n."""
    if a < 0 or n < 0:
        raise ValueError("level and degree must be >= 0")
    ring = src.ring
    if a > n:
        return SignedShiftSlice(a, n, [], PresentedModule(ring, 0),
                                PresentedModule(ring, 0))
    summand = src.slice_module(n - a)
    subsets = subsets_of_size(n, n - a)
    rels = block_diagonal(ring, [summand.relations] * len(subsets))
    module = PresentedModule(ring, summand.ambient * len(subsets), rels)
    return SignedShiftSlice(a, n, subsets, summand, module)


def differential(src, a: int, n: int,
                 source_slice: SignedShiftSlice | None = None,
                 target_slice: SignedShiftSlice | None = None) -> ModuleMap:
    """d: (level a) -> (level a-1) at degree n, 1 <= a <= n."""
    if not 1 <= a <= n:
        raise ValueError("differential needs 1 <= a <= n")
    ring = src.ring
    s_from = source_slice or signed_shift_slice(src, a, n)
    s_to = target_slice or signed_shift_slice(src, a - 1, n)
    tgt_index = {t: k for k, t in enumerate(s_to.subsets)}
    blocks: dict[int, Matrix] = {}   # insertion position -> induced matrix
    ent: dict[tuple[int, int], object] = {}
    for si, t in enumerate(s_from.subsets):
        complement = [u for u in range(1, n + 1) if u not in t]
        for i, u in enumerate(complement, start=1):
            t2 = tuple(sorted(t + (u,)))
            block = blocks.get(_insert_pos(t, u))
            if block is None:
                block = src.induced_matrix(position_injection(t, t2))
                blocks[_insert_pos(t, u)] = block
            sign = ring.one if i % 2 == 0 else ring.neg(ring.one)
            roff = s_to.offset(tgt_index[t2])
            coff = s_from.offset(si)
            for (r, c), v in block.entries.items():
                ent[(roff + r, coff + c)] = ring.mul(sign, v)
    mat = Matrix(ring, s_to.module.ambient, s_from.module.ambient, ent)
    return ModuleMap(s_from.module, s_to.module, mat)


def _insert_pos(t: tuple[int, ...], u: int) -> int:
    return sum(1 for v in t if v < u)


@dataclass
class SliceComplex:
    degree: int
    terms: list[SignedShiftSlice]          # levels 0..degree
    differentials: list[ModuleMap]         # differentials[a-1]: level a -> a-1

    def term(self, a: int) -> SignedShiftSlice:
        return self.terms[a]

    def check_square_zero(self) -> bool:
        for a in range(2, self.degree + 1):
            comp = self.differentials[a - 2].matrix @ self.differentials[a - 1].matrix
            if not comp.is_zero():
                return False
        return True


def slice_complex(src, n: int) -> SliceComplex:
    terms = [signed_shift_slice(src, a, n) for a in range(n + 1)]
    diffs = [differential(src, a, n, terms[a], terms[a - 1])
             for a in range(1, n + 1)]
    return SliceComplex(n, terms, diffs)


# ---------------------------------------------------------------------------
# homology

@dataclass
class HomologyResult:
    degree: int
    mode: str                          # "field" or "integer-free-slices"
    positions: dict[int, Invariants]

    def is_zero_at(self, a: int) -> bool:
        return self.positions[a].is_zero


def complex_homology(src, n: int, positions=None) -> HomologyResult:
    """Homology of the degree-n slice of the signed complex.

    Over a field: dim H_a = dim(term a) - rank im(d_a) - rank im(d_{a+1}),
    all computed on the presented quotients. Over Z the slices must all be
    torsion-free; the differentials are then lifted to chosen bases of the
    free quotients and homology is read off Smith forms.
    """
    ring = src.ring
    if positions is None:
        positions = range(0, n + 1)
    positions = sorted(set(positions))
    if any(a < 0 or a > n for a in positions):
        raise ValueError("positions must lie in 0..n")
    if ring.is_field:
        return _homology_field(src, n, positions)
    if isinstance(ring, IntegerRing):
        for m in range(0, n + 1):
            if src.slice_module(m).invariants().torsion:
                raise ValueError(
                    f"slice at degree {m} has torsion over Z; integer "
                    "homology supports free slices only - run field-wise "
                    "(Q and a prime list) instead")
        return _homology_integer(src, n, positions)
    raise ValueError(f"unsupported ring {ring}")


def _homology_field(src, n: int, positions: list[int]) -> HomologyResult:
    needed_terms = set()
    for a in positions:
        needed_terms.update({a, a - 1, a + 1})
    terms = {a: signed_shift_slice(src, a, n)
             for a in needed_terms if 0 <= a <= n}
    rel_rank: dict[int, int] = {}
    qdim: dict[int, int] = {}
    for a, t in terms.items():
        rel_rank[a] = t.module.relations.rank()
        qdim[a] = t.module.ambient - rel_rank[a]

    im_rank: dict[int, int] = {}

    def image_rank(a: int) -> int:
        # rank of the image of the induced map on quotients at level a
        if a < 1 or a > n:
            return 0
        if a not in im_rank:
            d = differential(src, a, n, terms[a], terms[a - 1])
            stacked = hstack([d.matrix, terms[a - 1].module.relations])
            im_rank[a] = stacked.rank() - rel_rank[a - 1]
        return im_rank[a]

    out = {}
    for a in positions:
        out[a] = Invariants(qdim[a] - image_rank(a) - image_rank(a + 1))
    return HomologyResult(n, "field", out)


def _homology_integer(src, n: int, positions: list[int]) -> HomologyResult:
    ring = src.ring
    cx = slice_complex(src, n)
    coords: list[Matrix] = []
    sections: list[Matrix] = []
    for t in cx.terms:
        if t.module.relations.is_zero():
            ident = Matrix.identity(ring, t.module.ambient)
            coords.append(ident)
            sections.append(ident)
        else:
            c, s = _blockwise_free_coordinates(t)
            coords.append(c)
            sections.append(s)
    lifted: dict[int, Matrix] = {}
    for a in range(1, n + 1):
        lifted[a] = coords[a - 1] @ cx.differentials[a - 1].matrix @ sections[a]
    out = {}
    for a in positions:
        rank_a = coords[a].nrows
        if a >= 1:
            kernel = integer_kernel_basis(lifted[a])
        else:
            kernel = [{j: 1} for j in range(rank_a)]
        if not kernel:
            out[a] = Invariants(0)
            continue
        kmat = Matrix.from_columns(ring, rank_a, kernel)
        if a + 1 <= n and not lifted[a + 1].is_zero():
            solver = IntegerSolver(kmat)
            cols = []
            for col in lifted[a + 1].columns():
                sol = solver.solve(col)
                if sol is None:
                    raise RuntimeError("boundary escaped the cycle lattice")
                cols.append(sol)
            inner = Matrix.from_columns(ring, len(kernel), cols) \
                if cols else Matrix.zero(ring, len(kernel), 0)
        else:
            inner = Matrix.zero(ring, len(kernel), 0)
        out[a] = PresentedModule(ring, len(kernel), inner).invariants()
    return HomologyResult(n, "integer-free-slices", out)


def _blockwise_free_coordinates(t: SignedShiftSlice) -> tuple[Matrix, Matrix]:
    c, s = t.summand.free_coordinates()
    k = len(t.subsets)
    ring = t.module.ring
    return (block_diagonal(ring, [c] * k), block_diagonal(ring, [s] * k))


def homology_field_table(src_by_ring, n: int, positions=None) -> dict:
    """Field-wise homology dimensions: {ring name: {a: dim}}.

    `src_by_ring` maps ring names to slice sources over the corresponding
    field; used to report integer conclusions prime-by-prime when slices
    carry torsion.
    """
    table = {}
    for name, src in src_by_ring.items():
        res = complex_homology(src, n, positions)
        table[name] = {a: inv.free_rank for a, inv in res.positions.items()}
    return table


# ---------------------------------------------------------------------------
# chain homotopy

def homotopy_matrix(src, a: int, n: int) -> Matrix:
    """G: (level a, degree n) -> (level a+1, degree n+1).

    Prepending the added point to the ordered representative sends the
    summand T of [n] to the summand T of [n+1]; re-sorting the
    representative costs the sign (-1)^a.
    """
    ring = src.ring
    s_from = signed_shift_slice(src, a, n)
    s_to = signed_shift_slice(src, a + 1, n + 1)
    tgt_index = {t: k for k, t in enumerate(s_to.subsets)}
    sign = ring.one if a % 2 == 0 else ring.neg(ring.one)
    ent = {}
    amb = s_from.summand_ambient
    for si, t in enumerate(s_from.subsets):
        roff = s_to.offset(tgt_index[t])
        coff = s_from.offset(si)
        for r in range(amb):
            ent[(roff + r, coff + r)] = sign
    return Matrix(ring, s_to.module.ambient, s_from.module.ambient, ent)


def shift_one_matrix(src, a: int, n: int) -> Matrix:
    """X_1 on the level-a signed slice: (a, n) -> (a, n+1).

    The summand T goes to the summand T ∪ {n+1} through the standard
    inclusion of its slice; the representative stays increasing, so no
    sign appears.
    """
    ring = src.ring
    s_from = signed_shift_slice(src, a, n)
    s_to = signed_shift_slice(src, a, n + 1)
    tgt_index = {t: k for k, t in enumerate(s_to.subsets)}
    block = src.induced_matrix(standard_inclusion(n - a, n - a + 1)) \
        if a <= n else None
    ent = {}
    for si, t in enumerate(s_from.subsets):
        t2 = t + (n + 1,)
        roff = s_to.offset(tgt_index[t2])
        coff = s_from.offset(si)
        for (r, c), v in block.entries.items():
            ent[(roff + r, coff + c)] = v
    return Matrix(ring, s_to.module.ambient, s_from.module.ambient, ent)


def verify_chain_homotopy(src, a: int, n: int) -> bool:
    """Exact matrix identity dG + Gd = -X_1 at level a, degree n."""
    if not 0 <= a <= n:
        raise ValueError("need 0 <= a <= n")
    ring = src.ring
    g_a = homotopy_matrix(src, a, n)
    d_up = differential(src, a + 1, n + 1).matrix
    lhs = d_up @ g_a
    if a >= 1:
        d_here = differential(src, a, n).matrix
        g_below = homotopy_matrix(src, a - 1, n)
        lhs = lhs + (g_below @ d_here)
    rhs = -shift_one_matrix(src, a, n)
    return lhs == rhs


# ---------------------------------------------------------------------------
# poset colimits and the inductive description

@dataclass
class PosetColimit:
    degree: int
    cutoff: int
    mode: str
    objects: list[tuple[int, ...]]
    module: PresentedModule
    canonical: ModuleMap               # colimit -> V_n


def poset_colimit(src, n: int, cutoff: int, mode: str = "full") -> PosetColimit:
    """Coequalizer presentation of the colimit over subsets of [n].

    mode "full": all S with |S| <= cutoff, gluing along covering
    inclusions (any inclusion factors through covers, so the span is
    unchanged). mode "final-layers": only |S| in {cutoff-1, cutoff}, valid
    for cutoff <= n by finality of the top two layers.
    """
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    ring = src.ring
    if mode == "full":
        sizes = range(0, min(cutoff, n) + 1)
    elif mode == "final-layers":
        if cutoff > n:
            raise ValueError("final-layers mode needs cutoff <= n")
        sizes = range(max(0, cutoff - 1), cutoff + 1)
    else:
        raise ValueError(f"unknown colimit mode {mode!r}")
    objects: list[tuple[int, ...]] = []
    for k in sizes:
        objects.extend(subsets_of_size(n, k))
    obj_index = {s: k for k, s in enumerate(objects)}
    slices = [src.slice_module(len(s)) for s in objects]
    offsets = []
    total = 0
    for sl in slices:
        offsets.append(total)
        total += sl.ambient
    cols: list[dict] = []
    # per-object relations
    for oi, sl in enumerate(slices):
        off = offsets[oi]
        for col in sl.relations.columns():
            cols.append({off + r: v for r, v in col.items()})
    # gluing along covers inside the object set
    for oi, s in enumerate(objects):
        bigger = [v for v in range(1, n + 1) if v not in s]
        for u in bigger:
            s2 = tuple(sorted(s + (u,)))
            ti = obj_index.get(s2)
            if ti is None:
                continue
            block = src.induced_matrix(position_injection(s, s2))
            for k in range(slices[oi].ambient):
                col = {offsets[oi] + k: ring.one}
                for r, v in block.column(k).items():
                    key = offsets[ti] + r
                    cur = col.get(key, ring.zero)
                    cur = ring.sub(cur, v)
                    if ring.is_zero(cur):
                        col.pop(key, None)
                    else:
                        col[key] = cur
                cols.append(col)
    relmat = Matrix.from_columns(ring, total, cols) \
        if cols else Matrix.zero(ring, total, 0)
    colim = PresentedModule(ring, total, relmat)
    target = src.slice_module(n)
    ent = {}
    for oi, s in enumerate(objects):
        block = src.induced_matrix(
            Injection(len(s), n, s))
        for (r, c), v in block.entries.items():
            ent[(r, offsets[oi] + c)] = v
    cmap = ModuleMap(colim, target, Matrix(ring, target.ambient, total, ent))
    return PosetColimit(n, cutoff, mode, objects, colim, cmap)


def check_inductive(src, cutoff: int, n: int) -> tuple[bool, dict]:
    """Is the canonical map (colimit over |S| <= cutoff) -> V_n an iso?"""
    colim = poset_colimit(src, n, cutoff, mode="full")
    ok, cert = is_isomorphism(colim.canonical)
    cert["degree"] = n
    cert["cutoff"] = cutoff
    return ok, cert


@dataclass
class FindNReport:
    bound: int
    n_max: int
    nonzero_h0: list[int]
    nonzero_h1: list[int]
    status: str = "certified-up-to-bound"


def find_N(src, n_max: int) -> FindNReport:
    """Largest n <= n_max where H_0 or H_1 of the slice complex is nonzero.

    Returns 0 when neither obstruction appears anywhere in the window;
    vanishing beyond the window is never asserted.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    bad_h0 = []
    bad_h1 = []
    for n in range(0, n_max + 1):
        res = complex_homology(src, n, positions=[a for a in (0, 1) if a <= n])
        if not res.positions[0].is_zero:
            bad_h0.append(n)
        if 1 in res.positions and not res.positions[1].is_zero:
            bad_h1.append(n)
    candidates = bad_h0 + bad_h1
    return FindNReport(max(candidates) if candidates else 0, n_max,
                       bad_h0, bad_h1)


# ---------------------------------------------------------------------------
# ordered (unsigned) shift slices, used for the free-module comparison

@dataclass
class OrderedShiftSlice:
    level: int
    degree: int
    injections: list[Injection]        # f: [a] -> [n], lexicographic
    summand: PresentedModule           # slice at degree - level
    module: PresentedModule

    def offset(self, idx: int) -> int:
        return idx * self.summand.ambient


def ordered_shift_slice(src, a: int, n: int) -> OrderedShiftSlice:
    from .injections import enumerate_injections
    ring = src.ring
    if a > n:
        return OrderedShiftSlice(a, n, [], PresentedModule(ring, 0),
                                 PresentedModule(ring, 0))
    injections = enumerate_injections(a, n)
    summand = src.slice_module(n - a)
    rels = block_diagonal(ring, [summand.relations] * len(injections))
    module = PresentedModule(ring, summand.ambient * len(injections), rels)
    return OrderedShiftSlice(a, n, injections, summand, module)


def ordered_shift_structure_map(src, a: int, w: Injection) -> ModuleMap:
    """Structure map of the ordered shift along w: degree w.source -> w.target.

    The summand at f goes to the summand at w∘f via the map induced on the
    complements (positions tracked through w).
    """
    n, m = w.source, w.target
    s_from = ordered_shift_slice(src, a, n)
    s_to = ordered_shift_slice(src, a, m)
    tgt_index = {f.images: k for k, f in enumerate(s_to.injections)}
    ring = src.ring
    ent = {}
    for si, f in enumerate(s_from.injections):
        wf = w.after(f)
        comp_src = [v for v in range(1, n + 1) if v not in set(f.images)]
        comp_tgt = sorted(v for v in range(1, m + 1) if v not in set(wf.images))
        pos_tgt = {v: k + 1 for k, v in enumerate(comp_tgt)}
        rho = Injection(len(comp_src), len(comp_tgt),
                        tuple(pos_tgt[w(v)] for v in comp_src))
        block = src.induced_matrix(rho)
        roff = s_to.offset(tgt_index[wf.images])
        coff = s_from.offset(si)
        for (r, c), v in block.entries.items():
            ent[(roff + r, coff + c)] = v
    mat = Matrix(ring, s_to.module.ambient, s_from.module.ambient, ent)
    return ModuleMap(s_from.module, s_to.module, mat)


def ordered_shift_free_iso(d: int, a: int, n: int, ring) -> Matrix:
    """The explicit basis bijection (ordered shift of M(d) at level a)_n ->
    M(a+d)_n, pairing (f, g) with the disjoint concatenation f ⊔ g."""
    from .presentations import free_presentation
    src = free_presentation(ring, d)
    big = free_presentation(ring, a + d)
    s_from = ordered_shift_slice(src, a, n)
    tgt = big.evaluate_slice(n)
    sl_small = src.evaluate_slice(n - a)
    ent = {}
    for si, f in enumerate(s_from.injections):
        comp = sorted(v for v in range(1, n + 1) if v not in set(f.images))
        for k, (_, g) in enumerate(sl_small.basis):
            u = f.images + tuple(comp[v - 1] for v in g.images)
            ent[(tgt.index[(0, u)], s_from.offset(si) + k)] = ring.one
    return Matrix(ring, tgt.ambient, s_from.module.ambient, ent)
