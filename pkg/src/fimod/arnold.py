"""A desk-scale witness FI-module from plane configuration spaces.

The degree-m cohomology of the ordered configuration space of the plane is
presented by classes indexed by edges of the complete graph: products of m
distinct edge classes, anticommuting, squaring to zero, subject to the
three-term relations on triangles wedged with arbitrary complementary edge
sets. Slices are quotients of the free module on m-edge-sets; injections
relabel edges with the sign of re-sorting.

The same module can be emitted as a finitely presented FI-module document:
one generator per full-support edge-set, adjacent-transposition relabeling
identifications, and the canonical triangle relations.
"""
from __future__ import annotations

from itertools import combinations

from .injections import Injection, identity_injection
from .matrix import Matrix
from .modules import ModuleMap, PresentedModule
from .presentations import FIPresentation, FreeElement
from .rings import RingSpec


def edges(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def edge_sets(m: int, n: int) -> list[tuple[tuple[int, int], ...]]:
    return [tuple(s) for s in combinations(edges(n), m)]


def _sort_sign(seq: list[tuple[int, int]]) -> tuple[tuple[tuple[int, int], ...], int]:
    """Sort an edge list, returning (sorted tuple, permutation sign);
    duplicates make the product zero, signalled by sign 0."""
    if len(set(seq)) != len(seq):
        return tuple(seq), 0
    sign = 1
    lst = list(seq)
    for i in range(len(lst)):
        for j in range(len(lst) - 1 - i):
            if lst[j] > lst[j + 1]:
                lst[j], lst[j + 1] = lst[j + 1], lst[j]
                sign = -sign
    return tuple(lst), sign


def _triangle_terms(i: int, j: int, k: int):
    """The three edge pairs of the triangle relation, in cyclic order."""
    e_ij, e_jk, e_ik = (i, j), (j, k), (i, k)
    return [(e_ij, e_jk), (e_jk, e_ik), (e_ik, e_ij)]


class ArnoldModule:
    """Slice source for the degree-m witness over a chosen ring."""

    def __init__(self, m: int, ring: RingSpec):
        if m < 0:
            raise ValueError("cohomological degree must be >= 0")
        self.m = m
        self.ring = ring
        self._slices: dict[int, PresentedModule] = {}
        self._bases: dict[int, dict] = {}

    def slice_basis(self, n: int) -> list[tuple[tuple[int, int], ...]]:
        return edge_sets(self.m, n)

    def _basis_index(self, n: int) -> dict:
        if n not in self._bases:
            self._bases[n] = {es: k for k, es in enumerate(self.slice_basis(n))}
        return self._bases[n]

    def slice_module(self, n: int) -> PresentedModule:
        if n in self._slices:
            return self._slices[n]
        ring = self.ring
        basis = self.slice_basis(n)
        index = self._basis_index(n)
        cols = []
        if self.m >= 2:
            all_edges = edges(n)
            for (i, j, k) in combinations(range(1, n + 1), 3):
                for extra in combinations(all_edges, self.m - 2):
                    col: dict[int, object] = {}
                    for (e1, e2) in _triangle_terms(i, j, k):
                        es, sign = _sort_sign([e1, e2, *extra])
                        if sign == 0:
                            continue
                        key = index[es]
                        coeff = ring.coerce(sign)
                        cur = ring.add(col.get(key, ring.zero), coeff)
                        if ring.is_zero(cur):
                            col.pop(key, None)
                        else:
                            col[key] = cur
                    if col:
                        cols.append(col)
        relmat = Matrix.from_columns(ring, len(basis), cols) \
            if cols else Matrix.zero(ring, len(basis), 0)
        sm = PresentedModule(ring, len(basis), relmat)
        self._slices[n] = sm
        return sm

    def induced_matrix(self, f: Injection) -> Matrix:
        """Relabel every edge-set along f, with the re-sorting sign."""
        src_basis = self.slice_basis(f.source)
        tgt_index = self._basis_index(f.target)
        ent = {}
        for col, es in enumerate(src_basis):
            relabeled = [tuple(sorted((f(u), f(v)))) for (u, v) in es]
            sorted_es, sign = _sort_sign(relabeled)
            ent[(tgt_index[sorted_es], col)] = self.ring.coerce(sign)
        return Matrix(self.ring, len(tgt_index), len(src_basis), ent)

    def induced_map(self, f: Injection) -> ModuleMap:
        return ModuleMap(self.slice_module(f.source),
                         self.slice_module(f.target),
                         self.induced_matrix(f))

    def __repr__(self):
        return f"ArnoldModule(m={self.m}, ring={self.ring})"


def arnold_slice(m: int, n: int, ring: RingSpec) -> PresentedModule:
    return ArnoldModule(m, ring).slice_module(n)


def arnold_induced_map(m: int, f: Injection, ring: RingSpec) -> ModuleMap:
    return ArnoldModule(m, ring).induced_map(f)


def _support(es) -> tuple[int, ...]:
    verts = set()
    for (u, v) in es:
        verts.add(u)
        verts.add(v)
    return tuple(sorted(verts))


def arnold_presentation(m: int, ring: RingSpec) -> FIPresentation:
    """The witness as a finitely presented FI-module.

    Generators: one per m-edge-set with full vertex support [s], s <= 2m.
    Relations: adjacent-transposition relabeling identifications (these
    generate all of them under pushforward) and the full-support triangle
    relations.
    """
    gens: list[tuple[int, tuple]] = []           # (degree s, edge-set)
    for s in range(0, 2 * m + 1):
        for es in edge_sets(m, s):
            if _support(es) == tuple(range(1, s + 1)):
                gens.append((s, es))
    gen_index = {es: gi for gi, (s, es) in enumerate(gens)}
    degrees = [s for s, _ in gens]
    relations: list[FreeElement] = []
    one = ring.one
    # relabeling identifications
    for gi, (s, es) in enumerate(gens):
        for t in range(1, s):
            images = list(range(1, s + 1))
            images[t - 1], images[t] = images[t], images[t - 1]
            sigma = Injection(s, s, tuple(images))
            relabeled = [tuple(sorted((sigma(u), sigma(v)))) for (u, v) in es]
            sorted_es, sign = _sort_sign(relabeled)
            gj = gen_index[sorted_es]
            terms = {(gi, sigma): one}
            key = (gj, identity_injection(s))
            terms[key] = ring.sub(terms.get(key, ring.zero),
                                  ring.coerce(sign))
            relations.append(FreeElement(
                s, {k: v for k, v in terms.items() if not ring.is_zero(v)}))
    # triangle relations on full support
    if m >= 2:
        for s in range(3, 2 * m + 1):
            all_edges = edges(s)
            for (i, j, k) in combinations(range(1, s + 1), 3):
                for extra in combinations(all_edges, m - 2):
                    verts = set((i, j, k))
                    for (u, v) in extra:
                        verts.update((u, v))
                    if verts != set(range(1, s + 1)):
                        continue
                    terms: dict = {}
                    for (e1, e2) in _triangle_terms(i, j, k):
                        sorted_es, sign = _sort_sign([e1, e2, *extra])
                        if sign == 0:
                            continue
                        key = (gen_index[sorted_es], identity_injection(s))
                        cur = ring.add(terms.get(key, ring.zero),
                                       ring.coerce(sign))
                        if ring.is_zero(cur):
                            terms.pop(key, None)
                        else:
                            terms[key] = cur
                    if terms:
                        relations.append(FreeElement(s, terms))
    return FIPresentation(ring, degrees, relations)


def admissible_edge_sets(m: int, n: int) -> list[tuple[tuple[int, int], ...]]:
    """Edge-sets whose larger endpoints are pairwise distinct.

    Writing each class with its edges sorted by larger endpoint, these are
    the classical monomial basis of the degree-m slice; counting them is an
    independent oracle for the quotient dimension.
    """
    return [es for es in edge_sets(m, n)
            if len({max(u, v) for (u, v) in es}) == m]
