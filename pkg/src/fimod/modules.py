"""Finitely presented modules over Q, F_p, Z and maps between them.

A PresentedModule is a cokernel: an ambient free module R^r together with a
relation matrix whose column span is divided out. Maps are given by ambient
matrices; well-definedness (relations land in relations) is checked by span
membership on demand. Isomorphism testing uses surjectivity plus equality of
invariants: a surjection between finitely generated modules with the same
invariants over a commutative Noetherian ring is an isomorphism.
"""
from __future__ import annotations

from dataclasses import dataclass

from .matrix import FieldReducer, Matrix, field_in_span, hstack
from .rings import IntegerRing, RingSpec
from .smith import integer_inverse, invariant_factors, smith_form


@dataclass(frozen=True)
class Invariants:
    """Normal form of a finitely generated module.

    Over a field: dimension (torsion empty). Over Z: free rank plus the
    torsion invariant factors > 1, in divisibility order.
    """

    free_rank: int
    torsion: tuple[int, ...] = ()

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def describe(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        if self.free_rank:
            parts.append(f"rank {self.free_rank}")
        if self.torsion:
            parts.append("torsion (" + ",".join(map(str, self.torsion)) + ")")
        return ", ".join(parts)


class PresentedModule:
    """R^ambient modulo the column span of a relation matrix."""

    def __init__(self, ring: RingSpec, ambient: int, relations: Matrix | None = None):
        self.ring = ring
        self.ambient = ambient
        if relations is None:
            relations = Matrix.zero(ring, ambient, 0)
        if relations.ring != ring or relations.nrows != ambient:
            raise ValueError("relation matrix does not match ambient module")
        self.relations = relations
        self._invariants: Invariants | None = None
        self._reducer = None
        self._free_coords = None

    def invariants(self) -> Invariants:
        if self._invariants is None:
            if self.ring.is_field:
                self._invariants = Invariants(self.ambient - self.relations.rank())
            else:
                facs = invariant_factors(self.relations)
                tors = tuple(d for d in facs if d != 1)
                self._invariants = Invariants(self.ambient - len(facs), tors)
        return self._invariants

    def dim(self) -> int:
        """Dimension over a field (raises over Z when torsion is present)."""
        inv = self.invariants()
        if inv.torsion:
            raise ValueError("module has torsion; no single dimension")
        return inv.free_rank

    def is_zero_module(self) -> bool:
        return self.invariants().is_zero

    # -- quotient coordinates -------------------------------------------
    def reducer(self) -> FieldReducer:
        if self._reducer is None:
            self._reducer = FieldReducer(self.relations)
        return self._reducer

    def free_coordinates(self):
        """Coordinate maps for a free Z-quotient: (coords, section) matrices.

        coords is (free_rank x ambient) and section (ambient x free_rank),
        with coords @ section = identity and with coords(v) the class of v
        in a chosen basis of the quotient lattice. Only defined when the
        quotient is torsion-free.
        """
        if self._free_coords is None:
            if not isinstance(self.ring, IntegerRing):
                raise ValueError("free_coordinates is the Z path")
            inv = self.invariants()
            if inv.torsion:
                raise ValueError("quotient has torsion; no free coordinates")
            sf = smith_form(self.relations, transforms=True)
            k = len(sf.factors)
            u = sf.left
            uinv = integer_inverse(u)
            coords = Matrix(self.ring, self.ambient - k, self.ambient,
                            {(i - k, j): v for (i, j), v in u.entries.items()
                             if i >= k})
            section = Matrix(self.ring, self.ambient, self.ambient - k,
                             {(i, j - k): v for (i, j), v in uinv.entries.items()
                              if j >= k})
            self._free_coords = (coords, section)
        return self._free_coords

    def contains(self, column: dict) -> bool:
        """Is the ambient vector zero in the quotient (inside the relations)?"""
        vec = Matrix.from_columns(self.ring, self.ambient, [column])
        if self.ring.is_field:
            return field_in_span(self.relations, vec)
        from .smith import integer_in_span
        return integer_in_span(self.relations, vec)

    def __repr__(self):
        return (f"PresentedModule({self.ring}, ambient={self.ambient}, "
                f"relations={self.relations.ncols})")


def cokernel_invariants(pm: PresentedModule) -> Invariants:
    """Normal form of the cokernel: dimension / free rank plus torsion."""
    return pm.invariants()


class ModuleMap:
    """A map of presented modules given by an ambient matrix."""

    def __init__(self, source: PresentedModule, target: PresentedModule,
                 matrix: Matrix):
        if source.ring != target.ring:
            raise ValueError("ring mismatch between source and target")
        if matrix.nrows != target.ambient or matrix.ncols != source.ambient:
            raise ValueError("ambient matrix shape mismatch")
        self.source = source
        self.target = target
        self.matrix = matrix

    @property
    def ring(self) -> RingSpec:
        return self.source.ring

    def is_well_defined(self) -> bool:
        """Do the mapped source relations land in the target relation span?"""
        mapped = self.matrix @ self.source.relations
        if mapped.is_zero():
            return True
        if self.ring.is_field:
            return field_in_span(self.target.relations, mapped)
        from .smith import integer_in_span
        return integer_in_span(self.target.relations, mapped)

    def is_surjective(self) -> bool:
        stacked = PresentedModule(self.ring, self.target.ambient,
                                  hstack([self.matrix, self.target.relations]))
        return stacked.is_zero_module()

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self after other (self . other)."""
        if other.target is not self.source and \
                other.target.ambient != self.source.ambient:
            raise ValueError("maps are not composable")
        return ModuleMap(other.source, self.target, self.matrix @ other.matrix)

    def __repr__(self):
        return f"ModuleMap({self.source!r} -> {self.target!r})"


def is_isomorphism(f: ModuleMap) -> tuple[bool, dict]:
    """Surjectivity plus equal invariants, with a certificate.

    Over a Noetherian ring a surjection between finitely generated modules
    with equal invariants is an isomorphism, so no presentation-level kernel
    is ever computed.
    """
    src = f.source.invariants()
    tgt = f.target.invariants()
    surj = f.is_surjective()
    ok = surj and src == tgt
    cert = {
        "surjective": surj,
        "source_invariants": src,
        "target_invariants": tgt,
        "equal_invariants": src == tgt,
    }
    return ok, cert


def identity_map(pm: PresentedModule) -> ModuleMap:
    return ModuleMap(pm, pm, Matrix.identity(pm.ring, pm.ambient))


def kernel_subspace_generators(f: ModuleMap) -> list[dict]:
    """Ambient generators of ker(f) as a submodule of the source quotient.

    Returns columns x with f(x) = 0 in the target quotient; together with
    the source relations they span the kernel's preimage in the ambient
    module.
    """
    stacked = hstack([f.matrix, f.target.relations])
    if f.ring.is_field:
        from .matrix import field_kernel_basis
        raw = field_kernel_basis(stacked)
    else:
        from .smith import integer_kernel_basis
        raw = integer_kernel_basis(stacked)
    n = f.source.ambient
    gens = []
    for col in raw:
        x = {i: v for i, v in col.items() if i < n}
        if x:
            gens.append(x)
    return gens


class SubmoduleOfQuotient:
    """A submodule of a presented quotient, spanned by ambient columns."""

    def __init__(self, module: PresentedModule, generators: list[dict]):
        self.module = module
        self.generators = generators
        self._full = hstack([
            Matrix.from_columns(module.ring, module.ambient, generators)
            if generators else Matrix.zero(module.ring, module.ambient, 0),
            module.relations,
        ])

    def invariants(self) -> Invariants:
        """Invariants of the submodule (span + relations) / relations."""
        ring = self.module.ring
        if ring.is_field:
            return Invariants(self._full.rank() - self.module.relations.rank())
        from .smith import IntegerSolver, lattice_canonical

        basis = lattice_canonical(self._full)
        if not basis:
            return Invariants(0)
        bmat = Matrix(ring, self.module.ambient, len(basis),
                      {(i, j): v for j, row in enumerate(basis)
                       for i, v in enumerate(row) if v})
        solver = IntegerSolver(bmat)
        rel_cols = []
        for col in self.module.relations.columns():
            sol = solver.solve(col)
            if sol is None:
                raise RuntimeError("relations escaped their own span")
            rel_cols.append(sol)
        inner = Matrix.from_columns(ring, len(basis), rel_cols) \
            if rel_cols else Matrix.zero(ring, len(basis), 0)
        return PresentedModule(ring, len(basis), inner).invariants()

    def same_span_as(self, other: "SubmoduleOfQuotient") -> bool:
        """Equality as submodules (ambient span + relations compared)."""
        ring = self.module.ring
        if ring.is_field:
            ra, rb = self._full.rank(), other._full.rank()
            if ra != rb:
                return False
            return hstack([self._full, other._full]).rank() == ra
        from .smith import lattice_canonical
        return lattice_canonical(self._full) == lattice_canonical(other._full)
