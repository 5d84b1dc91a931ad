"""Finitely presented FI-modules: free generators, relations, slices.

A presentation is a list of generator degrees d_i and a list of relation
elements r_j, each living in some degree e_j of the free module on the
generators; the module presented is the cokernel of the induced map of free
FI-modules. Slices V_n are returned as PresentedModules over the ambient
basis {(generator i, injection [d_i] -> [n])} in generator-major,
lexicographic-injection order, which makes every matrix reproducible
bit-for-bit.
"""
from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .injections import Injection, count_injections, enumerate_injections
from .matrix import Matrix
from .modules import ModuleMap, PresentedModule
from .rings import RingSpec, ring_from_token, ring_to_token


class FreeElement:
    """An element of (⊕_i M(d_i))_n: terms (generator, injection) -> scalar."""

    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms: dict):
        self.degree = degree
        self.terms = {}
        for (gen, inj), coeff in terms.items():
            if inj.target != degree:
                raise ValueError(
                    f"term injection lands in [{inj.target}], element degree {degree}")
            self.terms[(gen, inj)] = coeff

    def pushforward(self, f: Injection) -> "FreeElement":
        """Apply f_*: relabel every term along f, merging and dropping zeros."""
        if f.source != self.degree:
            raise ValueError(
                f"pushforward along [{f.source}]->[{f.target}] "
                f"of a degree-{self.degree} element")
        out: dict = {}
        for (gen, g), c in self.terms.items():
            key = (gen, f.after(g))
            out[key] = out.get(key, 0) + c
        return FreeElement(f.target, {k: v for k, v in out.items() if v != 0})

    def add(self, other: "FreeElement") -> "FreeElement":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return FreeElement(self.degree, {k: v for k, v in out.items() if v != 0})

    def canonical_terms(self):
        return sorted(((gen, inj.images, coeff)
                       for (gen, inj), coeff in self.terms.items()),
                      key=lambda t: (t[0], t[1]))

    def __eq__(self, other):
        return (isinstance(other, FreeElement) and self.degree == other.degree
                and self.terms == other.terms)

    def __repr__(self):
        return f"FreeElement(deg={self.degree}, {len(self.terms)} terms)"


def pushforward(e: FreeElement, f: Injection) -> FreeElement:
    return e.pushforward(f)


class SliceModule:
    """The degree-n slice of a presentation, with its enumerated basis."""

    __slots__ = ("degree", "basis", "index", "module")

    def __init__(self, degree: int, basis: list, module: PresentedModule):
        self.degree = degree
        self.basis = basis                      # [(gen index, Injection)]
        self.index = {(g, inj.images): k for k, (g, inj) in enumerate(basis)}
        self.module = module

    @property
    def ambient(self) -> int:
        return self.module.ambient

    def invariants(self):
        return self.module.invariants()

    def element_column(self, e: FreeElement) -> dict:
        col = {}
        for (gen, inj), c in e.terms.items():
            col[self.index[(gen, inj.images)]] = c
        return col


class SliceMap:
    """The induced map f_* between two slices of one presentation."""

    __slots__ = ("injection", "map")

    def __init__(self, injection: Injection, module_map: ModuleMap):
        self.injection = injection
        self.map = module_map

    @property
    def matrix(self) -> Matrix:
        return self.map.matrix


_slice_cache: dict = {}


class FIPresentation:
    """coker(⊕_j M(e_j) -> ⊕_i M(d_i)) with the relation elements r_j."""

    def __init__(self, ring: RingSpec, generator_degrees, relations=()):
        self.ring = ring
        self.generator_degrees = tuple(int(d) for d in generator_degrees)
        if any(d < 0 for d in self.generator_degrees):
            raise ValueError("generator degrees must be >= 0")
        rels = []
        for r in relations:
            for (gen, inj), coeff in r.terms.items():
                if not 0 <= gen < len(self.generator_degrees):
                    raise ValueError(f"relation references generator {gen}")
                if inj.source != self.generator_degrees[gen]:
                    raise ValueError(
                        f"relation term on generator {gen} has source size "
                        f"{inj.source}, expected {self.generator_degrees[gen]}")
            canon = FreeElement(r.degree, {
                k: ring.coerce(v) for k, v in r.terms.items()
                if not ring.is_zero(ring.coerce(v))})
            rels.append(canon)
        self.relations = tuple(rels)
        self._hash = None

    # -- identity ---------------------------------------------------------
    def content_hash(self) -> str:
        if self._hash is None:
            doc = self.to_document()
            blob = json.dumps(doc, sort_keys=True, separators=(",", ":"))
            self._hash = hashlib.sha256(blob.encode()).hexdigest()
        return self._hash

    def __eq__(self, other):
        return isinstance(other, FIPresentation) and \
            self.content_hash() == other.content_hash()

    def __hash__(self):
        return hash(self.content_hash())

    # -- slices -----------------------------------------------------------
    def slice_basis(self, n: int) -> list:
        basis = []
        for i, d in enumerate(self.generator_degrees):
            for inj in enumerate_injections(d, n):
                basis.append((i, inj))
        return basis

    def evaluate_slice(self, n: int) -> SliceModule:
        if n < 0:
            raise ValueError("slice degree must be >= 0")
        key = (self.content_hash(), n)
        cached = _slice_cache.get(key)
        if cached is not None:
            return cached
        basis = self.slice_basis(n)
        index = {(g, inj.images): k for k, (g, inj) in enumerate(basis)}
        cols = []
        for rel in self.relations:
            for h in enumerate_injections(rel.degree, n):
                pushed = rel.pushforward(h)
                cols.append({index[(gen, inj.images)]: c
                             for (gen, inj), c in pushed.terms.items()})
        relmat = Matrix.from_columns(self.ring, len(basis), cols) \
            if cols else Matrix.zero(self.ring, len(basis), 0)
        sm = SliceModule(n, basis, PresentedModule(self.ring, len(basis), relmat))
        _slice_cache[key] = sm
        return sm

    def slice_module(self, n: int) -> PresentedModule:
        return self.evaluate_slice(n).module

    def induced_map(self, f: Injection) -> SliceMap:
        """The basis-relabeling map f_*: V_m -> V_n for f: [m] -> [n]."""
        src = self.evaluate_slice(f.source)
        tgt = self.evaluate_slice(f.target)
        ent = {}
        for k, (gen, g) in enumerate(src.basis):
            ent[(tgt.index[(gen, f.after(g).images)], k)] = self.ring.one
        mat = Matrix(self.ring, tgt.ambient, src.ambient, ent)
        return SliceMap(f, ModuleMap(src.module, tgt.module, mat))

    def induced_matrix(self, f: Injection) -> Matrix:
        return self.induced_map(f).matrix

    def free_rank_formula(self, n: int) -> int:
        """Ambient rank of the degree-n slice (no relations counted)."""
        return sum(count_injections(d, n) for d in self.generator_degrees)

    # -- serialization ------------------------------------------------------
    def to_document(self) -> dict:
        rels = []
        for r in self.relations:
            terms = [{"gen": gen, "injection": list(images),
                      "coeff": self.ring.to_str(coeff)}
                     for gen, images, coeff in r.canonical_terms()]
            rels.append({"degree": r.degree, "terms": terms})
        return {
            "ring": ring_to_token(self.ring),
            "generators": list(self.generator_degrees),
            "relations": rels,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_document(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_document(cls, doc: dict, ring: RingSpec | None = None) -> "FIPresentation":
        ring = ring if ring is not None else ring_from_token(doc["ring"])
        gens = doc["generators"]
        rels = []
        for rd in doc.get("relations", []):
            degree = int(rd["degree"])
            terms = {}
            for t in rd["terms"]:
                inj = Injection(len(t["injection"]), degree,
                                tuple(int(x) for x in t["injection"]))
                coeff = ring.coerce(Fraction(t["coeff"]))
                key = (int(t["gen"]), inj)
                if key in terms:
                    raise ValueError("duplicate (gen, injection) term")
                terms[key] = coeff
            rels.append(FreeElement(degree, terms))
        return cls(ring, gens, rels)

    @classmethod
    def loads(cls, text: str, ring: RingSpec | None = None) -> "FIPresentation":
        return cls.from_document(json.loads(text), ring=ring)

    def __repr__(self):
        return (f"FIPresentation({self.ring}, gens={self.generator_degrees}, "
                f"{len(self.relations)} relations)")


def free_presentation(ring: RingSpec, *degrees: int) -> FIPresentation:
    """The free module M(d_1) ⊕ ... ⊕ M(d_k)."""
    return FIPresentation(ring, degrees)


def evaluate_slice(p: FIPresentation, n: int) -> SliceModule:
    return p.evaluate_slice(n)


def induced_map(p: FIPresentation, f: Injection) -> SliceMap:
    return p.induced_map(f)
