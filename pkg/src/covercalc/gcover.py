"""Admissible G-graphs and the intersection rules on covers' moduli.

An admissible G-graph is a stable graph with a G-action, a distinguished
leg per marked orbit, and monodromy elements at all half-edges and legs,
subject to: cyclic stabilizers generated by the monodromy, agreement with
the space's monodromy datum at distinguished legs, conjugation
equivariance along orbits, no edge collapsed by the action, and inverse
monodromies across each edge.

Legs are kept in a canonical layout: marked orbit i occupies a contiguous
block indexed by the deterministic left cosets of the stabilizer of its
monodromy element, with the identity coset (the distinguished leg) first.
Any other choice differs by a relabeling isomorphism, so the canonical
frame loses nothing and keeps every construction reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from covercalc.exact import rat_to_str
from covercalc.graphs import (
    GraphError,
    GraphMorphism,
    StableGraph,
    enumerate_generic_AB,
)
from covercalc.groups import (
    FiniteGroup,
    Perm,
    QuotientGroup,
    Subgroup,
    compose,
    invert,
    left_cosets,
    coset_index,
    orbit_on_cosets,
    perm_order,
    quotient,
)


class CoverError(ValueError):
    pass


@dataclass(frozen=True)
class MonodromyDatum:
    group: FiniteGroup
    elements: tuple[Perm, ...]

    def __post_init__(self) -> None:
        for h in self.elements:
            if h not in self.group:
                raise CoverError("monodromy element outside the group")

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "elements": [[i + 1 for i in h] for h in self.elements],
        }

    @staticmethod
    def from_json(data: dict) -> "MonodromyDatum":
        group = FiniteGroup.from_json(data["group"])
        return MonodromyDatum(
            group, tuple(tuple(i - 1 for i in h) for h in data["elements"])
        )


def riemann_hurwitz_target(g: int, group: FiniteGroup, xi) -> tuple[int, int, int]:
    """Solve for (target genus g', marked source points r, branch points b).

    2g - 2 = #G [ (2g' - 2) + sum (ord(h_i) - 1)/ord(h_i) ]; raises when no
    integral non-negative solution exists.
    """
    xi = tuple(xi)
    orders = [perm_order(h) for h in xi]
    rhs = sum((Fraction(o - 1, o) for o in orders), Fraction(0))
    two_gp_minus_2 = Fraction(2 * g - 2, len(group)) - rhs
    gp = two_gp_minus_2 / 2 + 1
    if gp.denominator != 1 or gp < 0:
        raise CoverError(
            f"no integral target genus: 2g'-2 = {two_gp_minus_2} is not an "
            "even non-negative solution"
        )
    r = sum(len(group) // o for o in orders)
    return int(gp), r, len(xi)


@dataclass(frozen=True)
class HurwitzSpaceId:
    """The discrete datum (source genus, group, monodromy tuple)."""

    genus: int
    group: FiniteGroup
    xi: tuple[Perm, ...]
    target_genus: int = field(init=False)
    n_source_marks: int = field(init=False)

    def __post_init__(self) -> None:
        gp, r, _ = riemann_hurwitz_target(self.genus, self.group, self.xi)
        object.__setattr__(self, "target_genus", gp)
        object.__setattr__(self, "n_source_marks", r)

    @property
    def b(self) -> int:
        return len(self.xi)

    def stabilizers(self) -> list[Subgroup]:
        return [self.group.cyclic_subgroup(h) for h in self.xi]

    def leg_blocks(self) -> list[list[Perm]]:
        """Canonical coset representatives per marked orbit, identity first."""
        return [left_cosets(self.group, s) for s in self.stabilizers()]

    def leg_layout(self) -> list[tuple[int, Perm]]:
        """Position -> (orbit index, coset representative)."""
        out = []
        for i, block in enumerate(self.leg_blocks()):
            out.extend((i, rep) for rep in block)
        return out

    def canonical_leg_monodromy(self) -> list[Perm]:
        return [
            compose(rep, compose(self.xi[i], invert(rep)))
            for i, rep in self.leg_layout()
        ]

    def canonical_leg_action(self, t: Perm) -> tuple[int, ...]:
        """The action of t on leg positions through the coset layout."""
        blocks = self.leg_blocks()
        stabs = self.stabilizers()
        offsets = []
        off = 0
        for block in blocks:
            offsets.append(off)
            off += len(block)
        out = []
        for i, rep in self.leg_layout():
            j = coset_index(self.group, stabs[i], blocks[i], compose(t, rep))
            out.append(offsets[i] + j)
        return tuple(out)

    def distinguished_positions(self) -> list[int]:
        out = []
        off = 0
        for block in self.leg_blocks():
            out.append(off)
            off += len(block)
        return out

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "group": self.group.to_json(),
            "xi": [[i + 1 for i in h] for h in self.xi],
        }

    @staticmethod
    def from_json(data: dict) -> "HurwitzSpaceId":
        return HurwitzSpaceId(
            int(data["genus"]),
            FiniteGroup.from_json(data["group"]),
            tuple(tuple(i - 1 for i in h) for h in data["xi"]),
        )


class ActionError(CoverError):
    pass


@dataclass(frozen=True)
class GAction:
    """A G-action on a stable graph by structure-preserving permutations."""

    graph: StableGraph
    group: FiniteGroup
    vertex: dict
    half: dict
    leg: dict

    @staticmethod
    def from_generators(
        graph: StableGraph, group: FiniteGroup, gen_images: dict
    ) -> "GAction":
        """Close generator images into a full action table.

        gen_images maps each generator to (vperm, hperm, lperm).  Raises
        ActionError when the images are inconsistent with the group law.
        """
        e = group.identity
        ident = (
            tuple(range(graph.n_vertices)),
            tuple(range(graph.n_half_edges)),
            tuple(range(graph.n_legs)),
        )
        table = {e: ident}
        frontier = [e]
        while frontier:
            nxt = []
            for a in frontier:
                va, ha, la = table[a]
                for gen in group.generators:
                    img = gen_images[gen]
                    b = compose(gen, a)
                    composed = (
                        tuple(img[0][v] for v in va),
                        tuple(img[1][h] for h in ha),
                        tuple(img[2][l] for l in la),
                    )
                    if b in table:
                        if table[b] != composed:
                            raise ActionError(
                                "generator images violate the group relations"
                            )
                    else:
                        table[b] = composed
                        nxt.append(b)
            frontier = nxt
        return GAction(
            graph,
            group,
            {g: t[0] for g, t in table.items()},
            {g: t[1] for g, t in table.items()},
            {g: t[2] for g, t in table.items()},
        )

    def check_structure(self) -> None:
        """Each group element must act by a graph automorphism."""
        graph = self.graph
        for t in self.group.generators:
            vp, hp, lp = self.vertex[t], self.half[t], self.leg[t]
            for v in range(graph.n_vertices):
                if graph.genera[vp[v]] != graph.genera[v]:
                    raise ActionError(f"element changes the genus at vertex {v}")
            for h in range(graph.n_half_edges):
                if graph.half_edge_vertex[hp[h]] != vp[graph.half_edge_vertex[h]]:
                    raise ActionError(f"attachment not preserved at half-edge {h}")
                if graph.involution[hp[h]] != hp[graph.involution[h]]:
                    raise ActionError(f"involution not preserved at half-edge {h}")
            for l in range(graph.n_legs):
                if graph.leg_vertex[lp[l]] != vp[graph.leg_vertex[l]]:
                    raise ActionError(f"leg attachment not preserved at leg {l}")

    def half_stabilizer(self, h: int) -> list[Perm]:
        return [t for t in self.group.elements if self.half[t][h] == h]

    def leg_stabilizer(self, l: int) -> list[Perm]:
        return [t for t in self.group.elements if self.leg[t][l] == l]

    def half_orbit(self, h: int) -> frozenset[int]:
        return frozenset(self.half[t][h] for t in self.group.elements)

    def edge_orbit(self, edge: tuple[int, int]) -> frozenset[tuple[int, int]]:
        graph = self.graph
        return frozenset(graph.edge_of(self.half[t][edge[0]]) for t in self.group.elements)

    def edge_orbit_representatives(self) -> list[tuple[int, int]]:
        seen: set[tuple[int, int]] = set()
        reps = []
        for e in self.graph.edges():
            if e not in seen:
                reps.append(e)
                seen |= self.edge_orbit(e)
        return reps

    def vertex_orbit_representatives(self) -> list[int]:
        seen: set[int] = set()
        reps = []
        for v in range(self.graph.n_vertices):
            if v not in seen:
                reps.append(v)
                seen |= {self.vertex[t][v] for t in self.group.elements}
        return reps


@dataclass(frozen=True)
class Violation:
    label: str
    detail: str

    def to_json(self) -> dict:
        return {"label": self.label, "detail": self.detail}


@dataclass(frozen=True)
class AdmissibleGGraph:
    """Stable graph + G-action + monodromy in the canonical leg layout."""

    space: HurwitzSpaceId
    graph: StableGraph
    action: GAction
    mon_half: tuple[Perm, ...]
    mon_leg: tuple[Perm, ...]

    @property
    def group(self) -> FiniteGroup:
        return self.space.group

    def monodromy_of(self, kind: str, idx: int) -> Perm:
        return self.mon_leg[idx] if kind == "leg" else self.mon_half[idx]

    def to_json(self) -> dict:
        gens = self.group.generators
        return {
            "space": self.space.to_json(),
            "graph": self.graph.to_json(),
            "action_generators": [
                {
                    "vertices": list(self.action.vertex[g]),
                    "half_edges": list(self.action.half[g]),
                    "legs": list(self.action.leg[g]),
                }
                for g in gens
            ],
            "monodromy_half_edges": [[i + 1 for i in h] for h in self.mon_half],
            "monodromy_legs": [[i + 1 for i in h] for h in self.mon_leg],
        }

    @staticmethod
    def from_json(data: dict) -> "AdmissibleGGraph":
        space = HurwitzSpaceId.from_json(data["space"])
        graph = StableGraph.from_json(data["graph"])
        gens = space.group.generators
        gen_images = {
            g: (
                tuple(entry["vertices"]),
                tuple(entry["half_edges"]),
                tuple(entry["legs"]),
            )
            for g, entry in zip(gens, data["action_generators"])
        }
        action = GAction.from_generators(graph, space.group, gen_images)
        return AdmissibleGGraph(
            space,
            graph,
            action,
            tuple(tuple(i - 1 for i in h) for h in data["monodromy_half_edges"]),
            tuple(tuple(i - 1 for i in h) for h in data["monodromy_legs"]),
        )


def validate_admissible_g_graph(
    gg: AdmissibleGGraph, space: HurwitzSpaceId | None = None
) -> list[Violation]:
    """All violations of the admissibility conditions (empty list = valid)."""
    if space is None:
        space = gg.space
    graph, action, group = gg.graph, gg.action, space.group
    out: list[Violation] = []
    if graph.n_legs != space.n_source_marks:
        out.append(
            Violation(
                "layout",
                f"{graph.n_legs} legs but the space marks {space.n_source_marks} points",
            )
        )
        return out
    try:
        graph.validate()
        action.check_structure()
    except (GraphError, ActionError) as err:
        out.append(Violation("action", str(err)))
        return out
    for t in group.generators:
        if action.leg[t] != space.canonical_leg_action(t):
            out.append(
                Violation("layout", "leg action differs from the canonical coset layout")
            )
            return out
    if graph.genus() != space.genus:
        out.append(
            Violation("genus", f"graph genus {graph.genus()} != source genus {space.genus}")
        )
    # stabilizer condition: <h_l> equals the stabilizer, for every point
    for kind, count, stab_of in (
        ("half", graph.n_half_edges, action.half_stabilizer),
        ("leg", graph.n_legs, action.leg_stabilizer),
    ):
        for idx in range(count):
            h = gg.monodromy_of(kind, idx)
            stab = set(stab_of(idx))
            gen = set(group.cyclic_subgroup(h).members) if h in group else None
            if gen is None or gen != stab:
                out.append(
                    Violation(
                        "stabilizer",
                        f"monodromy at {kind} {idx} does not generate its stabilizer",
                    )
                )
    # agreement with xi at distinguished legs
    for i, pos in enumerate(space.distinguished_positions()):
        if gg.mon_leg[pos] != space.xi[i]:
            out.append(
                Violation(
                    "xi-agreement",
                    f"distinguished leg of orbit {i} carries the wrong monodromy",
                )
            )
    # conjugation equivariance along generator moves
    for t in group.generators:
        ti = invert(t)
        for h in range(graph.n_half_edges):
            expected = compose(t, compose(gg.mon_half[h], ti))
            if gg.mon_half[action.half[t][h]] != expected:
                out.append(
                    Violation(
                        "equivariance",
                        f"half-edge {h} moved by a generator breaks h_(t.l) = t h t^-1",
                    )
                )
        for l in range(graph.n_legs):
            expected = compose(t, compose(gg.mon_leg[l], ti))
            if gg.mon_leg[action.leg[t][l]] != expected:
                out.append(
                    Violation(
                        "equivariance",
                        f"leg {l} moved by a generator breaks h_(t.l) = t h t^-1",
                    )
                )
    # no edge collapsed by the action
    for h, hp in graph.edges():
        if any(action.half[t][h] == hp for t in group.elements):
            out.append(
                Violation("edge-collapse", f"the action maps half-edge {h} to its partner {hp}")
            )
    # balancing
    for h, hp in graph.edges():
        if gg.mon_half[hp] != invert(gg.mon_half[h]):
            out.append(
                Violation("balancing", f"edge ({h},{hp}) monodromies are not inverse")
            )
    # dedupe labels, preserve order
    seen = set()
    unique = []
    for v in out:
        key = (v.label, v.detail)
        if key not in seen:
            seen.add(key)
            unique.append(v)
    return unique


# ---------------------------------------------------------------------------
# restriction and corestriction


@dataclass(frozen=True)
class RelabelingData:
    """Per marked orbit i: ordered representatives of the G1-orbits on
    G/<h_i>, pinning the distinguished points after restriction."""

    reps: tuple[tuple[Perm, ...], ...]


def canonical_relabeling(
    space: HurwitzSpaceId, subgroup: Subgroup
) -> RelabelingData:
    reps = []
    for stab in space.stabilizers():
        orbits = orbit_on_cosets(subgroup, space.group, stab)
        reps.append(tuple(orbit[0] for orbit in orbits))
    return RelabelingData(tuple(reps))


def _validate_relabeling(
    group: FiniteGroup, xi: tuple[Perm, ...], subgroup: Subgroup, rel: RelabelingData
) -> None:
    if len(rel.reps) != len(xi):
        raise CoverError("relabeling data must cover every marked orbit")
    for i, h in enumerate(xi):
        stab = group.cyclic_subgroup(h)
        orbits = orbit_on_cosets(subgroup, group, stab)
        chosen = []
        for t in rel.reps[i]:
            hits = [
                k
                for k, orbit in enumerate(orbits)
                if any(
                    frozenset(compose(t, s) for s in stab.members)
                    == frozenset(compose(o, s) for s in stab.members)
                    for o in orbit
                )
            ]
            if len(hits) != 1:
                raise CoverError("relabeling representative matches no orbit")
            chosen.append(hits[0])
        if sorted(chosen) != list(range(len(orbits))):
            raise CoverError(
                "relabeling representatives must hit each orbit exactly once"
            )


def restriction_monodromy(
    datum: MonodromyDatum,
    subgroup: Subgroup,
    rel: RelabelingData | None = None,
) -> tuple[MonodromyDatum, list[tuple[int, int, Perm, int]]]:
    """Monodromy after restricting the action to a subgroup.

    Returns the restricted datum (over the subgroup reified as a group) and
    a ledger of (orbit i, piece j, representative t_ij, power r_ij); the
    new elements are t h_i^r t^-1 with r the stabilizer index drop.
    """
    group = datum.group
    space_like = [group.cyclic_subgroup(h) for h in datum.elements]
    if rel is None:
        rel = RelabelingData(
            tuple(
                tuple(orbit[0] for orbit in orbit_on_cosets(subgroup, group, stab))
                for stab in space_like
            )
        )
    else:
        _validate_relabeling(group, datum.elements, subgroup, rel)
    new_elements = []
    ledger = []
    for i, h in enumerate(datum.elements):
        for j, t in enumerate(rel.reps[i]):
            conj = compose(t, compose(h, invert(t)))
            full = group.cyclic_subgroup(conj)
            inter = [x for x in full.members if x in subgroup]
            r = len(full) // len(inter)
            hp = conj
            power = compose(t, compose(_power(group, h, r), invert(t)))
            new_elements.append(power)
            ledger.append((i, j, t, r))
    sub_group = subgroup.as_group()
    for hp in new_elements:
        if hp not in sub_group:
            raise CoverError("restricted monodromy left the subgroup; bad relabeling")
    return MonodromyDatum(sub_group, tuple(new_elements)), ledger


def _power(group: FiniteGroup, h: Perm, r: int) -> Perm:
    out = group.identity
    for _ in range(r):
        out = compose(out, h)
    return out


def corestriction_monodromy(
    datum: MonodromyDatum, normal: Subgroup
) -> tuple[MonodromyDatum, QuotientGroup]:
    """Componentwise projection of the monodromy to G/N."""
    q = quotient(datum.group, normal)
    return (
        MonodromyDatum(q.group, tuple(q.project(h) for h in datum.elements)),
        q,
    )


def restrict_graph(
    gg: AdmissibleGGraph,
    subgroup: Subgroup,
    rel: RelabelingData | None = None,
) -> AdmissibleGGraph:
    """The same graph with the action restricted and legs relabeled."""
    group = gg.group
    datum = MonodromyDatum(group, gg.space.xi)
    if rel is None:
        rel = canonical_relabeling(gg.space, subgroup)
    new_datum, ledger = restriction_monodromy(datum, subgroup, rel)
    sub_group = new_datum.group
    new_space = HurwitzSpaceId(gg.space.genus, sub_group, new_datum.elements)
    # map new leg positions to old ones through the coset layouts
    old_blocks = gg.space.leg_blocks()
    old_stabs = gg.space.stabilizers()
    old_offsets = []
    off = 0
    for block in old_blocks:
        old_offsets.append(off)
        off += len(block)
    new_to_old = []
    for (i, j, t, r), new_stab, new_block in zip(
        ledger, new_space.stabilizers(), new_space.leg_blocks()
    ):
        for c in new_block:
            w = compose(c, t)
            pos = old_offsets[i] + coset_index(group, old_stabs[i], old_blocks[i], w)
            new_to_old.append(pos)
    if sorted(new_to_old) != list(range(gg.graph.n_legs)):
        raise CoverError("relabeling does not biject the marked points")
    new_leg_vertex = tuple(gg.graph.leg_vertex[p] for p in new_to_old)
    new_graph = StableGraph(
        gg.graph.genera, gg.graph.half_edge_vertex, gg.graph.involution, new_leg_vertex
    )
    old_to_new = [0] * len(new_to_old)
    for new_pos, old_pos in enumerate(new_to_old):
        old_to_new[old_pos] = new_pos
    gen_images = {}
    for s in sub_group.generators:
        old_leg = gg.action.leg[s]
        gen_images[s] = (
            gg.action.vertex[s],
            gg.action.half[s],
            tuple(old_to_new[old_leg[new_to_old[p]]] for p in range(len(new_to_old))),
        )
    new_action = GAction.from_generators(new_graph, sub_group, gen_images)
    mon_half = []
    for h in range(gg.graph.n_half_edges):
        old = gg.mon_half[h]
        full = group.cyclic_subgroup(old)
        inter = [x for x in full.members if x in subgroup]
        r = len(full) // len(inter)
        mon_half.append(_power(group, old, r))
    mon_leg = []
    for p in new_to_old:
        old = gg.mon_leg[p]
        full = group.cyclic_subgroup(old)
        inter = [x for x in full.members if x in subgroup]
        r = len(full) // len(inter)
        mon_leg.append(_power(group, old, r))
    result = AdmissibleGGraph(
        new_space, new_graph, new_action, tuple(mon_half), tuple(mon_leg)
    )
    problems = validate_admissible_g_graph(result)
    if problems:
        raise CoverError(f"restriction produced an invalid graph: {problems[0].detail}")
    return result


def corestrict_graph(gg: AdmissibleGGraph, normal: Subgroup) -> AdmissibleGGraph:
    """Quotient graph by a normal subgroup with projected action and monodromy.

    Vertex genera are recomputed from the vertexwise Riemann-Hurwitz
    formula; non-integral solutions mean the input was not the graph of an
    actual cover and raise.
    """
    group = gg.group
    q = quotient(group, normal)
    graph = gg.graph
    n_members = sorted(normal.members)

    def orbit_min(kind: str, x: int) -> int:
        table = gg.action.vertex if kind == "v" else gg.action.half
        return min(table[n][x] for n in n_members)

    v_rep = [orbit_min("v", v) for v in range(graph.n_vertices)]
    v_classes = sorted(set(v_rep))
    v_index = {c: i for i, c in enumerate(v_classes)}
    h_rep = [orbit_min("h", h) for h in range(graph.n_half_edges)]
    h_classes = sorted(set(h_rep))
    h_index = {c: i for i, c in enumerate(h_classes)}
    # involution descends; edge-collapse condition guarantees no fixed point
    new_inv = []
    new_hv = []
    for c in h_classes:
        new_inv.append(h_index[h_rep[graph.involution[c]]])
        new_hv.append(v_index[v_rep[graph.half_edge_vertex[c]]])
    # vertexwise Riemann-Hurwitz for the quotient genus
    new_genera = []
    for c in v_classes:
        stab_v = [
            t for t in n_members if gg.action.vertex[t][c] == c
        ]
        ram = 0
        for h in range(graph.n_half_edges):
            if graph.half_edge_vertex[h] == c:
                e = sum(
                    1
                    for t in stab_v
                    if gg.action.half[t][h] == h
                )
                ram += e - 1
        for l in range(graph.n_legs):
            if graph.leg_vertex[l] == c:
                e = sum(1 for t in stab_v if gg.action.leg[t][l] == l)
                ram += e - 1
        numerator = 2 * graph.genera[c] - 2 - ram
        quot, rem = divmod(numerator, len(stab_v))
        if rem != 0 or (quot + 2) % 2 != 0:
            raise CoverError(
                f"vertex {c}: quotient genus is not integral (Riemann-Hurwitz)"
            )
        gq = (quot + 2) // 2
        if gq < 0:
            raise CoverError(f"vertex {c}: negative quotient genus")
        new_genera.append(gq)
    # new monodromy datum and canonical legs
    new_xi = tuple(q.project(h) for h in gg.space.xi)
    new_space = HurwitzSpaceId(_quotient_source_genus(gg, normal), q.group, new_xi)
    blocks = new_space.leg_blocks()
    stabs = new_space.stabilizers()
    old_dist = gg.space.distinguished_positions()
    new_leg_vertex = []
    mon_leg = []
    for i, block in enumerate(blocks):
        for c in block:
            t = q.rep_of(c)
            old_leg = gg.space.canonical_leg_action(t)[old_dist[i]]
            new_leg_vertex.append(v_index[v_rep[graph.leg_vertex[old_leg]]])
            mon_leg.append(q.project(gg.mon_leg[old_leg]))
    new_graph = StableGraph(
        tuple(new_genera), tuple(new_hv), tuple(new_inv), tuple(new_leg_vertex)
    )
    new_graph.validate()
    # quotient action via quotient-group generators
    gen_images = {}
    for qg in q.group.generators:
        t = q.rep_of(qg)
        vperm = tuple(
            v_index[v_rep[gg.action.vertex[t][c]]] for c in v_classes
        )
        hperm = tuple(h_index[h_rep[gg.action.half[t][c]]] for c in h_classes)
        gen_images[qg] = (vperm, hperm, new_space.canonical_leg_action(qg))
    new_action = GAction.from_generators(new_graph, q.group, gen_images)
    mon_half = tuple(q.project(gg.mon_half[c]) for c in h_classes)
    result = AdmissibleGGraph(
        new_space, new_graph, new_action, mon_half, tuple(mon_leg)
    )
    problems = validate_admissible_g_graph(result)
    if problems:
        raise CoverError(
            f"corestriction produced an invalid graph: "
            f"{problems[0].label}: {problems[0].detail}"
        )
    return result


def _quotient_source_genus(gg: AdmissibleGGraph, normal: Subgroup) -> int:
    """Genus of the partial quotient by global Riemann-Hurwitz."""
    group = gg.group
    g = gg.space.genus
    total = Fraction(2 * g - 2, len(normal))
    for i, h in enumerate(gg.space.xi):
        full = group.cyclic_subgroup(h)
        inter = [x for x in full.members if x in normal]
        e = len(inter)
        n_points = len(group) // len(full)
        total -= Fraction(n_points * (e - 1), len(normal))
    gq = Fraction(total, 2) + 1
    if gq.denominator != 1 or gq < 0:
        raise CoverError("partial quotient has no integral genus")
    return int(gq)


# ---------------------------------------------------------------------------
# boundary intersections on cover moduli


@dataclass(frozen=True)
class HBoundaryTerm:
    gamma: AdmissibleGGraph
    to_a: GraphMorphism
    to_b: GraphMorphism
    excess_orbit_edges: tuple[tuple[int, int], ...]


def boundary_intersection_H(
    a: AdmissibleGGraph, b: AdmissibleGGraph
) -> list[HBoundaryTerm]:
    """Equivariant boundary-boundary intersection terms.

    Underlying generic (A,B)-graphs are enriched with the unique G-action
    forced by equivariance of the two maps (the genericity condition leaves
    no free edges) and kept when the admissibility conditions hold.  The
    excess product runs over G-orbit representatives of the edges hit from
    both sides.
    """
    if a.space != b.space:
        raise CoverError("boundary classes live on different spaces")
    for name, gg in (("A", a), ("B", b)):
        problems = validate_admissible_g_graph(gg)
        if problems:
            raise CoverError(f"input {name} is not admissible: {problems[0].label}")
    space = a.space
    out = []
    for triple in enumerate_generic_AB(a.graph, b.graph):
        gamma = triple.gamma
        enriched = _force_g_structure(space, triple, a, b)
        if enriched is None:
            continue
        common = triple.common_edges()
        orbit_reps = []
        seen: set[tuple[int, int]] = set()
        for e in common:
            if e not in seen:
                orbit_reps.append(e)
                seen |= enriched.action.edge_orbit(e)
        out.append(HBoundaryTerm(enriched, triple.to_A, triple.to_B, tuple(orbit_reps)))
    return out


def _force_g_structure(
    space: HurwitzSpaceId,
    triple,
    a: AdmissibleGGraph,
    b: AdmissibleGGraph,
) -> AdmissibleGGraph | None:
    gamma = triple.gamma
    group = space.group
    fa, fb = triple.to_A, triple.to_B
    a_imageof = {fa.half_edge_map[h]: h for h in range(a.graph.n_half_edges)}
    b_imageof = {fb.half_edge_map[h]: h for h in range(b.graph.n_half_edges)}
    gen_images = {}
    for t in group.generators:
        hperm = [None] * gamma.n_half_edges
        for h in range(gamma.n_half_edges):
            if h in a_imageof:
                hperm[h] = fa.half_edge_map[a.action.half[t][a_imageof[h]]]
            if h in b_imageof:
                candidate = fb.half_edge_map[b.action.half[t][b_imageof[h]]]
                if hperm[h] is not None and hperm[h] != candidate:
                    return None
                hperm[h] = candidate
        if any(x is None for x in hperm) or sorted(hperm) != list(
            range(gamma.n_half_edges)
        ):
            return None
        lperm = space.canonical_leg_action(t)
        vperm = [None] * gamma.n_vertices
        for h in range(gamma.n_half_edges):
            v, w = gamma.half_edge_vertex[h], gamma.half_edge_vertex[hperm[h]]
            if vperm[v] is not None and vperm[v] != w:
                return None
            vperm[v] = w
        for l in range(gamma.n_legs):
            v, w = gamma.leg_vertex[l], gamma.leg_vertex[lperm[l]]
            if vperm[v] is not None and vperm[v] != w:
                return None
            vperm[v] = w
        if gamma.n_vertices == 1 and vperm[0] is None:
            vperm[0] = 0
        if any(x is None for x in vperm) or sorted(vperm) != list(
            range(gamma.n_vertices)
        ):
            return None
        gen_images[t] = (tuple(vperm), tuple(hperm), lperm)
    try:
        action = GAction.from_generators(gamma, group, gen_images)
    except ActionError:
        return None
    mon_half: list[Perm | None] = [None] * gamma.n_half_edges
    for h in range(gamma.n_half_edges):
        if h in a_imageof:
            mon_half[h] = a.mon_half[a_imageof[h]]
        if h in b_imageof:
            candidate = b.mon_half[b_imageof[h]]
            if mon_half[h] is not None and mon_half[h] != candidate:
                return None
            mon_half[h] = candidate
    if any(m is None for m in mon_half):
        return None
    candidate = AdmissibleGGraph(
        space,
        gamma,
        action,
        tuple(mon_half),
        tuple(space.canonical_leg_monodromy()),
    )
    if validate_admissible_g_graph(candidate):
        return None
    if not _equivariant_morphism(candidate, a, triple.to_A):
        return None
    if not _equivariant_morphism(candidate, b, triple.to_B):
        return None
    return candidate


def _equivariant_morphism(
    src: AdmissibleGGraph, tgt: AdmissibleGGraph, morphism: GraphMorphism
) -> bool:
    group = src.group
    for t in group.generators:
        for v in range(src.graph.n_vertices):
            if morphism.vertex_map[src.action.vertex[t][v]] != tgt.action.vertex[t][
                morphism.vertex_map[v]
            ]:
                return False
        for h in range(tgt.graph.n_half_edges):
            if morphism.half_edge_map[tgt.action.half[t][h]] != src.action.half[t][
                morphism.half_edge_map[h]
            ]:
                return False
    for h in range(tgt.graph.n_half_edges):
        if src.mon_half[morphism.half_edge_map[h]] != tgt.mon_half[h]:
            return False
    return True


# ---------------------------------------------------------------------------
# restriction / corestriction against boundary strata


def restriction_boundary_exponents(
    gamma: AdmissibleGGraph,
    subgroup: Subgroup,
    alpha: GraphMorphism,
) -> list[tuple[tuple[int, int], int]]:
    """Excess exponents k for a restricted-graph morphism onto a stratum.

    alpha maps the restriction of gamma to an admissible subgroup-graph A;
    its edge image must hit every G-orbit of edges of gamma.  For each
    G-orbit representative, k counts the subgroup-orbits inside the orbit's
    intersection with the image (>= 1 by genericity); the excess factor is
    (-psi - psi')^(k-1).
    """
    image = alpha.edge_image()
    sub_elements = sorted(subgroup.members)
    reps = gamma.action.edge_orbit_representatives()
    out = []
    for rep in reps:
        orbit = gamma.action.edge_orbit(rep)
        hit = sorted(orbit & image)
        if not hit:
            raise CoverError(
                f"edge orbit of {rep} is missed by the stratum map (genericity fails)"
            )
        sub_orbits = set()
        for e in hit:
            sub_orbit = frozenset(
                gamma.graph.edge_of(gamma.action.half[t][e[0]]) for t in sub_elements
            )
            sub_orbits.add(sub_orbit)
        out.append((rep, len(sub_orbits)))
    return out


def graph_automorphisms_G(gg: AdmissibleGGraph) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Automorphisms of the admissible G-graph: equivariant, monodromy
    preserving, legs fixed pointwise."""
    out = []
    group = gg.group
    for vperm, hperm in gg.graph.automorphism_group():
        if any(gg.mon_half[hperm[h]] != gg.mon_half[h] for h in range(gg.graph.n_half_edges)):
            continue
        ok = True
        for t in group.generators:
            for h in range(gg.graph.n_half_edges):
                if hperm[gg.action.half[t][h]] != gg.action.half[t][hperm[h]]:
                    ok = False
                    break
            if not ok:
                break
            for v in range(gg.graph.n_vertices):
                if vperm[gg.action.vertex[t][v]] != gg.action.vertex[t][vperm[v]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append((vperm, hperm))
    return out


def corestriction_boundary_multiplicity(
    gg: AdmissibleGGraph,
    normal: Subgroup,
    a: AdmissibleGGraph,
    alpha: GraphMorphism,
) -> tuple[Fraction, int]:
    """Multiplicity of a corestricted stratum component, and #Aut(alpha).

    alpha must be an isomorphism from the corestriction of gg to the
    quotient-graph A.  The multiplicity is the product over quotient-orbit
    representatives of edge monodromy-order ratios ord_G / ord_{G/N};
    #Aut(alpha) counts automorphisms of gg inducing the identity downstairs.
    """
    quotient_graph = corestrict_graph(gg, normal)
    if alpha.source.n_half_edges != alpha.target.n_half_edges or (
        alpha.source.n_vertices != alpha.target.n_vertices
    ):
        raise CoverError("alpha is not an isomorphism of graphs")
    alpha.validate()
    if not _equivariant_morphism(quotient_graph, a, alpha):
        raise CoverError("alpha is not an isomorphism of admissible quotient graphs")
    group = gg.group
    # match quotient half-edges back to orbits of gg half-edges
    n_members = sorted(normal.members)
    h_rep = [
        min(gg.action.half[t][h] for t in n_members)
        for h in range(gg.graph.n_half_edges)
    ]
    h_classes = sorted(set(h_rep))
    mult = Fraction(1)
    for rep_edge in a.action.edge_orbit_representatives():
        h_a = rep_edge[0]
        h_quot = alpha.half_edge_map[h_a]
        lift = h_classes[h_quot]
        ratio = Fraction(
            perm_order(gg.mon_half[lift]), perm_order(a.mon_half[h_a])
        )
        mult *= ratio
    # Aut(alpha): automorphisms of gg that descend to the identity
    aut_alpha = 0
    for vperm, hperm in graph_automorphisms_G(gg):
        descends_trivially = all(
            h_rep[hperm[h]] == h_rep[h] for h in range(gg.graph.n_half_edges)
        ) and all(
            min(gg.action.vertex[t][vperm[v]] for t in n_members)
            == min(gg.action.vertex[t][v] for t in n_members)
            for v in range(gg.graph.n_vertices)
        )
        if descends_trivially:
            aut_alpha += 1
    return mult, aut_alpha


# ---------------------------------------------------------------------------
# psi/kappa pullback formulas and normal bundles


@dataclass(frozen=True)
class PullbackFormula:
    """Symbolic right-hand side of a pullback rule: list of (kind, payload,
    coefficient) terms."""

    kind: str
    terms: tuple[tuple[str, str, Fraction], ...]

    def to_json(self) -> dict:
        return {
            "map": self.kind,
            "terms": [
                {"class": t, "data": p, "coefficient": rat_to_str(c)}
                for t, p, c in self.terms
            ],
        }


def pullback_psi_kappa_hurwitz(kind: str, **params) -> PullbackFormula:
    """The pullback of a psi or kappa class along a named tautological map.

    kinds: "restriction" (identity coefficients), "corestriction"
    (psi scaled by the order drop, kappa by 1/#N), "forgetful"
    (psi minus the orbit of section divisors, kappa minus #G psi^i).
    """
    cls = params.get("cls")
    if cls not in ("psi", "kappa"):
        raise CoverError("cls must be 'psi' or 'kappa'")
    if kind == "restriction":
        return PullbackFormula(kind, ((cls, "same point" if cls == "psi" else "same index", Fraction(1)),))
    if kind == "corestriction":
        group: FiniteGroup = params["group"]
        normal: Subgroup = params["normal"]
        if cls == "kappa":
            return PullbackFormula(kind, (("kappa", "same index", Fraction(1, len(normal))),))
        h: Perm = params["h"]
        q = quotient(group, normal)
        upstairs = perm_order(h)
        hbar_order = perm_order(q.project(h))
        return PullbackFormula(
            kind,
            (("psi", "any lift of the marked point", Fraction(hbar_order, upstairs)),),
        )
    if kind == "forgetful":
        group = params["group"]
        if cls == "kappa":
            i = int(params["index"])
            return PullbackFormula(
                kind,
                (
                    ("kappa", f"index {i}", Fraction(1)),
                    ("psi-new-point-power", f"exponent {i}", Fraction(-len(group))),
                ),
            )
        h = params["h"]
        stab = group.cyclic_subgroup(h)
        reps = left_cosets(group, stab)
        terms: list[tuple[str, str, Fraction]] = [("psi", "same point", Fraction(1))]
        for rep in reps:
            terms.append(
                (
                    "section-divisor",
                    f"relabeled section at coset of {tuple(i + 1 for i in rep)}",
                    Fraction(-1),
                )
            )
        return PullbackFormula(kind, tuple(terms))
    raise CoverError(f"unknown map kind {kind!r}")


def normal_bundle_chern_H(gg: AdmissibleGGraph) -> list[list[tuple[Fraction, tuple[int, ...]]]]:
    """Expansion of prod over edge-orbit reps (1 - psi_l - psi_l').

    Returns a list by degree d of (coefficient, half-edge multiset) terms.
    """
    reps = gg.action.edge_orbit_representatives()
    terms: list[tuple[Fraction, tuple[int, ...]]] = [(Fraction(1), ())]
    for h, hp in reps:
        nxt = []
        for coeff, monomial in terms:
            nxt.append((coeff, monomial))
            nxt.append((-coeff, tuple(sorted(monomial + (h,)))))
            nxt.append((-coeff, tuple(sorted(monomial + (hp,)))))
        terms = nxt
    by_degree: dict[int, dict[tuple[int, ...], Fraction]] = {}
    for coeff, monomial in terms:
        bucket = by_degree.setdefault(len(monomial), {})
        bucket[monomial] = bucket.get(monomial, Fraction(0)) + coeff
    out = []
    for d in range(len(reps) + 1):
        bucket = by_degree.get(d, {})
        out.append(sorted(((c, m) for m, c in bucket.items() if c != 0), key=lambda x: x[1]))
    return out


# ---------------------------------------------------------------------------
# closed-form degrees for intersections of restriction-corestriction maps


def rescores_degree(
    ambient: FiniteGroup,
    k1: Subgroup,
    k2: Subgroup,
    monodromy: list[Perm],
    quotient_index: int,
) -> int:
    """Degree for a restriction-against-corestriction fiber: per branch
    point, the count of distinguished-point choices downstairs and upstairs.

    The factor is #(K2 / <h> ∩ K2) * (#(K1 / <h> ∩ K1))^quotient_index per
    monodromy element h, with quotient_index = #H2 / #G.
    """
    if not set(k1.members) <= set(k2.members):
        raise CoverError("K1 must be contained in K2")
    total = 1
    for h in monodromy:
        cyc = ambient.cyclic_subgroup(h)
        int2 = len([x for x in cyc.members if x in k2])
        int1 = len([x for x in cyc.members if x in k1])
        total *= (len(k2) // int2) * (len(k1) // int1) ** quotient_index
    return total


def corescores_degree(h_bullet_order: int, h0_order: int, b: int) -> int:
    """Degree for two corestrictions: #(H1 x_G H2) . #H0^(b-1)."""
    if b < 1 or h0_order < 1 or h_bullet_order % h0_order:
        raise CoverError("component stabilizer must divide the fiber product order")
    return h_bullet_order * h0_order ** (b - 1)


def resres_count(
    ambient_order: int, leg_orbit_data: list[tuple[int, int]]
) -> int:
    """Number of marked enrichments for two restrictions' fiber product.

    leg_orbit_data lists (ord of the monodromy in the component group,
    #N_v at the supporting vertex) per leg-orbit representative; the count
    is (#orbits)! * prod #H / (ord * #N_v).
    """
    from math import factorial

    total = factorial(len(leg_orbit_data))
    for ordh, nv in leg_orbit_data:
        if ambient_order % (ordh * nv):
            raise CoverError("stabilizer data does not divide the group order")
        total *= ambient_order // (ordh * nv)
    return total


# ---------------------------------------------------------------------------
# convenience constructors


def trivial_cover_graph(space: HurwitzSpaceId, genera, half_edge_vertex, involution,
                        leg_vertex, gen_images, mon_half) -> AdmissibleGGraph:
    graph = StableGraph(tuple(genera), tuple(half_edge_vertex), tuple(involution),
                        tuple(leg_vertex))
    action = GAction.from_generators(graph, space.group, gen_images)
    return AdmissibleGGraph(
        space, graph, action, tuple(mon_half), tuple(space.canonical_leg_monodromy())
    )


def wrap_trivial_group(graph: StableGraph) -> AdmissibleGGraph:
    """A classical stable graph as an admissible graph for the trivial group."""
    from covercalc.groups import trivial_group

    group = trivial_group()
    e = group.identity
    xi = tuple(e for _ in range(graph.n_legs))
    space = HurwitzSpaceId(graph.genus(), group, xi)
    ident_images = {
        g: (
            tuple(range(graph.n_vertices)),
            tuple(range(graph.n_half_edges)),
            tuple(range(graph.n_legs)),
        )
        for g in group.generators
    }
    action = GAction.from_generators(graph, group, ident_images)
    mon_half = tuple(e for _ in range(graph.n_half_edges))
    mon_leg = tuple(e for _ in range(graph.n_legs))
    return AdmissibleGGraph(space, graph, action, mon_half, mon_leg)
