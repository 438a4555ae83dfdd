"""Tautological classes on moduli of stable curves.

Decorated boundary strata with exact rational coefficients: psi/kappa
pullback rules along forgetful and boundary maps, the excess-intersection
formula for two boundary strata, and top-degree integration.

Integrals of psi monomials are computed by the string/dilaton equations on
top of the KdV-style recursion; the two base constants <tau_0^3>_0 = 1 and
<tau_1>_1 = 1/24 are the only external inputs (standard Witten-Kontsevich
values).  Everything with some index 0 or 1 reduces by string/dilaton, so
genus <= 1 never touches the deeper recursion; higher genus (needed when a
stratum has a genus-2 vertex) uses the Virasoro-style step.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod

from covercalc.exact import rat_to_str
from covercalc.graphs import (
    GenericABGraph,
    GraphError,
    StableGraph,
    enumerate_generic_AB,
    trivial_graph,
)


class IntegralError(ValueError):
    pass


# ---------------------------------------------------------------------------
# psi correlators


def _double_factorial_odd(k: int) -> int:
    # (2k+1)!! with the empty product (-1)!! = 1
    out = 1
    for i in range(1, 2 * k + 2, 2):
        out *= i
    return out


TAU0_CUBED = Fraction(1)  # <tau_0^3>_0, the point M_{0,3}
TAU1_GENUS1 = Fraction(1, 24)  # <tau_1>_1, external Witten-Kontsevich constant


@lru_cache(maxsize=None)
def correlator(g: int, exponents: tuple[int, ...]) -> Fraction:
    """<tau_{a_1} ... tau_{a_n}>_g, zero unless sum(a) = 3g - 3 + n."""
    n = len(exponents)
    if g < 0 or any(a < 0 for a in exponents):
        raise IntegralError("negative genus or exponent")
    if n == 0:
        return Fraction(0)
    if sum(exponents) != 3 * g - 3 + n:
        return Fraction(0)
    if g == 0 and n < 3:
        return Fraction(0)
    if g >= 1 and n < 1:
        return Fraction(0)
    exps = tuple(sorted(exponents, reverse=True))
    if g == 0 and exps == (0, 0, 0):
        return TAU0_CUBED
    if g == 1 and exps == (1,):
        return TAU1_GENUS1
    if exps[-1] == 0:
        # string equation, valid while the smaller space is stable
        rest = exps[:-1]
        if (g == 0 and len(rest) >= 3) or (g >= 1 and len(rest) >= 1):
            return sum(
                (
                    correlator(g, rest[:i] + (rest[i] - 1,) + rest[i + 1 :])
                    for i in range(len(rest))
                    if rest[i] >= 1
                ),
                Fraction(0),
            )
    if exps[-1] == 1 or (1 in exps and len(exps) >= 2):
        # dilaton equation
        i = exps.index(1)
        rest = exps[:i] + exps[i + 1 :]
        if (g == 0 and len(rest) >= 3) or (g >= 1 and len(rest) >= 1):
            return (2 * g - 2 + len(rest)) * correlator(g, rest)
    return _virasoro_step(g, exps)


def _virasoro_step(g: int, exps: tuple[int, ...]) -> Fraction:
    """KdV/Virasoro recursion on the largest index (which is >= 2 here)."""
    k1 = exps[0]  # recurse on tau_{k1} = tau_{k+1}
    k = k1 - 1
    rest = exps[1:]
    total = Fraction(0)
    for j, aj in enumerate(rest):
        others = rest[:j] + rest[j + 1 :]
        # (2(k+a_j)+1)!! / (2a_j-1)!!
        denom = 1
        for i in range(1, 2 * aj, 2):
            denom *= i
        coeff = Fraction(_double_factorial_odd(k + aj), denom)
        total += coeff * correlator(g, others + (k + aj,))
    half = Fraction(0)
    for p in range(0, k):
        q = k - 1 - p
        w = Fraction(_double_factorial_odd(p) * _double_factorial_odd(q))
        if g >= 1:
            half += w * correlator(g - 1, rest + (p, q))
        for g1 in range(0, g + 1):
            g2 = g - g1
            for mask in range(1 << len(rest)):
                left = tuple(rest[i] for i in range(len(rest)) if mask >> i & 1)
                right = tuple(rest[i] for i in range(len(rest)) if not mask >> i & 1)
                half += (
                    w
                    * correlator(g1, left + (p,))
                    * correlator(g2, right + (q,))
                )
    total += Fraction(1, 2) * half
    return total / _double_factorial_odd(k1)


def integrate_psi(g: int, exponents) -> Fraction:
    """Top-degree psi integral on M_{g,n} for g in {0, 1}.

    Genus >= 2 is deliberately rejected here: the public contract covers
    exactly what the zero-cycle pipeline needs, and the caller should reach
    for `correlator` explicitly when higher genus is intended.
    """
    exponents = tuple(int(a) for a in exponents)
    n = len(exponents)
    if g not in (0, 1):
        raise IntegralError(f"genus {g} is outside the supported range {{0, 1}}")
    if n < 1 or (g == 0 and n < 3):
        raise IntegralError(f"moduli space M_{{{g},{n}}} is empty or unstable")
    if sum(exponents) != 3 * g - 3 + n:
        raise IntegralError(
            f"psi degree {sum(exponents)} is not top degree {3 * g - 3 + n}"
        )
    return correlator(g, exponents)


def genus0_closed_form(exponents) -> Fraction:
    """(n-3)! / prod(a_i!) for sum(a_i) = n - 3: the genus-0 closed form."""
    exponents = tuple(exponents)
    n = len(exponents)
    if sum(exponents) != n - 3:
        raise IntegralError("not a top-degree genus-0 exponent vector")
    return Fraction(factorial(n - 3), prod(factorial(a) for a in exponents))


@lru_cache(maxsize=None)
def integrate_psi_kappa(
    g: int, psi_exponents: tuple[int, ...], kappa_indices: tuple[int, ...]
) -> Fraction:
    """Integral of a psi monomial times kappa_{b_1}...kappa_{b_m} on M_{g,n}.

    Kappa classes are in the marked-point (log-canonical) convention, so
    kappa_b = pi_*(psi_{n+1}^{b+1}); pulling one kappa up at a time gives
    the standard inclusion-exclusion over subsets of the remaining ones.
    """
    if not kappa_indices:
        n = len(psi_exponents)
        if sum(psi_exponents) != 3 * g - 3 + n:
            return Fraction(0)
        return correlator(g, psi_exponents)
    if any(b < 1 for b in kappa_indices):
        raise IntegralError("kappa indices must be >= 1 (kappa_0 is a constant)")
    b0 = kappa_indices[0]
    rest = kappa_indices[1:]
    total = Fraction(0)
    for subset_mask in range(1 << len(rest)):
        chosen = [rest[i] for i in range(len(rest)) if subset_mask >> i & 1]
        remaining = tuple(
            rest[i] for i in range(len(rest)) if not subset_mask >> i & 1
        )
        sign = -1 if len(chosen) % 2 else 1
        total += sign * integrate_psi_kappa(
            g, psi_exponents + (b0 + 1 + sum(chosen),), remaining
        )
    return total


# ---------------------------------------------------------------------------
# decorated strata


@dataclass(frozen=True)
class Decoration:
    """psi/kappa decoration of a stable graph.

    psi_leg[i] is the exponent at leg i, psi_half[h] at half-edge h;
    kappa[v] is a tuple of (index, exponent) pairs at vertex v.
    """

    psi_leg: tuple[int, ...]
    psi_half: tuple[int, ...]
    kappa: tuple[tuple[tuple[int, int], ...], ...]

    @staticmethod
    def trivial(graph: StableGraph) -> "Decoration":
        return Decoration(
            tuple([0] * graph.n_legs),
            tuple([0] * graph.n_half_edges),
            tuple([()] * graph.n_vertices),
        )

    def degree(self) -> int:
        return (
            sum(self.psi_leg)
            + sum(self.psi_half)
            + sum(i * e for v in self.kappa for i, e in v)
        )

    def with_psi_leg(self, i: int, add: int) -> "Decoration":
        leg = list(self.psi_leg)
        leg[i] += add
        return Decoration(tuple(leg), self.psi_half, self.kappa)

    def with_psi_half(self, h: int, add: int) -> "Decoration":
        half = list(self.psi_half)
        half[h] += add
        return Decoration(self.psi_leg, tuple(half), self.kappa)

    def with_kappa(self, v: int, index: int, add: int) -> "Decoration":
        kappas = [dict(kv) for kv in self.kappa]
        kappas[v][index] = kappas[v].get(index, 0) + add
        return Decoration(
            self.psi_leg,
            self.psi_half,
            tuple(tuple(sorted(kv.items())) for kv in kappas),
        )

    def to_json(self, graph: StableGraph) -> dict:
        return {
            "psi_legs": {str(i + 1): e for i, e in enumerate(self.psi_leg) if e},
            "psi_half_edges": {str(h): e for h, e in enumerate(self.psi_half) if e},
            "kappa": [
                {str(i): e for i, e in kv} for kv in self.kappa
            ],
        }


@dataclass(frozen=True)
class StratumClass:
    """Formal rational combination of decorated boundary pushforwards.

    Terms are (coefficient, graph, decoration); the class is the sum of the
    pushforwards of the decorations along the graphs' boundary maps, taken
    as written (no automorphism division is baked in).
    """

    genus: int
    n_legs: int
    terms: tuple[tuple[Fraction, StableGraph, Decoration], ...]

    def __post_init__(self) -> None:
        for _, graph, _ in self.terms:
            if graph.genus() != self.genus or graph.n_legs != self.n_legs:
                raise GraphError("term does not live on the ambient space")

    def __add__(self, other: "StratumClass") -> "StratumClass":
        if (self.genus, self.n_legs) != (other.genus, other.n_legs):
            raise GraphError("ambient spaces differ")
        return StratumClass(self.genus, self.n_legs, self.terms + other.terms)

    def scale(self, c) -> "StratumClass":
        c = Fraction(c)
        return StratumClass(
            self.genus,
            self.n_legs,
            tuple((c * coeff, g, d) for coeff, g, d in self.terms),
        )

    @staticmethod
    def zero(g: int, n: int) -> "StratumClass":
        return StratumClass(g, n, ())

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "legs": self.n_legs,
            "terms": [
                {
                    "coefficient": rat_to_str(c),
                    "graph": graph.to_json(),
                    "decoration": dec.to_json(graph),
                }
                for c, graph, dec in self.terms
            ],
        }


def psi_class(g: int, n: int, i: int, power: int = 1) -> StratumClass:
    graph = trivial_graph(g, n)
    dec = Decoration.trivial(graph).with_psi_leg(i - 1, power)
    return StratumClass(g, n, ((Fraction(1), graph, dec),))


def kappa_class(g: int, n: int, index: int, power: int = 1) -> StratumClass:
    graph = trivial_graph(g, n)
    dec = Decoration.trivial(graph).with_kappa(0, index, power)
    return StratumClass(g, n, ((Fraction(1), graph, dec),))


def rational_tail_divisor(g: int, n: int, i: int) -> StableGraph:
    """D_{i,n+1} on M_{g,n+1}: rational tail carrying legs i and n+1."""
    legs = [0] * (n + 1)
    legs[i - 1] = 1
    legs[n] = 1
    graph = StableGraph((g, 0), (0, 1), (1, 0), tuple(legs))
    graph.validate()
    return graph


def pullback_psi_forgetful(g: int, n: int, i: int) -> StratumClass:
    """pi^*(psi_i) = psi_i - [D_{i,n+1}] on M_{g,n+1}."""
    if not 1 <= i <= n:
        raise IntegralError(f"marked point index {i} out of range 1..{n}")
    d_graph = rational_tail_divisor(g, n, i)
    return psi_class(g, n + 1, i) + StratumClass(
        g, n + 1, ((Fraction(-1), d_graph, Decoration.trivial(d_graph)),)
    )


def pullback_kappa_forgetful(g: int, n: int, i: int) -> StratumClass:
    """pi^*(kappa_i) = kappa_i - psi_{n+1}^i on M_{g,n+1}."""
    if i < 1:
        raise IntegralError("kappa_0 is the constant 2g-2+n; index must be >= 1")
    return kappa_class(g, n + 1, i) + psi_class(g, n + 1, n + 1, i).scale(-1)


def pullback_by_boundary(
    cls: StratumClass, graph: StableGraph
) -> list[tuple[Fraction, Decoration]]:
    """Pull a sum of pure psi/kappa monomials back to the stratum of `graph`.

    psi_i is routed to the vertex carrying leg i; kappa_i becomes the sum
    over vertices, expanded distributively.  The result is a list of
    (coefficient, decoration-on-graph) pairs.
    """
    out: list[tuple[Fraction, Decoration]] = []
    for coeff, term_graph, dec in cls.terms:
        if term_graph.n_edges != 0:
            raise IntegralError(
                "nested strata cannot be pulled back directly; "
                "intersect boundary classes first"
            )
        if any(e for e in dec.psi_half):
            raise IntegralError("pure monomials have no half-edge decorations")
        partials = [(coeff, Decoration.trivial(graph))]
        for i, e in enumerate(dec.psi_leg):
            if e:
                partials = [(c, d.with_psi_leg(i, e)) for c, d in partials]
        for kv in dec.kappa:
            for index, e in kv:
                for _ in range(e):
                    partials = [
                        (c, d.with_kappa(v, index, 1))
                        for c, d in partials
                        for v in range(graph.n_vertices)
                    ]
        out.extend(partials)
    return out


def boundary_intersection(a: StableGraph, b: StableGraph) -> list[
    tuple[GenericABGraph, tuple[tuple[int, int], ...]]
]:
    """xi_A^* (xi_B)_* (1) as (generic graph, excess edges) terms.

    Each term pushes forward the product over its excess edges (h, h') of
    (-psi_h - psi_{h'}); `as_pushforward_class` expands that product.
    """
    return [(t, t.common_edges()) for t in enumerate_generic_AB(a, b)]


def boundary_intersection_pushforward(a: StableGraph, b: StableGraph) -> StratumClass:
    """The intersection pushed all the way to M_{g,n}, decorations expanded."""
    g, n = a.genus(), a.n_legs
    terms = []
    for triple, excess in boundary_intersection(a, b):
        gamma = triple.gamma
        for coeff, dec in _expand_excess(gamma, excess):
            terms.append((coeff, gamma, dec))
    return StratumClass(g, n, tuple(terms))


def _expand_excess(gamma: StableGraph, excess: tuple[tuple[int, int], ...]):
    partials = [(Fraction(1), Decoration.trivial(gamma))]
    for h, hp in excess:
        nxt = []
        for coeff, dec in partials:
            nxt.append((-coeff, dec.with_psi_half(h, 1)))
            nxt.append((-coeff, dec.with_psi_half(hp, 1)))
        partials = nxt
    return partials


def integrate_stratum_class(cls: StratumClass, max_vertex_genus: int = 1) -> Fraction:
    """Integrate a top-codimension StratumClass over M_{g,n}, as written.

    Each term integrates factor by factor over its stratum; kappa classes
    are converted through forgetful pushforwards.  Vertices of genus above
    `max_vertex_genus` raise: silent wrong numbers would be worse, and the
    zero-cycle pipeline only needs genus <= 1.  Callers that really want
    genus-2 factors opt in explicitly.
    """
    dim = 3 * cls.genus - 3 + cls.n_legs
    total = Fraction(0)
    for coeff, graph, dec in cls.terms:
        codim = graph.n_edges + dec.degree()
        if codim != dim:
            raise IntegralError(
                f"term has codimension {codim}, not top degree {dim}"
            )
        total += coeff * _integrate_term(graph, dec, max_vertex_genus)
    return total


def _integrate_term(
    graph: StableGraph, dec: Decoration, max_vertex_genus: int
) -> Fraction:
    value = Fraction(1)
    for v in range(graph.n_vertices):
        gv = graph.genera[v]
        if gv > max_vertex_genus:
            raise IntegralError(
                f"vertex genus {gv} exceeds the supported bound {max_vertex_genus}"
            )
        psi = []
        for kind, idx in graph.vertex_points(v):
            psi.append(dec.psi_leg[idx] if kind == "leg" else dec.psi_half[idx])
        kappas = tuple(
            sorted(itertools.chain.from_iterable([i] * e for i, e in dec.kappa[v]))
        )
        nv = len(psi)
        if sum(psi) + sum(kappas) != 3 * gv - 3 + nv:
            return Fraction(0)
        factor = integrate_psi_kappa(gv, tuple(psi), kappas)
        if factor == 0:
            return Fraction(0)
        value *= factor
    return value


def pair_boundary_pushforwards(
    a: StableGraph,
    b: StableGraph,
    theta_psi_leg: int | None = None,
    theta_kappa_power: int = 0,
    max_vertex_genus: int = 2,
) -> Fraction:
    """Number pairing <xi_A^* xi_B* (1), theta> on M_{g,n}.

    theta is psi_1^D (D = complementary degree) when the space has legs, or
    kappa_1^D otherwise.  Genus-2 vertices are allowed here: the pairing is
    used by the bivariant-symmetry checks whose corpora include them.
    """
    g, n = a.genus(), a.n_legs
    dim = 3 * g - 3 + n
    d = dim - a.n_edges - b.n_edges
    if d < 0:
        return Fraction(0)
    cls = boundary_intersection_pushforward(a, b)
    terms = []
    for coeff, gamma, dec in cls.terms:
        if n >= 1:
            decorated = [(coeff, dec.with_psi_leg(0, d) if d else dec)]
        else:
            decorated = [(coeff, dec)]
            for _ in range(d):
                decorated = [
                    (c, dd.with_kappa(v, 1, 1))
                    for c, dd in decorated
                    for v in range(gamma.n_vertices)
                ]
        for c, dd in decorated:
            terms.append((c, gamma, dd))
    full = StratumClass(g, n, tuple(terms))
    return integrate_stratum_class(full, max_vertex_genus=max_vertex_genus)
