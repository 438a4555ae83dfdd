"""Command-line interface: JSON in, JSON out, exact numbers as "p/q".

Exit codes: 0 on success, 2 on malformed input or validation failure,
3 on an internal invariant breach.  Output is deterministic (sorted keys),
so regression tests can diff bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from covercalc.delliptic import (
    PipelineError,
    delta00_contributions,
    delta00_number,
    delta00_stratum_aggregates,
    delta01_contributions,
    delta01_number,
    normalized_series,
    quasimodularity_report,
)
from covercalc.exact import QSeries, rat_to_str
from covercalc.gcover import (
    AdmissibleGGraph,
    CoverError,
    boundary_intersection_H,
    pullback_psi_kappa_hurwitz,
    validate_admissible_g_graph,
)
from covercalc.graphs import GraphError, StableGraph
from covercalc.groups import FiniteGroup, GroupError, Subgroup
from covercalc.hurwitz import HurwitzError, hurwitz_cover_count
from covercalc.mbar import (
    IntegralError,
    boundary_intersection_pushforward,
    integrate_psi,
)
from covercalc.qmod import is_quasimodular

USER_ERRORS = (
    CoverError,
    GraphError,
    GroupError,
    HurwitzError,
    IntegralError,
    PipelineError,
    KeyError,
    TypeError,
    ValueError,
    json.JSONDecodeError,
)


def _emit(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _load_json(path: str) -> dict:
    if path == "-":
        return json.load(sys.stdin)
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def cmd_integrate(args) -> int:
    exponents = [int(x) for x in args.exponents.split(",") if x != ""]
    value = integrate_psi(args.genus, exponents)
    _emit(
        {
            "genus": args.genus,
            "exponents": exponents,
            "value": rat_to_str(value),
        }
    )
    return 0


def cmd_intersect_boundary(args) -> int:
    a = StableGraph.from_json(_load_json(args.a))
    b = StableGraph.from_json(_load_json(args.b))
    cls = boundary_intersection_pushforward(a, b)
    _emit(
        {
            "ambient": {"genus": a.genus(), "legs": a.n_legs},
            "pushforward_class": cls.to_json(),
            "term_count": len(cls.terms),
        }
    )
    return 0


def cmd_validate_ggraph(args) -> int:
    gg = AdmissibleGGraph.from_json(_load_json(args.input))
    violations = validate_admissible_g_graph(gg)
    payload = {
        "ok": not violations,
        "violations": [v.to_json() for v in violations],
    }
    _emit(payload)
    return 0 if not violations else 2


def cmd_hurwitz_count(args) -> int:
    types = json.loads(args.types)
    count = hurwitz_cover_count(args.degree, types, weighted=args.weighted)
    _emit(
        {
            "degree": args.degree,
            "types": types,
            "weighted": args.weighted,
            "count": rat_to_str(count),
        }
    )
    return 0


def cmd_intersect_ggraph(args) -> int:
    a = AdmissibleGGraph.from_json(_load_json(args.a))
    b = AdmissibleGGraph.from_json(_load_json(args.b))
    terms = boundary_intersection_H(a, b)
    _emit(
        {
            "term_count": len(terms),
            "terms": [
                {
                    "gamma": t.gamma.to_json(),
                    "excess_edge_orbits": [list(e) for e in t.excess_orbit_edges],
                    "to_a": {
                        "vertex_map": list(t.to_a.vertex_map),
                        "half_edge_map": list(t.to_a.half_edge_map),
                    },
                    "to_b": {
                        "vertex_map": list(t.to_b.vertex_map),
                        "half_edge_map": list(t.to_b.half_edge_map),
                    },
                }
                for t in terms
            ],
        }
    )
    return 0


def cmd_pullback(args) -> int:
    payload = _load_json(args.input)
    kind = payload["kind"]
    params: dict = {"cls": payload["cls"]}
    if "group" in payload:
        group = FiniteGroup.from_json(payload["group"])
        params["group"] = group
        if "normal" in payload:
            gens = [tuple(i - 1 for i in perm) for perm in payload["normal"]]
            params["normal"] = group.generated_subgroup(gens)
        if "h" in payload:
            params["h"] = tuple(i - 1 for i in payload["h"])
    if "index" in payload:
        params["index"] = payload["index"]
    formula = pullback_psi_kappa_hurwitz(kind, **params)
    _emit(formula.to_json())
    return 0


def cmd_delliptic(args) -> int:
    if args.dmax < 2:
        raise PipelineError("--dmax must be at least 2")
    values = {}
    for d in range(2, args.dmax + 1):
        aggregates = delta00_stratum_aggregates(d)
        values[str(d)] = {
            "delta00": rat_to_str(delta00_number(d)),
            "delta01": rat_to_str(delta01_number(d)),
            "delta00_aggregates": [rat_to_str(x) for x in aggregates],
        }
    payload: dict = {"dmax": args.dmax, "values": values}
    if args.ledger:
        payload["ledgers"] = {
            str(d): {
                "delta00": [c.to_json() for c in delta00_contributions(d)],
                "delta01": [c.to_json() for c in delta01_contributions(d)],
            }
            for d in range(2, args.dmax + 1)
        }
    if args.series:
        payload["series"] = {
            "delta00_normalized": normalized_series("delta00", args.dmax).to_json(),
            "delta01_normalized": normalized_series("delta01", args.dmax).to_json(),
        }
    if args.qmod:
        payload["quasimodularity"] = quasimodularity_report(args.dmax).to_json()
    if args.human:
        _print_delliptic_table(values)
        return 0
    _emit(payload)
    return 0


def _print_delliptic_table(values: dict) -> None:
    header = f"{'d':>4} {'delta00':>16} {'delta01':>16}"
    print(header)
    print("-" * len(header))
    for d in sorted(values, key=int):
        row = values[d]
        print(f"{d:>4} {row['delta00']:>16} {row['delta01']:>16}")


def cmd_qmod_check(args) -> int:
    data = _load_json(args.input)
    series = QSeries.from_json(data)
    report = is_quasimodular(
        series, weight_bound=args.weight, fit_len=args.fit, holdout_len=args.holdout
    )
    _emit(report.to_json())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="covercalc",
        description="Exact intersection calculus for admissible cover moduli.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("integrate", help="top-degree psi integral on M_{g,n}")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--exponents", type=str, required=True,
                   help="comma-separated psi exponents, one per marked point")
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("intersect-boundary", help="intersect two boundary strata")
    p.add_argument("--a", required=True, help="stable graph JSON file (or -)")
    p.add_argument("--b", required=True)
    p.set_defaults(func=cmd_intersect_boundary)

    p = sub.add_parser("validate-ggraph", help="check admissibility conditions")
    p.add_argument("input", help="admissible G-graph JSON file (or -)")
    p.set_defaults(func=cmd_validate_ggraph)

    p = sub.add_parser("hurwitz-count", help="count monodromy tuples")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--types", required=True, help="JSON list of partitions")
    p.add_argument("--weighted", action="store_true",
                   help="weight classes by 1/#centralizer")
    p.set_defaults(func=cmd_hurwitz_count)

    p = sub.add_parser("intersect-ggraph", help="intersect two cover boundary strata")
    p.add_argument("--a", required=True, help="admissible G-graph JSON file")
    p.add_argument("--b", required=True)
    p.set_defaults(func=cmd_intersect_ggraph)

    p = sub.add_parser("pullback", help="psi/kappa pullback formula for a named map")
    p.add_argument("input", help="JSON payload with kind, cls, and group data")
    p.set_defaults(func=cmd_pullback)

    p = sub.add_parser("delliptic", help="genus-2 d-elliptic boundary pairings")
    p.add_argument("--dmax", type=int, required=True)
    p.add_argument("--series", action="store_true", help="emit normalized q-series")
    p.add_argument("--ledger", action="store_true", help="emit per-stratum ledgers")
    p.add_argument("--qmod", action="store_true",
                   help="run the quasimodularity membership check")
    p.add_argument("--human", action="store_true", help="aligned table output")
    p.set_defaults(func=cmd_delliptic)

    p = sub.add_parser("qmod-check", help="exact quasimodularity membership")
    p.add_argument("--weight", type=int, default=4)
    p.add_argument("--fit", type=int, default=20)
    p.add_argument("--holdout", type=int, default=18)
    p.add_argument("--input", default="-", help="q-series JSON file (default stdin)")
    p.set_defaults(func=cmd_qmod_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except USER_ERRORS as err:
        _emit({"error": f"{type(err).__name__}: {err}"})
        return 2
    except AssertionError as err:
        _emit({"error": f"internal invariant breach: {err}"})
        return 3


if __name__ == "__main__":
    sys.exit(main())
