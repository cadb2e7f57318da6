"""`solap-enrich` command line: enrich, validate, gen, stats."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from ..cube import all_level_members, extract_schema, fact_members, split_views
from ..enrich import (
    EMITTED,
    INDEX_CHOICES,
    PHASES,
    POLYGON_AGGREGATES,
    EnrichSettings,
    PhaseError,
    RelationTriple,
    default_jobs,
    enrich,
)
from ..geometry import DISPATCHES, MODES, TopologicalRelation
from ..oracle import InvalidSpec, SyntheticCubeSpec, generate_synthetic_cube, load_truth
from ..rdf import Graph, Iri, RdfSyntaxError, format_for_path, parse_rdf, serialize_rdf
from ..vocab import DEFAULT_SPATIAL_DATATYPES, PREFIXES
from .sparql import SparqlError, fetch_graph

log = logging.getLogger("solap_enrich")

EXIT_OK, EXIT_FATAL, EXIT_SKIPPED = 0, 1, 2
U64 = 2**64


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    inputs: tuple[str, ...] = ()
    endpoint: Optional[str] = None
    graph: Optional[str] = None
    mode: str = "exact"
    dispatch: str = "algorithm2"
    index: Optional[str] = None
    polygon_agg: str = "union"
    strict: bool = False
    jobs: int = 1
    out: str = "out"
    datatypes: tuple[str, ...] = tuple(sorted(i.value for i in DEFAULT_SPATIAL_DATATYPES))
    discover_hs: bool = True
    figures: bool = True

    def __post_init__(self) -> None:
        if bool(self.inputs) == bool(self.endpoint):
            raise ConfigError("give exactly one input source: --input files or --endpoint URL")
        if self.graph and not self.endpoint:
            raise ConfigError("--graph only applies to --endpoint")
        if not self.datatypes:
            raise ConfigError("the spatial datatype allow-list is empty")

    def settings(self) -> EnrichSettings:
        return EnrichSettings(
            mode=self.mode,
            dispatch=self.dispatch,
            index=self.index,
            polygon_agg=self.polygon_agg,
            strict=self.strict,
            datatypes=frozenset(Iri(d) for d in self.datatypes),
            jobs=self.jobs,
            discover_hs=self.discover_hs,
        )


def _expand(name: str) -> str:
    if ":" in name and not name.startswith(("http:", "https:", "urn:")):
        prefix, local = name.split(":", 1)
        if prefix in PREFIXES:
            return PREFIXES[prefix] + local
    return name


# -- input / output ------------------------------------------------------------


def load_inputs(config: RunConfig) -> tuple[Graph, Graph]:
    """(schema view, instance view) of the configured source."""
    if config.endpoint:
        merged = fetch_graph(config.endpoint, config.graph)
    else:
        merged = Graph()
        for path in config.inputs:
            text = Path(path).read_text(encoding="utf-8")
            g = parse_rdf(text, format_for_path(path))
            merged = Graph(merged.triples | g.triples, {**g.prefixes, **merged.prefixes})
    return split_views(merged)


def write_graph(g: Graph, path: Path) -> None:
    path.write_text(serialize_rdf(g, format_for_path(str(path))), encoding="utf-8")


def write_report(report: dict, out: Path) -> None:
    (out / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    with open(out / "report.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["phase", "relation", "count", "predicate_calls", "seconds"])
        for phase in PHASES:
            if phase not in report:
                continue
            calls = report["predicate_calls"].get(phase, 0)
            secs = report["timings_s"].get(phase, 0.0)
            for rel, n in sorted(report[phase].items()):
                w.writerow([phase, rel, n, calls, secs])
        for rel, n in sorted(report["totals"].items()):
            w.writerow(["total_new", rel, n, "", ""])


# -- commands --------------------------------------------------------------------


def run_enrich(config: RunConfig) -> int:
    out = Path(config.out)
    try:
        schema_g, instance_g = load_inputs(config)
    except (OSError, RdfSyntaxError, SparqlError) as exc:
        print(f"error [load]: {exc}", file=sys.stderr)
        return EXIT_FATAL
    try:
        result = enrich(schema_g, instance_g, config.settings())
    except PhaseError as exc:
        print(f"error [{exc.phase}]: {exc.cause}", file=sys.stderr)
        return EXIT_FATAL

    for phase, secs in result.report.timings_s.items():
        log.info("%s took %.3f s", phase, secs)
    out.mkdir(parents=True, exist_ok=True)
    write_graph(result.instance, out / "enriched-instance.ttl")
    write_graph(result.schema_graph, out / "enriched-schema.ttl")
    report = result.report.to_json()
    write_report(report, out)
    if config.figures:
        from . import figures

        phase_counts = {p: report[p] for p in PHASES if p in report}
        figures.relation_bars(phase_counts, out / "figures" / "relations.png", "relations per phase")
        figures.member_map(result.instance, out / "figures" / "map.png", config.settings().datatypes)

    totals = ", ".join(f"{k}={v}" for k, v in sorted(report["totals"].items()))
    print(f"enriched: {report['new_triples']} new triples ({totals}); output in {out}")
    if report["skipped"]:
        print(f"skipped {report['skipped']} malformed spatial value(s)", file=sys.stderr)
        return EXIT_SKIPPED
    return EXIT_OK


def enriched_relations(instance: Graph) -> set[RelationTriple]:
    found = set()
    for rel in TopologicalRelation:
        for s, _, o in instance.match(None, rel.predicate, None):
            if isinstance(s, Iri) and isinstance(o, Iri):
                found.add(RelationTriple(s, rel, o))
    return found


def diff_table(expected: set[RelationTriple], found: set[RelationTriple]) -> list[dict]:
    kinds = [r.value for r in EMITTED]
    kinds += sorted({r.relation.value for r in expected | found} - set(kinds))
    rows = []
    for kind in kinds:
        exp = {r for r in expected if r.relation.value == kind}
        got = {r for r in found if r.relation.value == kind}
        rows.append(
            {
                "relation": kind,
                "expected": len(exp),
                "found": len(got),
                "diff": len(got) - len(exp),
                "missing": len(exp - got),
                "extra": len(got - exp),
            }
        )
    return rows


def run_validate(out_dir: str, truth_path: str, figures_on: bool = True) -> int:
    out = Path(out_dir)
    try:
        instance = parse_rdf((out / "enriched-instance.ttl").read_text(encoding="utf-8"))
        expected = load_truth(Path(truth_path).read_text(encoding="utf-8"))
    except (OSError, RdfSyntaxError, ValueError, KeyError) as exc:
        print(f"error [validate]: {exc}", file=sys.stderr)
        return EXIT_FATAL
    found = enriched_relations(instance)
    rows = diff_table(expected, found)
    cols = ("relation", "expected", "found", "diff", "missing", "extra")
    print("  ".join(f"{c:>10}" for c in cols))
    for r in rows:
        print("  ".join(f"{r[c]:>+10}" if c == "diff" else f"{r[c]:>10}" for c in cols))
    with open(out / "validate.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=cols)
        w.writeheader()
        w.writerows(rows)
    if figures_on:
        from . import figures

        figures.diff_bars(rows, out / "figures" / "validate.png")
    ok = expected == found
    print("match" if ok else "MISMATCH")
    return EXIT_OK if ok else EXIT_FATAL


def _load_spec(raw: str) -> SyntheticCubeSpec:
    path = Path(raw)
    if path.is_file():
        return SyntheticCubeSpec.from_json(path.read_text(encoding="utf-8"))
    if raw.lstrip().startswith("{"):
        return SyntheticCubeSpec.from_json(raw)
    raise InvalidSpec(f"no spec file at {raw}")


def run_gen(spec_arg: str, out_dir: str, seed: Optional[int] = None, mode: str = "exact") -> int:
    try:
        spec = _load_spec(spec_arg)
        if seed is not None:
            spec = SyntheticCubeSpec.from_dict({**spec.to_dict(), "seed": seed})
        schema, instance, truth = generate_synthetic_cube(spec, mode)
    except (InvalidSpec, TypeError, OSError) as exc:
        print(f"error [gen]: {exc}", file=sys.stderr)
        return EXIT_FATAL
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_graph(schema, out / "schema.ttl")
    write_graph(instance, out / "instance.ttl")
    (out / "truth.json").write_text(truth.to_json(), encoding="utf-8")
    print(f"generated {len(schema)} schema and {len(instance)} instance triples, "
          f"{len(truth.all())} expected relations in {out}")
    return EXIT_OK


def cube_stats(schema_g: Graph, instance_g: Graph) -> dict:
    schema = extract_schema(schema_g)
    return {
        "dimensions": len(schema.dimensions),
        "hierarchies": len(schema.hierarchies),
        "levels": len(schema.levels),
        "hierarchy_steps": len(schema.steps),
        "level_members": len(all_level_members(instance_g)),
        "facts": len(fact_members(instance_g)),
    }


def run_stats(config: RunConfig) -> int:
    try:
        schema_g, instance_g = load_inputs(config)
        stats = cube_stats(schema_g, instance_g)
    except (OSError, RdfSyntaxError, SparqlError, ValueError) as exc:
        print(f"error [stats]: {exc}", file=sys.stderr)
        return EXIT_FATAL
    width = max(len(k) for k in stats)
    for k, v in stats.items():
        print(f"{k:<{width}}  {v}")
    return EXIT_OK


# -- argument parsing --------------------------------------------------------------


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < U64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _source_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", nargs="+", metavar="FILE", help="Turtle (.ttl) or N-Triples (.nt) files")
    src.add_argument("--endpoint", metavar="URL", help="SPARQL endpoint to read the cube from")
    p.add_argument("--graph", metavar="IRI", help="named graph on the endpoint")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="solap-enrich", description="Add spatial semantics to a QB4OLAP cube."
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="log phase timings")
    sub = parser.add_subparsers(dest="command", required=True)

    e = sub.add_parser("enrich", parents=[common], help="detect and discover topological relations")
    _source_args(e)
    e.add_argument("--mode", choices=MODES, default="exact")
    e.add_argument("--dispatch", choices=DISPATCHES, default="algorithm2")
    e.add_argument("--index", choices=INDEX_CHOICES, default=None,
                   help="pruning for discover phases (default rtree; detect never needs one)")
    e.add_argument("--polygon-agg", choices=POLYGON_AGGREGATES, default="union")
    e.add_argument("--strict", action="store_true", help="fail on malformed spatial values")
    e.add_argument("--jobs", type=_positive, default=None, help="worker processes (default: all CPUs)")
    e.add_argument("--out", default="out")
    e.add_argument("--datatype", action="append", metavar="IRI",
                   help="spatial literal datatype to accept (repeatable; prefixed names allowed)")
    e.add_argument("--discover-hs", dest="discover_hs", action=argparse.BooleanOptionalAction, default=True,
                   help="also evaluate unlinked member pairs within hierarchies")
    e.add_argument("--no-figures", dest="figures", action="store_false")

    v = sub.add_parser("validate", parents=[common], help="compare enriched output with a truth file")
    v.add_argument("--out", required=True, help="directory holding enriched-instance.ttl")
    v.add_argument("--truth", required=True, help="truth.json from `gen`")
    v.add_argument("--no-figures", dest="figures", action="store_false")

    g = sub.add_parser("gen", parents=[common], help="generate a synthetic cube with known relations")
    g.add_argument("--spec", required=True, help="JSON spec file or inline JSON object")
    g.add_argument("--seed", type=_seed, default=None, help="overrides the spec's seed")
    g.add_argument("--mode", choices=MODES, default="exact", help="geometry mode the truth assumes")
    g.add_argument("--out", default="synthetic")

    s = sub.add_parser("stats", parents=[common], help="summarise a cube")
    _source_args(s)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.command == "enrich":
            config = RunConfig(
                inputs=tuple(args.input or ()),
                endpoint=args.endpoint,
                graph=args.graph,
                mode=args.mode,
                dispatch=args.dispatch,
                index=args.index,
                polygon_agg=args.polygon_agg,
                strict=args.strict,
                jobs=args.jobs or default_jobs(),
                out=args.out,
                datatypes=tuple(_expand(d) for d in args.datatype)
                if args.datatype
                else RunConfig.datatypes,
                discover_hs=args.discover_hs,
                figures=args.figures,
            )
            return run_enrich(config)
        if args.command == "validate":
            return run_validate(args.out, args.truth, args.figures)
        if args.command == "gen":
            return run_gen(args.spec, args.out, args.seed, args.mode)
        config = RunConfig(inputs=tuple(args.input or ()), endpoint=args.endpoint, graph=args.graph)
        return run_stats(config)
    except ConfigError as exc:
        print(f"error [config]: {exc}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
