"""Command-line entry points.

Exit codes: 0 success, 1 usage problems, 2 data errors (parse failures,
missing concepts, precondition violations), 3 total network failure.
Machine-readable diagnostics go to stderr as JSON lines; results go to
stdout or --output.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from io import StringIO
from pathlib import Path

import click

from .acquisition import EndpointConfig, run_acquisition
from .errors import AcquisitionFailure, SemrichError
from .experiments import (
    decay_curves,
    decay_result_to_dict,
    tree_report,
    tree_report_to_dict,
)
from .graph import Graph
from .ntriples import NTriplesParseError, parse_ntriples, parse_term, serialize_ntriples
from .profile import build_profile
from .richness import (
    information_content,
    richness,
    richness_report_to_dict,
    theorem_check_to_dict,
    verify_decay,
)
from .svgplot import render_line_plot
from .synth import OntologySpec, SourceSpec, generate_ontology, generate_source, load_spec_file
from .terms import IRI, Term
from .typicality import score_candidates
from .richness import ic_report_to_dict

import csv as _csv


def _diag(category: str, **fields) -> None:
    print(json.dumps({"error": category, **fields}, sort_keys=True), file=sys.stderr)


def _load_graph_file(path: Path, strict: bool) -> Graph:
    result = parse_ntriples(path.read_bytes(), strict=strict)
    for issue in result.issues:
        _diag("parse-issue", file=str(path), line=issue.line,
              category=issue.category, message=issue.message)
    return result.graph


def _load_source(path_str: str, strict: bool) -> Graph:
    """A source is an N-Triples file or a directory of them (e.g. a cache)."""
    path = Path(path_str)
    if path.is_dir():
        graph = Graph()
        for part in sorted(path.glob("**/*.nt")):
            graph = graph.union(_load_graph_file(part, strict))
        return graph
    return _load_graph_file(path, strict)


def _union_graphs(files: tuple[str, ...], strict: bool) -> Graph:
    graph = Graph()
    for f in files:
        graph = graph.union(_load_source(f, strict))
    return graph


def _write(text: str, output: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = StringIO()
    writer = _csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _f4(value: Fraction) -> str:
    return f"{float(value):.4f}"


concept_option = click.option("--concept", required=True, help="Concept IRI.")
format_option = click.option(
    "--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
    show_default=True, help="Output format.",
)
strict_option = click.option(
    "--strict", is_flag=True, help="Fail on the first malformed input line."
)
seed_option = click.option("--seed", type=int, default=0, show_default=True)
output_option = click.option(
    "--output", type=click.Path(dir_okay=False), default=None,
    help="Write results here instead of stdout.",
)


@click.group()
def cli() -> None:
    """Exact richness measures and merge-decay checks for RDF concepts."""


@cli.command("richness")
@click.argument("files", nargs=-1, required=True, type=click.Path(exists=True))
@concept_option
@format_option
@strict_option
@output_option
@click.option("--ic", "with_ic", is_flag=True, help="Include the information-content baseline.")
def cmd_richness(files, concept, fmt, strict, output, with_ic):
    """Profile a concept over the union of FILES and report mu, Y, and G."""
    graph = _union_graphs(files, strict)
    profile = build_profile(graph, IRI(concept))
    if profile.is_empty:
        raise SemrichError(f"no entities of {concept} in the input")
    report = richness(profile)
    if fmt == "json":
        body = richness_report_to_dict(report)
        if with_ic:
            body["information_content"] = ic_report_to_dict(
                information_content(graph, IRI(concept))
            )
        _write(json.dumps(body, indent=2, sort_keys=True), output)
    else:
        rows = [
            ["g", "", "", str(report.g_value), _f4(report.g_value)],
            ["mu", "", "", str(report.mu), _f4(report.mu)],
            ["total_entities", "", "", str(report.total_entities), ""],
            ["characteristic_set_size", "", "", str(len(report.characteristic_set)), ""],
        ]
        if with_ic:
            ic = information_content(graph, IRI(concept))
            rows.append(["ic", "", "", str(ic.p_alpha), f"{ic.ic_value:.4f}"])
        from .profile import Pattern

        for pattern in sorted(report.per_pattern, key=Pattern.sort_key):
            value = report.per_pattern[pattern]
            rows.append(
                ["pattern", pattern.predicate.value, str(pattern.object),
                 str(value), _f4(value)]
            )
        _write(_csv_text(["record", "predicate", "object", "exact", "float"], rows), output)


@cli.command("decay")
@click.argument("sources", nargs=-1, required=True, type=click.Path(exists=True))
@concept_option
@click.option("--chunk", type=int, default=100, show_default=True,
              help="Entities added between curve points.")
@seed_option
@format_option
@strict_option
@output_option
@click.option("--svg", type=click.Path(dir_okay=False), default=None,
              help="Also render the curves as SVG.")
def cmd_decay(sources, concept, chunk, seed, fmt, strict, output, svg):
    """Merge SOURCES progressively and chart how G decays from each start."""
    if len(sources) < 2:
        raise click.UsageError("decay needs at least two sources")
    named = [(s, _load_source(s, strict)) for s in sources]
    result = decay_curves(named, IRI(concept), chunk_size=chunk, seed=seed)
    if fmt == "json":
        _write(json.dumps(decay_result_to_dict(result), indent=2, sort_keys=True), output)
    else:
        rows = []
        for curve in result.curves:
            for step in curve.steps:
                rows.append(
                    [curve.base, step.entities_added, step.total_entities,
                     str(step.g), _f4(step.g)]
                )
        xs = sorted({s.entities_added for c in result.curves for s in c.steps})
        for x in xs:
            rows.append(
                ["weighted-average", x, "", str(result.weighted_average),
                 _f4(result.weighted_average)]
            )
        _write(
            _csv_text(["series", "entities_added", "total_entities", "g", "g_float"], rows),
            output,
        )
    if svg:
        series = [
            (curve.base, [(float(s.entities_added), float(s.g)) for s in curve.steps])
            for curve in result.curves
        ]
        Path(svg).write_text(
            render_line_plot(
                series,
                reference=float(result.weighted_average),
                title=f"Richness decay for {concept}",
                x_label="foreign entities added",
                y_label="G",
            ),
            encoding="utf-8",
        )


@cli.command("tree")
@click.argument("files", nargs=-1, required=True, type=click.Path(exists=True))
@concept_option
@click.option("--cap", type=int, default=1000, show_default=True,
              help="Sample concepts with more entities down to this many.")
@seed_option
@format_option
@strict_option
@output_option
def cmd_tree(files, concept, cap, seed, fmt, strict, output):
    """Compare every concept under a subclass root with its children."""
    graph = _union_graphs(files, strict)
    report = tree_report(graph, IRI(concept), cap=cap, seed=seed)
    if fmt == "json":
        _write(json.dumps(tree_report_to_dict(report), indent=2, sort_keys=True), output)
        return
    rows = []
    frac = report.fraction_increasing
    rows.append(["summary", "", "", "fraction_increasing",
                 "n/a" if frac is None else str(frac),
                 "" if frac is None else _f4(frac)])
    for c in sorted(report.concept_g, key=lambda c: c.value):
        rows.append(["concept", c.value, "", str(report.concept_totals[c]),
                     str(report.concept_g[c]), _f4(report.concept_g[c])])
    for e in report.edges:
        rows.append(["edge", e.child.value, e.parent.value,
                     "increasing" if e.delta > 0 else "non-increasing",
                     str(e.delta), _f4(e.delta)])
    for p in report.parents:
        rows.append(["parent", p.parent.value, "",
                     "holds" if p.holds else "violated",
                     str(p.children_mean), _f4(p.children_mean)])
    _write(_csv_text(["record", "a", "b", "note", "exact", "float"], rows), output)


@cli.command("typicality")
@click.argument("files", nargs=-1, required=True, type=click.Path(exists=True))
@concept_option
@click.option("--entities", "entities_file", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Candidate entity IRIs, one per line.")
@format_option
@strict_option
@output_option
def cmd_typicality(files, concept, entities_file, fmt, strict, output):
    """Score candidate entities against the concept's characteristic patterns."""
    graph = _union_graphs(files, strict)
    candidates: list[Term] = []
    for raw in Path(entities_file).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        candidates.append(parse_term(line) if line[0] in '<_"' else IRI(line))
    rows_out = score_candidates(graph, IRI(concept), candidates)
    if fmt == "json":
        body = [
            {
                "entity": str(r.entity),
                "delta": {"exact": str(r.score.delta), "float": float(r.score.delta)},
                "classification": r.score.classification,
                "richness_delta": (
                    None
                    if r.richness_delta is None
                    else {"exact": str(r.richness_delta), "float": float(r.richness_delta)}
                ),
                "note": r.note,
            }
            for r in rows_out
        ]
        _write(json.dumps(body, indent=2, sort_keys=True), output)
    else:
        rows = [
            [
                str(r.entity),
                str(r.score.delta),
                _f4(r.score.delta),
                r.score.classification,
                "" if r.richness_delta is None else str(r.richness_delta),
                "" if r.richness_delta is None else _f4(r.richness_delta),
                r.note,
            ]
            for r in rows_out
        ]
        _write(
            _csv_text(
                ["entity", "delta", "delta_float", "classification",
                 "richness_delta", "richness_delta_float", "note"],
                rows,
            ),
            output,
        )


@cli.command("verify")
@click.argument("sources", nargs=-1, required=True, type=click.Path(exists=True))
@concept_option
@format_option
@strict_option
@output_option
def cmd_verify(sources, concept, fmt, strict, output):
    """Check the merge-decay inequality for every pair of SOURCES, exactly."""
    if len(sources) < 2:
        raise click.UsageError("verify needs at least two sources")
    profiles = []
    for s in sources:
        profile = build_profile(_load_source(s, strict), IRI(concept))
        if profile.is_empty:
            raise SemrichError(f"no entities of {concept} in {s}")
        profiles.append((s, profile))
    checks = []
    for i in range(len(profiles)):
        for j in range(i + 1, len(profiles)):
            (name_a, a), (name_b, b) = profiles[i], profiles[j]
            check = verify_decay(a, b)
            checks.append((name_a, name_b, check))
    if fmt == "json":
        body = [
            {"a": name_a, "b": name_b, **theorem_check_to_dict(check)}
            for name_a, name_b, check in checks
        ]
        _write(json.dumps(body, indent=2, sort_keys=True), output)
    else:
        rows = [
            [name_a, name_b, str(check.lhs), _f4(check.lhs),
             str(check.rhs), _f4(check.rhs), "yes" if check.holds else "NO"]
            for name_a, name_b, check in checks
        ]
        _write(
            _csv_text(["a", "b", "lhs", "lhs_float", "rhs", "rhs_float", "holds"], rows),
            output,
        )


@cli.command("fetch")
@click.option("--config", "config_file", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="JSON acquisition config (endpoints, concept, cache_dir).")
@click.option("--cache", "cache_dir", type=click.Path(file_okay=False), default=None,
              help="Override the cache directory from the config.")
@click.option("--mode", type=click.Choice(["prefer", "refresh", "offline"]),
              default=None, help="Override the cache mode from the config.")
@click.option("--seed", type=int, default=None, help="Override the sampling seed.")
def cmd_fetch(config_file, cache_dir, mode, seed):
    """Acquire a concept's entities from SPARQL endpoints into the cache."""
    config = json.loads(Path(config_file).read_text(encoding="utf-8"))
    endpoints = [EndpointConfig(**row) for row in config["endpoints"]]
    concept = IRI(config["concept"])
    cache = cache_dir or config.get("cache_dir")
    if not cache:
        raise click.UsageError("no cache directory given (config cache_dir or --cache)")
    runs = run_acquisition(
        endpoints,
        concept,
        cache,
        seed=seed if seed is not None else config.get("seed", 0),
        mode=mode or config.get("mode", "prefer"),
    )
    summary = {
        "cache": str(cache),
        "concept": concept.value,
        "endpoints": [
            {
                "url": run.endpoint_url,
                "entities": len(run.entities),
                "failures": len(run.failures),
                "requests": run.requests_made,
                "cache_hits": run.cache_hits,
            }
            for run in runs
        ],
    }
    click.echo(json.dumps(summary, indent=2, sort_keys=True))


@cli.command("synth")
@click.option("--spec", "spec_file", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="JSON generator spec (source, sources, or ontology).")
@click.option("--output", required=True, type=click.Path(),
              help="Output .nt file, or a directory for multi-source specs.")
def cmd_synth(spec_file, output):
    """Generate deterministic synthetic N-Triples from a spec file."""
    spec = load_spec_file(spec_file)
    if isinstance(spec, list):
        out_dir = Path(output)
        out_dir.mkdir(parents=True, exist_ok=True)
        for source in spec:
            data = serialize_ntriples(generate_source(source))
            (out_dir / f"{source.source_name}.nt").write_bytes(data)
        click.echo(f"wrote {len(spec)} sources to {out_dir}")
        return
    if isinstance(spec, OntologySpec):
        graph = generate_ontology(spec)
    elif isinstance(spec, SourceSpec):
        graph = generate_source(spec)
    else:  # pragma: no cover - load_spec_file already rejects
        raise SemrichError("unsupported spec")
    Path(output).parent.mkdir(parents=True, exist_ok=True)
    Path(output).write_bytes(serialize_ntriples(graph))
    click.echo(f"wrote {len(graph)} triples to {output}")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        _diag("usage", message=exc.format_message())
        return 1
    except click.ClickException as exc:
        _diag("usage", message=exc.format_message())
        return 1
    except click.Abort:
        return 1
    except NTriplesParseError as exc:
        _diag("parse", line=exc.issue.line, category=exc.issue.category,
              message=exc.issue.message)
        return 2
    except AcquisitionFailure as exc:
        _diag("network", message=str(exc))
        return 3
    except SemrichError as exc:
        _diag("data", message=str(exc))
        return 2
    except OSError as exc:
        _diag("io", message=str(exc))
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
