"""Command-line entry points for the data tooling and the game service."""

from __future__ import annotations

import json
import sys

import click

from . import coreset, datagen, evalharness, variants


@click.group()
def main():
    """Scriptable poker engine: corpora, scoring, and the table service."""


def _parse_balance(spec: str | None) -> datagen.BalanceSpec | None:
    """--balance accepts 'uniform:CatA,CatB,...' or 'CatA=0.2,CatB=0.8'."""
    if not spec:
        return None
    if spec.startswith("uniform:"):
        cats = [c.strip() for c in spec[len("uniform:"):].split(",") if c.strip()]
        return datagen.BalanceSpec.uniform(cats)
    weights = {}
    for item in spec.split(","):
        name, _, value = item.partition("=")
        weights[name.strip()] = float(value)
    return datagen.BalanceSpec(weights)


@main.command()
@click.option("--scripts", required=True, help="Comma-separated variant names or script file paths.")
@click.option("--rounds", type=int, required=True)
@click.option("--seed", type=int, default=0)
@click.option("--balance", default=None, help="uniform:Cat,Cat,... or Cat=w,Cat=w quota spec.")
@click.option("--natural-fraction", type=float, default=0.0)
@click.option("--include-start/--no-include-start", default=False)
@click.option("--out", required=True, type=click.Path())
def generate(scripts, rounds, seed, balance, natural_fraction, include_start, out):
    """Simulate rounds and write their transition samples as JSONL."""
    names = [s.strip() for s in scripts.split(",") if s.strip()]
    stream = datagen.generate_corpus(
        names, rounds, seed,
        balance=_parse_balance(balance),
        natural_fraction=natural_fraction,
        include_start=include_start,
    )
    n = datagen.dump_jsonl(stream, out)
    click.echo(f"wrote {n} samples to {out}")


@main.command("coreset")
@click.option("--per-function", type=int, default=5)
@click.option("--seed", type=int, default=0)
@click.option("--out", required=True, type=click.Path())
def coreset_cmd(per_function, seed, out):
    """Emit oracle-verified samples for all 40 core functions."""
    samples = coreset.generate_core_set(per_function, seed)
    bad = [s for s in samples if not coreset.verify_core_sample(s)]
    if bad:
        click.echo(f"{len(bad)} samples failed verification", err=True)
        sys.exit(1)
    records = ({"function": s.function, "instruction": s.instruction,
                "input": s.input, "output": s.output} for s in samples)
    n = datagen.dump_jsonl(records, out)
    click.echo(f"wrote {n} core samples to {out}")


@main.command()
@click.option("--out-dir", required=True, type=click.Path())
@click.option("--seed", type=int, default=7)
@click.option("--warmup", type=int, default=1000)
@click.option("--standard", type=int, default=10_000)
@click.option("--diverse-rephrased", type=int, default=1000)
@click.option("--diverse-standard", type=int, default=1000)
def curriculum(out_dir, seed, warmup, standard, diverse_rephrased, diverse_standard):
    """Write the warmup/standard/diverse dataset files."""
    cfg = datagen.CurriculumConfig(
        seed=seed,
        warmup_records=warmup,
        standard_records=standard,
        diverse_rephrased_records=diverse_rephrased,
        diverse_standard_records=diverse_standard,
    )
    counts = datagen.emit_curriculum(cfg, out_dir)
    for name, n in counts.items():
        click.echo(f"{name}: {n} records")


@main.command()
@click.option("--data", required=True, type=click.Path(exists=True))
def stats(data):
    """Report corpus statistics as JSON."""
    records = datagen.load_jsonl(data)
    click.echo(json.dumps(datagen.corpus_stats(records), indent=2, sort_keys=True))


@main.command()
@click.option("--data", required=True, type=click.Path(exists=True))
def verify(data):
    """Re-run the engine over a corpus; non-zero exit on any inconsistency."""
    records = datagen.load_jsonl(data)
    failures = datagen.verify_corpus(records)
    if failures:
        for line in failures[:50]:
            click.echo(line, err=True)
        click.echo(f"{len(failures)} inconsistencies", err=True)
        sys.exit(1)
    click.echo(f"{len(records)} samples verified oracle-consistent")


@main.command()
@click.option("--gold", required=True, type=click.Path(exists=True))
@click.option("--pred", required=True, type=click.Path(exists=True))
@click.option("--report", "report_format", type=click.Choice(["table", "json"]), default="table")
@click.option("--free-running", is_flag=True, default=False)
@click.option("--dump-failures", type=int, default=0, help="Show line diffs for up to N wrong states.")
def score(gold, pred, report_format, free_running, dump_failures):
    """Score predicted next-states against a gold corpus."""
    gold_records = datagen.load_jsonl(gold)
    predictions = [rec["predicted"] for rec in datagen.load_jsonl(pred)]
    report = evalharness.score(gold_records, predictions, free_running)
    if report_format == "json":
        click.echo(json.dumps(report.as_dict(), indent=2, sort_keys=True))
    else:
        click.echo(report.table())
    if dump_failures:
        dump = evalharness.failure_dump(gold_records, predictions, dump_failures)
        if dump:
            click.echo("\n" + dump)


@main.command()
@click.option("--gold", required=True, type=click.Path(exists=True))
@click.option("--kinds", default=",".join(evalharness.MUTATION_KINDS))
@click.option("--seed", type=int, default=0)
@click.option("--defects-per-round", type=int, default=1)
@click.option("--out", required=True, type=click.Path())
@click.option("--manifest", "manifest_path", type=click.Path(), default=None)
def mutate(gold, kinds, seed, defects_per_round, out, manifest_path):
    """Inject labeled defects into oracle predictions (negative controls)."""
    gold_records = datagen.load_jsonl(gold)
    kind_list = [k.strip() for k in kinds.split(",") if k.strip()]
    preds, manifest = evalharness.make_mutation_suite(gold_records, kind_list, seed, defects_per_round)
    evalharness.dump_predictions(preds, out)
    if manifest_path:
        datagen.dump_jsonl(manifest, manifest_path)
    click.echo(f"wrote {len(preds)} predictions with {len(manifest)} defects")


@main.command("variants")
@click.argument("name", required=False)
def variants_cmd(name):
    """List bundled variants, or print one script."""
    if name:
        click.echo(variants.variant_text(name), nl=False)
    else:
        for n in variants.ALL_VARIANTS:
            click.echo(n)


@main.command()
@click.option("--host", default=None, help="Bind address (default CARDROOM_HOST or 127.0.0.1).")
@click.option("--port", type=int, default=None, help="Port (default CARDROOM_PORT or 8000).")
@click.option("--data-dir", default=None, help="Session log directory (default CARDROOM_DATA).")
def serve(host, port, data_dir):
    """Run the turn-based table service."""
    import os

    import uvicorn

    from .service import create_app

    host = host or os.environ.get("CARDROOM_HOST", "127.0.0.1")
    port = port or int(os.environ.get("CARDROOM_PORT", "8000"))
    app = create_app(data_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
