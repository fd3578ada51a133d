"""Operator command line: ingest, benchmark, registry init, serve."""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path

import click

from .corpus import load_corpus
from .errors import EmptyCorpus, ParseError
from .manager import REGISTRY_FILE, ExtractorRegistry
from .models.base import ALL_KINDS

EXIT_PARSE_FAILURE = 2
EXIT_MISSING_REGISTRY = 3


@click.group()
@click.option("--verbose", is_flag=True, help="Log progress to stderr.")
def main(verbose: bool):
    """Human-in-the-loop extraction of data subject rights."""
    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


@main.command()
@click.argument("directory", type=click.Path(path_type=Path))
def ingest(directory: Path):
    """Parse a directory of policy records and print corpus statistics."""
    try:
        corpus = load_corpus(directory)
    except (ParseError, EmptyCorpus) as exc:
        click.echo(f"ingest failed: {exc}", err=True)
        sys.exit(EXIT_PARSE_FAILURE)
    click.echo(f"{len(corpus)} documents, {corpus.total_blobs} blobs")
    for right in corpus.rights:
        click.echo(f"{right}: {corpus.positive_count(right)}")


@main.command()
@click.argument("directory", type=click.Path(exists=True, path_type=Path))
@click.option("--ks", default="5,10,25", help="Comma-separated cutoff ranks.")
@click.option("--reps", default=2, show_default=True, help="Training repetitions.")
@click.option("--kinds", default=",".join(ALL_KINDS), help="Model kinds to evaluate.")
@click.option("--seed", default=7, show_default=True, help="Split seed.")
@click.option("--out", type=click.Path(path_type=Path), default=Path("benchmark"),
              show_default=True, help="Output path prefix (.json/.txt appended).")
def benchmark(directory: Path, ks: str, reps: int, kinds: str, seed: int, out: Path):
    """Train and evaluate every model kind on every right."""
    from .evaluation import run_benchmark

    try:
        corpus = load_corpus(directory)
    except (ParseError, EmptyCorpus) as exc:
        click.echo(f"benchmark failed: {exc}", err=True)
        sys.exit(EXIT_PARSE_FAILURE)
    report = run_benchmark(
        corpus,
        kinds=[k.strip() for k in kinds.split(",") if k.strip()],
        ks=[int(k) for k in ks.split(",")],
        repetitions=reps,
        split_seed=seed,
    )
    out.parent.mkdir(parents=True, exist_ok=True)
    out.with_suffix(".json").write_text(report.to_json(), encoding="utf-8")
    out.with_suffix(".txt").write_text(report.to_table(), encoding="utf-8")
    click.echo(report.to_table())
    click.echo(f"wrote {out.with_suffix('.json')} and {out.with_suffix('.txt')}")
    if all(cell.failed for cell in report.cells.values()):
        sys.exit(1)


@main.command("init-registry")
@click.argument("directory", type=click.Path(exists=True, path_type=Path))
@click.option("--registry", type=click.Path(path_type=Path), default=Path("registry"),
              show_default=True)
@click.option("--kinds", default=",".join(ALL_KINDS))
@click.option("--seed", default=0, show_default=True)
def init_registry(directory: Path, registry: Path, kinds: str, seed: int):
    """Train one extractor per (right, kind) on the seed corpus."""
    try:
        corpus = load_corpus(directory)
    except (ParseError, EmptyCorpus) as exc:
        click.echo(f"init-registry failed: {exc}", err=True)
        sys.exit(EXIT_PARSE_FAILURE)
    reg = ExtractorRegistry(
        corpus,
        labels=list(corpus.rights),
        kinds=[k.strip() for k in kinds.split(",") if k.strip()],
        directory=registry,
    )
    reg.initialize(seed=seed)
    for entry in reg.status()["extractors"]:
        click.echo(f"{entry['label']}/{entry['kind']}: {entry['status']} v{entry['version']}")


@main.command()
@click.option("--data-dir", type=click.Path(path_type=Path), envvar="POLICYLOOP_DATA_DIR",
              default=Path("data"), show_default=True)
@click.option("--registry", type=click.Path(path_type=Path),
              envvar="POLICYLOOP_REGISTRY_DIR", default=Path("registry"), show_default=True)
@click.option("--port", type=int, envvar="POLICYLOOP_PORT", default=8000, show_default=True)
@click.option("--autotrain-n", type=int, envvar="POLICYLOOP_AUTOTRAIN_N", default=10,
              show_default=True, help="Retrain after this many new annotations per label.")
@click.option("--backend-url", envvar="POLICYLOOP_BACKEND_URL", default=None,
              help="Delegate training/prediction to a second instance at this URL.")
def serve(data_dir: Path, registry: Path, port: int, autotrain_n: int, backend_url):
    """Run the annotation HTTP service."""
    import uvicorn

    from .service import create_app

    if backend_url is None and not (registry / REGISTRY_FILE).exists():
        click.echo(
            f"no registry at {registry}; run `policyloop init-registry` first", err=True
        )
        sys.exit(EXIT_MISSING_REGISTRY)
    app = create_app(
        data_dir=data_dir,
        registry_dir=registry,
        autotrain_n=autotrain_n,
        backend_url=backend_url,
    )
    uvicorn.run(app, host="0.0.0.0", port=port)


@main.command("make-dataset")
@click.argument("directory", type=click.Path(path_type=Path))
@click.option("--seed", default=13, show_default=True)
def make_dataset_cmd(directory: Path, seed: int):
    """Generate the bundled synthetic policy corpus."""
    from .datagen import make_dataset

    make_dataset(directory, seed=seed)
    corpus = load_corpus(directory / "policies")
    click.echo(f"wrote {len(corpus)} documents, {corpus.total_blobs} blobs to {directory}")


if __name__ == "__main__":
    main()
