"""Command-line client for the histories service.

By default commands run against an in-process instance of the service; pass
--url to talk to a remote one instead.

Exit codes:
  0  success (a value, a consistent certificate, or a sample report)
  2  usage or parse error (unknown scenario/family, bad expression or file)
  3  the family failed certification
  4  the query is meaningless (incompatible event or framework combination)
  5  the conditional is undefined (conditioning event has probability zero)
"""

from __future__ import annotations

import json
import os
import sys
import warnings
from typing import Optional

import click
import httpx

EXIT_PARSE = 2
EXIT_INCONSISTENT = 3
EXIT_MEANINGLESS = 4
EXIT_UNDEFINED = 5


def _client(url: Optional[str]) -> httpx.Client:
    if url:
        return httpx.Client(base_url=url, timeout=60.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

        from .service.app import app

        return TestClient(app)


def _post(client: httpx.Client, path: str, payload: dict) -> dict:
    reply = client.post(path, json=payload)
    if reply.status_code >= 400:
        try:
            detail = reply.json().get("detail", reply.text)
        except ValueError:
            detail = reply.text
        click.echo(f"error: {detail}", err=True)
        sys.exit(EXIT_PARSE)
    return reply.json()


def _scenario_payload(scenario: str) -> dict:
    """SCENARIO is a built-in name or a path to a scenario document."""
    if os.path.isfile(scenario):
        with open(scenario, "r", encoding="utf-8") as fh:
            return {"document": fh.read()}
    return {"scenario": scenario}


def _emit(data: dict, fmt: str, text_lines) -> None:
    if fmt == "machine":
        click.echo(json.dumps(data, indent=2, sort_keys=True))
    else:
        for line in text_lines(data):
            click.echo(line)


@click.group()
@click.option("--url", default=None, help="Base URL of a running service; "
              "default runs the service in-process.")
@click.pass_context
def main(ctx, url):
    """Probabilistic inference over consistent families of quantum histories."""
    ctx.obj = url


@main.command("list-builtins")
@click.option("--format", "fmt", type=click.Choice(["text", "machine"]), default="text")
@click.pass_obj
def list_builtins(url, fmt):
    """List built-in scenarios with their families."""
    with _client(url) as client:
        reply = client.get("/scenarios")
        if reply.status_code >= 400:
            click.echo(f"error: {reply.text}", err=True)
            sys.exit(EXIT_PARSE)
        data = reply.json()
    if fmt == "machine":
        click.echo(json.dumps(data, indent=2, sort_keys=True))
        return
    for sc in data:
        click.echo(f"{sc['name']}  (dim {sc['dim']}, times {', '.join(sc['times'])})")
        click.echo(f"  {sc['description']}")
        click.echo(f"  families: {', '.join(sc['families'])}")


@main.command()
@click.argument("scenario")
@click.argument("family")
@click.option("--consistency", type=click.Choice(["medium", "strong"]), default="medium")
@click.option("--tolerance", type=float, default=1e-9)
@click.option("--format", "fmt", type=click.Choice(["text", "machine"]), default="text")
@click.pass_obj
def certify(url, scenario, family, consistency, tolerance, fmt):
    """Certify FAMILY against the consistency condition.

    SCENARIO is a built-in name or the path of a scenario document.
    """
    payload = _scenario_payload(scenario)
    payload.update({"family": family, "condition": consistency, "tolerance": tolerance})
    with _client(url) as client:
        data = _post(client, "/certify", payload)

    def lines(d):
        yield f"family {d.get('family') or family}: {d['verdict']} ({d['condition']})"
        if d["verdict"] != "consistent":
            yield f"  reason: {d.get('reason')}: {d.get('detail')}"
            return
        for label, w, z in zip(d["histories"], d["weights"], d["zero_weight"]):
            tag = "  [zero weight]" if z else ""
            yield f"  {w:.12f}  {label}{tag}"
        yield (f"  residuals: re {d['max_re_residual']:.3e}, "
               f"abs {d['max_abs_residual']:.3e}, "
               f"completeness {d['completeness_residual']:.3e}")

    _emit(data, fmt, lines)
    if data["verdict"] != "consistent":
        sys.exit(EXIT_INCONSISTENT)


@main.command()
@click.argument("scenario")
@click.argument("family")
@click.argument("target")
@click.option("--data", default=None, help="Conditioning event expression.")
@click.option("--consistency", type=click.Choice(["medium", "strong"]), default=None)
@click.option("--format", "fmt", type=click.Choice(["text", "machine"]), default="text")
@click.pass_obj
def query(url, scenario, family, target, data, consistency, fmt):
    """Probability of TARGET (optionally given --data) within FAMILY.

    SCENARIO is a built-in name or the path of a scenario document.  Events
    are expressions like "Cstar@t2" or "c@t1 AND NOT Dstar@t2".
    """
    payload = _scenario_payload(scenario)
    payload.update({"family": family, "target": target,
                    "data": data, "condition": consistency})
    with _client(url) as client:
        result = _post(client, "/query", payload)

    def lines(d):
        if d["kind"] == "value":
            yield f"Pr = {d['value']:.12f}  (family {d.get('framework') or family})"
        elif d["kind"] == "meaningless":
            yield f"meaningless [{d.get('reason')}]: {d.get('explanation')}"
        else:
            yield f"undefined conditional: {d.get('explanation')}"

    _emit(result, fmt, lines)
    if result["kind"] == "meaningless":
        sys.exit(EXIT_MEANINGLESS)
    if result["kind"] == "undefined-conditional":
        sys.exit(EXIT_UNDEFINED)


@main.command()
@click.argument("scenario")
@click.argument("family")
@click.option("--runs", "-n", type=int, default=100_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "machine"]), default="text")
@click.pass_obj
def sample(url, scenario, family, runs, seed, fmt):
    """Simulate FAMILY: draw elementary histories from their weights."""
    payload = _scenario_payload(scenario)
    payload.update({"family": family, "n_runs": runs, "seed": seed})
    with _client(url) as client:
        data = _post(client, "/sample", payload)

    def lines(d):
        yield (f"family {d['family']}: {d['n_runs']} runs, seed {d['seed']} "
               f"({d['prng']})")
        for label, c, freq, p in zip(d["labels"], d["counts"],
                                     d["frequencies"], d["analytic"]):
            yield f"  {c:>8}  {freq:.6f}  (analytic {p:.6f})  {label}"
        yield f"  max |freq - analytic| = {d['max_abs_dev']:.6f}"

    _emit(data, fmt, lines)


@main.command("export-scenario")
@click.argument("scenario")
@click.option("--output", "-o", type=click.Path(), default=None,
              help="Write the document here instead of stdout.")
@click.pass_obj
def export_scenario_cmd(url, scenario, output):
    """Emit a scenario as a self-contained document."""
    payload = _scenario_payload(scenario)
    with _client(url) as client:
        data = _post(client, "/export", payload)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(data["document"])
        click.echo(f"wrote {data['name']} to {output}")
    else:
        click.echo(data["document"], nl=False)


if __name__ == "__main__":
    main()
