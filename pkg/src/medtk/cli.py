"""Command-line front end.

Runs in process by default; with --remote it talks to a running service
instead, sending the same payloads the service endpoints accept.  Exit
codes: 0 all checks pass, 1 a check failed, 2 resource cap or
inconclusive result or bad input.
"""

import json
import sys

import click

from .graphs import FiniteGraph, CapExceeded
from .median import certify_median, MedianFailure
from .wallspace import Wallspace, cubulate
from .groups import Presentation, fwn_virtually_abelian, LimitExceeded
from .scenarios import run_scenario, SCENARIOS


@click.group()
@click.option("--remote", default=None, help="Base URL of a running service; default runs in process.")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.pass_context
def main(ctx, remote, fmt):
    ctx.ensure_object(dict)
    ctx.obj["remote"] = remote
    ctx.obj["format"] = fmt


def _post(ctx, path, payload):
    import httpx

    resp = httpx.post(ctx.obj["remote"].rstrip("/") + path, json=payload, timeout=600)
    if resp.status_code >= 400:
        detail = resp.json().get("detail", {})
        click.echo(f"error: {detail}", err=True)
        sys.exit(2)
    return resp.json()


def _emit_scenario(ctx, name, params):
    if ctx.obj["remote"]:
        data = _post(ctx, f"/scenario/{name}", {"params": params})
        click.echo(json.dumps(data, sort_keys=True, indent=2))
        sys.exit({"pass": 0, "fail": 1, "inconclusive": 2}[data["overall"]])
    try:
        rep = run_scenario(name, params)
    except (CapExceeded, LimitExceeded) as e:
        click.echo(f"resource cap: {e}", err=True)
        sys.exit(2)
    if ctx.obj["format"] == "json":
        click.echo(rep.dump())
    else:
        click.echo(rep.text())
    sys.exit(rep.exit_code)


def _scenario_command(name, options):
    @click.pass_context
    def cmd(ctx, **kwargs):
        params = {k: v for k, v in kwargs.items() if v is not None}
        _emit_scenario(ctx, name, params)

    cmd.__name__ = name.replace("-", "_")
    for opt in reversed(options):
        cmd = opt(cmd)
    return main.command(name)(cmd)


_scenario_command("duality", [
    click.option("--corpus", type=click.Choice(["small", "full"]), default="small"),
    click.option("--seed", type=int, default=0),
])
_scenario_command("cubulable-fw", [
    click.option("--n", type=int, default=2),
    click.option("--q", type=int, default=5),
])
_scenario_command("gamma-rs", [
    click.option("--r", type=int, default=3),
    click.option("--s", type=int, default=2),
])
_scenario_command("graph-product", [
    click.option("--qa", type=int, default=2),
    click.option("--qb", type=int, default=2),
])
_scenario_command("affine-coxeter", [
    click.option("--n", type=int, default=2),
    click.option("--limit", type=int, default=10000),
])
_scenario_command("quasiline-dinfty", [
    click.option("--length", type=int, default=4),
])
_scenario_command("cube-fix", [
    click.option("--k", type=int, default=3),
])


@main.command("check-median")
@click.argument("graph_file", type=click.Path(exists=True))
@click.pass_context
def check_median(ctx, graph_file):
    """Certify that a graph (JSON file) is median."""
    data = json.load(open(graph_file))
    if ctx.obj["remote"]:
        out = _post(ctx, "/check-median", data)
    else:
        try:
            g = FiniteGraph(data["n"], [tuple(e) for e in data["edges"]])
            result = certify_median(g)
        except CapExceeded as e:
            click.echo(f"resource cap: {e}", err=True)
            sys.exit(2)
        if isinstance(result, MedianFailure):
            out = {
                "median": False,
                "reason": result.reason,
                "triple": list(result.triple) if result.triple else None,
                "median_count": result.median_count,
            }
        else:
            out = {"median": True, "hyperplanes": len(result.hyperplanes)}
    click.echo(json.dumps(out, sort_keys=True))
    sys.exit(0 if out["median"] else 1)


@main.command("cubulate")
@click.argument("walls_file", type=click.Path(exists=True))
@click.pass_context
def cubulate_cmd(ctx, walls_file):
    """Cubulate a wallspace (JSON file) into a median graph."""
    data = json.load(open(walls_file))
    if ctx.obj["remote"]:
        out = _post(ctx, "/cubulate", data)
    else:
        try:
            ws = Wallspace(data["points"], tuple(frozenset(w) for w in data["walls"]))
            mg, point_map = cubulate(ws)
        except (CapExceeded, ValueError) as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(2)
        out = {
            "graph": mg.graph.to_json(),
            "point_map": {str(p): v for p, v in sorted(point_map.items())},
            "hyperplanes": len(mg.hyperplanes),
        }
    click.echo(json.dumps(out, sort_keys=True))
    sys.exit(0)


@main.command("fw-abelian")
@click.option("--pres", "pres_file", type=click.Path(exists=True), required=True)
@click.option("--n", type=int, required=True)
@click.pass_context
def fw_abelian(ctx, pres_file, n):
    """Fixed-point verdict for a virtually abelian group presentation."""
    data = json.load(open(pres_file))
    if ctx.obj["remote"]:
        out = _post(ctx, "/fw-abelian", {"presentation": data, "n": n})
    else:
        try:
            pres = Presentation(data["generators"], tuple(tuple(r) for r in data["relators"]))
            verdict = fwn_virtually_abelian(pres, n)
        except LimitExceeded as e:
            click.echo(f"resource cap: {e}", err=True)
            sys.exit(2)
        out = {"holds": verdict.holds, "n": verdict.n, "note": verdict.note}
        if not verdict.holds:
            w = verdict.witness
            out["subgroup_index"] = verdict.subgroup_index
            out["witness"] = {
                "sigma": list(w.sigma),
                "lam": [str(x) for x in w.lam],
                "word": list(w.word),
                "value": str(w.value),
            }
    click.echo(json.dumps(out, sort_keys=True))
    sys.exit(0 if out["holds"] else 1)


@main.command("serve")
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("medtk.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
