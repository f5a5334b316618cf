"""Command line entry point: ``carnot <command> ...``.

Exit codes: 0 success, 2 invariant failure, 3 refutation (not isomorphic),
4 unclassified frontier.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import sys
import tempfile
from dataclasses import dataclass

import click

from . import catalog, classify, cohomology, liealg, morphism
from .exactlin import GF, GaussianField, RationalField

EXIT_OK, EXIT_INVARIANT, EXIT_REFUTED, EXIT_FRONTIER = 0, 2, 3, 4

log = logging.getLogger("carnot")


@dataclass(frozen=True)
class RunConfig:
    command: str
    mode: str = classify.REAL
    primes: tuple = ()
    max_len: int = 2
    emit: str = "json"
    output: str | None = None
    seed: int = classify.DEFAULT_SEED

    def __post_init__(self):
        if any(p % 2 == 0 or p < 3 for p in self.primes):
            raise click.BadParameter(f"primes must be odd: {list(self.primes)}")
        if len(set(self.primes)) != len(self.primes):
            raise click.BadParameter("primes must be distinct")
        if self.max_len < 2:
            raise click.BadParameter("max length must be at least 2")
        if self.emit not in ("json", "dot", "csv"):
            raise click.BadParameter(f"unknown emit format {self.emit!r}")


def _env_primes(mode: str) -> tuple:
    raw = os.environ.get("CARNOT_PRIMES", "").strip()
    if not raw:
        return classify.DEFAULT_PRIMES[mode]
    return tuple(int(x) for x in raw.replace(";", ",").split(",") if x.strip())


def _mode(value: str) -> str:
    return classify.REAL if value.startswith("real") else classify.COMPLEX


def _field(name: str):
    name = name.lower()
    if name in ("q", "qq"):
        return RationalField()
    if name in ("qi", "q(i)", "gaussian"):
        return GaussianField()
    if name.startswith("fp:"):
        return GF(int(name[3:]))
    raise click.BadParameter(f"unknown field {name!r} (use q, qi or fp:<p>)")


def _write(text: str, output: str | None) -> None:
    """Write atomically to ``output`` or to stdout."""
    if not output:
        click.echo(text, nl=not text.endswith("\n"))
        return
    d = os.path.dirname(os.path.abspath(output))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".carnot-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, output)


def _load(path: str) -> liealg.GradedLieAlgebra:
    with open(path) as fh:
        text = fh.read()
    try:
        return liealg.loads(text)
    except liealg.InvariantError as exc:
        click.echo(f"invalid algebra file {path}: {exc}", err=True)
        sys.exit(EXIT_INVARIANT)


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def main(verbose: bool) -> None:
    """Narrow Carnot algebras: catalog, cohomology, isomorphisms and the classification tree."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")


@main.command()
@click.argument("family")
@click.option("--n", "n", type=int, required=True, help="Length parameter.")
@click.option("--set", "S", type=int, multiple=True, help="Element of the set S (repeatable).")
@click.option("--sign", type=click.Choice(["+", "-"]), default=None)
@click.option("--s", "s", type=int, default=None, help="Quotient index 1, 2 or 3.")
@click.option("--field", "fname", default="q", show_default=True)
@click.option("-o", "--output", default=None)
def build(family, n, S, sign, s, fname, output):
    """Write the JSON document of one catalog algebra."""
    if family in ("n1pm", "n11") and sign is None:
        sign = "+"
    sp = catalog.FamilySpec(family, n, tuple(S), sign, s, _field(fname))
    try:
        g = catalog.build(sp)
    except catalog.SpecError as exc:
        click.echo(f"invalid spec: {exc}", err=True)
        sys.exit(EXIT_INVARIANT)
    _write(liealg.dumps(g) + "\n", output)


@main.command()
@click.argument("path")
def verify(path):
    """Antisymmetry, grading, Jacobi, Carnot and width checks."""
    g = _load(path)
    bad = liealg.check_jacobi(g)
    report = {"name": g.name, "dims": g.degree_dims, "antisymmetry": True,
              "grading": not any(v.kind == "grading" for v in bad),
              "jacobi": not bad, "carnot": liealg.is_carnot(g) if not bad else False,
              "width_3_2": liealg.width_ok_3_2(g)}
    for v in bad[:10]:
        click.echo(f"{v.kind} violated at {v.labels}: {v.detail}", err=True)
    if not report["carnot"] and not bad:
        click.echo(f"not Carnot: natural grading {liealg.natural_grading_dims(g)} "
                   f"differs from {g.degree_dims}", err=True)
    click.echo(json.dumps(report, sort_keys=True))
    ok = report["jacobi"] and report["carnot"] and report["width_3_2"]
    sys.exit(EXIT_OK if ok else EXIT_INVARIANT)


@main.command("cohomology")
@click.argument("path")
@click.option("--grading", "k", type=int, default=None)
@click.option("--profile", is_flag=True)
def cohomology_cmd(path, k, profile):
    """H^2 in one grading (with representatives) or the full profile."""
    g = _load(path)
    if profile or k is None:
        prof = cohomology.h2_profile(g)
        click.echo(json.dumps({"name": g.name, "profile": {str(a): b for a, b in prof.items()}},
                              sort_keys=True))
        return
    if k < 2 or k > 2 * g.length + 1:
        raise click.BadParameter(f"grading {k} outside 2..{2 * g.length + 1}")
    H = cohomology.h2_graded(g, k)
    doc = {"name": g.name, "grading": k, "h_dim": H.dim,
           "representatives": [cohomology.cochain_to_json(w, g) for w in H.representatives]}
    click.echo(json.dumps(doc, sort_keys=True))


def _identify(g, mode):
    """Catalog spec for g that the playbook knows, preferring g's own name."""
    match = classify.match_to_catalog(g)
    if match is None:
        return None
    cands = [match.spec] + [sp for sp in catalog.all_instances(g.length)
                            if catalog.family_name(sp) in match.others]
    cands.sort(key=lambda sp: catalog.family_name(sp) != g.name)
    for sp in cands:
        try:
            classify.playbook(sp, mode)
        except classify.FrontierError:
            continue
        return sp
    return None


@main.command()
@click.argument("path")
@click.option("--mode", type=click.Choice(["real", "complex"]), default="real")
@click.option("--seed", type=int, default=classify.DEFAULT_SEED)
@click.option("-o", "--output", default=None)
def extend(path, mode, seed, output):
    """Certified Carnot extensions of a catalog algebra."""
    g = _load(path)
    m = _mode(mode)
    cfg = RunConfig("extend", m, _env_primes(m), max(2, g.length), seed=seed)
    sp = _identify(g, m)
    if sp is None:
        H = cohomology.h2_graded(g, g.length + 1)
        click.echo(f"unclassified frontier: {g.name} matches no catalog family "
                   f"(dim H^2_{g.length + 1} = {H.dim})", err=True)
        sys.exit(EXIT_FRONTIER)
    sp = catalog.FamilySpec(sp.family, sp.n, sp.S, sp.sign, sp.s, classify.mode_field(m))
    log.info("seed %d, primes %s", cfg.seed, list(cfg.primes))
    cert = classify.carnot_extensions(catalog.build(sp), m, spec=sp, primes=cfg.primes,
                                      seed=cfg.seed)
    _write(json.dumps(cert.to_json(), sort_keys=True, indent=1) + "\n", output)
    sys.exit(EXIT_OK if cert.complete else EXIT_FRONTIER)


@main.command()
@click.option("--max-len", "max_len", type=int, required=True)
@click.option("--mode", type=click.Choice(["real", "complex"]), default="real")
@click.option("--emit", type=click.Choice(["dot", "json"]), default="json")
@click.option("--seed", type=int, default=classify.DEFAULT_SEED)
@click.option("-o", "--output", default=None)
def tree(max_len, mode, emit, seed, output):
    """Classification tree up to the given length."""
    m = _mode(mode)
    cfg = RunConfig("tree", m, _env_primes(m), max_len, emit, output, seed)
    log.info("seed %d, primes %s", cfg.seed, list(cfg.primes))
    t = classify.build_tree(cfg.max_len, m, primes=cfg.primes, seed=cfg.seed)
    text = t.to_dot() if emit == "dot" else json.dumps(t.to_json(), sort_keys=True, indent=1) + "\n"
    _write(text, output)
    for name in t.frontier:
        cert = t.nodes[name].certificate
        click.echo(f"frontier: {name}: {len(cert.uncovered)} uncovered orbit(s) mod "
                   f"{cert.probe_prime}; {'; '.join(cert.problems)}", err=True)
    sys.exit(EXIT_FRONTIER if t.frontier else EXIT_OK)


@main.command()
@click.argument("a")
@click.argument("b")
@click.option("--strategy", default="fp:7", show_default=True,
              help="fp:<p> for an exhaustive search, witness:<file> to check a map.")
def iso(a, b, strategy):
    """Decide or check a graded isomorphism between two algebra files."""
    g, h = _load(a), _load(b)
    if strategy.startswith("fp:"):
        p = int(strategy[3:])
        RunConfig("iso", primes=(p,))
        cert = morphism.iso_search_fp(g, h, p)
        click.echo(json.dumps(morphism.certificate_to_json(cert), sort_keys=True))
        sys.exit(EXIT_OK if cert.is_witness else EXIT_REFUTED)
    if strategy.startswith("witness:"):
        with open(strategy[len("witness:"):]) as fh:
            doc = json.load(fh)
        phi = morphism.witness_from_json(doc, g, h)
        ok = morphism.verify_graded_iso(phi)
        click.echo(json.dumps({"kind": "witness", "verified": ok}))
        sys.exit(EXIT_OK if ok else EXIT_REFUTED)
    raise click.BadParameter(f"unknown strategy {strategy!r}")


@main.command()
@click.argument("path")
@click.option("--upto", type=int, default=None)
def growth(path, upto):
    """CSV of n, F(n) = dim g/g^{n+1} and the largest component dimension so far."""
    g = _load(path)
    upto = upto or g.length
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "F", "width"])
    dims = g.degree_dims
    total = width = 0
    for n in range(1, upto + 1):
        if n <= len(dims):
            total += dims[n - 1]
            width = max(width, dims[n - 1])
        w.writerow([n, total, width])
    click.echo(buf.getvalue(), nl=False)


@main.command("catalog")
@click.option("--max-n", "max_n", type=int, default=8, show_default=True)
def catalog_cmd(max_n):
    """List catalog instances up to a length with their dimension vectors."""
    for sp in catalog.all_instances(max_n):
        g = catalog.build(sp)
        click.echo(f"{catalog.family_name(sp)}\t{g.dim}\t{','.join(map(str, g.degree_dims))}")


if __name__ == "__main__":   # pragma: no cover
    main()
