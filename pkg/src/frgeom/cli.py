"""Command-line front end (``frg``).

Examples::

    frg distance --density-a a.json --density-b b.json
    frg geodesic --density-a a.json --density-b b.json --t-grid 33 --out path.csv
    frg mean --density-a a.json --density-b b.json --alpha 0.5 --out mid.json
    frg log --density-a a.json --density-b b.json --out tau.json
    frg exp --density-a a.json --tangent tau.json --out b2.json
    frg verify                     # full seeded acceptance suite
    frg verify --density-a a.json --density-b b.json
    frg mollify --density-a rough.json --delta 0.1 --out smooth.json
    frg diameter-witness --mesh circle:64 --sharpness 6.9

Exit status is 1 for invalid or missing input (the message names the node or
flag) and 2 when a verification fails.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import click
import numpy as np

from frgeom import geodesics as geo, io, means, metric, smoothing, sphere, verify
from frgeom.errors import GeometryError

COMMANDS = ("distance", "geodesic", "mean", "exp", "log", "verify", "mollify",
            "diameter-witness")

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    density_a: Optional[str] = None
    density_b: Optional[str] = None
    tangent: Optional[str] = None
    mesh: Optional[str] = None
    t_grid: Optional[str] = None
    alpha: Optional[float] = None
    delta: Optional[float] = None
    sharpness: Optional[float] = None
    out: Optional[str] = None
    tolerance: float = 1.0
    seed: Optional[int] = None

    def require(self, *names):
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            flags = ", ".join("--" + n.replace("_", "-") for n in missing)
            raise click.UsageError(f"{self.command} needs {flags}")


def _json_object(pairs) -> str:
    body = ", ".join(f'"{k}": {v}' for k, v in pairs)
    return "{" + body + "}\n"


def parse_t_grid(spec: Optional[str], length: float) -> np.ndarray:
    """A point count (``33``) spanning ``[0, l]``, or an explicit list (``0,0.1,l``)."""
    if spec is None:
        spec = "33"
    spec = spec.strip()
    if "," not in spec and spec.isdigit():
        count = int(spec)
        if count < 2:
            raise GeometryError("t-grid needs at least 2 points")
        return np.linspace(0.0, length, count)
    out = []
    for tok in spec.split(","):
        tok = tok.strip()
        out.append(length if tok == "l" else float(tok))
    return np.array(out)


class _Runner:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.mesh = io.parse_mesh_spec(cfg.mesh) if cfg.mesh else None

    def density(self, path):
        return io.read_density(path, self.mesh)

    def emit(self, text: str):
        if self.cfg.out:
            Path(self.cfg.out).write_text(text)
        click.echo(text, nl=False)

    def save(self, obj):
        if self.cfg.out:
            io.write(obj, self.cfg.out)
        else:
            click.echo(io.dumps(obj), nl=False)

    def distance(self):
        self.cfg.require("density_a", "density_b")
        a, b = self.density(self.cfg.density_a), self.density(self.cfg.density_b)
        self.emit(_json_object([
            ("ell", io.fmt(metric.fisher_rao_distance(a, b))),
            ("hellinger_affinity", io.fmt(metric.hellinger_affinity(a, b))),
            ("hellinger_distance", io.fmt(metric.hellinger_distance(a, b))),
        ]))

    def geodesic(self):
        self.cfg.require("density_a", "density_b")
        a, b = self.density(self.cfg.density_a), self.density(self.cfg.density_b)
        l = metric.fisher_rao_distance(a, b)
        ts = parse_t_grid(self.cfg.t_grid, l)
        lines = [",".join(["t"] + [f"p{i}" for i in range(a.mesh.n)])]
        for t in ts:
            p = geo.geodesic_three_term(a, b, float(t))
            lines.append(",".join([io.fmt(t)] + [io.fmt(v) for v in p.values]))
        self.emit("\n".join(lines) + "\n")

    def mean(self):
        self.cfg.require("density_a", "density_b")
        a, b = self.density(self.cfg.density_a), self.density(self.cfg.density_b)
        if self.cfg.alpha is None:
            self.save(means.geometric_mean(a, b))
        else:
            self.save(means.alpha_power_mean(a, b, self.cfg.alpha))

    def exp(self):
        self.cfg.require("density_a", "tangent")
        a = self.density(self.cfg.density_a)
        self.save(geo.exp_map(a, io.read_tangent(self.cfg.tangent, a.mesh)))

    def log(self):
        self.cfg.require("density_a", "density_b")
        a, b = self.density(self.cfg.density_a), self.density(self.cfg.density_b)
        self.save(geo.log_map(a, b))

    def mollify(self):
        self.cfg.require("density_a", "delta")
        p = self.density(self.cfg.density_a)
        self.save(smoothing.mollify(p, smoothing.make_kernel(p.mesh, self.cfg.delta)))

    def diameter_witness(self):
        self.cfg.require("sharpness")
        mesh = self.mesh or io.parse_mesh_spec("circle:64")
        mu, mu1, ell = sphere.diameter_witness(mesh, self.cfg.sharpness)
        self.emit(_json_object([
            ("ell", io.fmt(ell)),
            ("pi_minus_ell", io.fmt(math.pi - ell)),
            ("min_value", io.fmt(min(mu.values.min(), mu1.values.min()))),
        ]))

    def verify(self):
        seed = self.cfg.seed if self.cfg.seed is not None else verify.seed_from_env()
        if self.cfg.density_a or self.cfg.density_b:
            self.cfg.require("density_a", "density_b")
            a, b = self.density(self.cfg.density_a), self.density(self.cfg.density_b)
            results = verify.check_pair(a, b, seed=seed, tol_scale=self.cfg.tolerance)
        else:
            results = verify.run_acceptance(seed=seed)
        text = "\n".join(r.line() for r in results) + "\n"
        failed = sum(not r.passed for r in results)
        text += f"{len(results) - failed}/{len(results)} checks passed\n"
        self.emit(text)
        return EXIT_VERIFY if failed else EXIT_OK


def run(cfg: RunConfig) -> int:
    """Execute one command; returns the process exit status."""
    if cfg.command not in COMMANDS:
        raise click.UsageError(f"unknown command {cfg.command!r}")
    runner = _Runner(cfg)
    try:
        status = getattr(runner, cfg.command.replace("-", "_"))()
    except click.UsageError as exc:
        click.echo(f"error: {exc.message}", err=True)
        return EXIT_INPUT
    except (GeometryError, OSError, KeyError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INPUT
    return EXIT_OK if status is None else status


def _options(*names):
    table = {
        "mesh": click.option("--mesh", help="Mesh as kind:n (e.g. circle:64) or a JSON file."),
        "density_a": click.option("--density-a", type=click.Path(dir_okay=False),
                                  help="First density (JSON or CSV)."),
        "density_b": click.option("--density-b", type=click.Path(dir_okay=False),
                                  help="Second density (JSON or CSV)."),
        "tangent": click.option("--tangent", type=click.Path(dir_okay=False),
                                help="Tangent vector file."),
        "t_grid": click.option("--t-grid", help="Point count over [0, l] or a comma list; "
                                                "'l' stands for the segment length."),
        "alpha": click.option("--alpha", type=float, help="Power-mean exponent (0 = geometric)."),
        "delta": click.option("--delta", type=float, help="Mollifier support radius (radians)."),
        "sharpness": click.option("--sharpness", type=float, help="Peak concentration."),
        "out": click.option("--out", type=click.Path(dir_okay=False), help="Output file."),
        "tolerance": click.option("--tolerance", type=float, default=1.0, show_default=True,
                                  help="Multiplier on per-input verification tolerances."),
    }

    def deco(f):
        for n in reversed(names):
            f = table[n](f)
        return f
    return deco


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Fisher-Rao geometry of positive densities on a quadrature mesh."""


def _command(name, *opts, doc=""):
    @_options(*opts)
    def cmd(**kwargs):
        sys.exit(run(RunConfig(command=name, **kwargs)))
    cmd.__doc__ = doc
    main.command(name)(cmd)


_command("distance", "mesh", "density_a", "density_b", "out",
         doc="Print ell, Hellinger affinity and Hellinger distance as JSON.")
_command("geodesic", "mesh", "density_a", "density_b", "t_grid", "out",
         doc="Sample the geodesic segment on a t-grid (CSV: t, node values).")
_command("mean", "mesh", "density_a", "density_b", "alpha", "out",
         doc="Normalized geometric mean, or alpha-power mean with --alpha.")
_command("exp", "mesh", "density_a", "tangent", "out",
         doc="Exponential map of --tangent at --density-a.")
_command("log", "mesh", "density_a", "density_b", "out",
         doc="Logarithm map: tangent at --density-a pointing to --density-b.")
_command("verify", "mesh", "density_a", "density_b", "tolerance", "out",
         doc="Run the property suite (seed from FRG_SEED, default 42).")
_command("mollify", "mesh", "density_a", "delta", "out",
         doc="Smooth a circle-mesh density with a bump kernel.")
_command("diameter-witness", "mesh", "sharpness", "out",
         doc="Distance between two sharply peaked densities (approaches pi).")


if __name__ == "__main__":
    main()
