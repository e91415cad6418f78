"""Command-line front end for the snapshot pipeline.

Subcommands: ``build`` (expression + static network -> age snapshots),
``global``, ``fit``, ``graphlets``, ``gdd``, ``centrality``, ``predict``,
``control``, ``validate``, and ``fixture`` (bundled synthetic benchmark).

Every value settable by flag can also come from a ``key=value`` config file
(``--config``); precedence is flag > config > built-in default.  Outputs are
staged and renamed into place so interrupted runs leave no partial files,
and every output is accompanied by a ``manifest.json`` recording input
hashes, the effective configuration, and the seed -- reruns with identical
inputs are byte-identical.

Exit codes: 0 success, 1 usage, 2 input data problem, 3 internal error.
"""

from __future__ import annotations

import argparse
import contextlib
import hashlib
import json
import math
import os
import shutil
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .centrality import KINDS
from .enrichment import (
    GeneSet,
    complement,
    gene_overlap_test,
    load_annotations,
    load_gene_set,
    term_enrichment,
    term_overlap_test,
)
from .errors import InputError, ValidationError
from .expression import activity, load_expression
from .fixture import DEFAULT_SEED, make_fixture, write_fixture
from .globalstats import series_report
from .graph import load_edge_list
from .graphlets import N_ORBITS, count_graphlets, gdd_agreement
from .models import FAMILIES, evaluate_fit
from .predictor import (
    PredictParams,
    TrajectorySet,
    compute_trajectories,
    predict,
    randomized_control,
    score_and_rank,
)
from .snapshots import build_series, load_series_dir, pairwise_overlap, write_series_dir

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        raise UsageError(f"{self.prog}: {message}")


# --- formatting ---------------------------------------------------------


def _fmt(x) -> str:
    if x is None:
        return "NA"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        if math.isnan(x):
            return "NA"
        return format(x, ".10g")
    return str(x)


def _tsv(rows: list[list], header: list[str]) -> str:
    lines = ["\t".join(header)]
    lines.extend("\t".join(_fmt(c) for c in row) for row in rows)
    return "\n".join(lines) + "\n"


# --- config file and option merging --------------------------------------


def _cast_bool(token: str) -> bool:
    t = token.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValidationError(f"expected a boolean, got {token!r}")


def load_config(path: str | Path) -> dict[str, str]:
    cfg: dict[str, str] = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValidationError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            cfg[key.strip().replace("-", "_")] = value.strip()
    return cfg


@dataclass
class _Opt:
    dest: str
    default: object
    cast: Callable


class _Options:
    """Registers flags with a None sentinel so config values can fill in."""

    def __init__(self, parser: argparse.ArgumentParser):
        self.parser = parser
        self.opts: list[_Opt] = []

    def add(self, flag: str, default=None, cast: Callable = str, required=False, **kw):
        dest = flag.lstrip("-").replace("-", "_")
        self.opts.append(_Opt(dest, default, cast))
        if cast is _cast_bool:
            self.parser.add_argument(flag, dest=dest, action="store_const", const=True,
                                     default=None, **kw)
        else:
            self.parser.add_argument(flag, dest=dest, type=cast, default=None, **kw)
        if required:
            kwhelp = kw.get("help", "")
            self.parser._required_dests = getattr(self.parser, "_required_dests", [])
            self.parser._required_dests.append((dest, flag, kwhelp))

    def resolve(self, args: argparse.Namespace, cfg: dict[str, str]) -> dict:
        eff: dict = {}
        for opt in self.opts:
            flag_val = getattr(args, opt.dest)
            if flag_val is not None:
                eff[opt.dest] = flag_val
            elif opt.dest in cfg:
                eff[opt.dest] = opt.cast(cfg[opt.dest])
            else:
                eff[opt.dest] = opt.default
        for dest, flag, _ in getattr(self.parser, "_required_dests", []):
            if eff.get(dest) is None:
                raise UsageError(f"{self.parser.prog}: {flag} is required "
                                 f"(flag or config key {dest!r})")
        return eff


def _csv_list(token: str) -> tuple[str, ...]:
    return tuple(t.strip() for t in token.split(",") if t.strip())


def _parse_kinds(token) -> tuple[str, ...]:
    if isinstance(token, tuple):
        return token
    if token == "all":
        return KINDS
    kinds = tuple(t.lower() for t in _csv_list(token))
    unknown = [k for k in kinds if k not in KINDS]
    if unknown:
        raise ValidationError(f"unknown centrality kinds {unknown}; choose from {list(KINDS)}")
    return kinds


def _parse_families(token) -> tuple[str, ...]:
    if isinstance(token, tuple):
        return token
    fams = tuple(t.upper() for t in _csv_list(token))
    unknown = [f for f in fams if f not in FAMILIES]
    if unknown:
        raise ValidationError(f"unknown model families {unknown}; choose from {list(FAMILIES)}")
    return fams


# --- atomic output and manifests -----------------------------------------


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _hash_input(path: Path) -> dict[str, str]:
    """Hashes for one input file, or every data file under an input directory."""
    if path.is_dir():
        out = {}
        for f in sorted(path.rglob("*")):
            if f.is_file():
                out[str(f.relative_to(path.parent))] = _sha256(f)
        return out
    return {str(path): _sha256(path)}


def _manifest_text(command: str, inputs: list[Path], config: dict, outputs: dict[str, str]) -> str:
    in_hashes: dict[str, str] = {}
    for p in inputs:
        in_hashes.update(_hash_input(Path(p)))
    cfg = {k: (str(v) if isinstance(v, Path) else v) for k, v in config.items()}
    for k, v in list(cfg.items()):
        if isinstance(v, tuple):
            cfg[k] = list(v)
    doc = {
        "command": command,
        "version": __version__,
        "inputs": in_hashes,
        "config": cfg,
        "outputs": outputs,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(tmp)
        raise


def _emit_files(command: str, inputs: list[Path], config: dict,
                files: dict[Path, str], manifest_path: Path) -> None:
    """Write a set of fully rendered text files plus their manifest.

    All content is rendered before the first write, so a failure during
    computation leaves nothing behind.
    """
    hashes = {
        p.name: hashlib.sha256(text.encode()).hexdigest() for p, text in files.items()
    }
    for p, text in files.items():
        _atomic_write_text(p, text)
    _atomic_write_text(manifest_path, _manifest_text(command, inputs, config, hashes))


@contextlib.contextmanager
def _staged_dir(target: Path):
    """Yields a staging directory renamed onto ``target`` only on success."""
    target.parent.mkdir(parents=True, exist_ok=True)
    stage = target.parent / f".{target.name}.staging"
    if stage.exists():
        shutil.rmtree(stage)
    stage.mkdir()
    try:
        yield stage
    except BaseException:
        shutil.rmtree(stage, ignore_errors=True)
        raise
    if target.exists():
        shutil.rmtree(target)
    stage.replace(target)


def _dir_manifest(stage: Path, command: str, inputs: list[Path], config: dict) -> None:
    hashes = {
        str(f.relative_to(stage)): _sha256(f)
        for f in sorted(stage.rglob("*"))
        if f.is_file()
    }
    _atomic_write_text(stage / "manifest.json",
                       _manifest_text(command, inputs, config, hashes))


# --- subcommand handlers --------------------------------------------------


def _cmd_build(eff: dict) -> int:
    static = load_edge_list(eff["network"])
    expr = load_expression(eff["expression"])
    profile = activity(expr, threshold=eff["detection_threshold"])
    series = build_series(static, profile)
    out = Path(eff["out"])
    with _staged_dir(out) as stage:
        write_series_dir(series, stage)
        _dir_manifest(stage, "build", [Path(eff["network"]), Path(eff["expression"])], eff)
    print(f"built {series.n_ages} age snapshots over a universe of "
          f"{len(series.universe)} genes -> {out}")
    return EXIT_OK


def _cmd_global(eff: dict) -> int:
    series = load_series_dir(eff["series"])
    stats = series_report(series, exclude_low_degree=eff["exclude_low_degree"])
    overlaps = pairwise_overlap(series)
    out = Path(eff["out"])

    header = ["age", "n_nodes", "n_edges", "avg_clustering", "avg_path_length",
              "max_eccentricity"] + [f"g{i}" for i in range(30)]
    rows = [
        [s.age, s.n_nodes, s.n_edges, s.avg_clustering, s.avg_path_length,
         s.max_eccentricity] + [int(c) for c in s.graphlet_freq]
        for s in stats
    ]

    def matrix_tsv(m: np.ndarray) -> str:
        head = ["age"] + list(series.age_labels)
        mrows = [[series.age_labels[i]] + [float(x) for x in m[i]]
                 for i in range(len(series.age_labels))]
        return _tsv(mrows, head)

    files = {
        out: _tsv(rows, header),
        out.with_name(out.stem + "_node_overlap.tsv"): matrix_tsv(overlaps.nodes),
        out.with_name(out.stem + "_edge_overlap.tsv"): matrix_tsv(overlaps.edges),
    }
    _emit_files("global", [Path(eff["series"])], eff, files,
                out.with_name(out.stem + ".manifest.json"))
    print(f"wrote global statistics for {len(stats)} snapshots -> {out}")
    return EXIT_OK


def _cmd_fit(eff: dict) -> int:
    net = load_edge_list(eff["network"])
    families = _parse_families(eff["families"])
    report = evaluate_fit(
        net,
        families=families,
        instances_per_family=eff["instances"],
        mean_mode=eff["mean_mode"],
        seed=eff["seed"],
    )
    rows = []
    for fam in report.families:
        if fam.failed:
            rows.append([fam.family, None, None, None, None, False, "failed", fam.error])
            continue
        for i, s in enumerate(fam.scores):
            rows.append([fam.family, i, s, fam.mean, fam.sd,
                         fam.family == report.best_family, "ok", ""])
    out = Path(eff["out"])
    files = {out: _tsv(rows, ["family", "instance", "score", "family_mean",
                              "family_sd", "is_best_family", "status", "detail"])}
    _emit_files("fit", [Path(eff["network"])], eff, files,
                out.with_name(out.stem + ".manifest.json"))
    print(f"best-fitting family: {report.best_family} -> {out}")
    return EXIT_OK


def _cmd_graphlets(eff: dict) -> int:
    net = load_edge_list(eff["network"])
    freq, orbits = count_graphlets(net)
    rows = [[node] + [int(c) for c in orbits.counts[i]]
            for i, node in enumerate(orbits.nodes)]
    out = Path(eff["out"])
    files = {out: _tsv(rows, ["node"] + [f"o{i}" for i in range(N_ORBITS)])}
    if eff["freq_out"] is not None:
        fout = Path(eff["freq_out"])
        files[fout] = _tsv([[f"g{i}", int(c)] for i, c in enumerate(freq)],
                           ["graphlet", "count"])
    _emit_files("graphlets", [Path(eff["network"])], eff, files,
                out.with_name(out.stem + ".manifest.json"))
    print(f"counted graphlets on {net.n_nodes} nodes / {net.n_edges} edges -> {out}")
    return EXIT_OK


def _cmd_gdd(eff: dict) -> int:
    net_a = load_edge_list(eff["a"])
    net_b = load_edge_list(eff["b"])
    score = gdd_agreement(net_a, net_b, mean=eff["mean_mode"])
    if eff["out"] is not None:
        out = Path(eff["out"])
        files = {out: _tsv([[str(eff["a"]), str(eff["b"]), eff["mean_mode"], score]],
                           ["a", "b", "mean_mode", "agreement"])}
        _emit_files("gdd", [Path(eff["a"]), Path(eff["b"])], eff, files,
                    out.with_name(out.stem + ".manifest.json"))
    print(_fmt(score))
    return EXIT_OK


def _cmd_centrality(eff: dict) -> int:
    series = load_series_dir(eff["series"])
    kinds = _parse_kinds(eff["kinds"])
    trajs = compute_trajectories(series, kinds)
    out = Path(eff["out"])
    with _staged_dir(out) as stage:
        for k, kind in enumerate(kinds):
            rows = [[gene] + [float(x) for x in trajs.values[k, gi]]
                    for gi, gene in enumerate(trajs.genes)]
            text = _tsv(rows, ["gene"] + list(series.age_labels))
            (stage / f"{kind}.tsv").write_text(text)
        _dir_manifest(stage, "centrality", [Path(eff["series"])], eff)
    print(f"wrote {len(kinds)} centrality tables over {len(trajs.genes)} genes -> {out}")
    return EXIT_OK


def _load_centrality_dir(cdir: Path, kinds: tuple[str, ...], series) -> TrajectorySet:
    genes = tuple(sorted(series.universe))
    gi = {g: i for i, g in enumerate(genes)}
    n_ages = len(series.ages)
    values = np.zeros((len(kinds), len(genes), n_ages))
    for k, kind in enumerate(kinds):
        path = cdir / f"{kind}.tsv"
        if not path.exists():
            raise ValidationError(f"missing centrality table {path}")
        with open(path) as fh:
            header = fh.readline().rstrip("\n").split("\t")
            if len(header) != n_ages + 1:
                raise ValidationError(
                    f"{path}: expected {n_ages} age columns, found {len(header) - 1}"
                )
            seen = set()
            for lineno, line in enumerate(fh, start=2):
                fields = line.rstrip("\n").split("\t")
                gene = fields[0]
                if gene not in gi:
                    raise ValidationError(f"{path}:{lineno}: gene {gene!r} not in universe")
                if len(fields) != n_ages + 1:
                    raise ValidationError(f"{path}:{lineno}: wrong column count")
                values[k, gi[gene]] = [float(x) for x in fields[1:]]
                seen.add(gene)
        if len(seen) != len(genes):
            raise ValidationError(f"{path}: covers {len(seen)} of {len(genes)} universe genes")
    n_active = np.array([int(series.membership(g).sum()) for g in genes], dtype=np.int64)
    return TrajectorySet(genes=genes, ages=tuple(series.ages), kinds=kinds,
                         values=values, n_active=n_active)


def _prediction_rows(records, kinds) -> tuple[list[list], list[str]]:
    header = ["rank", "gene", "score", "direction", "n_supporting", "n_active",
              "predicted"]
    for kind in kinds:
        header += [f"r_{kind}", f"p_{kind}"]
    rows = []
    for r in records:
        row = [r.rank, r.gene, r.score, r.direction, len(r.supporting),
               r.n_active, r.predicted]
        for kind in kinds:
            kr = r.per_kind[kind]
            row += [kr.r, kr.p]
        rows.append(row)
    return rows, header


def _cmd_predict(eff: dict) -> int:
    series = load_series_dir(eff["series"])
    kinds = _parse_kinds(eff["kinds"])
    if eff["centralities"] is not None:
        trajs = _load_centrality_dir(Path(eff["centralities"]), kinds, series)
    else:
        trajs = compute_trajectories(series, kinds)
    params = PredictParams(
        method=eff["method"],
        p_threshold=eff["p"],
        min_active=eff["min_active"],
        n_perm=eff["n_perm"],
        seed=eff["seed"],
        pseudo_count=eff["pseudo_count"],
        kinds=kinds,
    )
    records = score_and_rank(predict(trajs, params))
    n_pred = sum(1 for r in records if r.predicted)
    rows, header = _prediction_rows(records, kinds)
    out = Path(eff["out"])
    inputs = [Path(eff["series"])]
    if eff["centralities"] is not None:
        inputs.append(Path(eff["centralities"]))
    _emit_files("predict", inputs, eff, {out: _tsv(rows, header)},
                out.with_name(out.stem + ".manifest.json"))
    print(f"predicted {n_pred} of {len(records)} eligible genes -> {out}")
    return EXIT_OK


def _cmd_control(eff: dict) -> int:
    static = load_edge_list(eff["network"])
    expr = load_expression(eff["expression"])
    profile = activity(expr, threshold=eff["detection_threshold"])
    params = PredictParams(
        method=eff["method"],
        p_threshold=eff["p"],
        min_active=eff["min_active"],
        n_perm=eff["n_perm"],
        seed=eff["seed"],
        pseudo_count=eff["pseudo_count"],
        kinds=_parse_kinds(eff["kinds"]),
    )
    report = randomized_control(
        static, profile, params, n_repeats=eff["repeats"], seed=eff["seed"]
    )
    out = Path(eff["out"])
    with _staged_dir(out) as stage:
        counts = _tsv([[i, c] for i, c in enumerate(report.counts)],
                      ["repeat", "n_predicted"])
        summary = _tsv(
            [[report.n_real, report.mean, report.sd, report.z, report.empirical_p]],
            ["n_real", "shuffled_mean", "shuffled_sd", "z", "empirical_p"],
        )
        (stage / "counts.tsv").write_text(counts)
        (stage / "summary.tsv").write_text(summary)
        _dir_manifest(stage, "control",
                      [Path(eff["network"]), Path(eff["expression"])], eff)
    z = _fmt(report.z)
    print(f"real predictions: {report.n_real}; shuffled mean {report.mean:.2f} "
          f"(sd {report.sd:.2f}); Z = {z} -> {out}")
    return EXIT_OK


def _read_universe(path: Path) -> frozenset[str]:
    genes = set()
    with open(path) as fh:
        for line in fh:
            g = line.strip()
            if g and not g.startswith("#"):
                genes.add(g)
    if not genes:
        raise ValidationError(f"{path}: empty universe")
    return frozenset(genes)


def _read_predictions(path: Path) -> frozenset[str]:
    with open(path) as fh:
        header = fh.readline().rstrip("\n").split("\t")
        try:
            gi = header.index("gene")
            si = header.index("n_supporting")
        except ValueError:
            raise ValidationError(
                f"{path}: expected 'gene' and 'n_supporting' columns"
            ) from None
        genes = set()
        for line in fh:
            fields = line.rstrip("\n").split("\t")
            if len(fields) > max(gi, si) and int(fields[si]) > 0:
                genes.add(fields[gi])
    return frozenset(genes)


def _parse_ground_truth(tokens) -> list[tuple[str, Path]]:
    out = []
    for token in tokens or []:
        name, sep, path = token.partition("=")
        if not sep or not name or not path:
            raise UsageError(f"--ground-truth expects NAME=FILE, got {token!r}")
        out.append((name, Path(path)))
    return out


def _cmd_validate(eff: dict) -> int:
    universe = _read_universe(Path(eff["universe"]))
    predicted = GeneSet("predictions", _read_predictions(Path(eff["predictions"])) & universe)
    ground_truths = [
        load_gene_set(path, universe, name)
        for name, path in _parse_ground_truth(eff["ground_truth"])
    ]
    alpha = eff["alpha"]

    files: dict[Path, str] = {}
    out = Path(eff["out"])

    overlap_rows = []
    for gs in ground_truths:
        r = gene_overlap_test(predicted, gs, universe)
        overlap_rows.append(
            [r.name_a, r.name_g, r.size_a, r.size_g, r.overlap, r.percentage, r.p]
        )
    files[out / "overlaps.tsv"] = _tsv(
        overlap_rows,
        ["set_a", "set_g", "size_a", "size_g", "overlap", "pct_of_smaller", "p"],
    )

    catalogs = []
    if eff["annotations"] is not None:
        catalogs.append(("go", Path(eff["annotations"])))
    if eff["annotations_do"] is not None:
        catalogs.append(("do", Path(eff["annotations_do"])))
    term_rows = []
    for label, path in catalogs:
        catalog = load_annotations(
            path, universe, kind=label.upper(),
            experimental_only=eff["experimental_only"],
        )
        annotated = catalog.annotated_universe
        term_universe = frozenset(catalog.terms)

        def enrich(gene_set: GeneSet) -> tuple[frozenset[str], str]:
            results = term_enrichment(gene_set, catalog, annotated, alpha=alpha)
            rows = [[r.term, r.size_a, r.size_term, r.overlap, r.p, r.significant]
                    for r in results]
            text = _tsv(rows, ["term", "set_size", "term_size", "overlap", "p",
                               "significant"])
            return frozenset(r.term for r in results if r.significant), text

        pred_terms, text = enrich(predicted)
        files[out / f"enrichment_predictions_{label}.tsv"] = text
        comp_terms, text = enrich(complement(predicted, universe))
        files[out / f"enrichment_complement_{label}.tsv"] = text
        against = [(gs.name, enrich(gs)) for gs in ground_truths]
        against.append(("complement", (comp_terms, None)))
        for other_name, (other_terms, text) in against:
            if text is not None:
                files[out / f"enrichment_{other_name}_{label}.tsv"] = text
            r = term_overlap_test(pred_terms, other_terms, term_universe)
            term_rows.append(["predictions", other_name, label.upper(),
                              len(pred_terms), len(other_terms), r.overlap,
                              r.percentage, r.p])
    if catalogs:
        files[out / "term_overlaps.tsv"] = _tsv(
            term_rows,
            ["set_a", "set_g", "catalog", "n_terms_a", "n_terms_g", "overlap",
             "pct_of_smaller", "p"],
        )

    inputs = [Path(eff["predictions"]), Path(eff["universe"])]
    inputs += [p for _, p in _parse_ground_truth(eff["ground_truth"])]
    inputs += [p for _, p in catalogs]
    with _staged_dir(out) as stage:
        for path, text in files.items():
            (stage / path.relative_to(out)).write_text(text)
        _dir_manifest(stage, "validate", inputs, eff)
    print(f"validated {len(predicted)} predictions against "
          f"{len(ground_truths)} ground-truth set(s) -> {out}")
    return EXIT_OK


def _cmd_fixture(eff: dict) -> int:
    fx = make_fixture(seed=eff["seed"])
    out = Path(eff["out"])
    with _staged_dir(out) as stage:
        write_fixture(stage, fx)
        _dir_manifest(stage, "fixture", [], eff)
    print(f"wrote synthetic benchmark ({fx.network.n_nodes} genes, "
          f"{len(fx.expression.ages)} ages) -> {out}")
    return EXIT_OK


# --- parser construction --------------------------------------------------


def _build_parser() -> tuple[_Parser, dict[str, _Options]]:
    parser = _Parser(prog="dynanet", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"dynanet {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    registries: dict[str, _Options] = {}

    def new(name: str, help_: str) -> _Options:
        p = sub.add_parser(name, help=help_, description=help_)
        p.add_argument("--config", type=Path, default=None,
                       help="key=value file supplying defaults for any flag")
        opts = _Options(p)
        registries[name] = opts
        return opts

    o = new("build", "derive age-specific snapshots from a network and expression data")
    o.add("--network", cast=Path, required=True, help="static interaction edge list")
    o.add("--expression", cast=Path, required=True, help="detection p-value matrix")
    o.add("--detection-threshold", default=0.04, cast=float,
          help="gene is active when its detection p is below this (default 0.04)")
    o.add("--out", cast=Path, required=True, help="output snapshot directory")

    o = new("global", "per-age global statistics and snapshot overlap matrices")
    o.add("--series", cast=Path, required=True, help="snapshot directory from 'build'")
    o.add("--exclude-low-degree", default=False, cast=_cast_bool,
          help="drop degree<2 nodes from the clustering average")
    o.add("--out", cast=Path, required=True, help="output TSV (overlap TSVs written alongside)")

    o = new("fit", "score a network against random-graph model families")
    o.add("--network", cast=Path, required=True)
    o.add("--families", default=",".join(FAMILIES), cast=str,
          help=f"comma-separated subset of {','.join(FAMILIES)}")
    o.add("--instances", default=10, cast=int, help="sampled instances per family")
    o.add("--mean-mode", default="arithmetic", cast=str,
          help="agreement averaging: arithmetic or geometric")
    o.add("--seed", default=42, cast=int)
    o.add("--out", cast=Path, required=True)

    o = new("graphlets", "per-node graphlet orbit counts")
    o.add("--network", cast=Path, required=True)
    o.add("--out", cast=Path, required=True, help="orbit-count TSV (node, o0..o72)")
    o.add("--freq-out", cast=Path, help="optional graphlet frequency TSV (g0..g29)")

    o = new("gdd", "graphlet-distribution agreement between two networks")
    o.add("--a", cast=Path, required=True)
    o.add("--b", cast=Path, required=True)
    o.add("--mean-mode", default="arithmetic", cast=str)
    o.add("--out", cast=Path, help="optional TSV; the score always prints to stdout")

    o = new("centrality", "per-gene centrality trajectories across the series")
    o.add("--series", cast=Path, required=True)
    o.add("--kinds", default="all", cast=str,
          help=f"'all' or comma-separated subset of {','.join(KINDS)}")
    o.add("--out", cast=Path, required=True, help="output directory, one TSV per kind")

    o = new("predict", "correlate trajectories with age and rank predictions")
    o.add("--series", cast=Path, required=True)
    o.add("--centralities", cast=Path,
          help="directory from 'centrality'; recomputed when omitted")
    o.add("--kinds", default="all", cast=str)
    o.add("--method", default="pearson", cast=str, help="pearson or spearman")
    o.add("--n-perm", default=1000, cast=int)
    o.add("--p", default=0.01, cast=float, help="per-kind significance threshold")
    o.add("--min-active", default=5, cast=int,
          help="skip genes active in fewer ages than this")
    o.add("--pseudo-count", default=False, cast=_cast_bool,
          help="report (k+1)/(n+1) instead of the raw permutation fraction")
    o.add("--seed", default=42, cast=int)
    o.add("--out", cast=Path, required=True)

    o = new("control", "prediction count on label-shuffled expression data")
    o.add("--network", cast=Path, required=True)
    o.add("--expression", cast=Path, required=True)
    o.add("--detection-threshold", default=0.04, cast=float)
    o.add("--kinds", default="all", cast=str)
    o.add("--method", default="pearson", cast=str)
    o.add("--n-perm", default=1000, cast=int)
    o.add("--p", default=0.01, cast=float)
    o.add("--min-active", default=5, cast=int)
    o.add("--pseudo-count", default=False, cast=_cast_bool)
    o.add("--repeats", default=100, cast=int)
    o.add("--seed", default=42, cast=int)
    o.add("--out", cast=Path, required=True, help="output directory")

    o = new("validate", "overlap and term-enrichment validation of predictions")
    o.add("--predictions", cast=Path, required=True, help="TSV from 'predict'")
    o.add("--universe", cast=Path, required=True,
          help="universe gene list (universe.txt from 'build')")
    p = registries["validate"].parser
    p.add_argument("--ground-truth", action="append", default=None, metavar="NAME=FILE",
                   help="reference gene set; repeatable")
    registries["validate"].opts.append(_Opt("ground_truth", [], lambda s: s.split(",")))
    o.add("--annotations", cast=Path, help="GO annotation TSV (gene, term[, evidence])")
    o.add("--annotations-do", cast=Path, help="DO annotation TSV")
    o.add("--experimental-only", default=False, cast=_cast_bool,
          help="keep only experimental evidence codes")
    o.add("--alpha", default=0.05, cast=float, help="term significance threshold")
    o.add("--out", cast=Path, required=True, help="output directory")

    o = new("fixture", "write the bundled synthetic benchmark data set")
    o.add("--seed", default=DEFAULT_SEED, cast=int)
    o.add("--out", cast=Path, required=True, help="output directory")

    return parser, registries


_HANDLERS = {
    "build": _cmd_build,
    "global": _cmd_global,
    "fit": _cmd_fit,
    "graphlets": _cmd_graphlets,
    "gdd": _cmd_gdd,
    "centrality": _cmd_centrality,
    "predict": _cmd_predict,
    "control": _cmd_control,
    "validate": _cmd_validate,
    "fixture": _cmd_fixture,
}


def main(argv: list[str] | None = None) -> int:
    parser, registries = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        cfg = load_config(args.config) if args.config else {}
        eff = registries[args.command].resolve(args, cfg)
        return _HANDLERS[args.command](eff)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except (InputError, FileNotFoundError, NotADirectoryError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except SystemExit as exc:  # argparse --help/--version
        code = exc.code
        return int(code) if code else EXIT_OK
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
