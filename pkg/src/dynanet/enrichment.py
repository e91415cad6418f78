"""Gene-set overlap statistics and flat GO/DO term enrichment.

All significance comes from one primitive: the upper tail of the
hypergeometric distribution -- the probability of drawing at least the
observed overlap when a set of size |G| is sampled from a universe of size
|E| containing a marked subset of size |A|.  The tail is summed directly in
log-gamma space, so universes of several thousand genes evaluate without
overflow and without the cancellation a 1-minus-lower-tail form would risk.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import ParseError, ValidationError

logger = logging.getLogger(__name__)

EXPERIMENTAL_CODES = frozenset({"EXP", "IDA", "IPI", "IMP", "IGI", "IEP"})

SIGNIFICANCE_ALPHA = 0.05


def _log_binom(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def hypergeom_tail(universe_size: int, set_a: int, set_g: int, overlap: int) -> float:
    """P(X >= overlap) for X hypergeometric(|E|, |A|, |G|)."""
    e, a, g, o = universe_size, set_a, set_g, overlap
    if e < 0 or a < 0 or g < 0 or o < 0:
        raise ValidationError("set sizes must be non-negative")
    if a > e or g > e:
        raise ValidationError(f"set sizes |A|={a}, |G|={g} exceed universe |E|={e}")
    if o > min(a, g):
        raise ValidationError(f"overlap {o} exceeds min(|A|, |G|) = {min(a, g)}")
    if o == 0:
        return 1.0
    log_denom = _log_binom(e, g)
    lo = max(o, g - (e - a))  # below this C(e-a, g-i) vanishes
    hi = min(a, g)
    terms = [
        math.exp(_log_binom(a, i) + _log_binom(e - a, g - i) - log_denom)
        for i in range(lo, hi + 1)
    ]
    return min(1.0, math.fsum(terms))


@dataclass(frozen=True)
class GeneSet:
    name: str
    members: frozenset[str]

    def __len__(self) -> int:
        return len(self.members)


def load_gene_set(path: str | Path, universe: frozenset[str], name: str | None = None) -> GeneSet:
    """One gene identifier per line; members outside the universe are dropped
    with a logged report rather than failing the run."""
    path = Path(path)
    members: set[str] = set()
    rejected: list[str] = []
    with open(path) as fh:
        for line in fh:
            gene = line.strip()
            if not gene or gene.startswith("#"):
                continue
            if gene in universe:
                members.add(gene)
            else:
                rejected.append(gene)
    if rejected:
        logger.warning(
            "%s: dropped %d gene(s) outside the universe (e.g. %s)",
            path, len(rejected), ", ".join(sorted(rejected)[:5]),
        )
    return GeneSet(name=name or path.stem, members=frozenset(members))


@dataclass(frozen=True)
class OverlapResult:
    name_a: str
    name_g: str
    size_a: int
    size_g: int
    overlap: int
    percentage: float  # |O| / min(|A|, |G|); NaN when either set is empty
    p: float


def gene_overlap_test(a: GeneSet, g: GeneSet, universe: frozenset[str]) -> OverlapResult:
    """Overlap size, percentage of the smaller set, and hypergeometric p."""
    for s in (a, g):
        if not s.members <= universe:
            extra = sorted(s.members - universe)[:5]
            raise ValidationError(f"set {s.name!r} has genes outside the universe: {extra}")
    o = len(a.members & g.members)
    smaller = min(len(a), len(g))
    if smaller == 0:
        return OverlapResult(a.name, g.name, len(a), len(g), 0, math.nan, 1.0)
    return OverlapResult(
        name_a=a.name,
        name_g=g.name,
        size_a=len(a),
        size_g=len(g),
        overlap=o,
        percentage=o / smaller,
        p=hypergeom_tail(len(universe), len(a), len(g), o),
    )


@dataclass(frozen=True)
class AnnotationCatalog:
    kind: str  # GO | DO
    terms: dict[str, frozenset[str]]  # only terms annotating >= 2 universe genes
    experimental_only: bool = False

    @property
    def annotated_universe(self) -> frozenset[str]:
        out: set[str] = set()
        for genes in self.terms.values():
            out |= genes
        return frozenset(out)


def load_annotations(
    path: str | Path,
    universe: frozenset[str],
    kind: str = "GO",
    experimental_only: bool = False,
) -> AnnotationCatalog:
    """TSV of gene, term, optional evidence code; flat (no ontology closure).

    Rows for genes outside the universe are ignored; with
    ``experimental_only`` rows lacking an experimental evidence code are
    ignored too; terms left with fewer than two genes are dropped.
    """
    path = Path(path)
    raw: dict[str, set[str]] = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) < 2:
                raise ParseError(
                    f"{path}:{lineno}: expected gene<TAB>term[<TAB>evidence], got {line!r}"
                )
            gene, term = fields[0].strip(), fields[1].strip()
            evidence = fields[2].strip() if len(fields) > 2 else ""
            if not gene or not term:
                raise ParseError(f"{path}:{lineno}: empty gene or term field")
            if gene not in universe:
                continue
            if experimental_only and evidence not in EXPERIMENTAL_CODES:
                continue
            raw.setdefault(term, set()).add(gene)
    terms = {t: frozenset(gs) for t, gs in raw.items() if len(gs) >= 2}
    return AnnotationCatalog(kind=kind, terms=terms, experimental_only=experimental_only)


@dataclass(frozen=True)
class EnrichmentResult:
    term: str
    size_a: int
    size_term: int
    overlap: int
    p: float
    significant: bool


def term_enrichment(
    set_a: GeneSet,
    catalog: AnnotationCatalog,
    universe_annotated: frozenset[str] | None = None,
    alpha: float = SIGNIFICANCE_ALPHA,
) -> list[EnrichmentResult]:
    """One hypergeometric test per term, against the annotated universe.

    The background is the set of universe genes carrying at least one
    annotation, and the tested set is intersected with it so the test is
    well-posed.  Terms are reported in identifier order.
    """
    if universe_annotated is None:
        universe_annotated = catalog.annotated_universe
    a = set_a.members & universe_annotated
    e = len(universe_annotated)
    out: list[EnrichmentResult] = []
    for term in sorted(catalog.terms):
        genes = catalog.terms[term] & universe_annotated
        o = len(a & genes)
        p = hypergeom_tail(e, len(a), len(genes), o)
        out.append(
            EnrichmentResult(
                term=term,
                size_a=len(a),
                size_term=len(genes),
                overlap=o,
                p=p,
                significant=p <= alpha,
            )
        )
    return out


def term_overlap_test(
    terms_a: frozenset[str], terms_g: frozenset[str], term_universe: frozenset[str]
) -> OverlapResult:
    """Overlap between two enriched-term sets within the testable-term universe."""
    for label, s in (("a", terms_a), ("g", terms_g)):
        if not s <= term_universe:
            extra = sorted(s - term_universe)[:5]
            raise ValidationError(f"term set {label!r} outside the term universe: {extra}")
    return gene_overlap_test(
        GeneSet("terms_a", frozenset(terms_a)),
        GeneSet("terms_g", frozenset(terms_g)),
        frozenset(term_universe),
    )


def complement(a: GeneSet, universe: frozenset[str]) -> GeneSet:
    if not a.members <= universe:
        extra = sorted(a.members - universe)[:5]
        raise ValidationError(f"set {a.name!r} has genes outside the universe: {extra}")
    return GeneSet(name=f"{a.name}_complement", members=frozenset(universe - a.members))
