"""Expression detection calls and the derived per-age activity calls.

Input format: a TSV whose header row is ``<id-column-name> <age> <age> ...``
with numeric ages, and whose body rows are ``gene-id`` followed by one
detection p-value per age.  Cells that are empty or literally ``NA`` are
missing.  Columns may appear in any order; they are sorted by age on load.
Two samples with the same age are both kept (the label is disambiguated with
a ``#2`` suffix) and share the numeric age downstream.

A gene counts as *active* at an age when its detection p-value is strictly
below the threshold (default 0.04).  Missing means inactive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, ValidationError


@dataclass(frozen=True)
class ExpressionMatrix:
    genes: tuple[str, ...]        # sorted, unique
    ages: tuple[float, ...]       # ascending; numeric duplicates allowed
    age_labels: tuple[str, ...]   # unique, aligned with ages
    values: np.ndarray            # (n_genes, n_ages) float64, NaN = missing

    @property
    def n_genes(self) -> int:
        return len(self.genes)

    @property
    def n_ages(self) -> int:
        return len(self.ages)

    def row(self, gene: str) -> np.ndarray:
        try:
            i = self.genes.index(gene)
        except ValueError:
            raise ValidationError(f"unknown gene {gene!r}") from None
        return self.values[i]


@dataclass(frozen=True)
class ActivityProfile:
    """Boolean activity calls per (gene, age)."""

    genes: tuple[str, ...]
    ages: tuple[float, ...]
    age_labels: tuple[str, ...]
    active: np.ndarray            # (n_genes, n_ages) bool
    threshold: float

    def gene_index(self, gene: str) -> int:
        try:
            return self.genes.index(gene)
        except ValueError:
            raise ValidationError(f"unknown gene {gene!r}") from None

    def is_active(self, gene: str, age_index: int) -> bool:
        return bool(self.active[self.gene_index(gene), age_index])

    def active_genes(self, age_index: int) -> frozenset[str]:
        mask = self.active[:, age_index]
        return frozenset(g for g, m in zip(self.genes, mask) if m)

    def n_active(self, gene: str) -> int:
        return int(self.active[self.gene_index(gene)].sum())


def _parse_cell(token: str, path, lineno: int, gene: str, label: str) -> float:
    token = token.strip()
    if token == "" or token == "NA":
        return math.nan
    try:
        value = float(token)
    except ValueError:
        raise ParseError(
            f"{path}:{lineno}: non-numeric p-value {token!r} for gene {gene!r}, age {label}"
        ) from None
    if not (0.0 <= value <= 1.0):
        raise ValidationError(
            f"{path}:{lineno}: p-value {value!r} out of [0, 1] for gene {gene!r}, age {label}"
        )
    return value


def load_expression(path) -> ExpressionMatrix:
    """Parse a detection p-value matrix; see module docstring for the format."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    # leading comments are tolerated, the first non-comment line is the header
    body_start = 0
    header = None
    for i, line in enumerate(lines):
        if line.strip() and not line.startswith("#"):
            header = line.rstrip("\r\n").split("\t")
            body_start = i + 1
            break
    if header is None or len(header) < 2:
        raise ParseError(f"{path}: missing header row with at least one age column")
    raw_labels = [h.strip() for h in header[1:]]
    ages = []
    for label in raw_labels:
        try:
            ages.append(float(label))
        except ValueError:
            raise ParseError(f"{path}: non-numeric age {label!r} in header") from None

    rows: dict[str, list[float]] = {}
    for lineno0, line in enumerate(lines[body_start:], start=body_start + 1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.rstrip("\r\n").split("\t")
        if len(fields) != len(header):
            raise ParseError(
                f"{path}:{lineno0}: expected {len(header)} fields, got {len(fields)}"
            )
        gene = fields[0].strip()
        if not gene:
            raise ParseError(f"{path}:{lineno0}: empty gene identifier")
        if gene in rows:
            raise ValidationError(f"{path}:{lineno0}: duplicate gene {gene!r}")
        rows[gene] = [
            _parse_cell(tok, path, lineno0, gene, raw_labels[j])
            for j, tok in enumerate(fields[1:])
        ]

    # sort columns by age (stable), then disambiguate duplicate labels
    order = sorted(range(len(ages)), key=lambda j: (ages[j], j))
    sorted_ages = tuple(ages[j] for j in order)
    labels: list[str] = []
    seen: dict[str, int] = {}
    for j in order:
        base = raw_labels[j]
        seen[base] = seen.get(base, 0) + 1
        labels.append(base if seen[base] == 1 else f"{base}#{seen[base]}")

    genes = tuple(sorted(rows))
    values = np.full((len(genes), len(sorted_ages)), np.nan)
    for i, g in enumerate(genes):
        row = rows[g]
        for k, j in enumerate(order):
            values[i, k] = row[j]
    return ExpressionMatrix(
        genes=genes, ages=sorted_ages, age_labels=tuple(labels), values=values
    )


def activity(matrix: ExpressionMatrix, threshold: float = 0.04) -> ActivityProfile:
    """Call genes active where detection p < ``threshold`` (strict; NaN inactive)."""
    if not (0.0 < threshold <= 1.0):
        raise ValidationError(f"detection threshold {threshold!r} outside (0, 1]")
    with np.errstate(invalid="ignore"):
        active = matrix.values < threshold   # NaN compares False
    return ActivityProfile(
        genes=matrix.genes,
        ages=matrix.ages,
        age_labels=matrix.age_labels,
        active=active,
        threshold=threshold,
    )
