"""Experiment harness: random models, constraint sampling, inference rate and
search effort with and without pruning, written out as CSV."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, fields
from typing import Iterable, Sequence

import numpy as np

from .classbuild import dag_to_cpdag, latent_project, mag_to_pag
from .exceptions import CausalPathsError, InputError, InvariantError
from .graph import (
    ARROW,
    CIRCLE,
    TAIL,
    GraphClass,
    MixedGraph,
    has_directed_path,
    has_possibly_directed_path,
    is_ancestor,
)
from .incorporate import KnowledgeConstraint, PCGraph, SearchOptions, SearchStats, Sign, find_pc_graph

__all__ = [
    "GenConfig",
    "RunRecord",
    "CSV_HEADER",
    "gen_random_dag",
    "sample_constraints",
    "count_inferences",
    "inference_rate",
    "effective_branching_factor",
    "replicate_seed",
    "run_replicate",
    "run_experiment",
    "write_csv",
]

PAG_MAX_UNCERTAINTIES = 20
PAG_MAX_VERTICES = 12
PAG_ENUM_CAP = 40


@dataclass(frozen=True)
class GenConfig:
    n_vertices: int
    edge_density: float
    n_constraints: int
    mode: str = "pdag"
    hidden_fraction: float | None = None
    replicate_seed: int = 0

    def __post_init__(self):
        if self.hidden_fraction is None:
            object.__setattr__(self, "hidden_fraction", 0.2 if self.mode == "pag" else 0.0)
        if self.mode not in ("pdag", "pag"):
            raise InputError(f"mode must be pdag or pag, not {self.mode!r}")
        if self.n_vertices < 1 or self.n_constraints < 0:
            raise InputError("n_vertices must be positive and n_constraints non-negative")
        if not 0.0 <= self.edge_density <= 1.0:
            raise InputError("edge_density must lie in [0, 1]")
        if not 0.0 <= self.hidden_fraction < 1.0:
            raise InputError("hidden_fraction must lie in [0, 1)")


@dataclass
class RunRecord:
    mode: str
    n_vertices: int
    edge_density: float
    hidden_fraction: float
    n_constraints: int
    replicate_seed: int
    status: str = "ok"
    n_sampled: int = 0
    uncertainties: int = 0
    inferences: int = 0
    inference_rate: float = 0.0
    nodes_pruned: int = 0
    nodes_unpruned: int = 0
    effective_branching_pruned: float = math.nan
    effective_branching_unpruned: float = math.nan
    agree: bool = True

    @classmethod
    def for_config(cls, cfg: GenConfig, **kw) -> "RunRecord":
        return cls(cfg.mode, cfg.n_vertices, cfg.edge_density, cfg.hidden_fraction,
                   cfg.n_constraints, cfg.replicate_seed, **kw)


CSV_HEADER = tuple(f.name for f in fields(RunRecord))


def _vertex_names(n: int) -> list:
    width = len(str(n - 1))
    return [f"V{i:0{width}d}" for i in range(n)]


def gen_random_dag(config: GenConfig) -> MixedGraph:
    """Random DAG: a uniform random topological order, then each forward pair
    becomes an edge independently with probability ``edge_density``."""
    rng = np.random.default_rng(config.replicate_seed)
    n = config.n_vertices
    order = rng.permutation(n)
    draws = rng.random((n, n))
    m = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            if draws[a, b] < config.edge_density:
                i, j = int(order[a]), int(order[b])
                m[i][j], m[j][i] = ARROW, TAIL
    return MixedGraph.from_matrix(_vertex_names(n), m, GraphClass.DAG)


def _hidden_vertices(dag: MixedGraph, config: GenConfig) -> list:
    k = int(round(config.hidden_fraction * dag.n))
    if k == 0:
        return []
    rng = np.random.default_rng([config.replicate_seed, 1])
    picks = rng.choice(dag.n, size=k, replace=False)
    return [dag.vertices[int(i)] for i in sorted(picks)]


def sample_constraints(truth: MixedGraph, p: MixedGraph, n: int, seed: int) -> tuple:
    """Up to ``n`` true ancestral relations that ``p`` does not yet entail.

    Returns ``(constraints, short)``; ``short`` is True when the pool held
    fewer than ``n`` candidates and all of them were returned.  The pool is
    shuffled once per seed and the first ``n`` are taken, so samples for
    growing ``n`` are nested.
    """
    pool = []
    for x in p.vertices:
        for y in p.vertices:
            if x == y:
                continue
            if is_ancestor(truth, x, y):
                if not has_directed_path(p, x, y):
                    pool.append(KnowledgeConstraint(x, y, Sign.POSITIVE))
            elif has_possibly_directed_path(p, x, y):
                pool.append(KnowledgeConstraint(x, y, Sign.NEGATIVE))
    rng = np.random.default_rng([seed, 2])
    order = rng.permutation(len(pool))
    picked = [pool[int(i)] for i in order[:n]]
    return picked, len(pool) < n


def count_inferences(before: MixedGraph, after) -> tuple:
    """``(inferences, uncertainties)``: circles of ``before`` and how many of
    them are no longer circles in ``after``."""
    solid = after.solid if isinstance(after, PCGraph) else after
    if before.vertices != solid.vertices or before.skeleton() != solid.skeleton():
        raise InputError("graphs differ in vertices or skeleton")
    u = 0
    inferred = 0
    for i, row in enumerate(before._m):
        for j, mk in enumerate(row):
            if mk == CIRCLE:
                u += 1
                if solid._m[i][j] != CIRCLE:
                    inferred += 1
    return inferred, u


def inference_rate(before: MixedGraph, after) -> float:
    """Fraction of the circles of ``before`` oriented in ``after``; 0 when
    ``before`` has no circles."""
    inferred, u = count_inferences(before, after)
    return inferred / u if u else 0.0


def effective_branching_factor(nodes: int, uncertainties: int) -> float:
    """``b`` with ``b ** uncertainties == nodes``; NaN without uncertainties."""
    if uncertainties <= 0:
        return math.nan
    if nodes < 1:
        raise InputError("node count must be positive")
    return float(nodes) ** (1.0 / uncertainties)


def replicate_seed(master: int, replicate: int) -> int:
    """Independent per-replicate seed derived from the master seed."""
    return int(np.random.SeedSequence([master, replicate]).generate_state(1)[0])


def _build_class(cfg: GenConfig):
    """(truth, p, reference MAG or None)."""
    dag = gen_random_dag(cfg)
    if cfg.mode == "pdag":
        return dag, dag_to_cpdag(dag), None
    mag = latent_project(dag, _hidden_vertices(dag, cfg))
    return mag, mag_to_pag(mag, max_positions=PAG_ENUM_CAP), mag


def run_replicate(cfg: GenConfig) -> RunRecord:
    """Generate, convert, sample and search once; errors become status rows."""
    try:
        truth, p, ref = _build_class(cfg)
    except CausalPathsError as exc:
        return RunRecord.for_config(cfg, status=f"failed:{type(exc).__name__}")
    u = p.num_circles()
    if cfg.mode == "pag" and p.n > PAG_MAX_VERTICES:
        return RunRecord.for_config(cfg, status="skipped:vertices", uncertainties=u)
    if cfg.mode == "pag" and u > PAG_MAX_UNCERTAINTIES:
        return RunRecord.for_config(cfg, status="skipped:uncertainties", uncertainties=u)
    k, _ = sample_constraints(truth, p, cfg.n_constraints, cfg.replicate_seed)
    rec = RunRecord.for_config(cfg, n_sampled=len(k), uncertainties=u)
    try:
        st_p, st_u = SearchStats(), SearchStats()
        sat_p, pc_p = find_pc_graph(p, k, SearchOptions(pruning=True), reference=ref, stats=st_p)
        sat_u, pc_u = find_pc_graph(p, k, SearchOptions(pruning=False), reference=ref, stats=st_u)
    except CausalPathsError as exc:
        rec.status = f"failed:{type(exc).__name__}"
        return rec
    if not (sat_p and sat_u):
        raise InvariantError("constraints sampled from the generating model were inconsistent")
    rec.agree = pc_p.solid == pc_u.solid
    rec.inferences, _ = count_inferences(p, pc_p)
    rec.inference_rate = rec.inferences / u if u else 0.0
    if not u:
        rec.status = "ok:no-uncertainties"
    rec.nodes_pruned = st_p.nodes_visited
    rec.nodes_unpruned = st_u.nodes_visited
    rec.effective_branching_pruned = effective_branching_factor(st_p.nodes_visited, u)
    rec.effective_branching_unpruned = effective_branching_factor(st_u.nodes_visited, u)
    return rec


def run_experiment(grid: Iterable[GenConfig], replicates: int, seed: int) -> list:
    """One record per (config, replicate).

    The replicate seed depends only on ``seed`` and the replicate index, so
    configs that differ only in ``n_constraints`` share their graph and get
    nested constraint samples.
    """
    out = []
    for cfg in grid:
        for r in range(replicates):
            c = GenConfig(cfg.n_vertices, cfg.edge_density, cfg.n_constraints, cfg.mode,
                          cfg.hidden_fraction, replicate_seed(seed, r))
            out.append(run_replicate(c))
    return out


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return "nan" if math.isnan(v) else f"{v:.6g}"
    return str(v)


def write_csv(records: Sequence[RunRecord], stream=None) -> str:
    """CSV text with header ``CSV_HEADER``; also written to ``stream`` if given."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        d = asdict(r)
        w.writerow([_fmt(d[h]) for h in CSV_HEADER])
    text = buf.getvalue()
    if stream is not None:
        stream.write(text)
    return text
