import json
import logging
from itertools import combinations
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from twistable import arcs, graph_families, ladders, projections_audit, witnesses
from twistable.atlas import ATLAS_VERSION, get_surface
from twistable.classes.config import RunConfig
from twistable.classes.graph import Ball, GraphSpec
from twistable.classes.multicurve import CurvePool, NormalMulticurve, Subsurface
from twistable.classes.report import SCHEMA_VERSION, AuditReport, fingerprint
from twistable.classes.surface import SurfaceType
from twistable.exceptions import CompletionFailed, ConfigurationError, OracleFailure
from twistable.surface_core import (
    Relation,
    contains_curve,
    generate_pool,
    intersection_number,
    project_curves,
    relation,
)

logger = logging.getLogger(__name__)


class Cache:
    """JSON documents keyed by content hash, one directory per kind."""

    def __init__(self, cache_path: Optional[str]) -> None:
        self.path: Optional[Path] = Path(cache_path) if cache_path else None

    def key(self, kind: str, **params) -> str:
        return f"{kind}/{fingerprint({'atlas': ATLAS_VERSION, **params})}"

    def load(self, kind: str, **params) -> Optional[Dict[str, Any]]:
        if not self.path:
            return None

        path = self.path / f"{self.key(kind, **params)}.json"

        try:
            with open(path, "r") as file:
                data = json.load(file)
        except FileNotFoundError:
            return None

        if data.get("atlas") != ATLAS_VERSION:
            logger.warning("stale cache entry %s ignored", path)
            return None

        return data["value"]

    def save(self, kind: str, value: Dict[str, Any], **params) -> None:
        if not self.path:
            return

        path = self.path / f"{self.key(kind, **params)}.json"
        path.parent.mkdir(parents=True, exist_ok=True)

        with open(path, "w+") as file:
            json.dump({"atlas": ATLAS_VERSION, "value": value}, file, indent=2, sort_keys=True)


class Twistable:
    def __init__(self, config: RunConfig) -> None:
        self.config = config
        self.cache: Cache = Cache(config.cache)
        self.rng = np.random.default_rng(config.seed)

        self._pool: Optional[CurvePool] = None

    @property
    def stype(self) -> SurfaceType:
        return SurfaceType.parse(self.config.surface)

    @property
    def surface(self):
        return get_surface(self.config.surface)

    @property
    def spec(self) -> GraphSpec:
        return GraphSpec.parse(self.config.family, self.surface, self.config.delta)

    @property
    def kspec(self) -> GraphSpec:
        spec = self.spec
        if spec.family == "k_of":
            return spec
        if spec.family == "arc_companion":
            raise ConfigurationError("K_G is not built over the arc companion graph", family=spec.family_id)
        return GraphSpec("k_of", spec.surface, base=spec.family)

    @property
    def pool(self) -> CurvePool:
        """
        Curve pool grown from the generators with the configured budget,
        read from the cache when an entry exists.
        """
        if self._pool is not None:
            return self._pool

        surface = self.surface
        budget = self.config.budget

        if cached := self.cache.load("pool", surface=surface.name, **budget):
            self._pool = CurvePool.from_dict(surface, cached)
            logger.info("%s: pool of %d curves read from cache", surface.name, len(self._pool))
            return self._pool

        self._pool = generate_pool(
            surface.generators,
            self.config.pool_words,
            self.config.intersection_cap,
            self.config.pool_cap,
        )
        self.cache.save("pool", self._pool.to_dict(), surface=surface.name, **budget)

        return self._pool

    def explore(self, spec: GraphSpec, center: NormalMulticurve, radius: int) -> Ball:
        """Ball around ``center`` in the pool, read from the cache when an entry exists."""
        pool = self.pool
        params = {
            "surface": spec.surface.name,
            "family": spec.family_id,
            "center": list(center.weights),
            "radius": radius,
            "neighbour_cap": self.config.neighbour_cap,
            "pool": fingerprint(pool.to_dict()),
        }

        if cached := self.cache.load("ball", **params):
            logger.info("%s: ball of radius %d read from cache", spec, radius)
            return Ball.from_dict(spec, cached)

        ball = graph_families.ball(spec, center, radius, pool, cap=self.config.neighbour_cap)
        self.cache.save("ball", ball.to_dict(), **params)

        return ball

    def witness_pool(self) -> List[Subsurface]:
        return projections_audit.witness_pool(self.pool)

    def vertex_pairs(self, spec: GraphSpec, count: int) -> List[Tuple[NormalMulticurve, NormalMulticurve]]:
        vertices = graph_families.seed_vertices(spec, self.pool, max(2 * count, 4))
        pairs = list(combinations(vertices, 2))
        if len(pairs) <= count:
            return pairs
        return [pairs[i] for i in sorted(self.rng.choice(len(pairs), size=count, replace=False))]

    def report(self, command: str, body: Dict[str, Any], verdict: bool) -> Dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "atlas_version": ATLAS_VERSION,
            "command": command,
            "config": self.config.to_dict(),
            "config_fingerprint": self.config.fingerprint(),
            "verdict": verdict,
            **body,
        }

    def witnesses(self) -> Dict[str, Any]:
        """
        Disjoint witness configurations for every k up to one past the rank;
        the last, empty, list proves the rank is maximal.
        """
        family, stype, delta = self.config.family, self.stype, self.config.delta
        found = {}
        k = 1

        while True:
            configs = witnesses.disjoint_witness_configs(family, stype, k, delta)
            found[str(k)] = [c.to_dict() for c in configs]
            if not configs:
                break
            k += 1

        return self.report("witnesses", {"configurations": found, "rank": k - 1}, True)

    def rank(self) -> Dict[str, Any]:
        value = witnesses.rank(self.config.family, self.stype, self.config.delta)
        return self.report("rank", {"rank": value}, True)

    def hyp(self) -> Dict[str, Any]:
        value = witnesses.hyperbolicity_criterion(self.config.family, self.stype, self.config.delta)
        return self.report("hyp", {"hyperbolic_criterion": value}, True)

    def ball(self) -> Dict[str, Any]:
        spec, pool = self.spec, self.pool
        centers = graph_families.seed_vertices(spec, pool, 1)
        if not centers:
            raise OracleFailure("pool offers no vertex", family=spec.family_id)

        ball = self.explore(spec, centers[0], self.config.radius)
        estimate = projections_audit.delta_estimate(ball, max(self.config.samples, 1) * 40, self.config.seed)

        # pants moves have no stated bound; report what the sampled edges reach
        measured = max((intersection_number(u, v) for u, v in ball.graph.edges), default=0)
        logger.info("%s: edge intersection at most %d over %d edges", spec, measured, ball.graph.number_of_edges())

        bound = {"nominal": spec.bound, "measured": measured}
        return self.report("ball", {"ball": ball.to_dict(), "delta": estimate.to_dict(), "intersection_bound": bound}, True)

    def dist(self) -> Dict[str, Any]:
        spec, pool = self.spec, self.pool
        results = []

        for a, b in self.vertex_pairs(spec, self.config.samples):
            d = graph_families.distance(spec, a, b, pool)
            results.append({"a": list(a.weights), "b": list(b.weights), **d.to_dict()})

        verdict = all(r["upper_bound"] is None or r["lower_bound"] <= r["upper_bound"] for r in results)
        return self.report("dist", {"distances": results}, verdict)

    def proj(self) -> Dict[str, Any]:
        curves = list(self.pool)[: self.config.samples]
        audit = projections_audit.projection_diameter_audit(curves, self.witness_pool())
        return self.report("proj", {"audit": audit.to_dict()}, audit.verdict)

    def df_report(self) -> Dict[str, Any]:
        spec = self.spec
        pairs = self.vertex_pairs(spec, self.config.samples)
        audit = projections_audit.distance_formula_report(
            spec, pairs, self.config.cutoff, self.witness_pool(), self.pool, certify=self.config.certify
        )
        return self.report("df-report", {"audit": audit.to_dict()}, audit.verdict)

    def phi_audit(self) -> Dict[str, Any]:
        spec = self.spec
        if spec.family == "k_of":
            spec = GraphSpec(spec.base, spec.surface)
        audit = projections_audit.phi_audit(spec, self.pool, self.config.samples, self.config.seed)
        return self.report("phi-audit", {"audit": audit.to_dict()}, audit.verdict)

    def arc_audit(self) -> Dict[str, Any]:
        surface = self.surface
        delta = self.config.delta or tuple(sorted(surface.punctures)[:1])
        if not set(delta) <= set(surface.punctures):
            raise ConfigurationError(f"unknown boundary labels {sorted(delta)}", surface=surface.name)

        audit = arcs.appendix_audit(surface, delta, pool=self.pool)
        return self.report("arc-audit", {"audit": audit.to_dict()}, audit.verdict)

    def _bgi_samples(self, nested, pool: CurvePool) -> List:
        samples = []
        for y, x in nested:
            if x.complexity < 1 or y.complexity < 1:
                continue
            inside = [c for c in pool if contains_curve(x, c)][:6]
            for a, b in combinations(inside, 2):
                d = graph_families.curve_distance(a, b, x, with_path=True)
                if d.exact and d.upper >= 2:
                    samples.append((d, x, y))
                    break
            if len(samples) >= self.config.samples:
                break
        return samples

    def _realization_audit(self, chosen: List[Subsurface], pool: CurvePool) -> AuditReport:
        """Partial realization over single witnesses and disjoint pairs, each with one pool curve inside."""
        inside = {}
        for x in chosen:
            found = next((c for c in pool if contains_curve(x, c)), None)
            if found is not None:
                inside[x] = found

        configs = [[x] for x in inside]
        configs += [[x, y] for x, y in combinations(inside, 2) if relation(x, y) == Relation.DISJOINT]

        merged = AuditReport("partial_realization", pool.surface.name, self.spec.family_id, pool.budget)
        for xs in configs[: self.config.samples]:
            try:
                _, report = projections_audit.partial_realization(xs, [inside[x] for x in xs], pool, chosen)
            except CompletionFailed as e:
                merged.notes.append(f"no pants completion for {len(xs)} witnesses: {e.message}")
                continue
            merged.samples.extend(report.samples)

        return merged

    def axiom_audit(self) -> Dict[str, Any]:
        """
        Behrstock, bounded geodesic image, Lipschitz, projection diameter,
        consistency, nesting, large links, partial realization and uniqueness.
        """
        config, pool = self.config, self.pool
        chosen = [x for x in self.witness_pool() if witnesses.is_witness(self.spec, x)]
        audits: List[AuditReport] = []

        triples = projections_audit.transverse_triples(pool, chosen, config.samples, config.seed)
        behrstock = projections_audit.behrstock_audit(triples, config.kappa_ceiling, pool)
        audits.append(behrstock)

        nested = projections_audit.nested_pairs(chosen)
        audits.append(projections_audit.bgi_audit(self._bgi_samples(nested, pool), config.bgi_ceiling))

        edges = projections_audit.kg_edges(self.kspec, pool, config.samples, config.seed)
        audits.append(projections_audit.lipschitz_audit(edges, chosen))
        audits.append(projections_audit.projection_diameter_audit(list(pool)[: config.samples], chosen))

        consistency = []
        for y, x in nested[: config.samples]:
            for a in pool:
                if project_curves(a, x) and project_curves(a, y):
                    consistency.append((a, y, x))
                    break
        audits.append(projections_audit.consistency_audit(consistency, behrstock.constants["kappa"] or config.kappa_ceiling))
        audits.append(projections_audit.nesting_audit(chosen))

        links = [(x, a, b) for x in chosen[:3] if x.complexity >= 1 for a, b in self.vertex_pairs(self.spec, 2)]
        audits.append(projections_audit.large_links_audit(links, chosen, config.cutoff))
        audits.append(self._realization_audit(chosen, pool))

        m = max(1, int(audits[1].constants["M"]))
        pairs = self.vertex_pairs(self.kspec, config.samples)
        audits.append(projections_audit.uniqueness_audit(self.kspec, pairs, config.cutoff, pool, chosen, m))

        verdict = all(audit.verdict for audit in audits)
        # nesting chains are no longer than the complexity of the surface
        extra = {"audits": [audit.to_dict() for audit in audits], "hierarchy_complexity": self.stype.complexity}
        return self.report("axiom-audit", extra, verdict)

    def path(self) -> Dict[str, Any]:
        """Ladder construction between sampled K_G vertices, with per-stage certificates."""
        kspec, pool = self.kspec, self.pool
        chosen = [x for x in self.witness_pool() if witnesses.is_witness(kspec, x)]
        results = []
        verdict = True

        for a, b in self.vertex_pairs(kspec, self.config.samples):
            spread = 1
            for x in chosen:
                pa, pb = project_curves(a, x), project_curves(b, x)
                if pa and pb:
                    spread = max(spread, projections_audit.set_distance(pa, pb, x))

            path, certificate = ladders.build_path(kspec, a, b, spread, pool, witnesses=chosen)
            checks = _stage_checks(certificate)
            verdict = verdict and certificate["within_bound"] and checks
            results.append(
                {
                    "a": list(a.weights),
                    "b": list(b.weights),
                    "path": [list(v.weights) for v in path],
                    "certificate": certificate,
                    "checks": checks,
                }
            )

        return self.report("path", {"paths": results}, verdict)

    def run(self, command: str) -> Dict[str, Any]:
        handler = COMMANDS.get(command)
        if handler is None:
            raise ConfigurationError(f"unknown command {command!r}", command=command)
        return getattr(self, handler)()


def _stage_checks(certificate: Dict[str, Any]) -> bool:
    for stage in certificate["stages"]:
        if stage["increment"] > stage["increment_bound"]:
            return False
        if stage["bricks"] > stage["brick_bound"]:
            return False
        growth = stage["projection_growth"]
        if growth is not None and growth > stage["growth_bound"]:
            return False
    return True


COMMANDS = {
    "witnesses": "witnesses",
    "rank": "rank",
    "hyp": "hyp",
    "ball": "ball",
    "dist": "dist",
    "proj": "proj",
    "df-report": "df_report",
    "axiom-audit": "axiom_audit",
    "path": "path",
    "phi-audit": "phi_audit",
    "arc-audit": "arc_audit",
}
