"""
Suite runner: builds every (check, instance) job from a SuiteConfig, runs
them on a thread pool and summarizes the reports.
"""
from __future__ import annotations

import json
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, TextIO

import numpy as np
import pandas as pd

from core.analyzer.theorem_checks import (
    check_balitskiy,
    check_key_lemma,
    check_main_theorem,
    check_partition_identity,
    check_pdist_diam,
    check_pipeline,
    check_theorem_mainp,
)
from core.analyzer.triangle_search import check_triangle_search
from core.data.schemas.geometry.curve_schema import body_from_schema
from core.data.schemas.harness.report_schema import REPORT_SCHEMA_VERSION, CheckKind, VerificationReport
from core.data.schemas.harness.scenario_schema import ScenarioKind, ScenarioSchema
from core.data.schemas.harness.suite_schema import SuiteConfig
from core.errors import DegenerateInstance, ExtensionFailure, InvalidPartition
from core.geometry.constant_width import ConstantWidthBody, reuleaux_polygon, validate_constant_width
from core.geometry.curves import DiskCurve, PolygonCurve, convex_hull_curve
from core.geometry.partition import FaceLabel, PlanarPartition, build_partition, validate
from core.geometry.clipping import HalfPlane
from core.services.scenario_service import (
    balitskiy_length,
    centroid,
    disjoint_bodies,
    extendable_partition,
    random_cw_body,
    random_partition,
    random_polygon,
    random_triangle,
    sample_inside,
    spoke_partition,
)
from core.utils.generate import make_rng

logger = logging.getLogger(__name__)

PIPELINE_ATTEMPTS = 10


@dataclass(frozen=True)
class SuiteResult:
    reports: list[VerificationReport]
    summary: dict

    @property
    def failures(self) -> int:
        return int(self.summary['failures'])


def instance_seed(seed: int, check: str, index: int) -> int:
    return int(make_rng(seed, check, index).integers(0, 2 ** 31 - 1))


def square_halves() -> tuple[PolygonCurve, list[PolygonCurve]]:
    square = PolygonCurve([(0, 0), (1, 0), (1, 1), (0, 1)])
    return square, [PolygonCurve([(0, 0), (0.5, 0), (0.5, 1), (0, 1)]),
                    PolygonCurve([(0.5, 0), (1, 0), (1, 1), (0.5, 1)])]


def square_split_partition():
    square, _ = square_halves()
    return build_partition(square, [([HalfPlane.left_of((0.5, 1.0), (0.5, 0.0))], FaceLabel.BODY),
                                    ([HalfPlane.left_of((0.5, 0.0), (0.5, 1.0))], FaceLabel.BODY)])


class VerificationService:
    """
    Runs the suite of a SuiteConfig.

    Use as a context manager; the worker pool lives for the duration of the
    `with` block. Reports come back in job order whatever the completion order.
    """

    def __init__(self, config: SuiteConfig):
        self.config = config
        self.q = config.quadrature
        self._pool: Optional[ThreadPoolExecutor] = None

    def __enter__(self) -> 'VerificationService':
        self._pool = ThreadPoolExecutor(max_workers=self.config.workers)
        return self

    def __exit__(self, exc_type, exc, tb):
        if self._pool is not None:
            self._pool.shutdown(wait=True)
            self._pool = None

    # ---------------- jobs ----------------

    def _main_theorem(self, i: int) -> VerificationReport:
        cfg = self.config
        if i == 0:
            square, halves = square_halves()
            return check_main_theorem(square, halves, cfg.inequality_tol, self.q, detail='square halves')
        s = instance_seed(cfg.seed, 'main_theorem', i)
        rng = make_rng(s, 'container')
        container = (random_polygon(rng, int(rng.integers(3, 12))) if rng.uniform() < 0.5
                     else random_cw_body(rng).curve)
        k = int(rng.integers(1, cfg.max_bodies + 1))
        return check_main_theorem(container, disjoint_bodies(s, k, container), cfg.inequality_tol, self.q)

    def _theorem_mainp(self, i: int) -> VerificationReport:
        cfg = self.config
        s = instance_seed(cfg.seed, 'theorem_mainp', i)
        rng = make_rng(s, 'body')
        body = random_cw_body(rng)
        holes = int(rng.integers(0, cfg.max_holes + 1))
        cuts = int(rng.integers(1, 5))
        partition = random_partition(s, body.curve, cuts, holes)
        return check_theorem_mainp(partition, body, self.q, cfg.inequality_tol)

    def _partition_identity(self, i: int) -> VerificationReport:
        cfg = self.config
        if i == 0:
            return check_partition_identity(square_split_partition(), DiskCurve((0.5, 0.5), 10.0), self.q,
                                            cfg.identity_tol, detail='square split')
        s = instance_seed(cfg.seed, 'partition_identity', i)
        rng = make_rng(s, 'container')
        container = random_polygon(rng, int(rng.integers(3, 10)))
        partition = random_partition(s, container, 4, int(rng.integers(0, 2)))
        reference = (random_polygon(rng, int(rng.integers(3, 8)), radius=2.0) if rng.uniform() < 0.5
                     else random_cw_body(rng).curve)
        return check_partition_identity(partition, reference, self.q, cfg.identity_tol)

    def _key_lemma(self, i: int) -> VerificationReport:
        cfg = self.config
        rng = make_rng(instance_seed(cfg.seed, 'key_lemma', i), 'polygon')
        body = random_cw_body(rng)
        m = int(rng.integers(1, 9))
        hull = convex_hull_curve(sample_inside(body.curve, rng, m))
        vertices = hull.vertices if isinstance(hull, PolygonCurve) else hull.at[None, :]
        return check_key_lemma(vertices, body, self.q, cfg.inequality_tol)

    def _balitskiy(self, i: int) -> VerificationReport:
        rng = make_rng(instance_seed(self.config.seed, 'balitskiy', i), 'triangle')
        tri = random_triangle(rng, PolygonCurve([(0, 0), (1, 0), (1, 1), (0, 1)]))
        return check_balitskiy(*tri, balitskiy_length(tri, float(rng.uniform(0.0, 2.0))))

    def _pdist_diam(self, i: int) -> VerificationReport:
        rng = make_rng(instance_seed(self.config.seed, 'pdist_diam', i), 'point')
        body = random_cw_body(rng)
        theta = float(rng.uniform(0.0, 2.0 * math.pi))
        edge = body.curve.support_point(theta)
        center = body.curve.support_points(np.linspace(0.0, 2.0 * math.pi, 64, endpoint=False)).mean(axis=0)
        location = i % 3
        if location == 0:
            point = edge
        elif location == 1:
            point = center + rng.uniform(0.0, 0.9) * (edge - center)
        else:
            point = center + rng.uniform(1.1, 2.0) * (edge - center)
        return check_pdist_diam(point, body, self.q, self.config.identity_tol)

    def _triangle_search(self, i: int) -> VerificationReport:
        cfg = self.config
        body = reuleaux_polygon(3, 1.0) if i % 2 == 0 else validate_constant_width(DiskCurve((0.0, 0.0), 1.0))
        return check_triangle_search(body, cfg.search_budget, instance_seed(cfg.seed, 'triangle_search', i), self.q)

    def _pipeline_partition(self, i: int, seed: int) -> PlanarPartition:
        """Rotates through full-line arrangements, nested chord cuts and spokes from the centroid."""
        rng = make_rng(seed, 'container')
        container = random_polygon(rng, int(rng.integers(3, 7)))
        kind = i % 3
        if kind == 0:
            return extendable_partition(seed, container, int(rng.integers(1, 4)), int(rng.integers(0, 2)))
        if kind == 1:
            return random_partition(seed, container, int(rng.integers(1, 4)), int(rng.integers(0, 2)),
                                    full_lines=False, normalize=False)
        partition = spoke_partition(container.vertices, centroid(container))
        report = validate(partition, seed=seed)
        if not report.valid:
            raise InvalidPartition("spokes from the centroid do not tile: " + "; ".join(report.violations))
        return partition

    def _pipeline(self, i: int) -> VerificationReport:
        cfg = self.config
        last: Optional[Exception] = None
        for attempt in range(PIPELINE_ATTEMPTS):
            s = instance_seed(cfg.seed, 'pipeline', i * PIPELINE_ATTEMPTS + attempt)
            try:
                return check_pipeline(self._pipeline_partition(i, s), self.q)
            except (ExtensionFailure, DegenerateInstance, InvalidPartition) as exc:
                logger.debug("pipeline instance %d attempt %d: %s", i, attempt, exc)
                last = exc
        raise ExtensionFailure(f"no extendable partition in {PIPELINE_ATTEMPTS} attempts: {last}")

    def jobs(self) -> list[tuple[str, int, Callable[[int], VerificationReport]]]:
        counts = self.config.checks
        table = [
            ('main_theorem', counts.main_theorem, self._main_theorem),
            ('theorem_mainp', counts.theorem_mainp, self._theorem_mainp),
            ('partition_identity', counts.partition_identity, self._partition_identity),
            ('key_lemma', counts.key_lemma, self._key_lemma),
            ('balitskiy', counts.balitskiy, self._balitskiy),
            ('pdist_diam', counts.pdist_diam, self._pdist_diam),
            ('triangle_search', counts.triangle_search, self._triangle_search),
            ('pipeline', counts.pipeline, self._pipeline),
        ]
        return [(name, i, fn) for name, n, fn in table for i in range(n)]

    # ---------------- running ----------------

    def _corrupt(self, report: VerificationReport) -> VerificationReport:
        factor = self.config.corrupt_rhs_factor
        if factor == 1.0 or report.kind is CheckKind.REPORT or math.isnan(report.rhs):
            return report
        fields = report.model_dump(exclude={'check', 'kind', 'lhs', 'rhs', 'slack', 'tolerance', 'passed'})
        return VerificationReport.evaluate(report.check, report.lhs, report.rhs * factor, report.tolerance,
                                           report.kind, **fields)

    def _run_one(self, job: tuple[str, int, Callable[[int], VerificationReport]]) -> VerificationReport:
        name, index, fn = job
        start = time.perf_counter()
        try:
            report = fn(index)
        except (ValueError, ArithmeticError) as exc:
            logger.error("%s[%d] raised %s: %s", name, index, type(exc).__name__, exc)
            report = VerificationReport.failure(name, exc)
        report = report.model_copy(update={'seed': self.config.seed, 'instance': index,
                                           'runtime': time.perf_counter() - start})
        return self._corrupt(report)

    def run(self) -> list[VerificationReport]:
        jobs = self.jobs()
        logger.info("running %d checks on %d workers", len(jobs), self.config.workers)
        if self._pool is None:
            return [self._run_one(job) for job in jobs]
        return list(self._pool.map(self._run_one, jobs))


def summarize(reports: Iterable[VerificationReport]) -> dict:
    rows = [r.model_dump() for r in reports]
    summary = {'summary': True, 'schema_version': REPORT_SCHEMA_VERSION, 'total': len(rows), 'failures': 0,
               'checks': {}}
    if not rows:
        return summary
    frame = pd.DataFrame(rows)
    grouped = frame.groupby('check', sort=True).agg(
        count=('passed', 'size'),
        failures=('passed', lambda s: int((~s.astype(bool)).sum())),
        min_slack=('slack', 'min'),
        max_slack=('slack', 'max'),
    )
    for check, row in grouped.iterrows():
        summary['checks'][check] = {
            'count': int(row['count']),
            'failures': int(row['failures']),
            'min_slack': None if pd.isna(row['min_slack']) else float(row['min_slack']),
            'max_slack': None if pd.isna(row['max_slack']) else float(row['max_slack']),
        }
    summary['failures'] = int(grouped['failures'].sum())
    return summary


def run_suite(config: SuiteConfig) -> SuiteResult:
    with VerificationService(config) as service:
        reports = service.run()
    summary = summarize(reports)
    logger.info("suite finished: %d checks, %d failures", summary['total'], summary['failures'])
    return SuiteResult(reports, summary)


def verify_scenario(scenario: ScenarioSchema, config: SuiteConfig = SuiteConfig()) -> SuiteResult:
    """The checks that apply to one generated scenario."""
    q = config.quadrature
    payload = scenario.payload
    fields = {'seed': scenario.seed}
    reports: list[VerificationReport] = []

    def certified(schema) -> ConstantWidthBody:
        body = body_from_schema(schema)
        return body if isinstance(body, ConstantWidthBody) else validate_constant_width(body, tol=1e-8)

    def guarded(name: str, fn: Callable[[], VerificationReport], index: int = 0):
        try:
            reports.append(fn().model_copy(update={**fields, 'instance': index}))
        except (ValueError, ArithmeticError) as exc:
            reports.append(VerificationReport.failure(name, exc, instance=index, **fields))

    if scenario.kind is ScenarioKind.DISJOINT_BODIES:
        guarded('main_theorem', lambda: check_main_theorem(
            payload.container.to_curve(), [b.to_curve() for b in payload.bodies], config.inequality_tol, q))
    elif scenario.kind is ScenarioKind.PARTITION_WITH_HOLES:
        partition = payload.partition.to_partition()
        body = certified(payload.partition.container)
        guarded('theorem_mainp', lambda: check_theorem_mainp(partition, body, q, config.inequality_tol))
        guarded('partition_identity', lambda: check_partition_identity(partition, body, q, config.identity_tol))
    elif scenario.kind is ScenarioKind.POLYGON_IN_CW:
        body = certified(payload.body)
        guarded('key_lemma', lambda: check_key_lemma(payload.polygon, body, q, config.inequality_tol))
    else:
        body = certified(payload.body)
        for i, (tri, t) in enumerate(zip(payload.triangles, payload.lengths)):
            guarded('key_lemma', lambda tri=tri: check_key_lemma(tri, body, q, config.inequality_tol), i)
            guarded('balitskiy', lambda tri=tri, t=t: check_balitskiy(*tri, t), i)
    return SuiteResult(reports, summarize(reports))


def write_jsonl(result: SuiteResult, stream: TextIO, include_timing: bool = False) -> None:
    for report in result.reports:
        stream.write(report.to_json(include_timing))
        stream.write('\n')
    stream.write(json.dumps(result.summary, sort_keys=True))
    stream.write('\n')
