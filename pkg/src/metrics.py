"""
Prometheus Metrics for the A-infinity Nerve Engine

Metrics Categories:
- Structure checks: Stasheff / morphism identity evaluations
- Maurer-Cartan search: visited leaves, capped searches
- Nerve: horn fills by method
- Suites: per-check verdicts and durations
- Linear algebra: exact solves
"""
from prometheus_client import (
    CollectorRegistry, Counter, Histogram, generate_latest
)

from .config import settings

# Create custom registry (allows multiple instances for testing)
registry = CollectorRegistry()

# ============================================================
# Structure Checks
# ============================================================

structure_checks_total = Counter(
    'structure_checks_total',
    'Identity checks run on algebras and morphisms',
    ['kind', 'result'],
    registry=registry
)

# ============================================================
# Maurer-Cartan Search
# ============================================================

mc_search_leaves_total = Counter(
    'mc_search_leaves_total',
    'Leaves visited by the weight-layer Maurer-Cartan solver',
    [],
    registry=registry
)

mc_search_capped_total = Counter(
    'mc_search_capped_total',
    'Searches aborted at the leaf limit',
    [],
    registry=registry
)

# ============================================================
# Nerve
# ============================================================

horn_fills_total = Counter(
    'horn_fills_total',
    'Horn fillers produced',
    ['method'],
    registry=registry
)

# ============================================================
# Verification Suites
# ============================================================

suite_checks_total = Counter(
    'suite_checks_total',
    'Suite checks by verdict',
    ['suite', 'verdict'],
    registry=registry
)

suite_duration_seconds = Histogram(
    'suite_duration_seconds',
    'Wall time of a full suite run',
    ['suite'],
    buckets=(0.1, 0.5, 1.0, 5.0, 10.0, 30.0, 60.0, 120.0, 300.0),
    registry=registry
)

# ============================================================
# Linear Algebra
# ============================================================

linear_solves_total = Counter(
    'linear_solves_total',
    'Exact row reductions performed',
    [],
    registry=registry
)

# ============================================================
# Helper Functions
# ============================================================

def record_structure_check(kind: str, ok: bool) -> None:
    """Count one identity check"""
    if settings.metrics_enabled:
        structure_checks_total.labels(kind=kind, result="pass" if ok else "fail").inc()


def record_mc_leaves(count: int) -> None:
    """Count visited MC search leaves"""
    if settings.metrics_enabled and count:
        mc_search_leaves_total.inc(count)


def record_mc_capped() -> None:
    if settings.metrics_enabled:
        mc_search_capped_total.inc()


def record_horn_fill(method: str) -> None:
    """Count one horn filler (closed_form or search)"""
    if settings.metrics_enabled:
        horn_fills_total.labels(method=method).inc()


def record_suite_check(suite: str, passed: bool) -> None:
    if settings.metrics_enabled:
        suite_checks_total.labels(suite=suite, verdict="pass" if passed else "fail").inc()


def record_suite_duration(suite: str, seconds: float) -> None:
    if settings.metrics_enabled:
        suite_duration_seconds.labels(suite=suite).observe(seconds)


def record_linear_solve() -> None:
    if settings.metrics_enabled:
        linear_solves_total.inc()


def render_metrics() -> bytes:
    """Prometheus exposition text for the engine registry"""
    return generate_latest(registry)
