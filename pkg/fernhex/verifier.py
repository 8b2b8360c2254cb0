"""Identity checks: product formulas against exact counts, recurrences among counts.

Every check returns a :class:`VerificationReport` whose two sides are exact
rationals; ``passed`` is true exactly when they agree. Suites enumerate the
instances of one or more checks over a :class:`GridConfig` grid and run them
either inline or across a process pool, keeping the planned order.
"""

from __future__ import annotations

import asyncio
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from .cache import CountCache
from .config import EngineCaps, FernhexConfig
from .counting import EngineKind, count_tilings
from .errors import DivisionByZero, FernDoesNotFit, FernhexError, PreconditionViolated
from .formulas import (
    BRANCHES,
    cored_count_exact,
    envelope_product,
    fc_count_formula,
    g_function,
    macmahon_p,
    scalar_identity_413,
    semihex_s,
    theorem21_ratio,
    two_lobe_ratio,
)
from .lattice import TriRegion
from .metrics import get_metrics
from .regions import (
    FernSpec,
    PlacementKind,
    cored_hexagon,
    envelope_hf,
    f_cored_hexagon,
    grid_ferns,
    hexagon,
    placement_kind,
    semihexagon,
)

logger = logging.getLogger(__name__)

FormulaFn = Callable[[int, int, int, FernSpec], int]
Task = Tuple[str, Dict[str, Any]]


class VerificationReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    identity: str
    params: Dict[str, Any]
    lhs: Optional[str] = None
    rhs: Optional[str] = None
    passed: bool = Field(alias="pass")
    skipped: bool = False
    engine: Optional[str] = None
    elapsed_ms: float = Field(0.0, alias="ms")
    reason: Optional[str] = None


class SuiteSummary(BaseModel):
    total: int = 0
    passed: int = 0
    failed: int = 0
    skipped: int = 0


class SuiteResult(BaseModel):
    suite: str
    reports: List[VerificationReport]
    summary: SuiteSummary

    @property
    def ok(self) -> bool:
        return self.summary.failed == 0

    def failures(self) -> List[VerificationReport]:
        return [r for r in self.reports if not r.passed and not r.skipped]

    def to_json(self, indent: Optional[int] = 2) -> str:
        return self.model_dump_json(by_alias=True, indent=indent)


class GridConfig(BaseModel):
    max_xyz: int = Field(3, ge=0)
    max_lobe: int = Field(2, ge=0)
    max_k: int = Field(4, ge=0)
    jobs: int = Field(1, ge=1)
    engine: EngineKind = EngineKind.AUTO
    engines: EngineCaps = Field(default_factory=EngineCaps)

    @classmethod
    def from_config(cls, cfg: FernhexConfig, **overrides: Any) -> "GridConfig":
        values = {
            "max_xyz": cfg.grid.max_xyz,
            "max_lobe": cfg.grid.max_lobe,
            "max_k": cfg.grid.max_k,
            "jobs": cfg.grid.jobs,
            "engines": cfg.engines,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


class KuoVariant(str, Enum):
    """Condensation recurrences, keyed by which of x, y, z has the odd parity out."""

    SAME_PARITY = "same-parity"
    X_OPPOSITE = "x-opposite"
    Z_OPPOSITE_EVEN_K = "z-opposite-even-k"
    Z_OPPOSITE_ODD_K = "z-opposite-odd-k"
    Y_OPPOSITE_EVEN_K = "y-opposite-even-k"
    Y_OPPOSITE_ODD_K = "y-opposite-odd-k"


SUITES = (
    "macmahon",
    "semihex",
    "theorem21",
    "kuo",
    "base-case",
    "g-identity",
    "remark4",
    "remark5",
    "arithmetic",
    "engines",
)


# Per-process counting context; worker processes set their own
_cache: Optional[CountCache] = None
_caps: Optional[EngineCaps] = None


def _set_context(caps: Optional[EngineCaps], cache: Optional[CountCache]):
    global _cache, _caps
    _caps, _cache = caps, cache


def _init_worker(caps: EngineCaps):
    _set_context(caps, CountCache())


def _count(region: TriRegion, engine: EngineKind) -> int:
    if _cache is not None:
        hit = _cache.get(region, engine.value)
        if hit is not None:
            return hit
    value = count_tilings(region, engine, caps=_caps)
    if _cache is not None:
        _cache.put(region, engine.value, value)
    return value


def _report(
    identity: str,
    params: Dict[str, Any],
    lhs: Fraction | int,
    rhs: Fraction | int,
    started: float,
    engine: Optional[EngineKind] = None,
    reason: Optional[str] = None,
) -> VerificationReport:
    return VerificationReport(
        identity=identity,
        params=params,
        lhs=str(lhs),
        rhs=str(rhs),
        passed=Fraction(lhs) == Fraction(rhs),
        engine=engine.value if engine is not None else None,
        elapsed_ms=round((time.perf_counter() - started) * 1000, 3),
        reason=reason,
    )


def _fern_params(x: int, y: int, z: int, spec: FernSpec) -> Dict[str, Any]:
    return {"x": x, "y": y, "z": z, "lobes": list(spec.lobes)}


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------


def check_macmahon(a: int, b: int, c: int, engine: EngineKind = EngineKind.AUTO) -> VerificationReport:
    started = time.perf_counter()
    lhs = _count(hexagon((a, b, c, a, b, c)), engine)
    return _report("macmahon", {"a": a, "b": b, "c": c}, lhs, macmahon_p(a, b, c), started, engine)


def check_semihex(blocks: Sequence[int], engine: EngineKind = EngineKind.AUTO) -> VerificationReport:
    started = time.perf_counter()
    lhs = _count(semihexagon(blocks), engine)
    return _report("semihex", {"blocks": list(blocks)}, lhs, semihex_s(blocks), started, engine)


def check_theorem21(
    x: int,
    y: int,
    z: int,
    spec: FernSpec,
    engine: EngineKind = EngineKind.AUTO,
    formula: Optional[FormulaFn] = None,
) -> VerificationReport:
    """Count of the F-cored hexagon against the product formula."""
    started = time.perf_counter()
    params = _fern_params(x, y, z, spec)
    region = f_cored_hexagon(x, y, z, spec)
    try:
        lhs = _count(region, engine)
        rhs = (formula or fc_count_formula)(x, y, z, spec)
    except FernhexError as e:
        return VerificationReport(
            identity="theorem21",
            params=params,
            passed=False,
            engine=engine.value,
            elapsed_ms=round((time.perf_counter() - started) * 1000, 3),
            reason=str(e),
        )
    return _report("theorem21", params, lhs, rhs, started, engine)


def kuo_variant(x: int, y: int, z: int, spec: FernSpec) -> KuoVariant:
    kind = placement_kind(x, y, z)
    even = spec.k % 2 == 0
    if kind is PlacementKind.CENTER:
        return KuoVariant.SAME_PARITY
    if kind is PlacementKind.WEST:
        return KuoVariant.X_OPPOSITE
    if kind is PlacementKind.SOUTH_WEST:
        return KuoVariant.Z_OPPOSITE_EVEN_K if even else KuoVariant.Z_OPPOSITE_ODD_K
    return KuoVariant.Y_OPPOSITE_EVEN_K if even else KuoVariant.Y_OPPOSITE_ODD_K


RegionArgs = Tuple[int, int, int, FernSpec]


def kuo_terms(
    variant: KuoVariant, x: int, y: int, z: int, spec: FernSpec
) -> Tuple[Tuple[RegionArgs, RegionArgs], Tuple[RegionArgs, RegionArgs], Tuple[RegionArgs, RegionArgs]]:
    """Region parameters of the products L1*L2 = R1*R2 + R3*R4."""
    variant = KuoVariant(variant)
    if min(x, y, z) < 1:
        raise PreconditionViolated(f"condensation needs x, y, z >= 1, got ({x},{y},{z})")
    if kuo_variant(x, y, z, spec) is not variant:
        raise PreconditionViolated(
            f"variant {variant.value} does not match ({x},{y},{z}) with k={spec.k}"
        )
    rev = spec.reversed()
    if variant in (KuoVariant.SAME_PARITY, KuoVariant.X_OPPOSITE):
        return (
            ((x, y, z, spec), (x, y - 1, z - 1, spec)),
            ((x, y - 1, z, spec), (x, y, z - 1, spec)),
            ((x - 1, y, z, spec), (x + 1, y - 1, z - 1, spec)),
        )
    # the reversed fern sits on the other side of the middle line for odd k
    odd_k = variant in (KuoVariant.Z_OPPOSITE_ODD_K, KuoVariant.Y_OPPOSITE_ODD_K)
    flipped = (x - 1, z, y, rev) if odd_k else (x - 1, y, z, rev)
    if variant in (KuoVariant.Z_OPPOSITE_EVEN_K, KuoVariant.Z_OPPOSITE_ODD_K):
        return (
            ((x, y, z, spec), (x - 1, y - 1, z, spec)),
            ((x, y - 1, z, spec), flipped),
            ((x, y, z - 1, spec), (x - 1, y - 1, z + 1, spec)),
        )
    return (
        ((x, y, z, spec), (x - 1, y, z - 1, spec)),
        ((x, y, z - 1, spec), flipped),
        ((x, y - 1, z, spec), (x - 1, y + 1, z - 1, spec)),
    )


def check_kuo(
    variant: KuoVariant,
    x: int,
    y: int,
    z: int,
    spec: FernSpec,
    engine: EngineKind = EngineKind.AUTO,
) -> VerificationReport:
    started = time.perf_counter()
    terms = kuo_terms(variant, x, y, z, spec)
    regions = [[f_cored_hexagon(*args) for args in pair] for pair in terms]
    values = [[_count(r, engine) for r in pair] for pair in regions]
    lhs = values[0][0] * values[0][1]
    rhs = values[1][0] * values[1][1] + values[2][0] * values[2][1]
    params = {"variant": KuoVariant(variant).value, **_fern_params(x, y, z, spec)}
    return _report("kuo", params, lhs, rhs, started, engine)


def base_case_halves(x: int, y: int, spec: FernSpec) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Block lists of the two semihexagons a z = 0 region splits into."""
    if x % 2 or y % 2 or x < 0 or y < 0:
        raise PreconditionViolated(f"base case needs even x, y >= 0, got ({x},{y})")
    lobes = spec.padded_even().lobes
    first = (y // 2, x // 2) + lobes[:-1]
    second = lobes[1:] + (x // 2, y // 2)
    return first, second


def check_base_case(
    x: int, y: int, spec: FernSpec, engine: EngineKind = EngineKind.AUTO
) -> VerificationReport:
    started = time.perf_counter()
    first, second = base_case_halves(x, y, spec)
    lhs = _count(f_cored_hexagon(x, y, 0, spec), engine)
    rhs = _count(semihexagon(first), engine) * _count(semihexagon(second), engine)
    params = {"x": x, "y": y, "lobes": list(spec.lobes)}
    return _report("base-case", params, lhs, rhs, started, engine)


def check_g_identity(x: int, y: int, z: int, spec: FernSpec) -> VerificationReport:
    """g(x,y-1,z;a) g(x-1,y,z;rev a) = g(x,y,z;a) g(x-1,y-1,z;a), odd k via the padded fern."""
    started = time.perf_counter()
    if (x - y) % 2 or (x - z) % 2 == 0:
        raise PreconditionViolated(f"needs x and y of equal parity and z opposite, got ({x},{y},{z})")
    if x < 1 or y < 1:
        raise PreconditionViolated(f"needs x, y >= 1, got ({x},{y})")
    padded = spec.padded_even()
    lhs = g_function(x, y - 1, z, padded) * g_function(x - 1, y, z, padded.reversed())
    rhs = g_function(x, y, z, padded) * g_function(x - 1, y - 1, z, padded)
    return _report("g-identity", _fern_params(x, y, z, spec), lhs, rhs, started)


def check_scalar_identity_413(x: int, y: int, z: int, o: int, e: int) -> VerificationReport:
    started = time.perf_counter()
    lhs, rhs = scalar_identity_413(x, y, z, o, e)
    params = {"x": x, "y": y, "z": z, "o": o, "e": e}
    return _report("scalar-identity", params, lhs, rhs, started)


def check_remark4(spec: FernSpec, engine: EngineKind = EngineKind.AUTO) -> VerificationReport:
    """Smallest hexagon around the fern against the two semihexagon factors."""
    started = time.perf_counter()
    lhs = _count(envelope_hf(spec), engine)
    return _report("remark4", {"lobes": list(spec.lobes)}, lhs, envelope_product(spec), started, engine)


def check_remark5_constancy(spec: FernSpec, max_x: int, max_y: int) -> VerificationReport:
    started = time.perf_counter()
    expected = envelope_product(spec)
    observed = Fraction(expected)
    for x, y in product(range(max_x + 1), range(max_y + 1)):
        value = theorem21_ratio(x, y, y, spec)
        if value != expected:
            observed = value
            break
    params = {"lobes": list(spec.lobes), "max_x": max_x, "max_y": max_y}
    return _report("remark5", params, observed, expected, started)


def check_cored_integral(x: int, y: int, z: int, m: int) -> VerificationReport:
    """Cored-hexagon formula leaves no power of pi and an integer."""
    started = time.perf_counter()
    value = cored_count_exact(x, y, z, m)
    params = {"x": x, "y": y, "z": z, "m": m}
    if value.t != 0:
        return _report("cored-integral", params, value.t, 0, started, reason="pi power left over")
    q = value.q
    return _report("cored-integral", params, q, q.numerator // q.denominator, started)


def check_cored_branches(x: int, y: int, z: int, m: int) -> VerificationReport:
    started = time.perf_counter()
    yz, xy, xz = (cored_count_exact(x, y, z, m, branch).to_fraction() for branch in BRANCHES)
    rhs = xy if xy != yz else xz
    return _report("cored-branches", {"x": x, "y": y, "z": z, "m": m}, yz, rhs, started)


def check_two_lobe_branches(x: int, y: int, z: int, a: int, b: int) -> VerificationReport:
    started = time.perf_counter()
    yz, xy, xz = (two_lobe_ratio(x, y, z, a, b, branch) for branch in BRANCHES)
    rhs = xy if xy != yz else xz
    params = {"x": x, "y": y, "z": z, "a": a, "b": b}
    return _report("two-lobe-branches", params, yz, rhs, started)


def _family_region(family: str, args: Sequence[int]) -> TriRegion:
    if family == "hexagon":
        a, b, c = args
        return hexagon((a, b, c, a, b, c))
    x, y, z, m = args
    return cored_hexagon(x, y, z, m)


def check_engines(family: str, args: Sequence[int], other: EngineKind) -> VerificationReport:
    """Frontier DP against a second engine on one region."""
    started = time.perf_counter()
    region = _family_region(family, args)
    lhs = count_tilings(region, EngineKind.DP, caps=_caps)
    rhs = count_tilings(region, EngineKind(other), caps=_caps)
    params = {"family": family, "args": list(args), "other": EngineKind(other).value}
    return _report("engines", params, lhs, rhs, started, EngineKind.DP)


# ---------------------------------------------------------------------------
# Planning
# ---------------------------------------------------------------------------


def _span(upper: int, lower: int = 0) -> range:
    return range(lower, upper + 1)


def _plan(suite: str, cfg: GridConfig) -> List[Task]:
    n, lobe, k = cfg.max_xyz, cfg.max_lobe, cfg.max_k
    ferns = list(grid_ferns(k, lobe))
    tasks: List[Task] = []
    if suite == "macmahon":
        for a, b, c in product(_span(n), repeat=3):
            tasks.append(("macmahon", {"a": a, "b": b, "c": c}))
    elif suite == "semihex":
        for spec in grid_ferns(k + 1, lobe):
            tasks.append(("semihex", {"blocks": list(spec.lobes)}))
    elif suite == "theorem21":
        for (x, y, z), spec in product(product(_span(n), repeat=3), ferns):
            tasks.append(("theorem21", _fern_params(x, y, z, spec)))
    elif suite == "kuo":
        for (x, y, z), spec in product(product(_span(n, 1), repeat=3), grid_ferns(min(k, 3), lobe)):
            params = {"variant": kuo_variant(x, y, z, spec).value, **_fern_params(x, y, z, spec)}
            tasks.append(("kuo", params))
    elif suite == "base-case":
        for x, y, spec in product(range(0, n + 1, 2), range(0, n + 1, 2), ferns):
            tasks.append(("base-case", {"x": x, "y": y, "lobes": list(spec.lobes)}))
    elif suite == "g-identity":
        for (x, y, z), spec in product(product(_span(n), repeat=3), ferns):
            if x >= 1 and y >= 1 and (x - y) % 2 == 0 and (x - z) % 2:
                tasks.append(("g-identity", _fern_params(x, y, z, spec)))
        weights = sorted({(spec.o, spec.e) for spec in ferns})
        for (x, y, z), (o, e) in product(product(_span(n), repeat=3), weights):
            if x + y + z + 2 * o + 2 * e < 1:
                continue
            tasks.append(("scalar-identity", {"x": x, "y": y, "z": z, "o": o, "e": e}))
    elif suite == "remark4":
        for spec in grid_ferns(k + 1, lobe):
            tasks.append(("remark4", {"lobes": list(spec.lobes)}))
    elif suite == "remark5":
        for spec in ferns:
            tasks.append(("remark5", {"lobes": list(spec.lobes), "max_x": n, "max_y": n}))
    elif suite == "arithmetic":
        for x, y, z, m in product(_span(n), repeat=4):
            tasks.append(("cored-integral", {"x": x, "y": y, "z": z, "m": m}))
            if x % 2 == y % 2 == z % 2:
                tasks.append(("cored-branches", {"x": x, "y": y, "z": z, "m": m}))
        for (x, y, z), a, b in product(product(_span(n), repeat=3), _span(lobe), _span(lobe)):
            if x % 2 == y % 2 == z % 2:
                tasks.append(("two-lobe-branches", {"x": x, "y": y, "z": z, "a": a, "b": b}))
    elif suite == "engines":
        ryser_cap = cfg.engines.ryser_max_pairs
        families = [("hexagon", list(t)) for t in product(_span(n), repeat=3)]
        families += [("cored", [x, y, z, m]) for (x, y, z), m in product(product(_span(n), repeat=3), _span(lobe))]
        for family, args in families:
            tasks.append(("engines", {"family": family, "args": args, "other": EngineKind.KASTELEYN.value}))
            if len(_family_region(family, args)) // 2 <= ryser_cap:
                tasks.append(("engines", {"family": family, "args": args, "other": EngineKind.RYSER.value}))
    else:
        raise ValueError(f"unknown suite {suite!r}")
    return tasks


def plan_suite(suite: str, cfg: GridConfig) -> List[Task]:
    """Instances of ``suite`` in canonical order; ``all`` concatenates every suite."""
    if suite == "all":
        return [task for name in SUITES for task in _plan(name, cfg)]
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)} or all")
    return _plan(suite, cfg)


# ---------------------------------------------------------------------------
# Execution
# ---------------------------------------------------------------------------


def _dispatch(name: str, p: Dict[str, Any], engine: EngineKind, formula: Optional[FormulaFn]):
    if name == "macmahon":
        return check_macmahon(p["a"], p["b"], p["c"], engine)
    if name == "semihex":
        return check_semihex(p["blocks"], engine)
    if name == "theorem21":
        return check_theorem21(p["x"], p["y"], p["z"], FernSpec(p["lobes"]), engine, formula)
    if name == "kuo":
        return check_kuo(p["variant"], p["x"], p["y"], p["z"], FernSpec(p["lobes"]), engine)
    if name == "base-case":
        return check_base_case(p["x"], p["y"], FernSpec(p["lobes"]), engine)
    if name == "g-identity":
        return check_g_identity(p["x"], p["y"], p["z"], FernSpec(p["lobes"]))
    if name == "scalar-identity":
        return check_scalar_identity_413(p["x"], p["y"], p["z"], p["o"], p["e"])
    if name == "remark4":
        return check_remark4(FernSpec(p["lobes"]), engine)
    if name == "remark5":
        return check_remark5_constancy(FernSpec(p["lobes"]), p["max_x"], p["max_y"])
    if name == "cored-integral":
        return check_cored_integral(p["x"], p["y"], p["z"], p["m"])
    if name == "cored-branches":
        return check_cored_branches(p["x"], p["y"], p["z"], p["m"])
    if name == "two-lobe-branches":
        return check_two_lobe_branches(p["x"], p["y"], p["z"], p["a"], p["b"])
    if name == "engines":
        return check_engines(p["family"], p["args"], EngineKind(p["other"]))
    raise ValueError(f"unknown check {name!r}")


def run_task(task: Task, engine: EngineKind = EngineKind.AUTO, formula: Optional[FormulaFn] = None) -> VerificationReport:
    """Run one planned instance; skipped when a fern does not fit, failed on any other error."""
    name, params = task
    started = time.perf_counter()
    try:
        return _dispatch(name, params, engine, formula)
    except FernDoesNotFit as e:
        logger.warning(f"Skipping {name} {params}: {e}")
        reason = str(e)
        skipped = True
    except DivisionByZero as e:
        logger.warning(f"Skipping {name} {params}: {e}")
        reason = f"vacuous: {e}"
        skipped = True
    except FernhexError as e:
        logger.error(f"{name} {params} failed: {e}")
        reason = str(e)
        skipped = False
    return VerificationReport(
        identity=name,
        params=params,
        passed=False,
        skipped=skipped,
        engine=engine.value,
        elapsed_ms=round((time.perf_counter() - started) * 1000, 3),
        reason=reason,
    )


def _run_batch(
    tasks: List[Task], engine: EngineKind, formula: Optional[FormulaFn]
) -> List[VerificationReport]:
    return [run_task(task, engine, formula) for task in tasks]


async def _run_parallel(
    tasks: List[Task], cfg: GridConfig, formula: Optional[FormulaFn], batch_size: int
) -> List[VerificationReport]:
    loop = asyncio.get_running_loop()
    batches = [tasks[i : i + batch_size] for i in range(0, len(tasks), batch_size)]
    with ProcessPoolExecutor(
        max_workers=cfg.jobs, initializer=_init_worker, initargs=(cfg.engines,)
    ) as pool:
        futures = [
            loop.run_in_executor(pool, _run_batch, batch, cfg.engine, formula) for batch in batches
        ]
        results = await asyncio.gather(*futures)
    return [report for batch in results for report in batch]


def summarize(reports: Sequence[VerificationReport]) -> SuiteSummary:
    skipped = sum(1 for r in reports if r.skipped)
    passed = sum(1 for r in reports if r.passed)
    return SuiteSummary(
        total=len(reports), passed=passed, failed=len(reports) - passed - skipped, skipped=skipped
    )


def run_suite(
    cfg: GridConfig,
    suite: str = "all",
    formula_override: Optional[FormulaFn] = None,
    cache: Optional[CountCache] = None,
    batch_size: int = 16,
) -> SuiteResult:
    """Run every instance of ``suite`` within ``cfg``.

    ``formula_override`` replaces the product formula in the theorem checks; it
    must be a module-level function when ``cfg.jobs > 1``.
    """
    tasks = plan_suite(suite, cfg)
    logger.info(f"Running suite {suite}: {len(tasks)} instances, jobs={cfg.jobs}")
    started = time.perf_counter()

    if cfg.jobs <= 1:
        previous = (_caps, _cache)
        _set_context(cfg.engines, cache if cache is not None else CountCache())
        try:
            reports = _run_batch(tasks, cfg.engine, formula_override)
        finally:
            _set_context(*previous)
    else:
        reports = asyncio.run(_run_parallel(tasks, cfg, formula_override, batch_size))

    metrics = get_metrics()
    if metrics:
        for report in reports:
            outcome = "skip" if report.skipped else ("pass" if report.passed else "fail")
            metrics.record_verification(report.identity, outcome)

    summary = summarize(reports)
    logger.info(
        f"Suite {suite} finished in {time.perf_counter() - started:.1f}s: "
        f"{summary.passed} passed, {summary.failed} failed, {summary.skipped} skipped"
    )
    return SuiteResult(suite=suite, reports=reports, summary=summary)
