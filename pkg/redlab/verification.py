# verification.py
"""Seeded property suites behind `redlab verify`, with brute-force comparators and CSV reports."""
import csv
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Optional, TextIO, Tuple

import numpy as np

from .codec import encode_point, encode_schedule
from .errors import InvalidInputError
from .hierarchy import ReducibilityRegistry, seed_edges
from .models import (
    AffineTail,
    BlockVector,
    CaseResult,
    OpenInterval,
    OuterNorm,
    ParamSchedule,
    PeriodicPoint,
    PointX0,
    RunConfig,
    SumSpace,
)
from .norms import eq_const_closed_form, lemma_2_1_bounds, lemma_2_4_check, oracle_profile
from .reductions import (
    LP,
    direct_sum_related,
    divergence_profile,
    gen_params,
    h_direct_sum,
    prop_2_5_conclusion_check,
    space_for,
    summand_detect,
    truncated_eq_const,
    validate_schedule,
    x_alpha,
)
from .relations import e0_decide, e1_decide, eplus_decide, h0_decide, j_embed, product_decide
from . import sampling
from .utils import derive_seed, format_float, inputs_digest, relative_gap, within

logger = logging.getLogger(__name__)

CSV_COLUMNS = ("suite", "case_id", "inputs_digest", "lhs", "rhs", "holds", "slack")

DIVERGENCE_BOUND = 1e3
# (base_p, n_max, margin): long enough for the unrelated constant to pass the bound
CROSSING_SCHEDULE = (1.0, 30, 0.5)


# ---------------------------------------------------------------------------
# Brute-force comparators
# ---------------------------------------------------------------------------

def _x0_horizon(a: PointX0, b: PointX0) -> int:
    return 4 * (
        max(len(a.prefix), len(b.prefix))
        + math.lcm(a.tail.modulus, b.tail.modulus)
        + 64
        + max(a.tail.offset, b.tail.offset)
    )


def brute_h0(a: PointX0, b: PointX0) -> Tuple[bool, int]:
    """Expand both points and compare the difference on two late windows one half-horizon apart."""
    horizon = _x0_horizon(a, b)
    window = math.lcm(a.tail.modulus, b.tail.modulus)
    diffs = [abs(x - y) for x, y in zip(a.coordinates(horizon), b.coordinates(horizon))]
    middle = max(diffs[horizon // 2: horizon // 2 + window])
    late = max(diffs[horizon - window:])
    return middle == late, max(diffs)


def brute_eventual(a: PeriodicPoint, b: PeriodicPoint) -> bool:
    horizon = 4 * (max(len(a.prefix), len(b.prefix)) + math.lcm(len(a.period), len(b.period)) + 64)
    return a.values(horizon)[horizon // 2:] == b.values(horizon)[horizon // 2:]


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

def _case(suite: str, case_id: str, inputs: Any, lhs: float, rhs: float, holds: bool, slack: Optional[float] = None) -> CaseResult:
    return CaseResult(
        suite=suite,
        case_id=case_id,
        inputs_digest=inputs_digest(inputs),
        lhs=float(lhs),
        rhs=float(rhs),
        holds=bool(holds),
        slack=float(rhs - lhs if slack is None else slack),
    )


def _lemma21(case_id: str, rng: np.random.Generator, config: RunConfig) -> CaseResult:
    c = float(rng.uniform(1.0, 4.0))
    p, q = (float(v) for v in rng.uniform(1.0, c, size=2))
    K = int(rng.integers(1, 10 ** 6 + 1))
    check = lemma_2_1_bounds(p, q, K, c, config.tolerance)
    slack = min(check.upper - check.constant, check.constant - check.lower)
    return _case("lemma21", case_id, [p, q, K, c], check.constant, check.upper, check.holds, slack)


def _lemma24(case_id: str, rng: np.random.Generator, config: RunConfig) -> CaseResult:
    p = float(rng.uniform(1.0, 2.0))
    space = sampling.random_space(rng, p, max_blocks=8, max_dim=8)
    k = int(rng.integers(1, 33))
    family = sampling.random_disjoint_family(rng, space, k)
    check = lemma_2_4_check(family, p, 1.0, config.tolerance)
    return _case("lemma24", case_id, [p, space.model_dump(mode="json"), k], check.lhs, check.rhs, check.holds)


def _lemma24_tight(case_id: str, rng: np.random.Generator, config: RunConfig) -> CaseResult:
    r = float(rng.uniform(1.0, 2.0))
    K = int(rng.integers(1, 33))
    k = int(rng.integers(1, K + 1))
    space = SumSpace.build(OuterNorm.lp(r), [(r, K)])
    family = [BlockVector.unit(space, 0, i) for i in range(k)]
    check = lemma_2_4_check(family, r, 1.0, config.tolerance)
    tight = relative_gap(check.lhs, check.rhs) <= config.tolerance
    return _case("lemma24", case_id, [r, K, k], check.lhs, check.rhs, check.holds and tight)


def _schedule(rng: np.random.Generator, config: RunConfig, flavor: str = LP, n_max: Optional[int] = None) -> ParamSchedule:
    base_p = round(float(rng.uniform(1.0, 1.8)), 3)
    margin = round(float(rng.uniform(0.2, 0.9)), 3)
    return gen_params(flavor, base_p, n_max or config.n_max, margin, config.max_log_k)


def _related_pair(rng: np.random.Generator) -> Tuple[PointX0, PointX0, int]:
    while True:
        a, b = sampling.random_x0_pair(rng)
        verdict = h0_decide(a, b)
        if verdict.related and verdict.witness <= 8:
            return a, b, verdict.witness


def _cor22(case_id: str, rng: np.random.Generator, config: RunConfig, schedule: Optional[ParamSchedule]) -> CaseResult:
    s = schedule or _schedule(rng, config)
    a, b, witness = _related_pair(rng)
    d1, d2 = space_for(a, s), space_for(b, s)
    constants = [truncated_eq_const(d1, d2, n) for n in range(1, s.n_max + 1)]
    bound = math.exp(2 * witness)
    holds = all(within(c, bound, config.tolerance) for c in constants)
    inputs = [encode_schedule(s), encode_point(a), encode_point(b)]
    return _case("cor22", case_id, inputs, max(constants), bound, holds)


def _cor22_divergence(case_id: str, rng: np.random.Generator, config: RunConfig, schedule: Optional[ParamSchedule]) -> CaseResult:
    s = schedule or _schedule(rng, config)
    top, zero = PointX0(tail=AffineTail(r=1)), PointX0()
    rows = divergence_profile(space_for(top, s), space_for(zero, s))
    increasing = all(later.constant > earlier.constant for earlier, later in zip(rows[1:], rows[2:]))
    floored = all(within(row.lower_bound, row.constant, config.tolerance) for row in rows)
    last = rows[-1]
    return _case("cor22", case_id, encode_schedule(s), last.lower_bound, last.constant, increasing and floored)


def _cor22_crossing(config: RunConfig) -> CaseResult:
    """First N at which the (Affine(1), zero) constant passes DIVERGENCE_BOUND on the long schedule."""
    base_p, n_max, margin = CROSSING_SCHEDULE
    s = gen_params(LP, base_p, n_max, margin, config.max_log_k)
    rows = divergence_profile(space_for(PointX0(tail=AffineTail(r=1)), s), space_for(PointX0(), s))
    crossing = next((row.n for row in rows if row.constant > DIVERGENCE_BOUND), None)
    if crossing is None:
        logger.warning(f"truncated constant stays below {DIVERGENCE_BOUND} up to N = {n_max}")
        return _case("cor22", "cor22-crossing", encode_schedule(s), math.inf, n_max, False, -math.inf)
    tail = rows[crossing - 1:]
    increasing = all(later.constant > earlier.constant for earlier, later in zip(tail, tail[1:]))
    logger.info(f"truncated constant exceeds {DIVERGENCE_BOUND} from N = {crossing} of {n_max}")
    return _case("cor22", "cor22-crossing", encode_schedule(s), crossing, n_max, increasing)


def _prop25(case_id: str, rng: np.random.Generator, config: RunConfig, schedule: Optional[ParamSchedule]) -> CaseResult:
    s = schedule or _schedule(rng, config)
    if rng.random() < 0.5:
        a, b, witness = _related_pair(rng)
        C = max(witness, 1)
        rows = prop_2_5_conclusion_check(space_for(a, s), space_for(b, s), C, config.tolerance)
        failed = sum(not row.holds for row in rows)
        return _case("prop25", case_id, [encode_schedule(s), encode_point(a), encode_point(b), C], failed, 0, failed == 0)
    # a fixed C fails exactly on the blocks n > C + 1
    C = int(rng.integers(1, 6))
    rows = prop_2_5_conclusion_check(
        space_for(PointX0(tail=AffineTail(r=1)), s), space_for(PointX0(), s), C, config.tolerance
    )
    failed = [row.n for row in rows if not row.holds]
    expected = [n for n in range(1, s.n_max + 1) if n - 1 > C]
    return _case("prop25", case_id, [encode_schedule(s), C], len(failed), len(expected), failed == expected, 0.0)


def _eplus(case_id: str, rng: np.random.Generator, config: RunConfig) -> CaseResult:
    base = Fraction(int(rng.integers(0, 4)), 4) + 1
    interval = OpenInterval.above(base)
    pool = sampling.interval_pool(interval)
    b1, b2 = sampling.random_cycle_pair(rng, interval, pool)
    x1, x2 = x_alpha(b1, base), x_alpha(b2, base)
    agrees = eplus_decide(b1, b2) == (x1.part_set == x2.part_set)
    probes = list(pool) + [base, interval.lo, Fraction(2)]
    detects = all(summand_detect(q, x1) == (q == base or q in b1.value_set) for q in probes)
    return _case("eplus", case_id, [encode_point(b1), encode_point(b2)], 0, 0, agrees and detects, 0.0)


def _j_embed(case_id: str, rng: np.random.Generator, config: RunConfig) -> CaseResult:
    a, b = sampling.random_periodic_pair(rng, sampling.bit_pool())
    agrees = e0_decide(a, b) == h0_decide(j_embed(a), j_embed(b)).related
    return _case("j-embed", case_id, [encode_point(a), encode_point(b)], 0, 0, agrees, 0.0)


def _oracle(case_id: str, rng: np.random.Generator, config: RunConfig, p, q, K: int) -> CaseResult:
    closed = eq_const_closed_form(p, q, K)
    result = oracle_profile(p, q, K, config.samples, int(rng.integers(0, 2 ** 63)), config.oracle_bound)
    agrees = relative_gap(result.value, closed) <= 1e-6
    not_beaten = within(result.sample_max, closed, config.tolerance)
    return _case("oracle", case_id, [str(p), str(q), K], result.value, closed, agrees and not_beaten)


def _schedules(case_id: str, rng: np.random.Generator, config: RunConfig) -> CaseResult:
    flavor, base_p, n_max, margin = sampling.random_schedule_args(rng, config.n_max)
    s = gen_params(flavor, base_p, n_max, margin, config.max_log_k)
    a, b = sampling.random_point_x0(rng), sampling.random_point_x0(rng)
    clauses = validate_schedule(s, points=(a, b))
    slack = min(clause.slack for clause in clauses)
    return _case("schedules", case_id, [flavor, base_p, n_max, margin], 0.0, slack, all(c.holds for c in clauses) and slack > 0)


def _equivalence_laws(decide: Callable[[Any, Any], bool], x, y, z) -> bool:
    if not decide(x, x):
        return False
    if decide(x, y) != decide(y, x):
        return False
    if decide(x, y) and decide(y, z) and not decide(x, z):
        return False
    return True


def _deciders(case_id: str, rng: np.random.Generator, config: RunConfig) -> CaseResult:
    relation = ("H0", "E0", "E1")[int(rng.integers(0, 3))]
    if relation == "H0":
        a, b = sampling.random_x0_pair(rng)
        c = sampling.nearby_point_x0(rng, b) if rng.random() < 0.5 else sampling.random_point_x0(rng)
        verdict = h0_decide(a, b)
        related, witness = brute_h0(a, b)
        agrees = verdict.related == related and (not related or verdict.witness == witness)
        laws = _equivalence_laws(lambda x, y: h0_decide(x, y).related, a, b, c)
        ab, bc, ac = h0_decide(a, b), h0_decide(b, c), h0_decide(a, c)
        if ab.related and bc.related:
            laws = laws and ac.related and ac.witness <= ab.witness + bc.witness
    else:
        pool = sampling.bit_pool() if relation == "E0" else sampling.RATIONAL_POOL
        domain = "bits" if relation == "E0" else "rationals"
        decide = e0_decide if relation == "E0" else e1_decide
        a, b = sampling.random_periodic_pair(rng, pool, domain)
        c = sampling.eventually_equal_partner(rng, b, pool) if rng.random() < 0.5 else sampling.random_periodic_point(rng, pool, domain)
        agrees = decide(a, b) == brute_eventual(a, b)
        laws = _equivalence_laws(decide, a, b, c)
    inputs = [relation, encode_point(a), encode_point(b), encode_point(c)]
    return _case("deciders", case_id, inputs, 0, 0, agrees and laws, 0.0)


def _product(case_id: str, rng: np.random.Generator, config: RunConfig, schedules: Dict[Fraction, ParamSchedule]) -> CaseResult:
    p = (Fraction(1), Fraction(6, 5), Fraction(5, 4), Fraction(3, 2))[int(rng.integers(0, 4))]
    interval = OpenInterval.above(p)
    pool = sampling.interval_pool(interval)
    a1, a2 = sampling.random_x0_pair(rng)
    b1, b2 = sampling.random_cycle_pair(rng, interval, pool)
    s = schedules[p]
    h1, h2 = h_direct_sum(a1, b1, p, schedule=s), h_direct_sum(a2, b2, p, schedule=s)
    verdict = direct_sum_related(h1, h2, config.tolerance)
    expected = product_decide("H0", "=+", (a1, b1), (a2, b2))
    inputs = [str(p), encode_point(a1), encode_point(b1), encode_point(a2), encode_point(b2)]
    return _case("product", case_id, inputs, verdict.left_constant, verdict.left_bound or math.inf, verdict.related == expected)


def _hierarchy_cases(config: RunConfig) -> List[CaseResult]:
    registry = ReducibilityRegistry.seeded()
    expected = {(a, b, strict) for a, b, strict, _ in seed_edges()}
    return [
        _case("hierarchy", "hierarchy-edges", "edges", len(registry.edge_set()), len(expected), registry.edge_set() == expected, 0.0),
        _case("hierarchy", "hierarchy-acyclic", "acyclic", 0, 0, registry.strict_part_acyclic(), 0.0),
        _case(
            "hierarchy",
            "hierarchy-dot",
            "dot",
            0,
            0,
            registry.export_dot() == ReducibilityRegistry.seeded().export_dot(),
            0.0,
        ),
    ]


class VerificationRunner:
    """Runs property suites; case i of a suite draws from derive_seed(seed, case_id)."""

    SUITES = ("lemma21", "lemma24", "cor22", "prop25", "eplus", "j-embed", "oracle", "schedules", "deciders", "product", "hierarchy")

    def __init__(self, config: RunConfig, schedule: Optional[ParamSchedule] = None):
        self.config = config
        self.schedule = schedule

    def _fan_out(self, suite: str, count: int, check: Callable[[str, np.random.Generator], CaseResult]) -> List[CaseResult]:
        case_ids = [f"{suite}-{i:04d}" for i in range(count)]

        def run(case_id: str) -> CaseResult:
            return check(case_id, np.random.default_rng(derive_seed(self.config.seed, case_id)))

        with ThreadPoolExecutor(max_workers=self.config.workers) as pool:
            return list(pool.map(run, case_ids))

    def run_suite(self, suite: str) -> List[CaseResult]:
        config = self.config
        cases = config.cases
        logger.info(f"running suite {suite} with {cases} cases, seed {config.seed}")
        if suite == "lemma21":
            results = self._fan_out(suite, cases, lambda cid, rng: _lemma21(cid, rng, config))
        elif suite == "lemma24":
            results = self._fan_out(suite, cases, lambda cid, rng: _lemma24(cid, rng, config))
            results += self._fan_out("lemma24-tight", max(1, cases // 10), lambda cid, rng: _lemma24_tight(cid, rng, config))
        elif suite == "cor22":
            results = self._fan_out(suite, cases, lambda cid, rng: _cor22(cid, rng, config, self.schedule))
            results += self._fan_out(
                "cor22-divergence", max(1, cases // 10), lambda cid, rng: _cor22_divergence(cid, rng, config, self.schedule)
            )
            results.append(_cor22_crossing(config))
        elif suite == "prop25":
            results = self._fan_out(suite, cases, lambda cid, rng: _prop25(cid, rng, config, self.schedule))
        elif suite == "eplus":
            results = self._fan_out(suite, cases, lambda cid, rng: _eplus(cid, rng, config))
        elif suite == "j-embed":
            results = self._fan_out(suite, cases, lambda cid, rng: _j_embed(cid, rng, config))
        elif suite == "oracle":
            results = self._oracle_grid()
        elif suite == "schedules":
            results = self._fan_out(suite, cases, lambda cid, rng: _schedules(cid, rng, config))
        elif suite == "deciders":
            results = self._fan_out(suite, cases, lambda cid, rng: _deciders(cid, rng, config))
        elif suite == "product":
            schedules = {
                p: gen_params(LP, float((p + 1) / 2), min(config.n_max, 8), config.margin, config.max_log_k)
                for p in (Fraction(1), Fraction(6, 5), Fraction(5, 4), Fraction(3, 2))
            }
            results = self._fan_out(suite, cases, lambda cid, rng: _product(cid, rng, config, schedules))
        elif suite == "hierarchy":
            results = _hierarchy_cases(config)
        else:
            raise InvalidInputError(f"unknown suite {suite!r}")
        failed = sum(not r.holds for r in results)
        if failed:
            logger.warning(f"suite {suite}: {failed} of {len(results)} cases fail")
        else:
            logger.info(f"suite {suite}: all {len(results)} cases hold")
        return results

    def _oracle_grid(self) -> List[CaseResult]:
        grid = [
            (p, q, K)
            for p in sampling.ORACLE_EXPONENTS
            for q in sampling.ORACLE_EXPONENTS
            for K in range(1, min(16, self.config.oracle_bound) + 1)
        ]
        config = self.config

        def check(case_id: str, rng: np.random.Generator) -> CaseResult:
            p, q, K = grid[int(case_id.rsplit("-", 1)[1])]
            return _oracle(case_id, rng, config, p, q, K)

        return self._fan_out("oracle", len(grid), check)

    def run(self, suites: Iterable[str]) -> List[CaseResult]:
        results: List[CaseResult] = []
        for suite in suites:
            results.extend(self.run_suite(suite))
        return results


def expand_suites(suite: str) -> Tuple[str, ...]:
    if suite == "all":
        return VerificationRunner.SUITES
    if suite not in VerificationRunner.SUITES:
        raise InvalidInputError(f"unknown suite {suite!r}")
    return (suite,)


def write_report(results: Iterable[CaseResult], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in results:
        writer.writerow(
            [
                r.suite,
                r.case_id,
                r.inputs_digest,
                format_float(r.lhs),
                format_float(r.rhs),
                "true" if r.holds else "false",
                format_float(r.slack),
            ]
        )


def summary_line(suite: str, results: List[CaseResult]) -> str:
    failed = sum(not r.holds for r in results)
    return f"suite={suite} cases={len(results)} holds={len(results) - failed} failed={failed}"
