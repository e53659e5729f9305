# reductions.py
"""Parameter schedules, the reduction maps into sum spaces, and their truncation-scale checks."""
import logging
import math
from typing import Iterable, List, Optional, Sequence, Union

from .errors import (
    InfeasibleScheduleError,
    InvalidInputError,
    ScheduleInvalidError,
    ScheduleMismatchError,
    TypeMismatchError,
    ValueOutsideIntervalError,
)
from .models import (
    LOG_EXACT_DIM_LIMIT,
    BlockSpec,
    ChainRow,
    ClauseResult,
    CycleListPoint,
    DirectSumDescriptor,
    Exponent,
    FrozenModel,
    GapRow,
    LpSumDescriptor,
    OuterNorm,
    ParamSchedule,
    PointX0,
    SpaceDescriptor,
    SumSpace,
)
from .norms import log_eq_const
from .relations import h0_decide
from .utils import TOLERANCE, to_fraction, within

logger = logging.getLogger(__name__)

LP = "lp"
C0 = "c0"
FLAVORS = (LP, C0)

GAP_SLACK = 1.1
DEFAULT_MAX_LOG_K = 5e5
C0_FIRST_EXPONENT = 1.5


def _inv(log_k: float) -> float:
    return math.inf if log_k <= 0.0 else 1.0 / log_k


def _basel(n_max: int) -> float:
    return math.fsum(1.0 / m ** 2 for m in range(1, n_max + 1))


def series_budget(flavor: str, base_p: float, margin: float) -> float:
    """Upper bound allowed for sum_n n/log K_n."""
    if flavor == LP:
        return margin * (2.0 - base_p) / 4.0
    return margin / 8.0


def _check_generator_args(flavor: str, base_p: float, n_max: int, margin: float) -> None:
    if flavor not in FLAVORS:
        raise InvalidInputError(f"flavor must be one of {FLAVORS}, got {flavor!r}")
    if not 1.0 <= base_p < 2.0:
        raise InvalidInputError(f"base exponent must lie in [1, 2), got {base_p}")
    if n_max < 1:
        raise InvalidInputError(f"n_max must be >= 1, got {n_max}")
    if not 0.0 < margin < 1.0:
        raise InvalidInputError(f"margin must lie in (0, 1), got {margin}")


def gen_params(
    flavor: str,
    base_p: float,
    n_max: int,
    margin: float,
    max_log_k: float = DEFAULT_MAX_LOG_K,
) -> ParamSchedule:
    """Build K_n = ceil(exp(c n^3)) and exponents p_n sitting 10% inside every gap constraint.

    c is the smallest growth constant making sum_n n/log K_n fit the series
    budget; it is capped so that log K_{n_max} <= max_log_k.
    """
    _check_generator_args(flavor, base_p, n_max, margin)
    budget = series_budget(flavor, base_p, margin)
    growth = max(math.log(4.0), GAP_SLACK * _basel(n_max) / budget)
    if growth * n_max ** 3 > max_log_k:
        capped = max_log_k / n_max ** 3
        logger.warning(f"growth constant {growth:.6g} exceeds the log K cap {max_log_k:g}; using {capped:.6g}")
        growth = capped

    K: List[Optional[int]] = []
    log_K: List[float] = []
    for n in range(1, n_max + 1):
        exponent = growth * n ** 3
        if exponent < LOG_EXACT_DIM_LIMIT:
            k = max(1, math.ceil(math.exp(exponent)))
            K.append(k)
            log_K.append(math.log(k))
        else:
            K.append(None)
            log_K.append(exponent)

    if flavor == LP:
        p_seq = [base_p + (2.0 - base_p) / 2.0]
        for n in range(1, n_max):
            p_seq.append(p_seq[-1] - GAP_SLACK * (n + 1) * _inv(log_K[n]))
    else:
        p_seq = [C0_FIRST_EXPONENT]
        for n in range(1, n_max):
            p_seq.append(p_seq[-1] - 2.0 * GAP_SLACK * n * _inv(log_K[n - 1]))

    schedule = ParamSchedule(
        flavor=flavor,
        base_p=base_p,
        n_max=n_max,
        K=tuple(K),
        log_K=tuple(log_K),
        p_seq=tuple(p_seq),
        margin=margin,
        growth=growth,
    )
    failing = [clause for clause in validate_schedule(schedule) if not clause.holds]
    if failing:
        first = failing[0]
        logger.warning(f"{flavor} schedule infeasible for base {base_p}, n_max {n_max}: {first.clause}")
        raise InfeasibleScheduleError(
            f"no {flavor} schedule for base {base_p}, n_max {n_max}, margin {margin}: "
            f"clause '{first.clause}' fails with slack {first.slack:.6g}",
            clause=first.clause,
        )
    logger.info(f"generated {flavor} schedule: base {base_p}, n_max {n_max}, growth {growth:.6g}")
    return schedule


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def _clause(name: str, slacks: Iterable[float], strict: bool = True) -> ClauseResult:
    slack = min(slacks, default=math.inf)
    holds = slack > 0.0 if strict else slack >= 0.0
    return ClauseResult(clause=name, holds=bool(holds), slack=slack)


def _growth_slack(s: ParamSchedule, n: int) -> float:
    k_prev, k_cur = s.k_exact(n - 1), s.k_exact(n)
    if k_prev is not None and k_cur is not None:
        return float(k_cur - n * n * k_prev)
    return s.log_k(n) - (2.0 * math.log(n) + s.log_k(n - 1))


def _first_block_slack(s: ParamSchedule) -> float:
    k = s.k_exact(1)
    if k is not None:
        return float(k - 4)
    return s.log_k(1) - math.log(4.0)


def perturbed_exponents(s: ParamSchedule, point: PointX0) -> List[float]:
    """e_n = p_n + alpha(n)/log K_n for n = 1..n_max."""
    return [s.p(n) + point.coordinate(n) * _inv(s.log_k(n)) for n in range(1, s.n_max + 1)]


def _lp_clauses(s: ParamSchedule) -> List[ClauseResult]:
    ns = range(1, s.n_max + 1)
    pairs = range(1, s.n_max)
    return [
        _clause("K_1 >= 4", [_first_block_slack(s)], strict=False),
        _clause("K_n >= n^2 K_(n-1)", [_growth_slack(s, n) for n in range(2, s.n_max + 1)], strict=False),
        _clause("p < p_n < 2", [min(s.p(n) - s.base_p, 2.0 - s.p(n)) for n in ns]),
        _clause("p_n decreasing", [s.p(n) - s.p(n + 1) for n in pairs]),
        _clause("p_1 + 1/log K_1 < 2", [2.0 - (s.p(1) + _inv(s.log_k(1)))]),
        _clause(
            "p_n - p_(n+1) >= (n+1)/log K_(n+1)",
            [s.p(n) - s.p(n + 1) - (n + 1) * _inv(s.log_k(n + 1)) for n in pairs],
            strict=False,
        ),
        _clause("p_n + (n-1)/log K_n < 2", [2.0 - (s.p(n) + (n - 1) * _inv(s.log_k(n))) for n in ns]),
    ]


def _c0_clauses(s: ParamSchedule) -> List[ClauseResult]:
    ns = range(1, s.n_max + 1)
    pairs = range(1, s.n_max)
    ratio = [n * _inv(s.log_k(n)) for n in ns]
    # worst case of |q_n - p_m| >= min(m,n)/log K_min(m,n) over all perturbations, i < j
    separation = [
        s.p(i) - s.p(j) - (j - 1) * _inv(s.log_k(j)) - ratio[i - 1]
        for i in ns
        for j in range(i + 1, s.n_max + 1)
    ]
    return [
        _clause("p_n > 1", [s.p(n) - 1.0 for n in ns]),
        _clause("p_n decreasing", [s.p(n) - s.p(n + 1) for n in pairs]),
        _clause("1 < p_n + n/log K_n < 2", [min(s.p(n) + ratio[n - 1] - 1.0, 2.0 - s.p(n) - ratio[n - 1]) for n in ns]),
        _clause("n/log K_n decreasing", [ratio[n - 1] - ratio[n] for n in pairs]),
        _clause("p_n - p_(n+1) >= 2n/log K_n", [s.p(n) - s.p(n + 1) - 2.0 * ratio[n - 1] for n in pairs], strict=False),
        _clause("p_1 + 1/log K_1 < 2", [2.0 - (s.p(1) + _inv(s.log_k(1)))]),
        _clause("|q_n - p_m| >= min(m,n)/log K_min(m,n)", separation, strict=False),
    ]


def _budget_clause(s: ParamSchedule) -> ClauseResult:
    total = math.fsum(n * _inv(s.log_k(n)) for n in range(1, s.n_max + 1))
    return _clause("series budget", [series_budget(s.flavor, s.base_p, s.margin) - total], strict=False)


def _point_clauses(s: ParamSchedule, points: Sequence[PointX0]) -> List[ClauseResult]:
    sequences = [perturbed_exponents(s, point) for point in points]
    pairs = range(s.n_max - 1)
    results = []
    for label, e in zip("ab", sequences):
        if s.flavor == LP:
            results.append(_clause(f"p < e_n < 2 ({label})", [min(x - s.base_p, 2.0 - x) for x in e]))
        else:
            results.append(
                _clause(
                    f"1 < e_n + n/log K_n < 2 ({label})",
                    [
                        min(x + n * _inv(s.log_k(n)) - 1.0, 2.0 - x - n * _inv(s.log_k(n)))
                        for n, x in enumerate(e, start=1)
                    ],
                )
            )
        results.append(_clause(f"e_n decreasing ({label})", [e[i] - e[i + 1] for i in pairs]))
    if s.flavor == C0 and len(sequences) == 2:
        p_seq, q_seq = sequences
        results.append(
            _clause(
                "|q_n - p_m| >= min(m,n)/log K_min(m,n) (a, b)",
                [
                    abs(q_seq[n - 1] - p_seq[m - 1]) - min(m, n) * _inv(s.log_k(min(m, n)))
                    for n in range(1, s.n_max + 1)
                    for m in range(1, s.n_max + 1)
                    if m != n
                ],
                strict=False,
            )
        )
    return results


def validate_schedule(s: ParamSchedule, points: Optional[Sequence[PointX0]] = None) -> List[ClauseResult]:
    """Every constraint clause of the schedule's flavor with its numeric slack.

    With points, the clauses are also evaluated on their perturbed exponent
    sequences.
    """
    clauses = _lp_clauses(s) if s.flavor == LP else _c0_clauses(s)
    if s.margin is not None:
        clauses.append(_budget_clause(s))
    if points:
        clauses.extend(_point_clauses(s, points))
    for clause in clauses:
        if not clause.holds:
            logger.debug(f"clause '{clause.clause}' fails with slack {clause.slack}")
    return clauses


def constant_chain_check(p_k: float, q_k: float, log_k: float, C: float, tol: float = TOLERANCE) -> List[ChainRow]:
    """p_k - q_k <= 4(1/q_k - 1/p_k) <= 8 log C/log(K_k/2) <= 16 log C/log K_k.

    The first row is the hypothesis (K_k/2)^{1/q_k - 1/p_k} <= C^2 in log form.
    """
    if log_k < math.log(4.0):
        raise InvalidInputError("the constant chain needs K_k >= 4")
    if not 1.0 <= q_k <= p_k <= 2.0:
        raise InvalidInputError(f"expected 1 <= q_k <= p_k <= 2, got q_k={q_k}, p_k={p_k}")
    if C < 1.0:
        raise InvalidInputError(f"C must be >= 1, got {C}")
    inverse_gap = 1.0 / q_k - 1.0 / p_k
    log_half = log_k - math.log(2.0)
    steps = [
        ("log hypothesis", inverse_gap * log_half, 2.0 * math.log(C)),
        ("p_k - q_k <= 4(1/q_k - 1/p_k)", p_k - q_k, 4.0 * inverse_gap),
        ("4(1/q_k - 1/p_k) <= 8 log C/log(K_k/2)", 4.0 * inverse_gap, 8.0 * math.log(C) / log_half),
        ("8 log C/log(K_k/2) <= 16 log C/log K_k", 8.0 * math.log(C) / log_half, 16.0 * math.log(C) / log_k),
    ]
    return [ChainRow(step=step, lhs=lhs, rhs=rhs, holds=within(lhs, rhs, tol)) for step, lhs, rhs in steps]


# ---------------------------------------------------------------------------
# Reduction maps
# ---------------------------------------------------------------------------

def ensure_valid_schedule(s: ParamSchedule) -> ParamSchedule:
    failing = [clause.clause for clause in validate_schedule(s) if not clause.holds]
    if failing:
        raise ScheduleInvalidError(f"schedule fails {len(failing)} clause(s): {', '.join(failing)}", clauses=failing)
    return s


def space_for(point: PointX0, s: ParamSchedule) -> SpaceDescriptor:
    """The truncation of l_p(l_{p_n}^{K_n}(alpha)) or c0(l_{p_n}^{K_n}(alpha)) at n_max."""
    ensure_valid_schedule(s)
    exponents = perturbed_exponents(s, point)
    blocks = tuple(
        BlockSpec(exponent=Exponent.of(e), dim=s.k_exact(n), log_dim=s.log_k(n))
        for n, e in enumerate(exponents, start=1)
    )
    outer = OuterNorm.lp(s.base_p) if s.flavor == LP else OuterNorm.c0()
    return SpaceDescriptor(
        space=SumSpace(outer=outer, blocks=blocks),
        schedule=s,
        point=point,
        exponents=tuple(exponents),
    )


def _check_shared(d1: SpaceDescriptor, d2: SpaceDescriptor) -> None:
    if d1.schedule != d2.schedule:
        raise ScheduleMismatchError("descriptors were built from different schedules")


def _log_block_constant(d1: SpaceDescriptor, d2: SpaceDescriptor, n: int) -> float:
    return log_eq_const(d1.exponent(n), d2.exponent(n), d1.schedule.log_k(n))


def truncated_eq_const(d1: SpaceDescriptor, d2: SpaceDescriptor, N: int) -> float:
    """Equivalence constant of the canonical bases truncated to blocks 1..N: the max of blockwise constants."""
    _check_shared(d1, d2)
    if not 1 <= N <= d1.schedule.n_max:
        raise InvalidInputError(f"N must lie in 1..{d1.schedule.n_max}, got {N}")
    log_constant = max(_log_block_constant(d1, d2, n) for n in range(1, N + 1))
    try:
        return math.exp(log_constant)
    except OverflowError:
        return math.inf


class DivergenceRow(FrozenModel):
    n: int
    constant: float
    lower_bound: float


def divergence_profile(d1: SpaceDescriptor, d2: SpaceDescriptor) -> List[DivergenceRow]:
    """Truncated constants for N = 1..n_max with the guaranteed exp(|e_N - e'_N| log K_N / c^2) floor."""
    _check_shared(d1, d2)
    rows = []
    floor = 0.0
    for n in range(1, d1.schedule.n_max + 1):
        e1, e2 = d1.exponent(n), d2.exponent(n)
        c = max(e1, e2)
        floor = max(floor, abs(e1 - e2) * d1.schedule.log_k(n) / c ** 2)
        rows.append(
            DivergenceRow(n=n, constant=truncated_eq_const(d1, d2, n), lower_bound=math.exp(floor))
        )
    return rows


def prop_2_5_conclusion_check(
    d1: SpaceDescriptor, d2: SpaceDescriptor, C: float, tol: float = TOLERANCE
) -> List[GapRow]:
    """Per block: does e_n(d1) - e_n(d2) <= C/log K_n hold?"""
    _check_shared(d1, d2)
    if not C > 0:
        raise InvalidInputError(f"C must be > 0, got {C}")
    rows = []
    for n in range(1, d1.schedule.n_max + 1):
        gap = d1.exponent(n) - d2.exponent(n)
        bound = C * _inv(d1.schedule.log_k(n))
        rows.append(GapRow(n=n, gap=gap, bound=bound, holds=within(gap, bound, tol)))
    return rows


def x_alpha(point: CycleListPoint, base_p) -> LpSumDescriptor:
    """X(alpha): the l_p-sum repeating every l_q, q a value of the point, infinitely often."""
    base = to_fraction(base_p)
    if not 1 <= base < 2:
        raise InvalidInputError(f"base exponent must lie in [1, 2), got {base}")
    outside = sorted(v for v in point.value_set if not base < v < 2)
    if outside:
        raise ValueOutsideIntervalError(f"values {[str(v) for v in outside]} lie outside ]{base}, 2[")
    return LpSumDescriptor(base_p=base, parts=tuple(sorted(point.value_set)))


def summand_detect(q, d: LpSumDescriptor) -> bool:
    """Does l_q embed into the l_p-sum `d`? Only for q = p or q among the parts."""
    q = to_fraction(q)
    if q < 1:
        raise InvalidInputError(f"q must be >= 1, got {q}")
    return q == d.base_p or q in d.part_set


def h_direct_sum(
    a: PointX0,
    b: CycleListPoint,
    p,
    schedule: Optional[ParamSchedule] = None,
    n_max: int = 12,
    margin: float = 0.5,
) -> DirectSumDescriptor:
    """h(a, b) = f(a) + g(b): f over base (p+1)/2, g = X(b) over base p."""
    p = to_fraction(p)
    if not 1 <= p < 2:
        raise InvalidInputError(f"p must lie in [1, 2), got {p}")
    left_base = (p + 1) / 2
    if schedule is None:
        schedule = gen_params(LP, float(left_base), n_max, margin)
    elif schedule.flavor != LP or not math.isclose(schedule.base_p, float(left_base), rel_tol=TOLERANCE):
        raise ScheduleMismatchError(f"h needs an lp schedule over base {float(left_base)}")
    outside = sorted(v for v in b.value_set if not left_base < v < 2)
    if outside:
        raise ValueOutsideIntervalError(f"values {[str(v) for v in outside]} lie outside ]{left_base}, 2[")
    return DirectSumDescriptor(left=space_for(a, schedule), right=x_alpha(b, p), p=p)


def totally_incomparable(h: DirectSumDescriptor) -> bool:
    """No l_q embeds into both sides: the left base exponent is not a summand of the right."""
    return not summand_detect(h.left_base, h.right)


MAPS = (LP, C0, "Lp", "h")


def reduce_point(
    map_name: str,
    point,
    schedule: Optional[ParamSchedule] = None,
    base_p=None,
    p=None,
    cycle: Optional[CycleListPoint] = None,
    n_max: int = 12,
    margin: float = 0.5,
) -> Union[SpaceDescriptor, LpSumDescriptor, DirectSumDescriptor]:
    """Apply the named reduction map to `point`."""
    if map_name in FLAVORS:
        if schedule is None:
            raise InvalidInputError(f"reduce {map_name} needs a schedule")
        if schedule.flavor != map_name:
            raise ScheduleMismatchError(f"reduce {map_name} needs a {map_name} schedule, got {schedule.flavor}")
        if not isinstance(point, PointX0):
            raise TypeMismatchError("the sum-space reductions take an X0 point")
        return space_for(point, schedule)
    if map_name == "Lp":
        if base_p is None:
            raise InvalidInputError("reduce Lp needs a base exponent")
        if not isinstance(point, CycleListPoint):
            raise TypeMismatchError("X(alpha) takes a Pomega point")
        return x_alpha(point, base_p)
    if map_name == "h":
        if p is None or cycle is None:
            raise InvalidInputError("reduce h needs p and a Pomega point")
        if not isinstance(point, PointX0) or not isinstance(cycle, CycleListPoint):
            raise TypeMismatchError("h takes an X0 point and a Pomega point")
        return h_direct_sum(point, cycle, p, schedule, n_max, margin)
    raise InvalidInputError(f"unknown map {map_name!r}, expected one of {', '.join(MAPS)}")


class DirectSumVerdict(FrozenModel):
    left_related: bool
    witness: Optional[int] = None
    left_constant: float
    left_bound: Optional[float] = None
    right_related: bool

    @property
    def related(self) -> bool:
        return self.left_related and self.right_related


def direct_sum_related(h1: DirectSumDescriptor, h2: DirectSumDescriptor, tol: float = TOLERANCE) -> DirectSumVerdict:
    """Product verdict read off the two components of h(a, b) and h(a', b')."""
    if h1.p != h2.p:
        raise ScheduleMismatchError(f"direct sums over p = {h1.p} and p = {h2.p}")
    verdict = h0_decide(h1.left.point, h2.left.point)
    constant = truncated_eq_const(h1.left, h2.left, h1.left.schedule.n_max)
    left_related = False
    bound = None
    if verdict.related:
        bound = math.exp(2 * verdict.witness)
        left_related = within(constant, bound, tol)
        if not left_related:
            logger.error(f"H0-related points with witness {verdict.witness} give constant {constant} > {bound}")
    return DirectSumVerdict(
        left_related=left_related,
        witness=verdict.witness,
        left_constant=constant,
        left_bound=bound,
        right_related=h1.right.part_set == h2.right.part_set,
    )
