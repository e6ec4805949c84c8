"""
Bound formulas and the per-instance measures report.

The report gathers every measure of an instance set that fits within the
run limits, then checks the known inequalities between them. Each check is
a BoundFlag carrying both operands so a failure can be read off directly.
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple, Union

from mindepth.config import RunConfig
from mindepth.errors.handlers import ExactLimitExceeded
from mindepth.measures.utils import (den_exact, den_lower, etd_with_source, hitting_set_min,
                                     hs_lower_bound, maj, mami, max_ones, setd_with_source,
                                     specifying_set_min, strong_specifying_set_direct)
from mindepth.models import BitVector, InstanceSet, tree_depth


logger = logging.getLogger(__name__)

Number = Union[int, float, Fraction]

# float comparisons against log-based bounds
TOLERANCE = 1e-9


# ============================================================================
# Bound Formulas
# ============================================================================

def ceil_log2(n: int) -> int:
    """ceil(log2 n) for n >= 1, computed on integers."""
    return (n - 1).bit_length()


def moshkov_bound(etd_value: int, n: int) -> float:
    """
    Upper bound on the number of queries of the majority/specifying-set
    learner, given E = ETD(A) and n = |A|.

    E >= 4 gives E + (E / log2 E) * log2 n; smaller E gives
    (2E / log2 max(E, 2)) * log2 n. A single row needs no query.
    """
    if n <= 1:
        return 0.0
    if etd_value >= 4:
        return etd_value + etd_value / math.log2(etd_value) * math.log2(n)
    return 2 * etd_value / math.log2(max(etd_value, 2)) * math.log2(n)


def opt_upper_bound(etd_value: int, n: int) -> float:
    """min(n - 1, bound) where ETD <= 1 falls back to n - 1 alone."""
    if etd_value <= 1:
        return float(n - 1)
    return min(float(n - 1), moshkov_bound(etd_value, n))


def greedy_bound(den: Fraction, n: int) -> int:
    """Depth bound for the greedy tree: ceil(DEN * ln n)."""
    if n <= 1:
        return 0
    return math.ceil(float(den) * math.log(n) - TOLERANCE)


def greedy_opt_bound(den: Fraction, n: int, opt: int) -> int:
    """Greedy depth bound relative to OPT: ceil(min(ln2 * DEN, ln n) * OPT)."""
    if n <= 1:
        return 0
    factor = min(math.log(2) * float(den), math.log(n))
    return math.ceil(factor * opt - TOLERANCE)


def default_epsilon(etd_value: int) -> float:
    """ln E / E for E >= 2, else 1/3; always within (0, 1/2]."""
    if etd_value >= 2:
        eps = math.log(etd_value) / etd_value
    else:
        eps = 1 / 3
    return min(max(eps, TOLERANCE), 0.5)


def epsilon_bound(epsilon: float, etd_value: int, n: int) -> float:
    """
    Upper bound on the queries of the epsilon-split learner.

    Balanced steps shrink the live set to at most (1 - eps) of its size,
    specifying steps to below eps of it; the last step may spend up to E
    queries without shrinking by a fixed factor.
    """
    if n <= 1:
        return 0.0
    per_balanced = 1 / math.log2(1 / (1 - epsilon))
    per_specifying = etd_value / math.log2(1 / epsilon)
    return max(per_balanced, per_specifying) * math.log2(n) + etd_value


def epsilon_step_bound(epsilon: float, etd_value: int, n: int) -> int:
    """
    Step-count bound for the epsilon-split learner:
    max(E * ceil(log n / log(1/eps)), ceil(log n / log(1/(1 - eps)))).
    """
    if n <= 1:
        return 0
    specifying = math.ceil(math.log(n) / math.log(1 / epsilon) - TOLERANCE)
    balanced = math.ceil(math.log(n) / math.log(1 / (1 - epsilon)) - TOLERANCE)
    return max(etd_value * specifying, balanced)


def split_bound(etd_value: int, n: int) -> float:
    """(2E / log2 E) * log2 n for E >= 2; n - 1 queries otherwise."""
    if n <= 1:
        return 0.0
    if etd_value < 2:
        return float(n - 1)
    return 2 * etd_value / math.log2(etd_value) * math.log2(n)


# ============================================================================
# Report
# ============================================================================

def fraction_text(value: Fraction) -> str:
    """Always num/den, whole numbers included."""
    return f"{value.numerator}/{value.denominator}"


def _plain(value: Optional[Number]) -> Any:
    if isinstance(value, Fraction):
        return fraction_text(value)
    if isinstance(value, float):
        return round(value, 9)
    return value


@dataclass
class BoundFlag:
    """One checked inequality (or equality) between two measures."""

    name: str
    lhs: Number
    rhs: Number
    passed: bool

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "lhs": _plain(self.lhs),
                "rhs": _plain(self.rhs), "pass": self.passed}


@dataclass
class MeasuresReport:
    n: int
    m: int
    maj: BitVector
    max_ones: int
    mami: int
    log2n: float
    hs: Optional[int] = None
    hs_lower: Optional[Fraction] = None
    etd: Optional[int] = None
    etd_z: Optional[int] = None
    setd: Optional[int] = None
    setd_z: Optional[int] = None
    den: Optional[Fraction] = None
    den_witness: Tuple[int, ...] = ()
    den_exact: bool = False
    opt: Optional[int] = None
    greedy_depth: Optional[int] = None
    sampled: List[str] = field(default_factory=list)
    absent: Dict[str, str] = field(default_factory=dict)
    flags: List[BoundFlag] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(flag.passed for flag in self.flags)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "m": self.m,
            "MAJ": str(self.maj),
            "MAX": self.max_ones,
            "MAMI": self.mami,
            "HS": self.hs,
            "HS_lower": _plain(self.hs_lower),
            "ETD": self.etd,
            "ETDz": self.etd_z,
            "SETD": self.setd,
            "SETDz": self.setd_z,
            "DEN": _plain(self.den),
            "DEN_exact": self.den_exact,
            "DEN_witness": [r + 1 for r in self.den_witness],
            "log2n": _plain(self.log2n),
            "OPT": self.opt,
            "greedy_depth": self.greedy_depth,
            "sampled": list(self.sampled),
            "absent": dict(self.absent),
            "flags": [flag.to_dict() for flag in self.flags],
            "pass": self.passed,
        }

    def to_text(self) -> str:
        doc = self.to_dict()
        lines = []
        for key, value in doc.items():
            if key == "flags":
                continue
            lines.append(f"{key:14s} {value}")
        for flag in self.flags:
            mark = "ok  " if flag.passed else "FAIL"
            lines.append(f"{mark} {flag.name}: {_plain(flag.lhs)} vs {_plain(flag.rhs)}")
        return "\n".join(lines) + "\n"

    def check(self, name: str, lhs: Optional[Number], rhs: Optional[Number], relation: str):
        """Append a flag unless an operand is missing."""
        if lhs is None or rhs is None:
            return
        if relation == "<=":
            passed = lhs <= rhs + (TOLERANCE if isinstance(rhs, float) else 0)
        elif relation == ">=":
            passed = lhs + (TOLERANCE if isinstance(lhs, float) else 0) >= rhs
        else:
            passed = lhs == rhs
        self.flags.append(BoundFlag(name, lhs, rhs, passed))


def bounds_report(instances: InstanceSet, run: Optional[RunConfig] = None) -> MeasuresReport:
    """
    Compute every measure of A within the limits of run and check the bounds.

    Measures past their exact limit are listed under `absent` with the
    reason; sampled ETD/SETD are listed under `sampled` and then only enter
    checks that stay valid for lower bounds.
    """
    # avoid the import cycle measures -> solvers -> measures
    from mindepth.solvers.trees import greedy_tree, opt_exact

    run = run or RunConfig()
    n = instances.n
    report = MeasuresReport(
        n=n, m=instances.m, maj=maj(instances), max_ones=max_ones(instances),
        mami=mami(instances), log2n=math.log2(n),
    )

    report.hs = len(hitting_set_min(instances))
    report.hs_lower = hs_lower_bound(instances)
    zero = BitVector.zeros(instances.m)
    if instances.m <= run.etd_exact_m_limit:
        report.etd_z = len(specifying_set_min(instances, zero))
        report.setd_z = len(strong_specifying_set_direct(instances, zero))
    else:
        skipped = f"direct search over m={instances.m} columns skipped"
        report.absent["ETDz"] = report.absent["SETDz"] = skipped

    try:
        report.etd, etd_sampled = etd_with_source(
            instances, run.etd_exact_m_limit, run.sample, run.seed)
        report.setd, setd_sampled = setd_with_source(
            instances, run.etd_exact_m_limit, run.sample, run.seed)
        if etd_sampled:
            report.sampled.extend(["ETD", "SETD"])
    except ExactLimitExceeded as exc:
        report.absent["ETD"] = report.absent["SETD"] = str(exc)

    try:
        report.den, report.den_witness = den_exact(instances, run.den_exact_n_limit)
        report.den_exact = True
    except ExactLimitExceeded as exc:
        logger.info("falling back to DEN lower bound: %s", exc)
        report.den, report.den_witness = den_lower(instances, run.den_lower_effort, run.seed)

    try:
        report.opt, _ = opt_exact(instances, run.opt_exact_n_limit)
    except ExactLimitExceeded as exc:
        report.absent["OPT"] = str(exc)

    report.greedy_depth = tree_depth(greedy_tree(instances))
    _check_bounds(report)
    logger.debug("report for n=%d m=%d: %d flags, pass=%s",
                 n, instances.m, len(report.flags), report.passed)
    return report


def _check_bounds(report: MeasuresReport):
    n = report.n
    exact_etd = report.etd is not None and not report.sampled
    etd_value = report.etd

    report.check("ceil_log2n_le_opt", ceil_log2(n), report.opt, "<=")
    report.check("opt_le_n_minus_1", report.opt, n - 1, "<=")
    report.check("etd_le_opt", etd_value, report.opt, "<=")
    report.check("greedy_ge_opt", report.greedy_depth, report.opt, ">=")
    report.check("etd_le_setd", etd_value, report.setd, "<=")
    report.check("setd_le_etd_plus_1", report.setd,
                 etd_value + 1 if etd_value is not None else None, "<=")
    report.check("hs_eq_setdz", report.hs, report.setd_z, "==")
    report.check("etdz_le_hs", report.etd_z, report.hs, "<=")
    report.check("hs_ge_n_minus_1_over_max", report.hs, report.hs_lower, ">=")
    report.check("den_le_opt", report.den, report.opt, "<=")
    if exact_etd:
        report.check("den_minus_1_le_etd",
                     report.den - 1 if report.den is not None else None, report.etd, "<=")
    if report.den_exact and exact_etd:
        report.check("etd_le_ln_n_den_plus_1", report.etd,
                     math.log(n) * float(report.den) + 1, "<=")
    if exact_etd and report.opt is not None:
        report.check("opt_le_moshkov_bound", report.opt,
                     opt_upper_bound(report.etd, n), "<=")
    if report.den_exact:
        report.check("greedy_le_ceil_den_ln_n", report.greedy_depth,
                     greedy_bound(report.den, n), "<=")
        if report.opt is not None:
            report.check("greedy_le_min_factor_opt", report.greedy_depth,
                         greedy_opt_bound(report.den, n, report.opt), "<=")

