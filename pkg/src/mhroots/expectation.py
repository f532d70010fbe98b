"""Expected number of real projective roots of a random system.

The central identity expresses the expectation as

    2**(-n/2) * prod_j [Gamma(1/2) / Gamma((n_j + 1)/2)] * E|det Z|

where Z is the shape's structured Gaussian matrix.  The dispatcher resolves
each shape through, in order: a product decomposition into independent
sub-shapes, the exact closed form available when the degree matrix factors
as d_i * e_j over nonnegative integers, an exact zero when the generic
complex-root count vanishes, and otherwise Monte Carlo estimation of the
determinant factor.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .bkk import bkk_count, is_simply_reducible, product_split
from .gaussian import MCEstimate, mc_abs_det, variance_profile
from .permanent import permanent_float
from .shape import ShapeSpec, expand_delta, validate
from .specialfn import SQRT_PI, gamma_half

DEFAULT_SAMPLES = 100_000
LOG_PREFACTOR_DIM = 60


@dataclass(frozen=True)
class ClosedFormValue:
    """Exact value rational * pi**(pi_sqrt_power / 2) * sqrt(radicand)."""

    rational: Fraction
    pi_sqrt_power: int
    radicand: int

    @property
    def value(self) -> float:
        return (
            float(self.rational)
            * math.pi ** (self.pi_sqrt_power / 2.0)
            * math.sqrt(self.radicand)
        )


@dataclass(frozen=True)
class ExpectationResult:
    """Expected real-root count with provenance.

    ``kind`` is one of "closed_form", "monte_carlo", "product", "zero";
    ``closed`` carries the exact symbolic value on the closed-form path and
    ``mc`` the raw |det| estimate on the Monte Carlo path.  ``prefactor`` is
    the gamma-ratio factor multiplying the determinant mean.
    """

    value: float
    kind: str
    prefactor: float
    stderr: float = 0.0
    mc: MCEstimate | None = None
    closed: ClosedFormValue | None = None
    parts: tuple["ExpectationResult", ...] | None = None


@dataclass(frozen=True)
class BoundsReport:
    """Two-sided bounds with the point estimate and tightness flag.

    ``upper`` is the scaled permanent of the square-rooted expanded degree
    matrix, ``lower`` the square root of the generic complex-root count;
    ``equality`` marks the simply reducible shapes, for which both bounds are
    attained.
    """

    upper: float
    lower: float
    bkk: int
    estimate: ExpectationResult
    equality: bool
    margin_upper: float
    margin_lower: float


@dataclass(frozen=True)
class RowRecursionReport:
    """One row's recursive inequalities around the expectation.

    upper = sum_j sqrt(delta_ij) * E(sub_j) and
    lower = sqrt(sum_j delta_ij * E(sub_j)**2) must bracket the full
    expectation; equality holds exactly when at most one block contributes.
    """

    row: int
    upper: float
    lower: float
    middle: ExpectationResult
    upper_stderr: float
    lower_stderr: float
    equality_expected: bool
    subs: tuple[tuple[int, float, ExpectationResult], ...]  # (block, degree, sub-result)

    @property
    def holds(self) -> bool:
        slack_u = 4.0 * (self.upper_stderr + self.middle.stderr) + 1e-9 * max(1.0, self.upper)
        slack_l = 4.0 * (self.lower_stderr + self.middle.stderr) + 1e-9 * max(1.0, self.upper)
        return (
            self.upper + slack_u >= self.middle.value
            and self.middle.value >= self.lower - slack_l
        )


def derive_seed(seed: int, spec: ShapeSpec, tag: str) -> int:
    """Stable sub-stream seed from a parent seed, a shape, and a role tag."""
    payload = json.dumps({"shape": spec.to_json(), "tag": tag}, sort_keys=True)
    digest = hashlib.sha256(payload.encode()).digest()
    h = int.from_bytes(digest[:8], "big")
    return (seed * 0x9E3779B97F4A7C15 + h) % (1 << 64)


def prefactor(spec: ShapeSpec) -> float:
    """Gamma-ratio factor 2**(-n/2) * prod_j Gamma(1/2)/Gamma((n_j + 1)/2)."""
    n = spec.n
    if n > LOG_PREFACTOR_DIM:
        log = -0.5 * n * math.log(2.0)
        for nj in spec.block_sizes:
            g = gamma_half(nj + 1)
            log += (1 - g.sqrt_pi) * math.log(SQRT_PI) - g.log
        return math.exp(log)
    out = 2.0 ** (-n / 2.0)
    for nj in spec.block_sizes:
        g = gamma_half(nj + 1)
        out *= SQRT_PI ** (1 - g.sqrt_pi) / float(g.rational)
    return out


def rank_one_factors(spec: ShapeSpec) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Nonnegative integer vectors (d, e) with degrees = d_i * e_j, if any.

    The column vector e is taken primitive (gcd 1 over its nonzero entries),
    which makes the factorization canonical; rows of zeros get d_i = 0.
    """
    rows = spec.degrees
    nonzero = [r for r in rows if any(r)]
    if not nonzero:
        return tuple([0] * spec.n), tuple([0] * spec.k)
    base = nonzero[0]
    pattern = tuple(v > 0 for v in base)
    for r in nonzero:
        if tuple(v > 0 for v in r) != pattern:
            return None
    g = math.gcd(*base)
    e = tuple(v // g for v in base)
    d = []
    for r in rows:
        if not any(r):
            d.append(0)
            continue
        j0 = next(j for j in range(spec.k) if e[j] > 0)
        t, rem = divmod(r[j0], e[j0])
        if rem != 0:
            return None
        if any(r[j] != t * e[j] for j in range(spec.k)):
            return None
        d.append(t)
    return tuple(d), e


def closed_form(spec: ShapeSpec) -> ClosedFormValue | None:
    """Exact expectation when the degree matrix is rank one over nonnegative
    integers; None otherwise.

    Value: Gamma((n+1)/2)/Gamma(1/2) * prod_j Gamma(1/2)/Gamma((n_j+1)/2)
    * sqrt(prod_i d_i * prod_{j: n_j > 0} e_j ** n_j).
    """
    factors = rank_one_factors(spec)
    if factors is None:
        return None
    d, e = factors
    n = spec.n
    top = gamma_half(n + 1)
    rational = top.rational
    pi_pow = top.sqrt_pi - 1
    for nj in spec.block_sizes:
        g = gamma_half(nj + 1)
        rational /= g.rational
        pi_pow += 1 - g.sqrt_pi
    radicand = 1
    for di in d:
        radicand *= di
    for ej, nj in zip(e, spec.block_sizes):
        if nj > 0:
            radicand *= ej**nj
    return ClosedFormValue(rational, pi_pow, radicand)


def scaling_factor(d, e, block_sizes) -> float:
    """Multiplier relating the expectation after degree scaling
    delta'_ij = d_i * e_j * delta_ij to the original:
    sqrt(prod d_i) * sqrt(prod e_j ** n_j over positive blocks)."""
    prod = 1
    for di in d:
        prod *= int(di)
    for ej, nj in zip(e, block_sizes):
        if nj > 0:
            prod *= int(ej) ** nj
    return math.sqrt(prod)


def _zero_result(spec: ShapeSpec) -> ExpectationResult:
    return ExpectationResult(0.0, "zero", prefactor(spec))


def split_expectation(
    spec: ShapeSpec, samples: int = DEFAULT_SAMPLES, seed: int = 0, workers: int = 1
) -> ExpectationResult | None:
    """Product of sub-expectations over a product decomposition, if one exists.

    The coupling degrees of the lower group within the upper blocks are
    irrelevant to the expectation and are dropped by the split.
    """
    sp = product_split(spec)
    if sp is None:
        return None
    left = expectation(sp.first, samples, derive_seed(seed, sp.first, "split-left"), workers)
    right = expectation(sp.second, samples, derive_seed(seed, sp.second, "split-right"), workers)
    value = left.value * right.value
    stderr = math.hypot(right.value * left.stderr, left.value * right.stderr)
    return ExpectationResult(
        value, "product", prefactor(spec), stderr=stderr, parts=(left, right)
    )


def expectation(
    spec: ShapeSpec, samples: int = DEFAULT_SAMPLES, seed: int = 0, workers: int = 1
) -> ExpectationResult:
    """Expected number of real projective roots under the invariant ensemble.

    Dispatch order: product decomposition, rank-one closed form, exact zero
    when the generic complex-root count vanishes, Monte Carlo otherwise.
    """
    prod = split_expectation(spec, samples, seed, workers)
    if prod is not None:
        return prod
    cf = closed_form(spec)
    if cf is not None:
        return ExpectationResult(cf.value, "closed_form", prefactor(spec), closed=cf)
    if bkk_count(spec) == 0:
        return _zero_result(spec)
    pf = prefactor(spec)
    mc = mc_abs_det(variance_profile(spec), samples, seed, workers)
    return ExpectationResult(pf * mc.mean, "monte_carlo", pf, stderr=pf * mc.stderr, mc=mc)


def _factorial_product(block_sizes) -> int:
    out = 1
    for nj in block_sizes:
        out *= math.factorial(nj)
    return out


def bounds(
    spec: ShapeSpec, samples: int = DEFAULT_SAMPLES, seed: int = 0, workers: int = 1
) -> BoundsReport:
    """Upper/lower bounds and point estimate for the expected root count."""
    upper = permanent_float(expand_delta(spec, sqrt=True)) / _factorial_product(
        spec.block_sizes
    )
    count = bkk_count(spec)
    lower = math.sqrt(count)
    est = expectation(spec, samples, seed, workers)
    equality = is_simply_reducible(spec).reducible
    return BoundsReport(
        upper=upper,
        lower=lower,
        bkk=count,
        estimate=est,
        equality=equality,
        margin_upper=upper - est.value,
        margin_lower=est.value - lower,
    )


def _remove_row_shape(spec: ShapeSpec, row: int, block: int) -> ShapeSpec:
    """Sub-shape dropping equation ``row`` and one variable of ``block`` (1-based)."""
    sizes = list(spec.block_sizes)
    sizes[block - 1] -= 1
    rows = [r for idx, r in enumerate(spec.degrees, start=1) if idx != row]
    return validate(sizes, rows)


def row_recursion_check(
    spec: ShapeSpec,
    row: int,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    workers: int = 1,
) -> RowRecursionReport:
    """Evaluate the recursive inequalities obtained by removing one equation.

    For each positive-size block j the sub-expectation E_j of the shape with
    ``row`` deleted and block j shrunk by one is computed through the
    dispatcher; the report carries both bound values, the direct expectation
    of the full shape, propagated standard errors, and whether the exact
    equality condition (at most one contributing block) holds.
    """
    if not 1 <= row <= spec.n:
        raise ValueError(f"row index {row} outside 1..{spec.n}")
    degrees = spec.degrees[row - 1]
    subs = []
    upper = 0.0
    lower_sq = 0.0
    var_upper = 0.0
    lower_grad_sq = 0.0
    contributing = 0
    for j, nj in enumerate(spec.block_sizes, start=1):
        if nj <= 0 or degrees[j - 1] <= 0:
            continue
        dij = degrees[j - 1]
        sub = _remove_row_shape(spec, row, j)
        res = expectation(sub, samples, derive_seed(seed, sub, f"row{row}-block{j}"), workers)
        subs.append((j, float(dij), res))
        upper += math.sqrt(dij) * res.value
        lower_sq += dij * res.value**2
        var_upper += dij * res.stderr**2
        lower_grad_sq += (dij * res.value * res.stderr) ** 2
        if bkk_count(sub) > 0:
            contributing += 1
    lower = math.sqrt(lower_sq)
    lower_stderr = math.sqrt(lower_grad_sq) / lower if lower > 0 else 0.0
    middle = expectation(spec, samples, derive_seed(seed, spec, f"row{row}-middle"), workers)
    return RowRecursionReport(
        row=row,
        upper=upper,
        lower=lower,
        middle=middle,
        upper_stderr=math.sqrt(var_upper),
        lower_stderr=lower_stderr,
        equality_expected=contributing <= 1,
        subs=tuple(subs),
    )
