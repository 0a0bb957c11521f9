"""Ground-truth verification: bounded enumeration, constraint propagation,
certificate lifting, equivalence checking, and four-square decompositions.

Nothing here is clever on purpose.  The oracle exists to check the
reductions against brute force at desk scale, so its rules are the obvious
sound ones and every limit is explicit.  A check that cannot finish inside
its budget reports "inconclusive" rather than passing.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import product as iproduct
from math import isqrt, prod

from . import kernels
from .errors import BoxTooLarge, DimensionMismatch, SearchLimit
from .poly import Polynomial
from .reductions import ReductionCertificate
from .system import (DOMAIN_N, DOMAIN_Z, Add, EnEquation, EnSystem, One,
                     check_assignment)

DEFAULT_POINT_LIMIT = 10**8


@dataclass(frozen=True)
class OracleLimits:
    points: int = DEFAULT_POINT_LIMIT  # enumeration budget (box points)
    search_nodes: int = 10**6          # backtracking node budget
    seconds: float = 60.0              # soft wall-clock budget per check
    residual_radius: int = 16          # branching radius for stuck residues


DEFAULT_LIMITS = OracleLimits()


# --------------------------------------------------------------------------
# boxes and root enumeration

@dataclass(frozen=True)
class Box:
    """Per-variable inclusive integer intervals."""

    bounds: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for lo, hi in self.bounds:
            if lo > hi:
                raise ValueError(f"empty interval [{lo}, {hi}]")

    @classmethod
    def cube(cls, dim: int, radius: int) -> "Box":
        return cls(tuple((-radius, radius) for _ in range(dim)))

    @classmethod
    def cube_nonneg(cls, dim: int, radius: int) -> "Box":
        return cls(tuple((0, radius) for _ in range(dim)))

    @property
    def dim(self) -> int:
        return len(self.bounds)

    def effective(self, domain: str) -> list[tuple[int, int]] | None:
        """Bounds clamped to the domain; None if the box becomes empty."""
        out = []
        for lo, hi in self.bounds:
            if domain == DOMAIN_N:
                lo = max(lo, 0)
            if lo > hi:
                return None
            out.append((lo, hi))
        return out

    def point_count(self, domain: str = DOMAIN_Z) -> int:
        eff = self.effective(domain)
        if eff is None:
            return 0
        return prod(hi - lo + 1 for lo, hi in eff)

    def iter_points(self, domain: str = DOMAIN_Z):
        eff = self.effective(domain)
        if eff is None:
            return
        yield from iproduct(*(range(lo, hi + 1) for lo, hi in eff))


def enumerate_roots(poly: Polynomial, box: Box, domain: str = DOMAIN_Z,
                    limit: int = DEFAULT_POINT_LIMIT) -> list[tuple[int, ...]]:
    """All points of the box where the polynomial vanishes, in lex order."""
    if box.dim != poly.arity:
        raise DimensionMismatch(
            f"box dimension {box.dim} != polynomial arity {poly.arity}")
    count = box.point_count(domain)
    if count > limit:
        raise BoxTooLarge(f"box holds {count} points, limit is {limit}")
    eff = box.effective(domain)
    if eff is None:
        return []
    terms = poly.sorted_terms()
    exps = tuple(e for e, _ in terms)
    coeffs = tuple(c for _, c in terms)
    lows = tuple(lo for lo, _ in eff)
    highs = tuple(hi for _, hi in eff)
    return kernels.grid_roots(exps, coeffs, lows, highs)


# --------------------------------------------------------------------------
# constraint propagation

@dataclass
class Solved:
    values: dict[int, int]


@dataclass
class Stuck:
    values: dict[int, int]
    undetermined: tuple[int, ...]


@dataclass
class Conflict:
    equation: EnEquation | None


PropagationResult = Solved | Stuck | Conflict


class _Propagator:
    """Incremental fixed-point propagation with an undo trail.

    Rules (sound, deliberately incomplete):
      x_i = 1            assigns 1
      x_i + x_i = x_i    assigns 0
      Add, two known     determines the third slot
      Mul, factors known determines the product
      Mul, product and a nonzero factor known, dividing exactly
                         determines the other factor
    plus consistency checks: fully-known equations are verified, a zero
    factor with a nonzero known product conflicts, and over N any negative
    value conflicts.
    """

    __slots__ = ("equations", "by_var", "values", "domain", "n",
                 "conflict_equation")

    def __init__(self, system: EnSystem, domain: str):
        self.equations = system.equations
        self.n = system.n
        self.domain = domain
        self.values: dict[int, int] = {}
        self.conflict_equation: EnEquation | None = None
        by_var: list[list[int]] = [[] for _ in range(system.n + 1)]
        for t, eq in enumerate(self.equations):
            for index in set(eq):
                by_var[index].append(t)
        self.by_var = by_var

    def _set(self, index, value, eq, queue, trail) -> bool:
        existing = self.values.get(index)
        if existing is not None:
            if existing != value:
                self.conflict_equation = eq
                return False
            return True
        if self.domain == DOMAIN_N and value < 0:
            self.conflict_equation = eq
            return False
        self.values[index] = value
        trail.append(index)
        queue.extend(self.by_var[index])
        return True

    def _apply(self, t, queue, trail) -> bool:
        eq = self.equations[t]
        values = self.values
        if isinstance(eq, One):
            return self._set(eq.i, 1, eq, queue, trail)
        if isinstance(eq, Add):
            i, j, k = eq
            if i == j == k:
                return self._set(i, 0, eq, queue, trail)
            while True:
                vi, vj, vk = values.get(i), values.get(j), values.get(k)
                if vi is not None and vj is not None and vk is not None:
                    if vi + vj != vk:
                        self.conflict_equation = eq
                        return False
                    return True
                if vi is not None and vj is not None:
                    if not self._set(k, vi + vj, eq, queue, trail):
                        return False
                elif vi is not None and vk is not None:
                    if not self._set(j, vk - vi, eq, queue, trail):
                        return False
                elif vj is not None and vk is not None:
                    if not self._set(i, vk - vj, eq, queue, trail):
                        return False
                else:
                    return True
        # Mul
        i, j, k = eq
        while True:
            vi, vj, vk = values.get(i), values.get(j), values.get(k)
            if vi is not None and vj is not None and vk is not None:
                if vi * vj != vk:
                    self.conflict_equation = eq
                    return False
                return True
            if vi is not None and vj is not None:
                if not self._set(k, vi * vj, eq, queue, trail):
                    return False
            elif vk is not None and vi is not None:
                if vi == 0:
                    if vk != 0:
                        self.conflict_equation = eq
                        return False
                    return True  # 0 * x_j = 0: x_j stays undetermined
                quot, rem = divmod(vk, vi)
                if rem:
                    self.conflict_equation = eq
                    return False
                if not self._set(j, quot, eq, queue, trail):
                    return False
            elif vk is not None and vj is not None:
                if vj == 0:
                    if vk != 0:
                        self.conflict_equation = eq
                        return False
                    return True
                quot, rem = divmod(vk, vj)
                if rem:
                    self.conflict_equation = eq
                    return False
                if not self._set(i, quot, eq, queue, trail):
                    return False
            else:
                return True

    def _run(self, queue, trail) -> bool:
        while queue:
            t = queue.pop()
            if not self._apply(t, queue, trail):
                return False
        return True

    def start(self, seed: dict[int, int]) -> tuple[bool, list[int]]:
        """Seed values and scan every equation once; returns (ok, trail)."""
        trail: list[int] = []
        queue: list[int] = []
        for index, value in seed.items():
            if not 1 <= index <= self.n:
                raise ValueError(f"seed index {index} out of range")
            if not self._set(index, value, None, queue, trail):
                return False, trail
        queue.extend(range(len(self.equations)))
        return self._run(queue, trail), trail

    def push(self, index: int, value: int) -> tuple[bool, list[int]]:
        """Assign one variable and propagate; returns (ok, trail)."""
        trail: list[int] = []
        queue: list[int] = []
        if not self._set(index, value, None, queue, trail):
            return False, trail
        return self._run(queue, trail), trail

    def undo(self, trail: list[int]):
        for index in trail:
            del self.values[index]

    def undetermined(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.n + 1) if i not in self.values)


def propagate(system: EnSystem, seed: dict[int, int] | None = None,
              domain: str = DOMAIN_Z) -> PropagationResult:
    """Run propagation to its fixed point from a (possibly empty) seed."""
    prop = _Propagator(system, domain)
    ok, _ = prop.start(dict(seed or {}))
    if not ok:
        return Conflict(prop.conflict_equation)
    undetermined = prop.undetermined()
    if undetermined:
        return Stuck(values=dict(prop.values), undetermined=undetermined)
    return Solved(values=dict(prop.values))


# --------------------------------------------------------------------------
# lifting

def lift(cert: ReductionCertificate, base) -> dict[int, int]:
    """Total assignment extending a base point along the certificate."""
    base = tuple(base)
    if len(base) != cert.p:
        raise DimensionMismatch(
            f"base point of length {len(base)} for p = {cert.p}")
    values = {i + 1: v for i, v in enumerate(base)}
    for index, poly in cert.defs.items():
        values[index] = poly.eval_at(base)
    return values


def anchor_polynomial(cert: ReductionCertificate) -> Polynomial:
    """The polynomial whose vanishing the anchored equation enforces."""

    def poly_at(index: int) -> Polynomial:
        if index <= cert.p:
            return Polynomial.variable(cert.p, index)
        return cert.defs[index]

    if cert.anchor_q is not None:
        return poly_at(cert.anchor_q)
    return poly_at(cert.anchor_a) - poly_at(cert.anchor_b)


# --------------------------------------------------------------------------
# bounded search

@dataclass
class SearchOutcome:
    solutions: list[dict[int, int]]
    exhausted: bool   # False when a node/time budget truncated the search
    nodes: int


def solve_bounded(system: EnSystem, domain: str = DOMAIN_Z, radius: int = 8,
                  seed: dict[int, int] | None = None,
                  limits: OracleLimits = DEFAULT_LIMITS,
                  collect_limit: int | None = None) -> SearchOutcome:
    """Depth-first search with propagation at every step.

    Branches only on variables propagation left undetermined, lowest index
    first, over [-radius, radius] (clamped to N for that domain); values
    that propagation derives are not constrained by the radius.
    """
    prop = _Propagator(system, domain)
    ok, _ = prop.start(dict(seed or {}))
    if not ok:
        return SearchOutcome(solutions=[], exhausted=True, nodes=0)
    lo = 0 if domain == DOMAIN_N else -radius
    deadline = time.monotonic() + limits.seconds
    solutions: list[dict[int, int]] = []
    nodes = 0
    truncated = False

    def next_undetermined() -> int | None:
        for i in range(1, system.n + 1):
            if i not in prop.values:
                return i
        return None

    def dfs() -> bool:
        """Returns False when the search must stop (budget or collect cap)."""
        nonlocal nodes, truncated
        nodes += 1
        if nodes > limits.search_nodes or time.monotonic() > deadline:
            truncated = True
            return False
        index = next_undetermined()
        if index is None:
            solutions.append(dict(prop.values))
            return collect_limit is None or len(solutions) < collect_limit
        for value in range(lo, radius + 1):
            ok, trail = prop.push(index, value)
            keep_going = dfs() if ok else True
            prop.undo(trail)
            if not keep_going:
                return False
        return True

    dfs()
    exhausted = not truncated and (
        collect_limit is None or len(solutions) < collect_limit)
    return SearchOutcome(solutions=solutions, exhausted=exhausted, nodes=nodes)


# --------------------------------------------------------------------------
# equivalence checking

@dataclass
class EquivalenceReport:
    domain: str
    base_points: int = 0
    base_roots: list[tuple[int, ...]] = field(default_factory=list)
    lifted_ok: bool = True
    unique_extension: bool = True
    stuck_roots: int = 0
    spurious: list[tuple[int, ...]] = field(default_factory=list)
    refuted_by_propagation: int = 0
    refuted_by_search: int = 0
    inconclusive: list[tuple[int, ...]] = field(default_factory=list)
    system_solutions: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def counts_equal(self) -> bool:
        return (self.system_solutions == len(self.base_roots)
                and not self.spurious)

    @property
    def passed(self) -> bool:
        return (self.lifted_ok and self.unique_extension
                and not self.spurious and not self.inconclusive
                and self.counts_equal and not self.failures)

    def merge(self, other: "EquivalenceReport"):
        self.base_points += other.base_points
        self.base_roots.extend(other.base_roots)
        self.lifted_ok &= other.lifted_ok
        self.unique_extension &= other.unique_extension
        self.stuck_roots += other.stuck_roots
        self.spurious.extend(other.spurious)
        self.refuted_by_propagation += other.refuted_by_propagation
        self.refuted_by_search += other.refuted_by_search
        self.inconclusive.extend(other.inconclusive)
        self.system_solutions += other.system_solutions
        self.failures.extend(other.failures)


def _encode_system(system: EnSystem):
    ops, ii, jj, kk = [], [], [], []
    for eq in system.equations:
        if isinstance(eq, One):
            ops.append(0)
            ii.append(eq.i)
            jj.append(0)
            kk.append(0)
        else:
            ops.append(1 if isinstance(eq, Add) else 2)
            ii.append(eq.i)
            jj.append(eq.j)
            kk.append(eq.k)
    return tuple(ops), tuple(ii), tuple(jj), tuple(kk)


def _check_points(d, system, cert, points, domain, limits, encoded):
    report = EquivalenceReport(domain=domain)
    ops, ii, jj, kk = encoded
    for point in points:
        report.base_points += 1
        value = d.eval_at(point)
        seed = {i + 1: v for i, v in enumerate(point)}
        if value == 0:
            report.base_roots.append(point)
            lifted = lift(cert, point)
            if domain == DOMAIN_N and any(v < 0 for v in lifted.values()):
                report.lifted_ok = False
                report.failures.append(f"lift of {point} leaves N")
                continue
            flat = [0] * (system.n + 1)
            for index, v in lifted.items():
                flat[index] = v
            bad = kernels.check_equations(ops, ii, jj, kk, flat)
            if bad != -1:
                report.lifted_ok = False
                report.failures.append(
                    f"lift of {point} violates {system.equations[bad]}")
                continue
            report.system_solutions += 1
            outcome = propagate(system, seed, domain)
            if isinstance(outcome, Solved):
                if outcome.values != lifted:
                    report.unique_extension = False
                    report.failures.append(
                        f"propagation from {point} disagrees with the lift")
            elif isinstance(outcome, Stuck):
                report.unique_extension = False
                report.stuck_roots += 1
            else:
                report.unique_extension = False
                report.failures.append(
                    f"propagation from root {point} hit a contradiction "
                    f"on {outcome.equation}")
        else:
            outcome = propagate(system, seed, domain)
            if isinstance(outcome, Conflict):
                report.refuted_by_propagation += 1
            elif isinstance(outcome, Solved):
                report.spurious.append(point)
                report.failures.append(
                    f"non-root {point} extends to a solution")
            else:
                undetermined = outcome.undetermined
                space = (2 * limits.residual_radius + 1) ** len(undetermined)
                if space > limits.points:
                    report.inconclusive.append(point)
                    continue
                found = solve_bounded(
                    system, domain, limits.residual_radius, seed=seed,
                    limits=limits, collect_limit=1)
                if found.solutions:
                    report.spurious.append(point)
                    report.failures.append(
                        f"non-root {point} extends to a solution")
                elif found.exhausted:
                    report.refuted_by_search += 1
                else:
                    report.inconclusive.append(point)
    return report


def _equiv_chunk(args):
    d, system, cert, points, domain, limits = args
    return _check_points(d, system, cert, points, domain, limits,
                         _encode_system(system))


def check_equivalence(d: Polynomial, system: EnSystem,
                      cert: ReductionCertificate, box: Box,
                      domain: str = DOMAIN_Z,
                      limits: OracleLimits = DEFAULT_LIMITS,
                      jobs: int = 1) -> EquivalenceReport:
    """Exercise the reduction against brute force over a finite box.

    Every root of D in the box must lift to a verified solution that
    propagation reproduces uniquely; every non-root must be refuted by
    propagation or by exhaustive search over the stuck residue.
    """
    if box.dim != d.arity or cert.p != d.arity:
        raise DimensionMismatch("box, polynomial, and certificate disagree")
    count = box.point_count(domain)
    if count > limits.points:
        raise BoxTooLarge(f"box holds {count} points, limit {limits.points}")
    points = list(box.iter_points(domain))
    if jobs > 1 and len(points) > 1:
        from concurrent.futures import ProcessPoolExecutor
        chunk = (len(points) + jobs - 1) // jobs
        tasks = [(d, system, cert, points[i:i + chunk], domain, limits)
                 for i in range(0, len(points), chunk)]
        report = EquivalenceReport(domain=domain)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for partial in pool.map(_equiv_chunk, tasks):
                report.merge(partial)
        return report
    return _check_points(d, system, cert, points, domain, limits,
                         _encode_system(system))


# --------------------------------------------------------------------------
# four squares

def foursquare_decompose(m: int) -> tuple[int, int, int, int]:
    """Lexicographically least (a, b, c, d) with a^2+b^2+c^2+d^2 = m."""
    if m < 0:
        raise ValueError("four-square decompositions need m >= 0")
    for a in range(isqrt(m // 4) + 1):
        ra = m - a * a
        for b in range(a, isqrt(ra // 3) + 1):
            rb = ra - b * b
            for c in range(b, isqrt(rb // 2) + 1):
                rc = rb - c * c
                d = isqrt(rc)
                if d * d == rc:
                    return (a, b, c, d)
    raise AssertionError(f"no four-square decomposition found for {m}")


# --------------------------------------------------------------------------
# pinning verification

@dataclass
class PinningReport:
    n: int
    expected: int
    consistent_propagation: bool = True
    x2_forced: bool = False
    propagation_complete: bool = False
    solutions_found: int = 0
    offending: list[dict[int, int]] = field(default_factory=list)
    search_exhausted: bool = True
    witness_checked: bool = False
    witness_ok: bool | None = None

    @property
    def passed(self) -> bool:
        if not (self.consistent_propagation and self.x2_forced
                and self.search_exhausted and not self.offending):
            return False
        return self.witness_ok is not False


def verify_pinning(assembled, expected: int, *, box_radius: int = 2,
                   domain: str | None = None, witness_base=None,
                   limits: OracleLimits = DEFAULT_LIMITS) -> PinningReport:
    """Check that every bounded solution of an assembled system pins
    x1 = expected, and (optionally) that a supplied representation root
    lifts to an explicit witness solution.

    Propagation must fix x2 = n on its own.  The remaining free variables
    are the certificate's base variables; they are enumerated within
    box_radius through the certificate, which maps the search to root
    enumeration of the anchored polynomial.
    """
    system = assembled.system
    n = assembled.n
    if domain is None:
        domain = DOMAIN_N if assembled.mode == "N" else DOMAIN_Z
    report = PinningReport(n=n, expected=expected)
    outcome = propagate(system, {}, domain)
    if isinstance(outcome, Conflict):
        report.consistent_propagation = False
        return report
    values = outcome.values
    report.x2_forced = values.get(2) == n
    if isinstance(outcome, Solved):
        report.propagation_complete = True
        report.solutions_found = 1
        if values[1] != expected:
            report.offending.append(values)
    else:
        cert = getattr(assembled, "certificate", None)
        if cert is not None:
            solutions = _pinned_solutions_via_cert(
                assembled, values, box_radius, domain, limits)
            report.solutions_found = len(solutions)
            report.offending = [s for s in solutions if s[1] != expected]
        else:
            found = solve_bounded(system, domain, box_radius, seed={},
                                  limits=limits)
            report.search_exhausted = found.exhausted
            report.solutions_found = len(found.solutions)
            report.offending = [
                s for s in found.solutions if s[1] != expected]
    if witness_base is not None:
        report.witness_checked = True
        witness = assembled.witness_assignment(witness_base)
        result = check_assignment(system, witness, domain)
        report.witness_ok = (result.satisfied
                             and witness[1] == expected
                             and witness[2] == n)
    return report


def _pinned_solutions_via_cert(assembled, forced, box_radius, domain, limits):
    """Enumerate bounded solutions through the certificate.

    Chain equations hold under any lift by construction, so a bounded
    assignment solves the system exactly when the anchored polynomial
    vanishes at its base part and the scaffold values agree with what
    propagation already forced.
    """
    cert = assembled.certificate
    anchor = anchor_polynomial(cert)
    fixed = {i: forced[i] for i in range(1, cert.p + 1) if i in forced}
    free = [i for i in range(1, cert.p + 1) if i not in forced]
    if not free:
        # All base variables forced yet propagation stalled elsewhere; the
        # generic search handles this (it should not happen for our chains).
        found = solve_bounded(assembled.system, domain, box_radius, seed={},
                              limits=limits)
        if not found.exhausted:
            raise SearchLimit("pinning search truncated")
        return found.solutions
    residual = anchor.substituted(fixed)
    bounds = []
    for i in free:
        lo = 0 if domain == DOMAIN_N else -box_radius
        bounds.append((lo, box_radius))
    # Roots of the residual polynomial in the free variables.
    terms = residual.sorted_terms()
    exps_full = tuple(e for e, _ in terms)
    coeffs = tuple(c for _, c in terms)
    free_positions = [i - 1 for i in free]
    exps = tuple(tuple(e[pos] for pos in free_positions) for e in exps_full)
    lows = tuple(lo for lo, _ in bounds)
    highs = tuple(hi for _, hi in bounds)
    count = prod(hi - lo + 1 for lo, hi in bounds)
    if count > limits.points:
        raise BoxTooLarge(f"pinning search needs {count} points")
    roots = kernels.grid_roots(exps, coeffs, lows, highs)
    solutions = []
    for root in roots:
        base = dict(fixed)
        for i, v in zip(free, root):
            base[i] = v
        point = tuple(base[i] for i in range(1, cert.p + 1))
        solution = assembled.witness_assignment(point)
        # Chain equations hold under any lift by construction; verify anyway.
        assert check_assignment(assembled.system, solution, domain).satisfied
        solutions.append(solution)
    return solutions
