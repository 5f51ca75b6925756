"""
The verification suite: a registry of named checks, each applied to every
catalog subject of the kind it understands, producing one hash-chained
VerificationReport per (check, instance). Every check carries the label of
the statement it certifies.
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fnmatch import fnmatch
from functools import lru_cache, partial
from typing import Any, Callable, Iterator, Optional

from sympy import primefactors

from ..algebra.abelian import ab_to_table, check_aut_oracle, check_ext_naturality, tensor_kernel
from ..algebra.actions import (
    check_gamma_functoriality,
    check_jo2_all,
    check_jo3,
    check_lema1,
    check_witt_hall_all,
    nil_bound_check,
)
from ..algebra.frattini import (
    check_corolario,
    check_frattini_characteristic,
    check_frattini_naturality,
    check_frattini_oracle,
    check_nuevolema,
    check_propodos,
    check_propouno,
    frattini_localization,
)
from ..algebra.grpcore import check_axioms
from ..algebra.homotopy import (
    check_coeficientes,
    check_cuatro,
    check_dos,
    check_eshp_sandwich,
    check_eshp_two_path,
    check_final_remark,
    check_hypothesis_necessary,
    check_importante,
    check_nuevo,
    check_tres,
    check_uno,
)
from ..algebra.localize import check_lema2_all, check_uf
from ..core.config import settings
from ..core.errors import EXIT_FAIL, EXIT_OK, ClosureExceedsCap, NilactError, NotApplicable, NotNilpotent, TooLarge
from ..models.abelian import AbGroup
from ..models.check import CheckResult
from ..models.space import EMSpace
from ..schemas.catalog import Catalog, CatalogEntry, EntryKind
from ..schemas.report import Outcome, VerificationReport, seal_reports

logger = logging.getLogger(__name__)

Case = tuple[str, Callable[[], CheckResult]]


@dataclass(frozen=True)
class SuiteOptions:
    degree: int = 2
    primes: tuple[int, ...] = (2, 3, 5)
    # largest order for group-level checks on abelian catalog groups
    group_limit: int = 24
    jobs: int = field(default_factory=lambda: settings.jobs)


@dataclass(frozen=True)
class Check:
    id: str
    label: str
    statement: str
    operation: str
    subject: str
    cases: Callable[[Any, SuiteOptions], Iterator[Case]]


CHECKS: list[Check] = []


def check(id: str, label: str, statement: str, operation: str, subject: str):
    def register(cases):
        CHECKS.append(Check(id, label, statement, operation, subject, cases))
        return cases

    return register


def provenance_map() -> list[tuple[str, str, str, str]]:
    """(check id, label, statement, operation) for every registered check"""
    return [(c.id, c.label, c.statement, c.operation) for c in CHECKS]


# Groups


@check("axioms", "Oracle group-axioms", "a multiplication table satisfies the group axioms", "check_axioms", "group")
def _axioms(G, options):
    yield "", partial(check_axioms, G)


@check("oracle-frattini", "Oracle non-generators", "Phi(G) is the set of non-generators", "check_frattini_oracle", "group")
def _oracle_frattini(G, options):
    yield "", partial(check_frattini_oracle, G)


@check("frattini-localization", "Proposition nuevolema", "Phi(G)_(p) = Phi(G_(p)) for finite nilpotent G", "frattini_localization", "group")
def _frattini_localization(G, options):
    for p in primefactors(G.order):
        yield f"@p={p}", partial(frattini_localization, G, int(p))


# Finite abelian groups


@check("oracle-aut", "Oracle aut-brute-force", "Aut(A) by blocks equals the bijective endomorphisms of the table", "check_aut_oracle", "abgroup")
def _oracle_aut(A, options):
    yield "", partial(check_aut_oracle, A)


@check("ext-tensor", "Remark importante", "Ext(Z/p, A) = A/pA is naturally A (x) Z/p", "check_ext_naturality", "abgroup")
def _ext_tensor(A, options):
    for p in primefactors(A.order):
        yield f"@p={p}", partial(check_ext_naturality, A, int(p))


@check("frattini-characteristic", "Proposition nuevolema", "Phi(A) is characteristic", "check_frattini_characteristic", "abgroup")
def _frattini_characteristic(A, options):
    yield "", partial(check_frattini_characteristic, A)


@check("frattini-naturality", "Corollary nuevo", "A/Phi(A) = A (x) Z/p naturally in A, for A a p-group", "check_frattini_naturality", "abgroup")
def _frattini_naturality(A, options):
    yield "", partial(check_frattini_naturality, A)


@lru_cache(maxsize=128)
def _reduction_kernel(A: AbGroup):
    if not A.is_p_group():
        raise NotApplicable(f"{A.label} is not a finite abelian p-group")
    return tensor_kernel(A, A.primes[0])


@check("tensor-kernel", "Proposition propouno", "automorphisms trivial on A (x) Z/p form a p-group", "check_propouno", "abgroup")
def _tensor_kernel(A, options):
    yield "", lambda: check_propouno(_reduction_kernel(A))


@check("kernel-nilpotent", "Corollary corolario", "a p-group of automorphisms of a p-group acts nilpotently", "check_corolario", "abgroup")
def _kernel_nilpotent(A, options):
    yield "", lambda: check_corolario(_reduction_kernel(A))


def _space(A: AbGroup, options: SuiteOptions) -> EMSpace:
    return EMSpace(coeff=A, degree=options.degree)


@check("eshp-nilpotent", "Theorem tres", "E#p(X) is a nilpotent p-group and E#p(X)/E#(X) a p-group", "check_tres", "abgroup")
def _eshp_nilpotent(A, options):
    for p in options.primes:
        if A.order % p == 0:
            yield f"@p={p}", partial(check_tres, _space(A, options), p)


@check("eshp-two-path", "Theorem tres", "E#p(X) agrees on coefficient homotopy and on A[p], A/pA", "check_eshp_two_path", "abgroup")
def _eshp_two_path(A, options):
    for p in primefactors(A.order):
        yield f"@p={p}", partial(check_eshp_two_path, _space(A, options), int(p))


@check("eshp-sandwich", "Theorem cuatro", "E#(X) <= meet of E#p(X) <= E#p(X) <= E(X)", "check_eshp_sandwich", "abgroup")
def _eshp_sandwich(A, options):
    yield "", partial(check_eshp_sandwich, _space(A, options))


@check("eshp-strict", "Remark importante", "rho(1) = p^(r-1) + 1 lies in every E#q(K(Z/p^r,n)) but not in E#", "check_importante", "abgroup")
def _eshp_strict(A, options):
    yield "", partial(check_importante, _space(A, options))


@check("hypothesis-necessary", "Remark final", "for p not dividing |A|, E#p(X) is all of E(X) and need not act nilpotently", "check_hypothesis_necessary", "abgroup")
def _hypothesis_necessary(A, options):
    if A.is_p_group():
        p = next((q for q in options.primes if A.order % q), None)
        if p is not None:
            yield f"@p={p}", partial(check_hypothesis_necessary, _space(A, options), p)


# Actions


@check("witt-hall", "Lemma jo", "the Witt-Hall identity for G-commutators", "check_witt_hall_all", "action")
def _witt_hall(action, options):
    yield "", partial(check_witt_hall_all, action)


@check("gamma-functoriality", "Lemma jo3", "Gamma^m(Gamma^n) = Gamma^(m+n)", "check_gamma_functoriality", "action")
def _gamma_functoriality(action, options):
    yield "", partial(check_gamma_functoriality, action)


@check("gamma-quotient", "Lemma lema1", "A/Gamma^1 is the largest quotient with trivial action", "check_lema1", "action")
def _gamma_quotient(action, options):
    yield "", partial(check_lema1, action)


@check("commutator-containment", "Lemma jo2", "[[H,K],A] <= <[K,[H,A]], [H,[K,A]]>", "check_jo2_all", "action")
def _commutator_containment(action, options):
    yield "", partial(check_jo2_all, action)


@check("series-containment", "Lemma jo3", "[Gamma^n(G), Gamma^m_G(A)] <= Gamma^(n+m+1)_G(A)", "check_jo3", "action")
def _series_containment(action, options):
    yield "", partial(check_jo3, action)


@check("nil-bound", "Proposition jo4", "nil G <= nil_G A - 1 for faithful nilpotent actions", "nil_bound_check", "action")
def _nil_bound(action, options):
    yield "", partial(nil_bound_check, action)


@check("gamma-localization", "Lemma lema2", "Gamma^m_G(A)_(p) = Gamma^m_G(A_(p))", "check_lema2_all", "action")
def _gamma_localization(action, options):
    yield "", partial(check_lema2_all, action)


@check("local-nilpotency", "Proposition uf", "nilpotent iff nilpotent on every A_(p)", "check_uf", "action")
def _local_nilpotency(action, options):
    yield "", partial(check_uf, action)


@check("frattini-nilpotency", "Proposition nuevolema", "nilpotent on A/Phi(A) implies nilpotent on A", "check_nuevolema", "action")
def _frattini_nilpotency(action, options):
    yield "", partial(check_nuevolema, action)


@check("exponent-bound", "Proposition propodos", "nil_G A <= n nil_G (A (x) Z/p) for exponent p^n", "check_propodos", "action")
def _exponent_bound(action, options):
    yield "", partial(check_propodos, action)


@check("localized-reduction", "Theorem dos", "nilpotent on localizations gives nilpotent actor and action", "check_dos", "action")
def _localized_reduction(action, options):
    yield "", partial(check_dos, action)


@check("frattini-reduction", "Theorem uno", "nilpotent on the Frattini factor gives nilpotent actor and action", "check_uno", "action")
def _frattini_reduction(action, options):
    yield "", partial(check_uno, action)


@check("tensor-reduction", "Corollary nuevo", "nilpotent on every A (x) Z/p gives nilpotent actor and action", "check_nuevo", "action")
def _tensor_reduction(action, options):
    yield "", partial(check_nuevo, action)


@check("coefficient-reduction", "Corollary coeficientes", "nilpotent on A[p] and A/pA gives nilpotent actor and action", "check_coeficientes", "action")
def _coefficient_reduction(action, options):
    yield "", partial(check_coeficientes, action)


# Candidate automorphism sets


@check("intersection-nilpotent", "Theorem cuatro", "the meet of all E#p(K(A,n)) acts nilpotently, A finitely generated", "check_cuatro", "automorphisms")
def _intersection_nilpotent(body, options):
    yield "", partial(check_cuatro, body.group, body.matrices)

def _gl_witness(body) -> CheckResult:
    A = body.group
    if A.torsion or A.free_rank != 2 or len(body.matrices) != 2:
        raise NotApplicable("needs exactly two automorphisms of Z^2")
    a, b = body.matrices
    return check_final_remark(a.matrix, b.matrix)


@check("gl-witness", "Remark final", "E#2(K(Z^2,n)) is not nilpotent", "check_final_remark", "automorphisms")
def _gl(body, options):
    yield "", partial(_gl_witness, body)


def subjects(entry: CatalogEntry, options: SuiteOptions) -> list[tuple[str, Any]]:
    """The (subject kind, object) pairs a catalog entry contributes."""
    if not entry.is_computed:
        return []
    if entry.kind is EntryKind.PERM_GROUP:
        return [("group", entry.body.table)]
    if entry.kind is EntryKind.AB_GROUP:
        A = entry.body
        if not A.is_finite:
            return []
        out = [("abgroup", A)]
        if A.order <= options.group_limit:
            out.insert(0, ("group", ab_to_table(A)))
        return out
    if entry.kind is EntryKind.ACTION:
        return [("action", entry.body.action)]
    if entry.kind is EntryKind.AUTOMORPHISMS:
        return [("automorphisms", entry.body)]
    return []


def _run_case(check_id: str, instance: str, thunk: Callable[[], CheckResult], label: str = "") -> VerificationReport:
    witness: Optional[dict] = None
    start = time.perf_counter()
    try:
        result = thunk()
    except (TooLarge, ClosureExceedsCap) as exc:
        logger.warning("%s on %s skipped: %s", check_id, instance, exc.detail)
        outcome, details = Outcome.NA, {"reason": exc.detail}
    except (NotApplicable, NotNilpotent) as exc:
        outcome, details = Outcome.NA, {"reason": exc.detail}
    except NilactError as exc:
        logger.error("%s on %s raised %s: %s", check_id, instance, type(exc).__name__, exc.detail)
        outcome, details, witness = Outcome.FAIL, {}, {"error": type(exc).__name__, "detail": exc.detail}
    except Exception as exc:
        logger.exception("%s on %s crashed", check_id, instance)
        outcome, details, witness = Outcome.FAIL, {}, {"error": type(exc).__name__, "detail": repr(exc)}
    else:
        if result:
            outcome, details = Outcome.PASS, result.details
        else:
            outcome, details, witness = Outcome.FAIL, {}, result.details or {"holds": False}
    elapsed = time.perf_counter() - start
    return VerificationReport(
        check=check_id,
        label=label,
        instance=instance,
        outcome=outcome,
        details=details,
        witness=witness,
        wall_time=elapsed,
    )


def selected_checks(scope: str = "*") -> list[Check]:
    """Checks whose id matches any of the comma-separated glob patterns."""
    patterns = [s.strip() for s in scope.split(",") if s.strip()]
    return [c for c in CHECKS if any(fnmatch(c.id, pat) for pat in patterns)]


def _entry_reports(entry: CatalogEntry, checks: list[Check], options: SuiteOptions) -> list[VerificationReport]:
    reports = []
    for kind, subject in subjects(entry, options):
        for c in checks:
            if c.subject != kind:
                continue
            for suffix, thunk in c.cases(subject, options):
                reports.append(_run_case(c.id, entry.name + suffix, thunk, c.label))
    return reports


@dataclass(frozen=True)
class SuiteRun:
    reports: list[VerificationReport]
    exit_code: int

    def counts(self) -> dict[str, int]:
        out = {o.value: 0 for o in Outcome}
        for r in self.reports:
            out[r.outcome.value] += 1
        return out


def run_suite(catalog: Catalog, scope: str = "*", options: Optional[SuiteOptions] = None) -> SuiteRun:
    """
    Run every selected check on every catalog entry it applies to. Reports
    come out in catalog order, then registry order, whatever the number of
    worker threads; failures are reported, never raised.
    """
    options = options or SuiteOptions()
    checks = selected_checks(scope)
    entries = list(catalog)
    if not checks:
        return SuiteRun([], EXIT_OK)
    if options.jobs > 1:
        with ThreadPoolExecutor(max_workers=options.jobs) as pool:
            per_entry = list(pool.map(lambda e: _entry_reports(e, checks, options), entries))
    else:
        per_entry = [_entry_reports(e, checks, options) for e in entries]
    reports = seal_reports([r for chunk in per_entry for r in chunk])
    failed = any(r.outcome is Outcome.FAIL for r in reports)
    logger.info("suite: %d reports over %d entries", len(reports), len(entries))
    return SuiteRun(reports, EXIT_FAIL if failed else EXIT_OK)
