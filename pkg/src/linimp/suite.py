"""The acceptance battery: ten criteria, each producing a Report.

Every random choice is drawn from `random.Random(seed)`, so a seed fixes the
whole run.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable

from . import terms as T
from .combinators import (
    LINEAR_BASES,
    abstract_linear,
    all_permutations,
    bases_used,
    capp,
    comb_free_vars,
    is_linear_combinatory,
    perm_term,
    perm_to_comb,
    show_comb,
    to_term,
)
from .combinators import B as B_COMB
from .fixtures import bool2, m2, named_fixtures, random_structures
from .formats import load_structure
from .generators import random_linear_term
from .linreal import DEFAULT_PROJECT_CAP, as_implicative, battery, jacobi_check
from .quotient import build_quotient, residuated_suite
from .records import (
    adjunction_check,
    additive_suite,
    exponential_from_fixpoint_check,
    fixpoint_report,
    pair_of,
    verify_record,
)
from .report import FAIL, Report
from .separators import generate, intuitionistic_transfer_check, verify
from .sequent import corpus_paths, load_proof, soundness_check, target_core
from .structures import combinator_value_check, roundtrip_check

DEFAULT_SEED = 0
RECORD_FIXTURES = ("fixtures/powerset3-records.lat", "fixtures/bool2-toprecords.lat")
DEGENERATE_RECORDS = "fixtures/bool2-toprecords.lat"
SITUATION_BUDGET = 60.0


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = DEFAULT_SEED
    fuel: int = T.DEFAULT_FUEL
    cap: int = DEFAULT_PROJECT_CAP
    terms: int = 1000
    random_lattices: int = 20


def _fixtures(cfg: SuiteConfig):
    return named_fixtures() + random_structures(cfg.seed, cfg.random_lattices, 8)


def bracket_abstraction(cfg: SuiteConfig) -> Report:
    rep = Report("1 bracket abstraction")
    rng = random.Random(cfg.seed)
    bad = []
    for i in range(cfg.terms):
        t = random_linear_term(rng, 30)
        c = abstract_linear(t)
        ok = (
            is_linear_combinatory(c)
            and bases_used(c) <= set(LINEAR_BASES)
            and not comb_free_vars(c)
            and T.normal_key(to_term(c), cfg.fuel) == T.normal_key(t, cfg.fuel)
        )
        if not ok:
            bad.append((i, T.show(t), show_comb(c)))
    rep.add("random-closed-linear-terms", not bad, bad[:1] or None,
            detail=f"{cfg.terms} terms, {len(bad)} failures")
    return rep


def permutation_homomorphism(cfg: SuiteConfig) -> Report:
    rep = Report("2 permutation homomorphism")
    perms = all_permutations(4)
    bad = []
    for s in perms:
        for t in perms:
            word = capp(B_COMB, perm_to_comb(s), perm_to_comb(t))
            # Without eta, both sides carry the larger support as binders.
            target = perm_term(t.compose(s), max(s.degree, t.degree))
            if T.normal_key(to_term(word), cfg.fuel) != T.normal_key(target, cfg.fuel):
                bad.append((str(s), str(t)))
    rep.add("s4-pairs", not bad, bad[:1] or None, detail=f"{len(perms) ** 2} pairs")
    return rep


def combinator_equalities(cfg: SuiteConfig) -> Report:
    rep = Report("3 combinator closed forms")
    for A in _fixtures(cfg):
        rep.extend(combinator_value_check(A), A.name)
    return rep


def applicative_implicative(cfg: SuiteConfig) -> Report:
    rep = Report("4 applicative and implicative")
    for A in _fixtures(cfg):
        rep.extend(roundtrip_check(A), A.name)
    return rep


def core_computation(cfg: SuiteConfig) -> Report:
    rep = Report("5 core computation")
    A = bool2()
    names = A.lattice.names
    core = generate((), A, "linear").carrier
    rep.add("core-is-top", core == {A.top}, sorted(names[a] for a in core))
    rep.add("core-consistent", A.bottom not in core)
    full = generate({A.bottom}, A, "linear").carrier
    rep.add("bottom-generates-all", full == set(A.elements), sorted(names[a] for a in full))
    return rep


def sequent_soundness(cfg: SuiteConfig) -> Report:
    rep = Report("6 IMLL/IMELL soundness")
    paths = corpus_paths()
    rep.add("corpus-size", len(paths) >= 50, len(paths), detail=f"{len(paths)} proofs")
    kinds: dict[str, int] = {}
    structures = named_fixtures()
    for path in paths:
        p = load_proof(path)
        kinds[target_core(p)] = kinds.get(target_core(p), 0) + 1
        for A in structures:
            rep.extend(soundness_check(p, A), f"{path.stem}.{A.name}")
    rep.note("target-cores", ", ".join(f"{k}={v}" for k, v in sorted(kinds.items())))
    return rep


def _generated_separators(A):
    seen = []
    for a in A.elements:
        S = generate({a}, A, "linear").carrier
        if S not in seen:
            seen.append(S)
    return seen


def quotient_laws(cfg: SuiteConfig) -> Report:
    rep = Report("7 quotient residuated laws")
    count = 0
    for A in _fixtures(cfg):
        for S in _generated_separators(A):
            Q = build_quotient(A, S)
            label = f"{A.name}/{'-'.join(A.lattice.names[a] for a in sorted(S))}"
            rep.extend(Q.report, label)
            laws = residuated_suite(Q)
            for c in laws.checks:
                if c.name != "joins":
                    rep.checks.append(type(c)(f"{label}.{c.name}", c.status, c.detail))
            count += 1
    rep.note("pairs", f"{count} (fixture, separator) pairs")
    return rep


def realisability_bridge(cfg: SuiteConfig) -> Report:
    rep = Report("8 linear realisability bridge")
    slowest = (0.0, "")
    for S in battery(cfg.cap):
        start = time.perf_counter()
        rep.extend(jacobi_check(S), S.name)
        B = as_implicative(S, cfg.cap)
        elapsed = time.perf_counter() - start
        slowest = max(slowest, (elapsed, S.name))
        rep.extend(B.report, S.name)
        rep.add(f"{S.name}.within-budget", elapsed <= SITUATION_BUDGET, f"{elapsed:.1f}s")
    rep.note("slowest", f"{slowest[1]} {slowest[0]:.2f}s")
    return rep


def exponential_transfer(cfg: SuiteConfig) -> Report:
    rep = Report("9 exponential to intuitionistic")
    for A in (bool2(), m2()):
        rep.extend(intuitionistic_transfer_check(A, {A.top}), A.name)
    A = bool2("top")
    neg = verify({A.top}, A, "exponential")
    d = neg.get("contains-D")
    rep.add("constant-top-rejects-D", d is not None and d.status == FAIL, d.detail if d else None,
            detail="negative control")
    return rep


def records_additives(cfg: SuiteConfig) -> Report:
    rep = Report("10 records, additives, fixpoints")
    for path in RECORD_FIXTURES:
        A = load_structure(path)
        tag = A.name or path
        for label, table in sorted(A.records.items()):
            rec = verify_record(table, A)
            rep.extend(rec, f"{tag}.record-{label}")
            if rec.ok:
                rep.extend(adjunction_check(table, A), f"{tag}.record-{label}")
        pair = pair_of(A)
        rep.extend(additive_suite(A, pair), f"{tag}.additive")
        rep.extend(fixpoint_report(A, pair), f"{tag}.fixpoint")
    A = load_structure(DEGENERATE_RECORDS)
    finding = exponential_from_fixpoint_check(A, S={A.top})
    d = finding.get("fixpoint.contains-D")
    rep.add("degenerate-pair-fails-D", d is not None and d.status == FAIL, d.detail if d else None,
            detail="expected finding")
    return rep


CRITERIA: dict[str, tuple[int, Callable[[SuiteConfig], Report]]] = {
    "abstraction": (1, bracket_abstraction),
    "permutations": (2, permutation_homomorphism),
    "closed-forms": (3, combinator_equalities),
    "adjunction": (4, applicative_implicative),
    "core": (5, core_computation),
    "soundness": (6, sequent_soundness),
    "quotient": (7, quotient_laws),
    "linreal": (8, realisability_bridge),
    "transfer": (9, exponential_transfer),
    "records": (10, records_additives),
}


def run_criterion(name: str, cfg: SuiteConfig | None = None) -> Report:
    return CRITERIA[name][1](cfg or SuiteConfig())


def suite(cfg: SuiteConfig | None = None, only: list[str] | None = None) -> Report:
    """All criteria (or the named subset) merged under `c<N>-<name>.` prefixes."""
    cfg = cfg or SuiteConfig()
    names = list(CRITERIA) if not only else only
    unknown = [n for n in names if n not in CRITERIA]
    if unknown:
        raise KeyError(f"unknown criteria {unknown}; choose from {list(CRITERIA)}")
    rep = Report(f"acceptance suite seed={cfg.seed}")
    for name in names:
        number, _ = CRITERIA[name]
        sub = run_criterion(name, cfg)
        rep.extend(sub, f"c{number:02d}-{name}")
        rep.add(f"c{number:02d}-{name}", sub.ok, [c.name for c in sub.failures()][:3] or None,
                detail="criterion verdict")
    return rep
