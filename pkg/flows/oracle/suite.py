"""
Suítes de aceitação: motor contra oráculos, dentro do orçamento.

    1. index-theorem     índice de X · índice genérico = ind(A)
    2. abhn              soma zero, índice = oráculo, período = índice
    3. restriction       restrição válida, índice divide, composição local
    4. extension-lemma   K do lema pertence ao conjunto admissível do oráculo
    5. torsion-rules     regras aplicadas = regras esperadas, cotas
    6. extension-count   contagem e catálogo na grade de descritores
    7. equiv-chain       cadeias revalidadas a partir do JSON
    8. determinism       lema e cadeias reproduzem o mesmo JSON canônico
"""

import json
import random
from fractions import Fraction
from itertools import combinations, product
from math import gcd
from typing import Any, Callable, Dict, Iterator, List, Tuple

from flows.brauer.csa import AlgebraDescriptor
from flows.brauer.global_brauer import construct_extension_lemma, global_index, global_period, global_restrict, validate_class
from flows.brauer.invariants import reduce
from flows.brauer.local_brauer import (
    catalog_degree_p_extensions,
    count_degree_p_extensions,
    local_index,
    local_restrict,
    restricted_index,
)
from flows.brauer.schemas import FormalExtension, GlobalBrauerClass, LocalBrauerClass, LocalFieldDescriptor, Place
from flows.oracle.checks import (
    assignment_of,
    check_chain_record,
    oracle_common_divisor,
    oracle_degree_p_extensions,
    oracle_factor,
    oracle_index,
    oracle_is_square_free,
    oracle_lemma_search,
    oracle_partitions,
    oracle_restricted_index,
    oracle_rule_ids,
    oracle_torsion_combination,
)
from flows.oracle.schemas import MAX_REPORTED_FAILURES, EnumerationBudget, SuiteReport, SuiteResult
from flows.severi_brauer.equiv_chain import NodeRegistry, build_chain, chain_from_record, validate_chain
from flows.severi_brauer.sb_calculus import (
    combine_primary_bounds,
    generic_index,
    has_rational_point,
    product_torsion_bound,
    rule_ids,
    torsion_bound,
    variety_index,
)
from flows.severi_brauer.schemas import FlagDescriptor
from shared.errors import BudgetError, PreconditionError, SBFlagError
from shared.utils import canonical_json, get_logger

EXHAUSTIVE_DEGREE = 36
LEMMA_PARAMETERS = [(p, m) for p in (2, 3) for m in (2, 3, 4)]
CHAIN_PARAMETERS = [(2, 2, 1), (2, 3, 1), (3, 2, 1)]
LOCAL_INDEX_LIMIT = 48


class Collector:
    """Acumula verificações de uma suíte."""

    def __init__(self, name: str):
        self.name = name
        self.checks = 0
        self.failures: List[str] = []

    def check(self, ok: bool, detail: str) -> bool:
        self.checks += 1
        if not ok:
            self.failures.append(detail)
        return ok

    def result(self, budget_hit: bool = False) -> SuiteResult:
        if self.failures:
            status = "fail"
        elif budget_hit:
            status = "budget"
        else:
            status = "pass"
        return SuiteResult(
            name=self.name,
            status=status,
            checks=self.checks,
            failed=len(self.failures),
            failures=tuple(self.failures[:MAX_REPORTED_FAILURES]),
        )


def canonical_invariants(max_denominator: int) -> List[Fraction]:
    """Elementos a/b de Q/Z com b <= max_denominator, em ordem crescente."""
    values = {Fraction(a, b) for b in range(1, max_denominator + 1) for a in range(b)}
    return sorted(values)


def class_family(max_places: int, max_denominator: int) -> Iterator[Tuple[Dict[str, str], bool]]:
    """Tuplas de invariantes em v1..v_r (r <= max_places) e se a soma é zero."""
    values = canonical_invariants(max_denominator)
    for count in range(1, max_places + 1):
        labels = [f"v{i}" for i in range(1, count + 1)]
        for combo in product(values, repeat=count):
            raw = {label: f"{value.numerator}/{value.denominator}" for label, value in zip(labels, combo)}
            yield raw, sum(combo) % 1 == 0


# ---------------------------------------------------------------- suítes


def suite_index_theorem(budget: EnumerationBudget, collector: Collector) -> None:
    def verify(index: int, flags: Tuple[int, ...]) -> None:
        X = FlagDescriptor(algebra=algebras[index], flags=flags)
        d = generic_index(X)
        collector.check(variety_index(X) * d == index, f"variety·generic != ind: ind={index} flags={list(flags)}")
        collector.check(d == oracle_common_divisor(index, flags), f"generic-index: ind={index} flags={list(flags)}")
        collector.check(
            has_rational_point(X, index) == (variety_index(X) == 1),
            f"rational-point: ind={index} flags={list(flags)}",
        )

    algebras: Dict[int, AlgebraDescriptor] = {}
    for index in range(1, min(budget.max_index, EXHAUSTIVE_DEGREE) + 1):
        algebras[index] = AlgebraDescriptor(kind="abstract", index=index)
        for size in (1, 2, 3):
            for flags in combinations(range(1, index), size):
                verify(index, flags)

    if budget.max_index > EXHAUSTIVE_DEGREE:
        rng = random.Random(budget.random_seed)
        for _ in range(budget.random_samples):
            index = rng.randint(EXHAUSTIVE_DEGREE + 1, budget.max_index)
            if index not in algebras:
                algebras[index] = AlgebraDescriptor(kind="abstract", index=index)
            flags = tuple(sorted(rng.sample(range(1, index), rng.randint(1, 3))))
            verify(index, flags)


def suite_abhn(budget: EnumerationBudget, collector: Collector) -> None:
    denominator = min(budget.max_denominator, budget.max_index)
    for raw, zero_sum in class_family(budget.max_places, denominator):
        try:
            c = validate_class(raw)
        except SBFlagError as e:
            collector.check(not zero_sum and e.code == "not-in-brauer-group", f"rejected {raw}: {e.code}")
            continue
        if not collector.check(zero_sum, f"accepted nonzero sum {raw}"):
            continue
        index = global_index(c)
        collector.check(index == oracle_index(c, budget), f"index {raw}")
        collector.check(global_period(c) == index, f"period {raw}")


def restriction_classes(budget: EnumerationBudget) -> Iterator[Tuple[Dict[str, str], GlobalBrauerClass]]:
    """
    Classes de soma zero com denominador <= max_denominator, uma por multiconjunto
    de invariantes: a suíte percorre todas as partições em cada lugar, então
    permutar os lugares não gera caso novo.
    """
    seen = set()
    for raw, zero_sum in class_family(budget.max_places, min(budget.max_denominator, budget.max_index)):
        key = tuple(sorted(raw.values()))
        if not zero_sum or key in seen:
            continue
        seen.add(key)
        yield raw, validate_class(raw)


def suite_restriction(budget: EnumerationBudget, collector: Collector) -> None:
    for raw, c in restriction_classes(budget):
        support = sorted(c.invariants)
        index = global_index(c)
        for degree in range(2, budget.max_degree + 1):
            choices = oracle_partitions(degree, max_parts=3)
            for combo in product(choices, repeat=len(support)):
                E = FormalExtension(degree=degree, local_data=dict(zip(support, combo)))
                try:
                    index_over_E = global_index(global_restrict(c, E))
                except SBFlagError as e:
                    collector.check(False, f"restrict {raw} by {E.to_record()}: {e.code}")
                    continue
                collector.check(index % index_over_E == 0, f"index-divides {raw} {E.to_record()}")
                collector.check(index_over_E == oracle_restricted_index(c, E), f"restricted-index {raw} {E.to_record()}")

    # composição local até o dobro do orçamento (padrão: graus <= 12, denominadores <= 24)
    degrees = range(1, 2 * budget.max_degree + 1)
    for value in canonical_invariants(2 * budget.max_denominator):
        local = LocalBrauerClass(invariant=reduce(value.numerator, value.denominator))
        for a in degrees:
            collector.check(
                local_index(local_restrict(local, a)) == restricted_index(local_index(local), a),
                f"local-index {value} by {a}",
            )
            for b in degrees:
                twice = local_restrict(local_restrict(local, a), b)
                collector.check(
                    twice.invariant == local_restrict(local, a * b).invariant,
                    f"composition {value} by {a}·{b}",
                )


def lemma_classes(p: int, m: int, max_places: int) -> Iterator[Tuple[str, GlobalBrauerClass]]:
    """Classes de índice p^m com 1 a 3 lugares (inclui lugar real para p = 2 e um corpo local)."""
    N = p ** m
    fixtures: List[Tuple[str, GlobalBrauerClass]] = [
        ("two-places", GlobalBrauerClass(invariants={"v1": reduce(1, N), "v2": reduce(-1, N)})),
        ("three-places", GlobalBrauerClass(
            places=(Place(label="v1", descriptor=LocalFieldDescriptor(residue_char=5, residue_size=5)),),
            invariants={"v1": reduce(1, N), "v2": reduce(1, N // p), "v3": reduce(-(1 + p), N)},
        )),
        ("local", GlobalBrauerClass(kind="local", invariants={"v": reduce(1, N)})),
    ]
    if p == 2:
        fixtures.append(("real-place", GlobalBrauerClass(
            places=(Place(label="v2", descriptor=LocalFieldDescriptor(kind="real")),),
            invariants={"v1": reduce(1, N), "v2": reduce(1, 2), "v3": reduce(-(1 + N // 2), N)},
        )))
    for name, c in fixtures:
        if len(c.places) <= max_places:
            yield name, c


def lemma_records(budget: EnumerationBudget, collector: Collector) -> List[Dict[str, Any]]:
    records = []
    for p, m in LEMMA_PARAMETERS:
        if p ** m > budget.max_index:
            continue
        for name, c in lemma_classes(p, m, budget.max_places):
            candidates = oracle_degree_p_extensions(c, p, p ** (m - 1), budget)
            pairs = list(combinations(candidates, 2))[: budget.max_lemma_pairs]
            for i, (L0, L1) in enumerate(pairs):
                case = f"p={p} m={m} {name} #{i}"
                admissible = oracle_lemma_search(c, L0, L1, p, budget)
                collector.check(bool(admissible), f"{case}: oracle set empty")
                try:
                    result = construct_extension_lemma(c, L0, L1)
                except SBFlagError as e:
                    collector.check(False, f"{case}: engine {e.code}")
                    records.append({"case": case, "error": e.code})
                    continue
                collector.check(assignment_of(c, result.extension) in admissible, f"{case}: K not admissible")
                collector.check(
                    result.index_over_extension == p ** (m - 1)
                    and result.index_over_composita == (p ** (m - 2), p ** (m - 2)),
                    f"{case}: index targets",
                )
                records.append({"case": case, **result.to_record()})

            # extensão que não reduz o índice: o lema recusa antes do oráculo
            split = FormalExtension(degree=p)
            if c.kind == "global" and candidates:
                try:
                    construct_extension_lemma(c, split, candidates[0])
                    collector.check(False, f"p={p} m={m} {name}: precondition gate")
                except PreconditionError:
                    collector.check(True, "")
    return records


def suite_extension_lemma(budget: EnumerationBudget, collector: Collector) -> None:
    lemma_records(budget, collector)


def suite_torsion_rules(budget: EnumerationBudget, collector: Collector) -> None:
    for n in range(2, budget.max_index + 1):
        factors = oracle_factor(n)
        square_free = oracle_is_square_free(n)
        exponents = [e for e in range(1, n + 1) if n % e == 0 and set(oracle_factor(e)) == set(factors)]
        divisors = [r for r in range(1, n) if n % r == 0]
        for exponent in exponents:
            algebra = AlgebraDescriptor(kind="abstract", index=n, exponent=exponent, char_divides_index=False)
            for r in divisors:
                X = FlagDescriptor(algebra=algebra, flags=(r,))
                bound = torsion_bound(X)
                d = r
                case = f"n={n} r={r} exp={exponent}"
                applied = set(rule_ids(bound))
                collector.check(
                    applied == oracle_rule_ids(n, d, exponent, False, "abstract"),
                    f"rule-mismatch {case}: {sorted(applied)}",
                )
                collector.check(gcd(d, n // d) % bound.exponent == 0, f"bound-not-dividing {case}")
                if square_free:
                    collector.check(bound.exponent == 1, f"square-free {case}")
                if d == 4 and exponent % 4:
                    collector.check(bound.exponent <= 2, f"four-adic {case}")
                if d == 2 and n % 8:
                    collector.check(bound.exponent == 1, f"two-adic {case}")
                primes = sorted(oracle_factor(d))
                hypotheses = [f"sbp-vanishing:{q}" for q in primes] + [f"primary-vanishing:{q}" for q in primes]
                enriched = torsion_bound(X, enabled_hypotheses=hypotheses)
                collector.check(bound.exponent % enriched.exponent == 0, f"monotonicity {case}")

    # SB_e × SB_d por pares de divisores
    for n in range(2, budget.max_index + 1):
        algebra = AlgebraDescriptor(kind="abstract", index=n, char_divides_index=False)
        divisors = [r for r in range(1, n) if n % r == 0]
        for e, r in combinations(divisors, 2):
            bound = product_torsion_bound(algebra, e, r)
            d = gcd(e, r)
            case = f"n={n} e={e} d={r}"
            applied = set(rule_ids(bound))
            collector.check(
                applied == oracle_rule_ids(n, d, n, False, "abstract", factors=(e, r)),
                f"rule-mismatch {case}: {sorted(applied)}",
            )
            collector.check(gcd(d, n // d) % bound.exponent == 0, f"bound-not-dividing {case}")

    for n in range(2, min(budget.max_index, LOCAL_INDEX_LIMIT) + 1):
        local = AlgebraDescriptor(kind="local", brauer_data={"invariant": f"1/{n}"})
        global_algebra = AlgebraDescriptor(kind="global", brauer_data={"v1": f"1/{n}", "v2": f"{n - 1}/{n}"})
        for algebra in (local, global_algebra):
            for r in range(1, n):
                if n % r:
                    continue
                bound = torsion_bound(FlagDescriptor(algebra=algebra, flags=(r,)))
                collector.check(
                    bound.exponent == 1 and "arithmetic-field" in {rule.id for rule in bound.rules_applied},
                    f"arithmetic-field {algebra.base_kind} n={n} r={r}",
                )

    for d in range(1, budget.max_index + 1):
        factors = sorted(oracle_factor(d).items())
        for extra in (0, 1):
            primes = [(q, b + extra, b) for q, b in factors]
            combined = oracle_torsion_combination(primes)
            collector.check(combined == d, f"combination d={d} a=b+{extra}: {combined}")
            collector.check(combine_primary_bounds(primes) == combined, f"engine-combination d={d} a=b+{extra}")


def descriptor_grid(max_prime: int = 7, max_residue: int = 49) -> Iterator[LocalFieldDescriptor]:
    for residue_char in (q for q in range(2, max_residue + 1) if oracle_is_square_free(q) and len(oracle_factor(q)) == 1):
        size = residue_char
        while size <= max_residue:
            for field_char in (0, residue_char):
                flag_options: List[Dict[int, bool]] = [{}]
                if field_char == 0 and residue_char <= max_prime and residue_char > 2:
                    flag_options = [{residue_char: True}, {residue_char: False}]
                for flags in flag_options:
                    yield LocalFieldDescriptor(
                        residue_char=residue_char,
                        residue_size=size,
                        field_char=field_char,
                        zeta_flags=flags,
                    )
            size *= residue_char


def suite_extension_count(budget: EnumerationBudget, collector: Collector) -> None:
    primes = [q for q in range(2, 8) if len(oracle_factor(q)) == 1 and oracle_is_square_free(q)]
    for descriptor in descriptor_grid():
        for p in primes:
            case = f"p={p} q={descriptor.residue_size} char={descriptor.field_char} flags={descriptor.zeta_flags}"
            count = count_degree_p_extensions(descriptor, p)
            if descriptor.field_char == p:
                collector.check(count.infinite and count.case == 1, f"case-1 {case}")
            else:
                collector.check(not count.infinite and count.lower_bound >= p + 1, f"bound {case}")
            labels = catalog_degree_p_extensions(descriptor, p, p + 1)
            collector.check(len({str(label) for label in labels}) == p + 1, f"catalog-distinct {case}")


def chain_leaves(registry: NodeRegistry, p: int, n: int, budget: EnumerationBudget, branching: int = 2):
    """Nós de grau p^n: torres com `branching` escolhas por nível, índice caindo p por passo."""
    level = [registry.base]
    for depth in range(n):
        following = []
        for node in level:
            target = node.declared_index // p
            options = oracle_degree_p_extensions(node.brauer_class, p, target, budget)[:branching]
            for j, E in enumerate(options):
                following.append(registry.add_extension(node.id, E, node_id=f"{node.id}.L{j}" if depth else f"L{j}"))
        level = following
    return level


def chain_records(budget: EnumerationBudget, collector: Collector) -> List[Dict[str, Any]]:
    records = []
    for p, m, k in CHAIN_PARAMETERS:
        N = p ** m
        if N > budget.max_index:
            continue
        D = AlgebraDescriptor(kind="global", brauer_data={"v1": f"1/{N}", "v2": f"{N - 1}/{N}"})
        n = m - k
        leaves = chain_leaves(NodeRegistry.from_algebra(D), p, n, budget)
        pairs = [(0, 0)] + list(combinations(range(len(leaves)), 2))
        for i, j in pairs[: budget.max_lemma_pairs]:
            registry = NodeRegistry.from_algebra(D)
            fresh = chain_leaves(registry, p, n, budget)
            case = f"p={p} m={m} k={k} {fresh[i].id}~{fresh[j].id}"
            try:
                chain = build_chain(D, k, fresh[i], fresh[j], registry)
            except SBFlagError as e:
                collector.check(False, f"{case}: {e.code}")
                records.append({"case": case, "error": e.code})
                continue
            record = json.loads(canonical_json(chain.to_record()))
            collector.check(
                (record["nodes"][0], record["nodes"][-1]) == (fresh[i].id, fresh[j].id),
                f"{case}: endpoints",
            )
            problems = check_chain_record(record)
            collector.check(not problems, f"{case}: {problems[:3]}")
            collector.check(not validate_chain(chain_from_record(record)), f"{case}: revalidation")
            records.append({"case": case, **record})
    return records


def suite_equiv_chain(budget: EnumerationBudget, collector: Collector) -> None:
    chain_records(budget, collector)


def suite_determinism(budget: EnumerationBudget, collector: Collector) -> None:
    runs = []
    for _ in range(2):
        scratch = Collector("determinism-run")
        runs.append(canonical_json({
            "lemma": lemma_records(budget, scratch),
            "chain": chain_records(budget, scratch),
        }))
    collector.check(runs[0] == runs[1], "lemma/chain records differ between runs")


SuiteFunction = Callable[[EnumerationBudget, Collector], None]

SUITES: List[Tuple[str, SuiteFunction]] = [
    ("index-theorem", suite_index_theorem),
    ("abhn", suite_abhn),
    ("restriction", suite_restriction),
    ("extension-lemma", suite_extension_lemma),
    ("torsion-rules", suite_torsion_rules),
    ("extension-count", suite_extension_count),
    ("equiv-chain", suite_equiv_chain),
    ("determinism", suite_determinism),
]


def run_suite(name: str, function: SuiteFunction, budget: EnumerationBudget) -> SuiteResult:
    """Roda uma suíte; orçamento estourado vira resultado parcial."""
    logger = get_logger("oracle")
    collector = Collector(name)
    budget_hit = False
    try:
        function(budget, collector)
    except BudgetError as e:
        budget_hit = True
        logger.warning(f"⚠️ {name}: {e.message} (relatório parcial)")
    result = collector.result(budget_hit)
    icon = {"pass": "✅", "fail": "❌", "budget": "⚠️"}[result.status]
    logger.info(f"{icon} {name}: {result.checks} verificações, {result.failed} falha(s)")
    return result


def run_oracle_suite(budget: EnumerationBudget) -> SuiteReport:
    """Roda as oito suítes em ordem fixa."""
    results = tuple(run_suite(name, function, budget) for name, function in SUITES)
    return SuiteReport(budget=budget, results=results)
