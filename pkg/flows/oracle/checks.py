"""
Oráculos de força bruta.

Nenhum oráculo reaproveita o caminho de código da operação que confere:
ordens vêm de Fraction, divisores de busca exaustiva, índices de composita de
uma reimplementação da regra de sobreposição. O único dado compartilhado é o
catálogo de rótulos locais, usado como universo de rótulos.

Ordem de enumeração: lugares do suporte em ordem alfabética; em cada lugar,
partições com partes decrescentes em ordem lexicográfica, e a partição (p,)
expandida pelos rótulos do catálogo.
"""

from fractions import Fraction
from itertools import product
from math import gcd, isqrt
from typing import Any, Dict, FrozenSet, Iterator, List, Optional, Sequence, Set, Tuple

from flows.brauer.local_brauer import catalog_degree_p_extensions, catalog_size
from flows.brauer.schemas import FormalExtension, GlobalBrauerClass, LocalExtensionLabel
from flows.oracle.schemas import EnumerationBudget
from shared.errors import BudgetError

Pattern = Tuple[Tuple[int, Optional[str]], ...]
Assignment = Tuple[Tuple[str, Pattern], ...]


def _fractions(c: GlobalBrauerClass) -> Dict[str, Fraction]:
    return {label: Fraction(inv.numerator, inv.denominator) for label, inv in c.invariants.items()}


def _order(value: Fraction) -> int:
    return (value % 1).denominator


def _lcm(values) -> int:
    result = 1
    for value in values:
        result = result * value // gcd(result, value)
    return result


def oracle_index(c: GlobalBrauerClass, budget: EnumerationBudget) -> int:
    """
    Menor N >= 1 com N·inv_v = 0 em todo lugar, por varredura linear.

    Raises:
        BudgetError: N passaria de max_index
    """
    fractions = list(_fractions(c).values())
    for N in range(1, budget.max_index + 1):
        if all((N * value).denominator == 1 for value in fractions):
            return N
    raise BudgetError(
        f"varredura do índice passou de max_index={budget.max_index}",
        {"invariants": [str(value) for value in fractions]},
    )


def oracle_common_divisor(n: int, flags: Sequence[int]) -> int:
    """Maior divisor comum de n e das bandeiras, por busca exaustiva."""
    return max(d for d in range(1, n + 1) if n % d == 0 and all(flag % d == 0 for flag in flags))


def oracle_is_square_free(n: int) -> bool:
    return all(n % (q * q) for q in range(2, isqrt(n) + 1))


def oracle_factor(n: int) -> Dict[int, int]:
    """Fatoração por divisão de tentativa."""
    factors: Dict[int, int] = {}
    q = 2
    while q * q <= n:
        while n % q == 0:
            factors[q] = factors.get(q, 0) + 1
            n //= q
        q += 1
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def oracle_torsion_combination(primes: Sequence[Tuple[int, int, int]]) -> int:
    """
    gcd, sobre todas as rotações k, de (∏_{i≠k} p_i^{a_i})·p_k^{b_k}.

    Example:
        [(2, 2, 1), (3, 2, 1)] -> gcd(4·3, 2·9) = 6
        [(2, 3, 2), (5, 1, 1)] -> gcd(8·5, 4·5) = 20
    """
    result = 0
    for k in range(len(primes)):
        term = 1
        for i, (p, a, b) in enumerate(primes):
            term *= p ** (b if i == k else a)
        result = gcd(result, term)
    return result or 1


def _oracle_flag_bound(n: int, r: int) -> int:
    g = gcd(r, n)
    return gcd(g, n // g)


def oracle_rule_ids(
    n: int,
    d: int,
    exponent: int,
    char_divides_index: Optional[bool],
    field_kind: str,
    factors: Tuple[int, ...] = (),
) -> Set[str]:
    """Regras incondicionais que devem se aplicar, pelos predicados escritos à mão."""
    expected = {"index-gcd"}
    if len(factors) >= 2 and max(_oracle_flag_bound(n, r) for r in factors) > _oracle_flag_bound(n, d):
        expected.add("product-reduction")
    if oracle_is_square_free(n):
        expected.add("square-free")
    if field_kind in ("local", "global"):
        expected.add("arithmetic-field")
    if d == 2:
        if n % 2 == 0 and n % 8 != 0 and char_divides_index is False:
            expected.add("two-adic")
        if n in (1, 2, 4) and char_divides_index is False:
            expected.add("index-divides-4")
        if exponent % 4 != 0:
            expected.add("exponent-not-4")
    if d == 4 and exponent % 4 != 0:
        expected.add("four-adic")
    return expected


def _partitions(n: int, largest: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for part in range(min(n, largest), 0, -1):
        for rest in _partitions(n - part, part):
            yield (part,) + rest


def oracle_partitions(n: int, max_parts: Optional[int] = None) -> List[Tuple[int, ...]]:
    """Partições de n com partes decrescentes, em ordem lexicográfica."""
    found = [partition for partition in _partitions(n) if max_parts is None or len(partition) <= max_parts]
    return sorted(found)


def place_options(c: GlobalBrauerClass, label: str, p: int) -> List[Pattern]:
    """Todos os padrões locais de grau p num lugar (classe local: só (p,))."""
    descriptor = c.place(label).descriptor
    limit = p
    if descriptor is not None and descriptor.kind == "real":
        limit = 2
    elif descriptor is not None and descriptor.kind == "complex":
        limit = 1
    options: List[Pattern] = []
    for partition in oracle_partitions(p):
        if max(partition) > limit or (c.kind == "local" and partition != (p,)):
            continue
        if partition == (p,):
            labels = catalog_degree_p_extensions(descriptor, p, catalog_size(descriptor, p))
            options.extend(((p, str(item)),) for item in labels)
        else:
            options.append(tuple((d, None) for d in partition))
    return options


def _default_pattern(c: GlobalBrauerClass, label: str, L: FormalExtension, p: int) -> Pattern:
    components = [(d, str(item) if item is not None else None) for d, item in L.components_at(label)]
    if components == [(p, None)]:
        first = catalog_degree_p_extensions(c.place(label).descriptor, p, 1)[0]
        components = [(p, str(first))]
    return tuple(components)


def _overlap_degree(a: int, first: Optional[str], b: int, second: Optional[str]) -> int:
    prime_degree = a == b and a > 1 and all(a % q for q in range(2, isqrt(a) + 1))
    if prime_degree and first is not None and second is not None and first != second:
        return a * b
    return a * b // gcd(a, b)


def _pattern_index(value: Fraction, degrees: Sequence[int]) -> int:
    return max(_order(value * d) for d in degrees)


def oracle_lemma_search(
    c: GlobalBrauerClass,
    L0: FormalExtension,
    L1: FormalExtension,
    p: int,
    budget: EnumerationBudget,
) -> FrozenSet[Assignment]:
    """
    Todas as atribuições locais de grau p sobre o suporte que atingem
    ind(c_K) = p^{m−1} e ind(c_{K·L_i}) = p^{m−2}.

    Raises:
        BudgetError: mais atribuições que o limite do orçamento
    """
    index = oracle_index(c, budget)
    m = oracle_factor(index).get(p, 0)
    values = _fractions(c)
    support = sorted(values)

    per_place = [place_options(c, label, p) for label in support]
    total = 1
    for options in per_place:
        total *= len(options)
    if total > budget.pattern_limit:
        raise BudgetError(
            f"{total} atribuições locais excedem o limite {budget.pattern_limit}",
            {"assignments": total},
        )

    fixed = [{label: _default_pattern(c, label, L, p) for label in support} for L in (L0, L1)]
    admissible: Set[Assignment] = set()
    for combo in product(*per_place):
        index_K = _lcm(_pattern_index(values[label], [d for d, _ in pattern]) for label, pattern in zip(support, combo))
        if index_K != p ** (m - 1):
            continue
        hits = True
        for other in fixed:
            degrees = {
                label: [
                    _overlap_degree(a, lam, b, mu)
                    for a, lam in pattern
                    for b, mu in other[label]
                ]
                for label, pattern in zip(support, combo)
            }
            if _lcm(_pattern_index(values[label], degrees[label]) for label in support) != p ** (m - 2):
                hits = False
                break
        if hits:
            admissible.add(tuple(zip(support, combo)))
    return frozenset(admissible)


def assignment_of(c: GlobalBrauerClass, K: FormalExtension) -> Assignment:
    """Atribuição de uma extensão construída, no formato do oráculo."""
    return tuple(
        (label, tuple((d, str(item) if item is not None else None) for d, item in K.components_at(label)))
        for label in sorted(c.invariants)
    )


def extension_of(assignment: Assignment, p: int) -> FormalExtension:
    local_data = {}
    local_labels = {}
    for label, pattern in assignment:
        partition = tuple(d for d, _ in pattern)
        if partition == (1,) * p:
            continue
        local_data[label] = partition
        if any(item is not None for _, item in pattern):
            local_labels[label] = tuple(LocalExtensionLabel.model_validate(item) if item else None for _, item in pattern)
    return FormalExtension(degree=p, local_data=local_data, local_labels=local_labels)


def oracle_degree_p_extensions(
    c: GlobalBrauerClass,
    p: int,
    target_index: int,
    budget: EnumerationBudget,
) -> List[FormalExtension]:
    """Extensões de grau p (modelos locais no suporte) cuja restrição tem o índice alvo."""
    values = _fractions(c)
    support = sorted(values)
    found = []
    per_place = [place_options(c, label, p) for label in support]
    for combo in product(*per_place):
        index = _lcm(_pattern_index(values[label], [d for d, _ in pattern]) for label, pattern in zip(support, combo))
        if index == target_index:
            found.append(extension_of(tuple(zip(support, combo)), p))
            if len(found) > budget.pattern_limit:
                raise BudgetError(f"mais de {budget.pattern_limit} extensões candidatas", {"prime": p})
    return found


def oracle_restricted_index(c: GlobalBrauerClass, E: FormalExtension) -> int:
    values = _fractions(c)
    return _lcm(_pattern_index(value, E.partition_at(label)) for label, value in values.items())


def _record_index(raw_class: Optional[Dict[str, Any]]) -> Optional[int]:
    if raw_class is None:
        return None
    return _lcm(Fraction(text).denominator for text in raw_class.get("invariants", {}).values())


def _is_prime(n: int) -> bool:
    return n > 1 and all(n % q for q in range(2, isqrt(n) + 1))


def check_chain_record(record: Dict[str, Any]) -> List[str]:
    """
    Valida uma cadeia serializada lendo só o JSON: graus, subcorpos comuns,
    testemunhas, pertinência a A(Y), índices recalculados dos invariantes e
    decrescimento da medida.
    """
    problems: List[str] = []
    fields = {field["id"]: field for field in record.get("fields", [])}
    p, m, k = record.get("prime"), record.get("index_exponent"), record.get("k")
    if not all(isinstance(value, int) for value in (p, m, k)):
        return ["header-malformed"]
    degree, bound = p ** (m - k), p ** k

    def field(node_id: Any) -> Optional[Dict[str, Any]]:
        if node_id not in fields:
            problems.append(f"missing-field:{node_id}")
            return None
        return fields[node_id]

    for node_id, raw in fields.items():
        computed = _record_index(raw.get("brauer_class"))
        if computed is not None and computed != raw.get("declared_index"):
            problems.append(f"index-mismatch:{node_id}")

    nodes = record.get("nodes", [])
    for node_id in nodes:
        raw = field(node_id)
        if raw is not None and (raw["degree_over_base"] != degree or bound % raw["declared_index"]):
            problems.append(f"not-in-AY:{node_id}")

    certificates = record.get("certificates", [])
    if len(certificates) != max(len(nodes) - 1, 0):
        problems.append("chain-length-mismatch")
    for i, certificate in enumerate(certificates):
        left, right = field(certificate.get("left")), field(certificate.get("right"))
        common, witness = field(certificate.get("common_subfield")), field(certificate.get("splitting_witness"))
        if None in (left, right, common, witness):
            continue
        if i + 1 < len(nodes) and (left["id"], right["id"]) != (nodes[i], nodes[i + 1]):
            problems.append(f"endpoints:{i}")
        if left["degree_over_base"] != right["degree_over_base"]:
            problems.append(f"degree-mismatch:{i}")
        for side in (left, right):
            ratio, remainder = divmod(side["degree_over_base"], common["degree_over_base"])
            if remainder or not _is_prime(ratio) or common["id"] not in side["subfields"]:
                problems.append(f"common-subfield:{i}")
        if left["id"] not in witness["subfields"] or right["id"] not in witness["subfields"]:
            problems.append(f"witness-over-endpoints:{i}")
        relative = Fraction(witness["degree_over_base"], left["degree_over_base"])
        if relative != certificate.get("membership_bound") or relative != bound:
            problems.append(f"witness-degree:{i}")
        elif bound % (relative.numerator * witness["declared_index"]):
            problems.append(f"witness-splitting:{i}")

    parents: List[Dict[str, Any]] = []
    for entry in record.get("trace", []):
        while parents and parents[-1]["depth"] >= entry["depth"]:
            parents.pop()
        if parents and entry["measure"] >= parents[-1]["measure"]:
            problems.append(f"measure:{entry['left']}~{entry['right']}")
        parents.append(entry)
    return problems
