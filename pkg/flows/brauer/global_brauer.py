"""
Classes de Brauer globais (sequência ABHN), extensões formais, restrição,
realização de dados locais e o lema construtivo de extensão de grau p.

Convenção de rótulos: o lugar acima de v conserva o rótulo v quando é único;
com vários lugares acima de v, recebem "v.0", "v.1", ... na ordem da partição.
Lugares fora do suporte se decompõem totalmente nas extensões construídas.
"""

from math import gcd, lcm, prod
from typing import Any, Dict, List, Mapping, Optional, Tuple

from pydantic import BaseModel, ConfigDict
from sympy import factorint, isprime
from sympy.utilities.iterables import partitions

from flows.brauer.invariants import order, primary_split, scale
from flows.brauer.local_brauer import catalog_degree_p_extensions, catalog_size, check_local_degree, descriptor_above
from flows.brauer.schemas import FormalExtension, GlobalBrauerClass, LocalExtensionLabel, Place
from shared.errors import ConsistencyError, InputError, PreconditionError
from shared.utils import get_logger, parse_model

Component = Tuple[int, Optional[LocalExtensionLabel]]


class Compositum(BaseModel):
    """Modelo do compositum E1·E2: sobre a base e relativo a cada fator."""

    model_config = ConfigDict(frozen=True)

    over_base: FormalExtension
    over_first: FormalExtension
    over_second: FormalExtension


class LemmaChoice(BaseModel):
    """Escolha local feita pelo lema em um lugar do suporte."""

    model_config = ConfigDict(frozen=True)

    place: str
    partition: Tuple[int, ...]
    labels: Tuple[Optional[str], ...]
    local_index: int
    index_over_extension: int
    index_over_composita: Tuple[int, int]


class LemmaResult(BaseModel):
    """Extensão K de grau p com o certificado por lugar e os composita K·L_i."""

    model_config = ConfigDict(frozen=True)

    extension: FormalExtension
    prime: int
    exponent: int
    distinguishing_place: str
    choices: Tuple[LemmaChoice, ...]
    composita: Tuple[Compositum, Compositum]
    index_over_extension: int
    index_over_composita: Tuple[int, int]

    def to_record(self) -> Dict[str, Any]:
        return {
            "extension": self.extension.to_record(),
            "prime": self.prime,
            "exponent": self.exponent,
            "distinguishing_place": self.distinguishing_place,
            "certificate": [choice.model_dump() for choice in self.choices],
            "composita": [compositum.over_base.to_record() for compositum in self.composita],
            "index_over_extension": self.index_over_extension,
            "index_over_composita": list(self.index_over_composita),
        }


def place_labels_above(label: str, count: int) -> List[str]:
    if count == 1:
        return [label]
    return [f"{label}.{i}" for i in range(count)]


def validate_class(raw: Any) -> GlobalBrauerClass:
    """
    Valida um mapa de invariantes como classe de Brauer global.

    Aceita a forma completa {places, invariants} ou o atalho {label: "a/b"}.

    Raises:
        InputError: soma não nula (not-in-brauer-group) ou invariante
            arquimediano inválido (invalid-local-invariant)

    Example:
        {"v1": "1/4", "v2": "3/4"} -> válida
        {"v1": "1/3"}              -> not-in-brauer-group
    """
    if isinstance(raw, GlobalBrauerClass):
        return raw
    return parse_model(GlobalBrauerClass, raw, "classe")


def global_index(c: GlobalBrauerClass) -> int:
    """Índice = mmc dos índices locais (1 para a classe trivial)."""
    return lcm(1, *(order(inv) for inv in c.invariants.values()))


def global_period(c: GlobalBrauerClass) -> int:
    """Período: ordem da classe em ⊕ Br(F_v), montada pelas partes primárias."""
    exponents: Dict[int, int] = {}
    for inv in c.invariants.values():
        for prime, component in primary_split(inv).items():
            exponents[prime] = max(exponents.get(prime, 1), order(component))
    return prod(exponents.values())


def prime_power_index(c: GlobalBrauerClass) -> Optional[Tuple[int, int]]:
    """(p, m) quando o índice é p^m com m >= 1; None caso contrário."""
    factors = factorint(global_index(c))
    if len(factors) != 1:
        return None
    (prime, exponent), = factors.items()
    return prime, exponent


def global_restrict(c: GlobalBrauerClass, E: FormalExtension) -> GlobalBrauerClass:
    """
    Restrição lugar a lugar: cada grau local d acima de v contribui com um
    lugar de invariante d·inv_v. A soma zero se preserva (Σ d = n).

    Raises:
        InputError: partição incompatível com o lugar (invalid-extension)

    Example:
        c={v1: 1/4, v2: 3/4}, E grau 2 com v1:[2], v2:[1,1]
            -> {v1: 1/2, v2.0: 3/4, v2.1: 3/4}
    """
    known = [place.label for place in c.places]
    extra = sorted(set(E.local_data) - set(known))
    places: List[Place] = []
    invariants = {}

    for base_label in known + extra:
        base_place = c.place(base_label)
        components = E.components_at(base_label)
        if c.kind == "local" and len(components) != 1:
            raise InputError(
                "invalid-extension",
                f"extensão de corpo local deve ter um único lugar acima de '{base_label}'",
            )
        invariant = c.invariant_at(base_label)
        for label_above, (d, extension_label) in zip(place_labels_above(base_label, len(components)), components):
            check_local_degree(base_place.descriptor, d, base_label)
            places.append(Place(label=label_above, descriptor=descriptor_above(base_place.descriptor, d, extension_label)))
            restricted = scale(invariant, d)
            if not restricted.is_zero:
                invariants[label_above] = restricted

    return GlobalBrauerClass(kind=c.kind, places=tuple(places), invariants=invariants)


def realize(
    requirements: Mapping[str, int],
    degree: int,
    distinguishing_place: Optional[str] = None,
    labels: Optional[Mapping[str, LocalExtensionLabel]] = None,
) -> FormalExtension:
    """
    Extensão de grau `degree` com grau local [degree] em cada lugar exigido;
    os demais lugares se decompõem totalmente.

    Raises:
        InputError: grau exigido diferente do grau alvo (unrealizable-request)

    Example:
        ({v1: 2, v2: 2}, 2) -> grau 2, v1:[2], v2:[2]
        ({v1: 2}, 3)        -> unrealizable-request
    """
    if degree < 1:
        raise InputError("unrealizable-request", f"grau alvo inválido: {degree}")
    for label, required in requirements.items():
        if required != degree:
            raise InputError(
                "unrealizable-request",
                f"grau local {required} em '{label}' difere do grau alvo {degree}",
            )
    local_data = {label: (degree,) for label in sorted(requirements)} if degree > 1 else {}
    local_labels = {label: (labels[label],) for label in sorted(labels or {}) if label in local_data}
    return FormalExtension(
        degree=degree,
        local_data=local_data,
        local_labels=local_labels,
        distinguishing_place=distinguishing_place,
    )


def _overlap(a: int, first: Optional[LocalExtensionLabel], b: int, second: Optional[LocalExtensionLabel]) -> int:
    """Grau da interseção local: rótulos distintos de mesmo grau primo são disjuntos."""
    if a == b and isprime(a) and first is not None and second is not None and first != second:
        return 1
    return gcd(a, b)


def local_compositum(
    first: List[Component],
    second: List[Component],
) -> Tuple[List[Component], List[List[Component]], List[List[Component]]]:
    """
    Componentes locais do compositum em um lugar v.

    Para cada par (a, λ), (b, μ) com interseção local g: g lugares de grau
    a·b/g sobre a base; relativamente ao primeiro fator, g lugares de grau b/g
    acima do lugar de λ (e simetricamente para o segundo).

    Returns:
        (componentes sobre a base, relativas por lugar do 1º fator, relativas por lugar do 2º fator)
    """
    over_base: List[Component] = []
    over_first: List[List[Component]] = [[] for _ in first]
    over_second: List[List[Component]] = [[] for _ in second]

    for i, (a, lam) in enumerate(first):
        for j, (b, mu) in enumerate(second):
            g = _overlap(a, lam, b, mu)
            if a == 1:
                base_label = mu
            elif b == 1 or (g == a == b):
                base_label = lam
            else:
                base_label = None
            over_base.extend([(a * b // g, base_label)] * g)
            over_first[i].extend([(b // g, mu if g == 1 else None)] * g)
            over_second[j].extend([(a // g, lam if g == 1 else None)] * g)
    return over_base, over_first, over_second


def _extension_from_components(degree: int, data: Dict[str, List[Component]]) -> FormalExtension:
    local_data = {}
    local_labels = {}
    for label, components in sorted(data.items()):
        partition = tuple(d for d, _ in components)
        if partition == (1,) * degree:
            continue
        local_data[label] = partition
        if any(extension_label is not None for _, extension_label in components):
            local_labels[label] = tuple(extension_label for _, extension_label in components)
    return FormalExtension(degree=degree, local_data=local_data, local_labels=local_labels)


def compositum(E1: FormalExtension, E2: FormalExtension) -> Compositum:
    """
    Compositum modelado lugar a lugar (grau global n1·n2).

    Extensões estruturalmente iguais são o mesmo corpo: o compositum é E1.
    """
    if E1 == E2:
        trivial = FormalExtension(degree=1)
        return Compositum(over_base=E1, over_first=trivial, over_second=trivial)

    base: Dict[str, List[Component]] = {}
    relative_first: Dict[str, List[Component]] = {}
    relative_second: Dict[str, List[Component]] = {}

    for label in sorted(set(E1.local_data) | set(E2.local_data)):
        first, second = E1.components_at(label), E2.components_at(label)
        over_base, over_first, over_second = local_compositum(first, second)
        base[label] = over_base
        for label_above, components in zip(place_labels_above(label, len(first)), over_first):
            relative_first[label_above] = components
        for label_above, components in zip(place_labels_above(label, len(second)), over_second):
            relative_second[label_above] = components

    return Compositum(
        over_base=_extension_from_components(E1.degree * E2.degree, base),
        over_first=_extension_from_components(E2.degree, relative_first),
        over_second=_extension_from_components(E1.degree, relative_second),
    )


def ordered_partitions(n: int) -> List[Tuple[int, ...]]:
    """Partições de n (partes decrescentes) em ordem lexicográfica: (1,1,1), (2,1), (3,)."""
    return sorted(
        tuple(sorted((part for part, multiplicity in parts.items() for _ in range(multiplicity)), reverse=True))
        for parts in partitions(n)
    )


def local_patterns(c: GlobalBrauerClass, label: str, p: int) -> List[List[Component]]:
    """
    Padrões locais de grau p admissíveis no lugar `label`, em ordem
    determinística: partições em ordem lexicográfica, a partição (p,)
    expandida pelos rótulos do catálogo local.
    """
    descriptor = c.place(label).descriptor
    candidates = [(p,)] if c.kind == "local" else ordered_partitions(p)
    patterns: List[List[Component]] = []
    for partition in candidates:
        if descriptor is not None and descriptor.is_archimedean and max(partition) > (2 if descriptor.kind == "real" else 1):
            continue
        if partition == (p,):
            for extension_label in catalog_degree_p_extensions(descriptor, p, catalog_size(descriptor, p)):
                patterns.append([(p, extension_label)])
        else:
            patterns.append([(d, None) for d in partition])
    return patterns


def with_default_labels(c: GlobalBrauerClass, L: FormalExtension, p: int) -> FormalExtension:
    """Preenche rótulos ausentes nas componentes [p] do suporte com o primeiro rótulo do catálogo."""
    local_labels = dict(L.local_labels)
    for label in c.invariants:
        components = L.components_at(label)
        if len(components) == 1 and components[0] == (p, None):
            descriptor = c.place(label).descriptor
            local_labels[label] = tuple(catalog_degree_p_extensions(descriptor, p, 1))
    if local_labels == L.local_labels:
        return L
    return L.model_copy(update={"local_labels": local_labels})


def _max_local_index(invariant, degrees) -> int:
    return max(order(scale(invariant, d)) for d in degrees)


def construct_extension_lemma(
    c: GlobalBrauerClass,
    L0: FormalExtension,
    L1: FormalExtension,
    allow_coincident: bool = False,
) -> LemmaResult:
    """
    Constrói K de grau p, distinta de L0 e L1, com ind(c_K) = p^{m−1} e
    ind(c_{K·L_i}) = p^{m−2}.

    A busca percorre os lugares do suporte em ordem e fica, em cada um, com o
    primeiro padrão local admissível (índice de K <= p^{m−1}, índice dos
    composita <= p^{m−2}). O lugar distinguidor v₀ é o primeiro de índice
    local p^m; ali K difere de L0 e L1 pelo rótulo.

    Args:
        c: Classe de índice p^m, m >= 2
        L0, L1: Extensões de grau p com ind(c_{L_i}) = p^{m−1}
        allow_coincident: Aceita L0 = L1 (nós distintos com o mesmo modelo local)

    Raises:
        PreconditionError: hipóteses violadas
        ConsistencyError: nenhum padrão admissível ou verificação independente falhou
    """
    logger = get_logger("global_brauer")

    prime_power = prime_power_index(c)
    if prime_power is None or prime_power[1] < 2:
        raise PreconditionError(
            f"índice {global_index(c)} não é p^m com m >= 2",
            {"index": global_index(c)},
        )
    p, m = prime_power

    for name, L in (("L0", L0), ("L1", L1)):
        if L.degree != p:
            raise PreconditionError(f"{name} tem grau {L.degree}, esperado {p}", {"extension": name})
        restricted = global_index(global_restrict(c, L))
        if restricted != p ** (m - 1):
            raise PreconditionError(
                f"ind(c_{name}) = {restricted}, esperado {p ** (m - 1)}",
                {"extension": name, "index": restricted},
            )

    L0 = with_default_labels(c, L0, p)
    L1 = with_default_labels(c, L1, p)
    if L0 == L1 and not allow_coincident:
        raise PreconditionError("L0 e L1 coincidem", {"extension": "L0=L1"})

    target_extension, target_composita = p ** (m - 1), p ** (m - 2)
    logger.info(f"🧩 Lema de extensão: p={p}, m={m}, suporte={list(c.invariants)}")

    choices: List[LemmaChoice] = []
    chosen: Dict[str, List[Component]] = {}
    distinguishing_place = None

    for label, invariant in c.invariants.items():
        if distinguishing_place is None and order(invariant) == p ** m:
            distinguishing_place = label

        for pattern in local_patterns(c, label, p):
            degrees = [d for d, _ in pattern]
            index_extension = _max_local_index(invariant, degrees)
            if index_extension > target_extension:
                continue
            index_composita = tuple(
                _max_local_index(invariant, [d for d, _ in local_compositum(pattern, L.components_at(label))[0]])
                for L in (L0, L1)
            )
            if max(index_composita) > target_composita:
                continue
            chosen[label] = pattern
            choices.append(LemmaChoice(
                place=label,
                partition=tuple(degrees),
                labels=tuple(str(item) if item is not None else None for _, item in pattern),
                local_index=order(invariant),
                index_over_extension=index_extension,
                index_over_composita=index_composita,
            ))
            logger.debug(f"🔎 {label}: padrão {degrees} ({choices[-1].labels})")
            break
        else:
            raise ConsistencyError(
                f"nenhum padrão local admissível no lugar '{label}'",
                {"place": label, "invariant": str(invariant)},
            )

    if distinguishing_place is None:
        raise ConsistencyError("nenhum lugar com índice local p^m", {"index": p ** m})

    K = _extension_from_components(p, chosen).model_copy(update={"distinguishing_place": distinguishing_place})
    result = _verify_lemma(c, K, L0, L1, p, m, choices)
    logger.info(
        f"✅ K construída (v₀={distinguishing_place}): ind(c_K)={result.index_over_extension}, "
        f"ind(c_KL)={list(result.index_over_composita)}"
    )
    return result


def _verify_lemma(c, K, L0, L1, p, m, choices) -> LemmaResult:
    """Recalcula os três alvos de índice do zero."""
    index_extension = global_index(global_restrict(c, K))
    composita = (compositum(K, L0), compositum(K, L1))
    index_composita = tuple(global_index(global_restrict(c, item.over_base)) for item in composita)

    v0 = K.distinguishing_place
    problems = []
    if index_extension != p ** (m - 1):
        problems.append(f"ind(c_K)={index_extension}")
    for i, (item, index) in enumerate(zip(composita, index_composita)):
        if item.over_base.degree != p ** 2:
            problems.append(f"grau de K·L{i} = {item.over_base.degree}")
        if index != p ** (m - 2):
            problems.append(f"ind(c_KL{i})={index}")
    for i, L in enumerate((L0, L1)):
        if K.components_at(v0) == L.components_at(v0):
            problems.append(f"K coincide com L{i} em {v0}")
    if problems:
        raise ConsistencyError("verificação do lema falhou", {"problems": problems})

    return LemmaResult(
        extension=K,
        prime=p,
        exponent=m,
        distinguishing_place=v0,
        choices=tuple(choices),
        composita=composita,
        index_over_extension=index_extension,
        index_over_composita=index_composita,
    )


def construct_power_extension(c: GlobalBrauerClass, k: int) -> FormalExtension:
    """
    Extensão K' de grau p^k com ind(c_{K'}) = p^{m−k}: grau local p^k em cada
    lugar do suporte (lugares reais recebem p^k/2 complexificações).

    Raises:
        InputError: k fora de [0, m] ou índice que não é potência de primo (invalid-target)

    Example:
        c={v0: 1/8, v1: 7/8}, k=2 -> grau 4, v0:[4], v1:[4]; índice 2
    """
    index = global_index(c)
    if index == 1:
        if k != 0:
            raise InputError("invalid-target", f"classe trivial só admite k = 0 (recebido {k})")
        return FormalExtension(degree=1)

    prime_power = prime_power_index(c)
    if prime_power is None:
        raise InputError("invalid-target", f"índice {index} não é potência de primo")
    p, m = prime_power
    if not 0 <= k <= m:
        raise InputError("invalid-target", f"k={k} fora de [0, {m}]")
    if k == 0:
        return FormalExtension(degree=1)

    degree = p ** k
    real_places = [label for label in c.invariants if _is_real(c, label)]
    K = realize({label: degree for label in c.invariants if label not in real_places}, degree)
    if not real_places:
        return K

    complexification = LocalExtensionLabel(family="complexification", degree=2)
    local_data = dict(K.local_data)
    local_labels = dict(K.local_labels)
    for label in real_places:
        local_data[label] = (2,) * (degree // 2)
        local_labels[label] = (complexification,) * (degree // 2)
    return K.model_copy(update={"local_data": local_data, "local_labels": local_labels})


def _is_real(c: GlobalBrauerClass, label: str) -> bool:
    descriptor = c.place(label).descriptor
    return descriptor is not None and descriptor.kind == "real"
