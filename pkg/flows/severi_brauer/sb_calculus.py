"""
Motor de variedades de Severi–Brauer de bandeiras.

Fórmulas:
    índice genérico  d = gcd(ind(A), n₁, …, n_k)
    índice de X      ind(A) / d
    ponto racional   X(L) ≠ ∅  ⇔  ind(A_L) | d
    forma normal     X ~ ∏_{p | d} SB_{p^b}(D_p)

Cotas de torção para A₀(X): cada regra aplicável contribui com um expoente
e o resultado é o gcd deles. Regras condicionais só entram com a hipótese
explicitamente habilitada.

Hipóteses aceitas:
    char-coprime             char(F) ∤ ind(A)
    sbp-vanishing            A₀(SB_p(D_L)) = 0 para toda extensão finita L, todo p
    sbp-vanishing:<p>        idem, só para o primo p
    primary-vanishing:<p>    A₀(SB_{p^b}(D_p)) = 0 para todo b
"""

from dataclasses import dataclass
from math import gcd, lcm
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple

from sympy import factorint, isprime

from flows.brauer.csa import AlgebraDescriptor, algebra_index, primary_decompose
from flows.severi_brauer.schemas import FlagDescriptor, NormalComponent, NormalForm, RuleApplication, TorsionBound
from shared.errors import InputError
from shared.utils import get_logger

FIELD_KINDS = ("abstract", "local", "global")


def generic_index(X: FlagDescriptor) -> int:
    """
    Índice de A sobre o corpo de funções de X: gcd(ind(A), n₁, …, n_k).

    Example:
        (ind 12, flags (4, 6)) -> 2
        (ind 12, flags (3, 9)) -> 3
    """
    return gcd(algebra_index(X.algebra), *X.flags)


def variety_index(X: FlagDescriptor) -> int:
    """
    Índice da variedade: ind(A)/d.

    Example:
        (ind 12, flags (4, 6))       -> 6
        (ind 4, deg 8, flags (4,))   -> 1
    """
    return algebra_index(X.algebra) // generic_index(X)


def has_rational_point(X: FlagDescriptor, ind_over_L: int) -> bool:
    """
    X tem ponto racional sobre L  ⇔  ind(A_L) | d.

    Raises:
        InputError: ind_over_L não divide ind(A) (invalid-index)
    """
    index = algebra_index(X.algebra)
    if ind_over_L < 1 or index % ind_over_L:
        raise InputError("invalid-index", f"ind(A_L)={ind_over_L} não divide ind(A)={index}")
    return generic_index(X) % ind_over_L == 0


def has_rational_point_sb(A: AlgebraDescriptor, r: int, ind_over_L: int) -> bool:
    """Forma para SB_r(A): ponto sobre L  ⇔  ind(A_L) | r."""
    index = algebra_index(A)
    if ind_over_L < 1 or index % ind_over_L:
        raise InputError("invalid-index", f"ind(A_L)={ind_over_L} não divide ind(A)={index}")
    if not 0 < r < A.degree:
        raise InputError("invalid-flags", f"r={r} fora de (0, {A.degree})")
    return r % ind_over_L == 0


def _valuation(n: int, p: int) -> int:
    return factorint(n).get(p, 0)


def normal_form(X: FlagDescriptor) -> NormalForm:
    """
    Forma normal estável: d = gcd(flags, ind(A)) e, para cada p | d, o par
    (b = v_p(d), componente p-primária de A).

    Example:
        (ind 12, flags (4, 6))  -> d=2, [(2, 1, D₂ de índice 4)]
        (ind 36, flags (6, 12)) -> d=6, [(2, 1, D₂ idx 4), (3, 1, D₃ idx 9)]
    """
    d = generic_index(X)
    primary = {next(iter(factorint(item.index))): item for item in primary_decompose(X.algebra)}
    components = tuple(
        NormalComponent(prime=p, exponent=b, algebra=primary[p])
        for p, b in sorted(factorint(d).items())
    )
    return NormalForm(d=d, components=components)


def fibre_index_bound(indices: Iterable[int]) -> int:
    """A₀(X) é anulado pelo mmc dos índices das fibras genéricas Y_{F(t)}."""
    return lcm(1, *indices)


def sb_fibre_indices(p: int, b: int) -> List[int]:
    """
    Índices de Y = SB_p(D) sobre F(t), t ∈ SB_{p^b}(D): ind(D_{F(t)}) percorre
    1, p, …, p^b e ind(Y_{F(t)}) = ind(D_{F(t)}) / gcd(ind(D_{F(t)}), p).
    """
    indices = []
    for j in range(b + 1):
        fibre = p ** j
        indices.append(fibre // gcd(fibre, p))
    return indices


def combine_primary_bounds(components: Sequence[Tuple[int, int, int]]) -> int:
    """
    Combina cotas por primo (p, a, c) pela indução no número de primos:
    Y × SB(D_k) é (∏_{i<k} p_i^{a_i})·p_k^{c_k}-torção e também
    (cota de Y)·p_k^{a_k}-torção; fica o gcd das duas.

    Example:
        [(2, 2, 1), (3, 2, 1)] -> gcd(4·3, 2·9) = 6
    """
    bound: Optional[int] = None
    full = 1
    for p, a, c in components:
        if bound is None:
            bound = p ** c
        else:
            bound = gcd(full * p ** c, bound * p ** a)
        full *= p ** a
    return 1 if bound is None else bound


def product_reduce(A: AlgebraDescriptor, e: int, d: int) -> int:
    """
    A₀(SB_e(A) × SB_d(A)) ≅ A₀(SB_{gcd(d,e)}(A)).

    Raises:
        InputError: d ou e fora de [1, deg(A) − 1] (invalid-flags)
    """
    for name, value in (("e", e), ("d", d)):
        if not 1 <= value <= A.degree - 1:
            raise InputError("invalid-flags", f"{name}={value} fora de [1, {A.degree - 1}]")
    return gcd(d, e)


@dataclass(frozen=True)
class RuleContext:
    index: int
    d: int
    exponent: int
    char_divides_index: Optional[bool]
    field_kind: str
    hypotheses: Tuple[str, ...]
    components: Tuple[Tuple[int, int, int], ...]
    product_factors: Tuple[int, ...] = ()

    def enabled(self, name: str, prime: int) -> bool:
        return name in self.hypotheses or f"{name}:{prime}" in self.hypotheses


Rule = Callable[[RuleContext], Optional[Tuple[RuleApplication, Tuple[str, ...]]]]


def _index_gcd(ctx: RuleContext):
    return RuleApplication(
        id="index-gcd",
        exponent=gcd(ctx.d, ctx.index // ctx.d),
        citation="A₀(X) é (d, n/d)-torção",
    ), ()


def _single_flag_bound(index: int, flag: int) -> int:
    d = gcd(flag, index)
    return gcd(d, index // d)


def _product_reduction(ctx: RuleContext):
    if len(ctx.product_factors) < 2:
        return None
    exponent = _single_flag_bound(ctx.index, gcd(*ctx.product_factors))
    if not any(_single_flag_bound(ctx.index, f) > exponent for f in ctx.product_factors):
        return None
    factors = " × ".join(f"SB_{f}" for f in ctx.product_factors)
    return RuleApplication(
        id="product-reduction",
        exponent=exponent,
        citation=f"A₀({factors}) ≅ A₀(SB_{gcd(*ctx.product_factors)})",
    ), ()


def _square_free(ctx: RuleContext):
    if all(e == 1 for e in factorint(ctx.index).values()):
        return RuleApplication(id="square-free", exponent=1, citation="n livre de quadrados ⇒ A₀(X) = 0"), ()
    return None


def _arithmetic_field(ctx: RuleContext):
    if ctx.field_kind in ("local", "global"):
        return RuleApplication(id="arithmetic-field", exponent=1, citation="corpo local ou global ⇒ A₀(X) = 0"), ()
    return None


def _two_adic(ctx: RuleContext):
    if ctx.d == 2 and ctx.index % 2 == 0 and ctx.index % 8 and ctx.char_divides_index is False:
        return RuleApplication(
            id="two-adic", exponent=1,
            citation="d = 2, n par e 8 ∤ n, char(F) ∤ n ⇒ A₀(X) = 0",
        ), ()
    return None


def _index_divides_four(ctx: RuleContext):
    if ctx.d == 2 and 4 % ctx.index == 0 and ctx.char_divides_index is False:
        return RuleApplication(id="index-divides-4", exponent=1, citation="d = 2, ind(A) | 4 ⇒ A₀(X) = 0"), ()
    return None


def _exponent_not_four(ctx: RuleContext):
    if ctx.d == 2 and ctx.exponent % 4:
        return RuleApplication(id="exponent-not-4", exponent=1, citation="d = 2, 4 ∤ exp(A) ⇒ A₀(X) = 0"), ()
    return None


def _four_adic(ctx: RuleContext):
    if ctx.d == 4 and ctx.exponent % 4:
        return RuleApplication(id="four-adic", exponent=2, citation="d = 4, 4 ∤ exp(A) ⇒ A₀(X) é 2-torção"), ()
    return None


def _prime_reduction(ctx: RuleContext):
    bounds = []
    consumed = []
    refined = False
    for p, a, b in ctx.components:
        c = min(b, a - b)
        if ctx.enabled("sbp-vanishing", p) and 1 <= b <= a - 1:
            fibre = fibre_index_bound(sb_fibre_indices(p, b))
            c = min(c, _valuation(fibre, p))
            consumed.append(f"sbp-vanishing:{p}")
            refined = True
        bounds.append((p, a, c))
    if not refined:
        return None
    return RuleApplication(
        id="prime-reduction",
        exponent=combine_primary_bounds(bounds),
        citation="A₀(SB_p(D_L)) = 0 ⇒ A₀(SB_{p^b}(D)) é p^{b−1}-torção",
    ), tuple(consumed)


def _primary_components(ctx: RuleContext):
    primes = [p for p, _, _ in ctx.components]
    if primes and all(ctx.enabled("primary-vanishing", p) for p in primes):
        return RuleApplication(
            id="primary-components", exponent=1,
            citation="A₀(SB_{p^b}(D_p)) = 0 para cada componente ⇒ A₀(X) = 0",
        ), tuple(f"primary-vanishing:{p}" for p in primes)
    return None


TORSION_RULES: List[Rule] = [
    _index_gcd,
    _product_reduction,
    _square_free,
    _arithmetic_field,
    _two_adic,
    _index_divides_four,
    _exponent_not_four,
    _four_adic,
    _prime_reduction,
    _primary_components,
]


def check_hypotheses(hypotheses: Iterable[str], char_divides_index: Optional[bool]) -> Tuple[str, ...]:
    """
    Raises:
        InputError: hipótese desconhecida ou contraditória (invalid-hypotheses)
    """
    accepted: Set[str] = set()
    for hypothesis in hypotheses:
        name, _, prime = hypothesis.partition(":")
        if name == "char-coprime" and not prime:
            if char_divides_index is True:
                raise InputError("invalid-hypotheses", "char-coprime contradiz char_divides_index=true")
        elif name == "sbp-vanishing" or (name == "primary-vanishing" and prime):
            if prime and not (prime.isdigit() and isprime(int(prime))):
                raise InputError("invalid-hypotheses", f"primo inválido em '{hypothesis}'")
        else:
            raise InputError("invalid-hypotheses", f"hipótese desconhecida: '{hypothesis}'")
        accepted.add(hypothesis)
    return tuple(sorted(accepted))


def torsion_bound(
    X: FlagDescriptor,
    field_kind: Optional[str] = None,
    enabled_hypotheses: Iterable[str] = (),
    product_factors: Sequence[int] = (),
) -> TorsionBound:
    """
    Cota de torção para A₀(X) com a proveniência de cada regra.

    Args:
        X: Variedade de bandeiras
        field_kind: abstract | local | global (padrão: o tipo da álgebra)
        enabled_hypotheses: Hipóteses condicionais habilitadas
        product_factors: Fatores (e, d) quando X veio de SB_e × SB_d

    Raises:
        InputError: hipóteses desconhecidas ou contraditórias (invalid-hypotheses)

    Example:
        (ind 30, flags (6,))                -> 1 (square-free)
        (ind 16, exp 2, flags (4,))         -> 2 (four-adic)
        (ind 12, flags (4, 6), char ∤ 12)   -> 1 (two-adic)
    """
    algebra = X.algebra
    kind = field_kind or algebra.base_kind
    if kind not in FIELD_KINDS:
        raise InputError("invalid-hypotheses", f"tipo de corpo desconhecido: '{kind}'")
    if algebra.base_kind != "abstract" and kind != algebra.base_kind:
        raise InputError("invalid-hypotheses", f"álgebra {algebra.base_kind} com field_kind {kind}")

    hypotheses = check_hypotheses(enabled_hypotheses, algebra.char_divides_index)
    char_flag = algebra.char_divides_index
    if char_flag is None and "char-coprime" in hypotheses:
        char_flag = False

    index = algebra_index(algebra)
    d = generic_index(X)
    index_factors = factorint(index)
    ctx = RuleContext(
        index=index,
        d=d,
        exponent=algebra.exponent,
        char_divides_index=char_flag,
        field_kind=kind,
        hypotheses=hypotheses,
        components=tuple((p, index_factors[p], b) for p, b in sorted(factorint(d).items())),
        product_factors=tuple(product_factors),
    )

    applied: List[RuleApplication] = []
    consumed: List[str] = []
    if char_flag is False and algebra.char_divides_index is None:
        consumed.append("char-coprime")
    for rule in TORSION_RULES:
        outcome = rule(ctx)
        if outcome is None:
            continue
        application, assumptions = outcome
        applied.append(application)
        consumed.extend(assumptions)

    exponent = 0
    for application in applied:
        exponent = gcd(exponent, application.exponent)

    get_logger("sb_calculus").debug(
        f"🔎 ind={index} d={d} regras={[rule.id for rule in applied]} -> {exponent}"
    )
    return TorsionBound(
        exponent=exponent,
        rules_applied=tuple(applied),
        conditional_assumptions=tuple(sorted(set(consumed))),
    )


def product_torsion_bound(
    A: AlgebraDescriptor,
    e: int,
    d: int,
    field_kind: Optional[str] = None,
    enabled_hypotheses: Iterable[str] = (),
) -> TorsionBound:
    """
    Cota para SB_e(A) × SB_d(A) via SB_{gcd(d,e)}(A). A redução aparece como
    regra própria (product-reduction) quando aperta a cota de algum fator.
    """
    reduced = product_reduce(A, e, d)
    X = FlagDescriptor(algebra=A, flags=(reduced,))
    return torsion_bound(X, field_kind, enabled_hypotheses, product_factors=(e, d))


def vanishing_from_components(A: AlgebraDescriptor, r: int, vanishing_primes: Iterable[int]) -> bool:
    """
    A₀(SB_r(A)) = 0 quando, para cada p | (r, ind(A)), todas as SB_{p^b}(D_p)
    têm A₀ trivial (primos declarados em `vanishing_primes`).
    """
    d = gcd(r, algebra_index(A))
    declared = set(vanishing_primes)
    return all(p in declared for p in factorint(d))


def rule_ids(bound: TorsionBound) -> Dict[str, int]:
    return {rule.id: rule.exponent for rule in bound.rules_applied}
