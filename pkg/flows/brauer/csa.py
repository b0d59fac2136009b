"""
Fachada de álgebras centrais simples sobre modelos de corpo abstrato, local
ou global: grau, índice, expoente e decomposição primária.

Para os tipos local e global, índice e expoente vêm dos dados de Brauer
(período = índice); para o tipo abstrato são declarados pelo usuário.
"""

from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator
from sympy import factorint, isprime

from flows.brauer.global_brauer import global_index, global_period, global_restrict
from flows.brauer.invariants import primary_split
from flows.brauer.local_brauer import local_index, local_restrict
from flows.brauer.schemas import (
    FormalExtension,
    GlobalBrauerClass,
    LocalBrauerClass,
    LocalExtensionLabel,
    Place,
    class_record,
)
from shared.errors import InputError


class AlgebraDescriptor(BaseModel):
    """
    Descritor de uma álgebra central simples.

    Wire: {kind, degree, index, exponent, char_divides_index?, characteristic?, brauer_data?}

    No tipo abstrato, `characteristic` (0 ou primo) fixa char(F) e determina
    char_divides_index, inclusive nas componentes primárias.
    """

    model_config = ConfigDict(populate_by_name=True)

    base_kind: Literal["abstract", "local", "global"] = Field(default="abstract", alias="kind")
    degree: Optional[int] = Field(default=None, ge=1)
    index: Optional[int] = Field(default=None, ge=1)
    exponent: Optional[int] = Field(default=None, ge=1)
    char_divides_index: Optional[bool] = None
    characteristic: Optional[int] = Field(default=None, ge=0)
    brauer_data: Optional[Union[LocalBrauerClass, GlobalBrauerClass]] = None

    @model_validator(mode="before")
    @classmethod
    def route_brauer_data(cls, value: Any) -> Any:
        """brauer_data é lido conforme o tipo (local -> LocalBrauerClass, global -> GlobalBrauerClass)."""
        if not isinstance(value, dict) or value.get("brauer_data") is None:
            return value
        kind = value.get("kind", value.get("base_kind", "abstract"))
        raw = value["brauer_data"]
        if kind == "local" and not isinstance(raw, LocalBrauerClass):
            value = {**value, "brauer_data": LocalBrauerClass.model_validate(raw)}
        elif kind == "global" and not isinstance(raw, GlobalBrauerClass):
            value = {**value, "brauer_data": GlobalBrauerClass.model_validate(raw)}
        return value

    @model_validator(mode="after")
    def derive_and_check(self) -> "AlgebraDescriptor":
        if self.base_kind == "abstract":
            if self.brauer_data is not None:
                raise InputError("invalid-algebra", "tipo abstrato não aceita brauer_data")
            if self.index is None:
                raise InputError("invalid-algebra", "tipo abstrato exige index")
            if self.exponent is None:
                self.exponent = self.index
            if self.characteristic is not None:
                self._derive_char_flag()
        else:
            index, exponent = self._derived_invariants()
            if self.index is not None and self.index != index:
                raise InputError("invalid-algebra", f"index declarado {self.index} difere do derivado {index}")
            if self.exponent is not None and self.exponent != exponent:
                raise InputError("invalid-algebra", f"exponent declarado {self.exponent} difere do derivado {exponent}")
            if self.char_divides_index is not None or self.characteristic is not None:
                raise InputError("invalid-algebra", "char_divides_index e characteristic só valem para o tipo abstrato")
            self.index, self.exponent = index, exponent

        if self.degree is None:
            self.degree = self.index
        if self.degree % self.index:
            raise InputError("invalid-algebra", f"index {self.index} não divide degree {self.degree}")
        if self.index % self.exponent:
            raise InputError("invalid-algebra", f"exponent {self.exponent} não divide index {self.index}")
        if set(factorint(self.index)) != set(factorint(self.exponent)):
            raise InputError(
                "invalid-algebra",
                f"exponent {self.exponent} e index {self.index} têm primos diferentes",
            )
        return self

    def _derive_char_flag(self) -> None:
        char = self.characteristic
        if char and not isprime(char):
            raise InputError("invalid-algebra", f"characteristic {char} não é 0 nem primo")
        divides = char > 0 and self.index % char == 0
        if self.char_divides_index is not None and self.char_divides_index != divides:
            raise InputError(
                "invalid-algebra",
                f"char_divides_index={self.char_divides_index} contradiz characteristic={char}, index={self.index}",
            )
        self.char_divides_index = divides

    def _derived_invariants(self):
        data = self.brauer_data
        if self.base_kind == "local":
            if not isinstance(data, LocalBrauerClass):
                raise InputError("invalid-algebra", "tipo local exige brauer_data local {invariant}")
            index = local_index(data)
            return index, index
        if not isinstance(data, GlobalBrauerClass):
            raise InputError("invalid-algebra", "tipo global exige brauer_data global {places, invariants}")
        return global_index(data), global_period(data)

    def to_record(self) -> Dict[str, Any]:
        record: Dict[str, Any] = {
            "kind": self.base_kind,
            "degree": self.degree,
            "index": self.index,
            "exponent": self.exponent,
        }
        if self.char_divides_index is not None:
            record["char_divides_index"] = self.char_divides_index
        if self.characteristic is not None:
            record["characteristic"] = self.characteristic
        if isinstance(self.brauer_data, GlobalBrauerClass):
            record["brauer_data"] = class_record(self.brauer_data)
        elif isinstance(self.brauer_data, LocalBrauerClass):
            record["brauer_data"] = self.brauer_data.model_dump(exclude_none=True)
        return record


def algebra_index(A: AlgebraDescriptor) -> int:
    """
    Índice da álgebra (grau da álgebra de divisão Brauer-equivalente).

    Example:
        abstrato, index 12   -> 12
        global {v1: 1/4, v2: 3/4} -> 4
        local inv 1/6        -> 6
    """
    if A.base_kind == "global":
        return global_index(A.brauer_data)
    if A.base_kind == "local":
        return local_index(A.brauer_data)
    return A.index


def p_part(n: int, p: int) -> int:
    result = 1
    while n % p == 0:
        n //= p
        result *= p
    return result


def _component_char_flag(A: AlgebraDescriptor, primes: List[int]) -> Optional[bool]:
    if A.characteristic is not None:
        return None  # derivado de characteristic na própria componente
    if A.char_divides_index is False:
        return False
    # sem a característica, um flag verdadeiro só passa adiante com um único primo
    if A.char_divides_index and len(primes) == 1:
        return True
    return None


def primary_decompose(A: AlgebraDescriptor) -> List[AlgebraDescriptor]:
    """
    Decomposição primária D ≅ D₁ ⊗ ... ⊗ D_k com ind(D_i) = p_i^{a_i}.

    Example:
        abstrato index 12, exponent 6 -> [index 4 exponent 2, index 3 exponent 3]
        global {v1: 1/12, v2: 11/12}  -> {v1: 3/4, v2: 1/4} e {v1: 1/3, v2: 2/3}
    """
    index = algebra_index(A)
    primes = sorted(factorint(index))
    components = []
    for prime in primes:
        prime_index = p_part(index, prime)
        if A.base_kind == "abstract":
            components.append(AlgebraDescriptor(
                kind="abstract",
                index=prime_index,
                exponent=p_part(A.exponent, prime),
                characteristic=A.characteristic,
                char_divides_index=_component_char_flag(A, primes),
            ))
        elif A.base_kind == "local":
            component = primary_split(A.brauer_data.invariant)[prime]
            components.append(AlgebraDescriptor(
                kind="local",
                brauer_data=LocalBrauerClass(invariant=component, descriptor=A.brauer_data.descriptor),
            ))
        else:
            data: GlobalBrauerClass = A.brauer_data
            invariants = {}
            for label, invariant in data.invariants.items():
                split = primary_split(invariant)
                if prime in split:
                    invariants[label] = split[prime]
            components.append(AlgebraDescriptor(
                kind="global",
                brauer_data=GlobalBrauerClass(kind=data.kind, places=data.places, invariants=invariants),
            ))
    return components


def restrict_algebra(A: AlgebraDescriptor, E: FormalExtension) -> AlgebraDescriptor:
    """
    Álgebra A ⊗ E (mesmo grau, índice e expoente recalculados).

    Sobre um corpo local, E é um único corpo: local_data vazio ou uma entrada
    com a partição (grau,). O rótulo dessa entrada, se houver, ajusta o
    descritor do corpo acima.

    Raises:
        InputError: tipo abstrato (unsupported-for-abstract), extensão local
            com mais de uma componente (invalid-extension)
    """
    if A.base_kind == "abstract":
        raise InputError("unsupported-for-abstract", "restrição exige dados de Brauer local ou global")
    if A.base_kind == "local":
        restricted = local_restrict(A.brauer_data, E.degree, _single_local_label(E))
    else:
        restricted = global_restrict(A.brauer_data, E)
    return AlgebraDescriptor(kind=A.base_kind, degree=A.degree, brauer_data=restricted)


def _single_local_label(E: FormalExtension) -> Optional[LocalExtensionLabel]:
    if len(E.local_data) > 1:
        raise InputError("invalid-extension", f"extensão de corpo local com vários lugares: {sorted(E.local_data)}")
    for label, partition in E.local_data.items():
        if partition != (E.degree,):
            raise InputError(
                "invalid-extension",
                f"extensão de corpo local deve ser um único corpo de grau {E.degree} (recebido {list(partition)})",
            )
        return E.labels_at(label)[0]
    return None


def as_field_model(A: AlgebraDescriptor, place: str = "v") -> GlobalBrauerClass:
    """
    Classe usada pelas construções (lema, cadeias): a classe global, ou o
    corpo local visto como modelo de um único lugar.
    """
    if A.base_kind == "global":
        return A.brauer_data
    if A.base_kind == "local":
        data: LocalBrauerClass = A.brauer_data
        return GlobalBrauerClass(
            kind="local",
            places=(Place(label=place, descriptor=data.descriptor),),
            invariants={place: data.invariant},
        )
    raise InputError("unsupported-for-abstract", "construções exigem corpo local ou global")
