"""
Modelos de domínio do grupo de Brauer (corpos locais, classes globais e
extensões formais) e sua forma de transporte (JSON).

Formatos:
    descritor local:  {residue_char, residue_size, field_char, zeta_flags}
    arquimediano:     {kind: "real" | "complex"}
    classe global:    {places: [{label, descriptor}], invariants: {label: "a/b"}}
    extensão formal:  {degree, local_data: {label: [d1, d2, ...]},
                       local_labels?: {label: [rótulo | null, ...]},
                       distinguishing_place}
"""

import re
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_serializer, model_validator
from sympy import factorint, isprime

from flows.brauer.invariants import QZInvariant, total
from shared.errors import InputError

LABEL_FAMILIES = ("artin-schreier", "kummer", "unramified", "eisenstein-root", "complexification", "generic")

_LABEL_TEXT = re.compile(r"^\s*([a-z-]+)\s*(?:\(\s*(\d+)\s*\))?\s*(?:@\s*(\d+))?\s*$")


class LocalFieldDescriptor(BaseModel):
    """
    Descritor de um corpo local (não se constrói o corpo, só os dados do caso).

    Para lugares não arquimedianos: característica residual p₀, tamanho q do
    corpo residual (potência de p₀), característica do corpo (0 ou p₀) e flags
    ζ_p ∈ F informadas pelo usuário onde não são deriváveis.
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["nonarchimedean", "real", "complex"] = "nonarchimedean"
    residue_char: Optional[int] = None
    residue_size: Optional[int] = None
    field_char: Optional[int] = None
    zeta_flags: Dict[int, bool] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_descriptor(self) -> "LocalFieldDescriptor":
        if self.is_archimedean:
            if any(value is not None for value in (self.residue_char, self.residue_size, self.field_char)) or self.zeta_flags:
                raise InputError("invalid-descriptor", f"lugar {self.kind} não aceita dados residuais")
            return self

        p0, q = self.residue_char, self.residue_size
        if p0 is None or q is None:
            raise InputError("invalid-descriptor", "residue_char e residue_size são obrigatórios")
        if not isprime(p0):
            raise InputError("invalid-descriptor", f"residue_char {p0} não é primo")
        if set(factorint(q)) != {p0}:
            raise InputError("invalid-descriptor", f"residue_size {q} não é potência de {p0}")

        field_char = 0 if self.field_char is None else self.field_char
        if field_char not in (0, p0):
            raise InputError("invalid-descriptor", f"field_char {field_char} deve ser 0 ou {p0}")
        object.__setattr__(self, "field_char", field_char)

        for prime, flag in self.zeta_flags.items():
            if not isprime(prime):
                raise InputError("invalid-descriptor", f"zeta_flags: {prime} não é primo")
            derived = self.derived_zeta(prime)
            if derived is not None and derived != flag:
                raise InputError(
                    "invalid-descriptor",
                    f"zeta_flags[{prime}]={flag} contradiz o valor derivado {derived} (q={q}, char={field_char})",
                )
        return self

    @property
    def is_archimedean(self) -> bool:
        return self.kind != "nonarchimedean"

    def derived_zeta(self, p: int) -> Optional[bool]:
        """
        ζ_p ∈ F quando derivável do descritor; None quando precisa da flag
        (p = p₀ ímpar em característica 0) ou é irrelevante (char = p).
        """
        if self.field_char == p:
            return None
        if p == 2:
            return True
        if p != self.residue_char:
            return (self.residue_size - 1) % p == 0
        return None

    def contains_zeta(self, p: int) -> bool:
        """
        Raises:
            InputError: flag necessária e ausente (invalid-descriptor)
        """
        derived = self.derived_zeta(p)
        if derived is not None:
            return derived
        if p not in self.zeta_flags:
            raise InputError(
                "invalid-descriptor",
                f"flag zeta_flags[{p}] obrigatória para p = residue_char em característica 0",
            )
        return self.zeta_flags[p]


class LocalExtensionLabel(BaseModel):
    """
    Rótulo simbólico de uma extensão local de grau p (família + parâmetro).

    Serializa como "família(parâmetro)@grau", ex: "eisenstein-root(1)@3".
    """

    model_config = ConfigDict(frozen=True)

    family: Literal["artin-schreier", "kummer", "unramified", "eisenstein-root", "complexification", "generic"]
    parameter: Optional[int] = None
    degree: int = Field(ge=2)

    @model_validator(mode="before")
    @classmethod
    def parse_text(cls, value: Any) -> Any:
        if isinstance(value, str):
            match = _LABEL_TEXT.match(value)
            if not match or match.group(1) not in LABEL_FAMILIES or match.group(3) is None:
                raise InputError("invalid-extension", f"rótulo de extensão malformado: '{value}'")
            parameter = int(match.group(2)) if match.group(2) is not None else None
            return {"family": match.group(1), "parameter": parameter, "degree": int(match.group(3))}
        return value

    @model_serializer
    def serialize(self) -> str:
        return str(self)

    def __str__(self) -> str:
        parameter = f"({self.parameter})" if self.parameter is not None else ""
        return f"{self.family}{parameter}@{self.degree}"

    @property
    def is_unramified(self) -> bool:
        return self.family == "unramified"


class ExtensionCount(BaseModel):
    """Cota inferior para o número de extensões de grau p: Infinite ou AtLeast(n)."""

    model_config = ConfigDict(frozen=True)

    infinite: bool
    lower_bound: Optional[int] = None
    case: int

    def __str__(self) -> str:
        return "Infinite" if self.infinite else f"AtLeast({self.lower_bound})"

    @model_serializer
    def serialize(self) -> Dict[str, Any]:
        return {"bound": str(self), "case": self.case}

    def at_least(self, count: int) -> bool:
        return self.infinite or count <= self.lower_bound


class LocalBrauerClass(BaseModel):
    """Classe de Brauer local: um invariante (e, opcionalmente, o descritor do corpo)."""

    model_config = ConfigDict(frozen=True)

    invariant: QZInvariant
    descriptor: Optional[LocalFieldDescriptor] = None

    @model_validator(mode="after")
    def check_archimedean(self) -> "LocalBrauerClass":
        check_local_invariant(self.invariant, self.descriptor, "local")
        return self


class Place(BaseModel):
    model_config = ConfigDict(frozen=True)

    label: str = Field(min_length=1)
    descriptor: Optional[LocalFieldDescriptor] = None


def check_local_invariant(invariant: QZInvariant, descriptor: Optional[LocalFieldDescriptor], label: str) -> None:
    """Lugar real: 0 ou 1/2; lugar complexo: 0."""
    if descriptor is None or not descriptor.is_archimedean:
        return
    allowed = (1, 2) if descriptor.kind == "real" else (1,)
    if invariant.denominator not in allowed:
        raise InputError(
            "invalid-local-invariant",
            f"invariante {invariant} inválido no lugar {descriptor.kind} '{label}'",
        )


class GlobalBrauerClass(BaseModel):
    """
    Classe de Brauer via sequência de Albert–Brauer–Hasse–Noether: invariantes
    locais não nulos em finitos lugares, com soma zero em Q/Z.

    kind="local" modela um corpo local: exatamente um lugar e sem a restrição
    de soma zero.
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["global", "local"] = "global"
    places: Tuple[Place, ...] = ()
    invariants: Dict[str, QZInvariant] = Field(default_factory=dict)

    @model_validator(mode="before")
    @classmethod
    def accept_bare_map(cls, value: Any) -> Any:
        """Aceita o mapa simples {label: "a/b"} como atalho."""
        if isinstance(value, dict) and value and not ({"places", "invariants", "kind"} & set(value)):
            return {"invariants": value}
        return value

    @model_validator(mode="after")
    def check_class(self) -> "GlobalBrauerClass":
        labels = [place.label for place in self.places]
        if len(labels) != len(set(labels)):
            raise InputError("invalid-payload", "rótulos de lugares repetidos")

        # lugares sem descritor declarado entram como rótulos simples
        known = set(labels)
        places = list(self.places) + [Place(label=label) for label in sorted(self.invariants) if label not in known]
        support = {label: inv for label, inv in sorted(self.invariants.items()) if not inv.is_zero}
        object.__setattr__(self, "places", tuple(places))
        object.__setattr__(self, "invariants", support)

        descriptors = {place.label: place.descriptor for place in places}
        for label, invariant in support.items():
            check_local_invariant(invariant, descriptors[label], label)

        if self.kind == "local":
            if len(places) != 1:
                raise InputError("invalid-payload", f"classe local exige exatamente um lugar (recebidos {len(places)})")
        else:
            residue = total(support.values())
            if not residue.is_zero:
                raise InputError(
                    "not-in-brauer-group",
                    f"soma dos invariantes é {residue}, não 0 em Q/Z",
                    {"sum": str(residue)},
                )
        return self

    @property
    def support(self) -> Dict[str, QZInvariant]:
        return dict(self.invariants)

    def place(self, label: str) -> Place:
        for place in self.places:
            if place.label == label:
                return place
        return Place(label=label)

    def invariant_at(self, label: str) -> QZInvariant:
        return self.invariants.get(label, QZInvariant(numerator=0, denominator=1))


class FormalExtension(BaseModel):
    """
    Extensão formal de grau n: em cada lugar v, uma partição de n com os graus
    locais dos lugares acima de v. Lugares ausentes se decompõem totalmente.

    local_labels (opcional) alinha um rótulo de extensão local a cada entrada
    da partição; é o que distingue extensões com os mesmos graus locais.
    """

    model_config = ConfigDict(frozen=True)

    degree: int = Field(ge=1)
    local_data: Dict[str, Tuple[int, ...]] = Field(default_factory=dict)
    local_labels: Dict[str, Tuple[Optional[LocalExtensionLabel], ...]] = Field(default_factory=dict)
    distinguishing_place: Optional[str] = None

    @model_validator(mode="after")
    def check_partitions(self) -> "FormalExtension":
        for label, partition in self.local_data.items():
            if not partition or any(d < 1 for d in partition):
                raise InputError("invalid-extension", f"graus locais inválidos em '{label}': {list(partition)}")
            if sum(partition) != self.degree:
                raise InputError(
                    "invalid-extension",
                    f"graus locais em '{label}' somam {sum(partition)}, esperado {self.degree}",
                )
        for label, labels in self.local_labels.items():
            partition = self.partition_at(label)
            if len(labels) != len(partition):
                raise InputError("invalid-extension", f"rótulos em '{label}' não alinham com a partição {list(partition)}")
            for d, extension_label in zip(partition, labels):
                if extension_label is not None and extension_label.degree != d:
                    raise InputError(
                        "invalid-extension",
                        f"rótulo {extension_label} tem grau {extension_label.degree}, componente tem grau {d}",
                    )
        return self

    def partition_at(self, label: str) -> Tuple[int, ...]:
        return self.local_data.get(label, (1,) * self.degree)

    def labels_at(self, label: str) -> Tuple[Optional[LocalExtensionLabel], ...]:
        return self.local_labels.get(label, (None,) * len(self.partition_at(label)))

    def components_at(self, label: str) -> List[Tuple[int, Optional[LocalExtensionLabel]]]:
        return list(zip(self.partition_at(label), self.labels_at(label)))

    def to_record(self) -> Dict[str, Any]:
        record: Dict[str, Any] = {
            "degree": self.degree,
            "local_data": {label: list(partition) for label, partition in sorted(self.local_data.items())},
            "distinguishing_place": self.distinguishing_place,
        }
        if self.local_labels:
            record["local_labels"] = {
                label: [str(item) if item is not None else None for item in labels]
                for label, labels in sorted(self.local_labels.items())
            }
        return record


def class_record(c: GlobalBrauerClass) -> Dict[str, Any]:
    """Forma serializada de uma classe."""
    return {
        "kind": c.kind,
        "places": [
            {"label": place.label, "descriptor": place.descriptor.model_dump(exclude_none=True) if place.descriptor else None}
            for place in c.places
        ],
        "invariants": {label: str(inv) for label, inv in c.invariants.items()},
    }
