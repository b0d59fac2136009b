from typing import Any, Dict, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from flows.brauer.csa import AlgebraDescriptor
from flows.brauer.global_brauer import global_index
from flows.brauer.schemas import FormalExtension, GlobalBrauerClass, class_record
from shared.errors import InputError

FieldKind = Literal["abstract", "local", "global"]


class FlagDescriptor(BaseModel):
    """Variedade de bandeiras SB_{n₁,…,n_k}(A): álgebra + tupla estritamente crescente."""

    model_config = ConfigDict(frozen=True)

    algebra: AlgebraDescriptor
    flags: Tuple[int, ...]

    @model_validator(mode="after")
    def check_flags(self) -> "FlagDescriptor":
        flags = self.flags
        if not flags:
            raise InputError("invalid-flags", "tupla de bandeiras vazia")
        if any(b <= a for a, b in zip(flags, flags[1:])):
            raise InputError("invalid-flags", f"bandeiras não estritamente crescentes: {list(flags)}")
        if flags[0] <= 0 or flags[-1] >= self.algebra.degree:
            raise InputError(
                "invalid-flags",
                f"bandeiras {list(flags)} fora de (0, {self.algebra.degree})",
            )
        return self


class RuleApplication(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str
    exponent: int
    citation: str


class TorsionBound(BaseModel):
    """Cota de torção para A₀(X): expoente 1 significa A₀(X) = 0."""

    model_config = ConfigDict(frozen=True)

    exponent: int
    rules_applied: Tuple[RuleApplication, ...]
    conditional_assumptions: Tuple[str, ...] = ()

    @property
    def vanishes(self) -> bool:
        return self.exponent == 1

    def to_record(self) -> Dict[str, Any]:
        return {
            "exponent": self.exponent,
            "vanishes": self.vanishes,
            "rules": [rule.model_dump() for rule in self.rules_applied],
            "conditional_assumptions": list(self.conditional_assumptions),
        }


class NormalComponent(BaseModel):
    model_config = ConfigDict(frozen=True)

    prime: int
    exponent: int
    algebra: AlgebraDescriptor


class NormalForm(BaseModel):
    """X ~ ∏ SB_{p^b}(D_p) com ∏ p^b = d."""

    model_config = ConfigDict(frozen=True)

    d: int
    components: Tuple[NormalComponent, ...]

    def to_record(self) -> Dict[str, Any]:
        return {
            "d": self.d,
            "components": [
                {"prime": item.prime, "exponent": item.exponent, "index": item.algebra.index,
                 "algebra": item.algebra.to_record()}
                for item in self.components
            ],
        }


class TowerStep(BaseModel):
    model_config = ConfigDict(frozen=True)

    node_id: str
    relative_degree: int = Field(ge=1)


class FieldNode(BaseModel):
    """
    Corpo intermediário sobre a base p-especial.

    tower: passos (nó, grau relativo) da base até o próprio nó;
    subfields: fecho dos subcorpos conhecidos (inclui o próprio nó e a base);
    local_model: extensão formal relativa ao pai principal.
    """

    model_config = ConfigDict(frozen=True)

    id: str
    degree_over_base: int = Field(ge=1)
    tower: Tuple[TowerStep, ...] = ()
    parents: Tuple[str, ...] = ()
    subfields: Tuple[str, ...] = ()
    local_model: Optional[FormalExtension] = None
    brauer_class: Optional[GlobalBrauerClass] = None
    declared_index: int = Field(ge=1)
    generator: str

    @field_validator("subfields")
    @classmethod
    def sort_subfields(cls, value: Tuple[str, ...]) -> Tuple[str, ...]:
        return tuple(sorted(set(value)))

    def to_record(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "degree_over_base": self.degree_over_base,
            "tower": [step.model_dump() for step in self.tower],
            "parents": list(self.parents),
            "subfields": list(self.subfields),
            "local_model": self.local_model.to_record() if self.local_model else None,
            "brauer_class": class_record(self.brauer_class) if self.brauer_class else None,
            "declared_index": self.declared_index,
            "generator": self.generator,
        }

    def class_index(self) -> Optional[int]:
        return global_index(self.brauer_class) if self.brauer_class is not None else None


class SimpleEquivCertificate(BaseModel):
    """
    Certificado de equivalência simples left ~ right sobre o subcorpo comum K.

    A extensão E/K(t) da interpolação (1−t)·g + t·s fica registrada pelos
    rótulos dos geradores; a pertinência de E a A(Y) é certificada pela
    testemunha M: [M : left] = p^k e M cinde D.
    """

    model_config = ConfigDict(frozen=True)

    left: FieldNode
    right: FieldNode
    common_subfield: FieldNode
    interpolation_note: Tuple[str, str]
    splitting_witness: FieldNode
    membership_bound: int

    def to_record(self) -> Dict[str, Any]:
        return {
            "left": self.left.id,
            "right": self.right.id,
            "common_subfield": self.common_subfield.id,
            "interpolation_note": list(self.interpolation_note),
            "splitting_witness": self.splitting_witness.id,
            "membership_bound": self.membership_bound,
        }


class CertificateCheck(BaseModel):
    model_config = ConfigDict(frozen=True)

    valid: bool
    diagnostics: Tuple[str, ...] = ()


class TraceEntry(BaseModel):
    """Chamada da indução: par de nós, medida ℓ e profundidade."""

    model_config = ConfigDict(frozen=True)

    left: str
    right: str
    measure: int
    depth: int


class EquivChain(BaseModel):
    model_config = ConfigDict(frozen=True)

    prime: int
    index_exponent: int
    k: int
    nodes: Tuple[FieldNode, ...]
    certificates: Tuple[SimpleEquivCertificate, ...]
    trace: Tuple[TraceEntry, ...] = ()

    def to_record(self) -> Dict[str, Any]:
        """Forma serializada; carrega todos os nós referidos para revalidação independente."""
        referenced: Dict[str, FieldNode] = {}
        for node in self.nodes:
            referenced[node.id] = node
        for certificate in self.certificates:
            for node in (certificate.common_subfield, certificate.splitting_witness):
                referenced.setdefault(node.id, node)
        return {
            "prime": self.prime,
            "index_exponent": self.index_exponent,
            "k": self.k,
            "nodes": [node.id for node in self.nodes],
            "fields": [referenced[node_id].to_record() for node_id in sorted(referenced)],
            "certificates": [certificate.to_record() for certificate in self.certificates],
            "trace": [entry.model_dump() for entry in self.trace],
        }
